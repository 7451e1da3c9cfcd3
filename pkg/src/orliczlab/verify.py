"""Registry of executable property checks over randomized instances.

Every check draws each instance from its own generator seeded by
``(seed, crc32(check id), instance index)``, so results do not depend on
thread scheduling and any failure can be replayed alone with
:func:`replay`.
"""

from __future__ import annotations

import fnmatch
import hashlib
import json
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import interp, orlicz, young
from .anchors import ANCHORS
from .exceptions import DomainOverflow, UnknownFilter
from .qbfs import L1Mu, L1Semivariation, L1Weak, LInf, empirical_quasi_triangle, power_space
from .space import AtomicMeasureSpace
from .vecmeasure import (VectorMeasure, choquet_l1_norm, distribution_function,
                         max_signed_sum, max_signed_sum_bruteforce, rybakov, scalar_variation,
                         semivariation)

SCHEMA_VERSION = 1
BASE_KINDS = ("l1mu", "linf", "l1w", "l1semivar")
FATOU_KINDS = BASE_KINDS  # every base here carries the sigma-Fatou tag


@dataclass
class Outcome:
    """One instance: serialized inputs, the two compared quantities and the verdict."""

    inputs: dict
    lhs: float
    rhs: float
    ok: bool
    constants: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CheckSpec:
    id: str
    anchor: str
    tolerance: float
    budget: int
    run: Callable = field(compare=False, repr=False)
    params: dict = field(default_factory=dict, compare=False)


@dataclass
class Verdict:
    check: str
    anchor: str
    instances: int
    failures: list
    constants: dict
    records: list

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {"check": self.check, "anchor": ANCHORS[self.anchor], "instances": self.instances,
                "pass": self.passed, "failures": self.failures, "constants": self.constants,
                "records": self.records}


REGISTRY: dict[str, CheckSpec] = {}


def check(id, anchor, tolerance=1e-9, budget=100, **params):
    if anchor not in ANCHORS:
        raise KeyError(f"unknown anchor {anchor!r}")

    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate check id {id!r}")
        REGISTRY[id] = CheckSpec(id, anchor, tolerance, budget, fn, params)
        return fn
    return deco


def instance_rng(seed, check_id, index):
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(check_id.encode()), index]))


# ---------------------------------------------------------------------------
# instance generators

def _le(a, b, tol):
    return a <= b + tol * max(1.0, abs(b))


def _close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def random_space(rng, n=None, lo=2, hi=6):
    n = int(rng.integers(lo, hi + 1)) if n is None else n
    return AtomicMeasureSpace.from_weights(rng.uniform(0.2, 3.0, n))


def random_measure(rng, n=None, d=None, norm=None, space=None):
    space = space or random_space(rng, n)
    d = int(rng.integers(1, 4)) if d is None else d
    norm = norm or str(rng.choice(["l1", "l2", "linf"]))
    V = rng.normal(size=(len(space), d))
    return VectorMeasure.from_vectors(V, norm, space)


def random_base(rng, kind=None, n=None):
    kind = kind or str(rng.choice(BASE_KINDS))
    if kind == "l1mu":
        return L1Mu(random_space(rng, n))
    if kind == "linf":
        return LInf(random_space(rng, n))
    m = random_measure(rng, n)
    return L1Weak(m) if kind == "l1w" else L1Semivariation(m)


def random_phi(rng, families=("power", "power-log", "scaled", "exp")):
    fam = str(rng.choice(families))
    if fam == "power":
        return young.Power(float(rng.uniform(1.0, 4.0)))
    if fam == "power-log":
        return young.PowerLog(float(rng.uniform(1.0, 3.0)), float(rng.uniform(0.0, 2.0)))
    if fam == "scaled":
        return young.Scaled(young.Power(float(rng.uniform(1.0, 3.0))), float(rng.uniform(0.3, 3.0)))
    return young.ExpMinusOne(float(rng.uniform(1.0, 2.0)))


def random_fn(rng, n, scale=None, sparse=True):
    scale = float(np.exp(rng.uniform(-3, 3))) if scale is None else scale
    f = scale * np.exp(rng.normal(0.0, 1.0, n)) * rng.choice([-1.0, 1.0], n)
    if sparse:
        f *= rng.random(n) > 0.25
    if not np.any(f):
        f[0] = scale
    return f


def random_orlicz(rng, kind=None, families=("power", "power-log", "scaled", "exp"), n=None):
    return orlicz.OrliczSpace(random_base(rng, kind, n), random_phi(rng, families))


def _mixed_space(rng):
    """A base, one of its powers, or an Orlicz space over it."""
    base = random_base(rng)
    r = rng.random()
    if r < 0.3:
        return base
    if r < 0.5:
        return power_space(base, float(rng.uniform(0.5, 3.0)))
    return orlicz.OrliczSpace(base, random_phi(rng))


# ---------------------------------------------------------------------------
# quasi-norm axioms

@check("axiom-homogeneity", "homogeneity")
def _homogeneity(rng, tol):
    X = _mixed_space(rng)
    f = random_fn(rng, X.n_atoms, scale=float(rng.uniform(0.1, 3.0)))
    c = float(rng.uniform(-5, 5))
    try:
        lhs, rhs = X.norm(c * f), abs(c) * X.norm(f)
    except DomainOverflow:
        return None
    return Outcome({"space": X.to_spec(), "f": f.tolist(), "c": c}, lhs, rhs, _close(lhs, rhs, tol))


@check("axiom-lattice", "lattice")
def _lattice(rng, tol):
    X = _mixed_space(rng)
    g = random_fn(rng, X.n_atoms, scale=float(rng.uniform(0.1, 3.0)))
    f = g * rng.uniform(0, 1, X.n_atoms) * rng.choice([-1.0, 1.0], X.n_atoms)
    lhs, rhs = X.norm(f), X.norm(g)
    return Outcome({"space": X.to_spec(), "f": f.tolist(), "g": g.tolist()}, lhs, rhs, _le(lhs, rhs, tol))


@check("axiom-quasi-triangle", "quasi-triangle", budget=60)
def _quasi_triangle(rng, tol):
    X = _mixed_space(rng)
    scale = float(rng.uniform(0.1, 3.0))
    F = np.array([random_fn(rng, X.n_atoms, scale) for _ in range(20)])
    G = np.array([random_fn(rng, X.n_atoms, scale) for _ in range(20)])
    ratio = empirical_quasi_triangle(X, F, G)
    return Outcome({"space": X.to_spec(), "F": F.tolist(), "G": G.tolist()}, ratio, X.K,
                   _le(ratio, X.K, tol), {"max_ratio": ratio})


# ---------------------------------------------------------------------------
# semivariation

@check("semivar-bnb-oracle", "semivariation", tolerance=1e-12, budget=200)
def _bnb(rng, tol):
    m = random_measure(rng, n=int(rng.integers(1, 13)), d=int(rng.integers(1, 5)))
    lhs = max_signed_sum(m.atom_vectors, m.target.kind)[0]
    rhs = max_signed_sum_bruteforce(m.atom_vectors, m.target.kind)
    return Outcome({"measure": m.to_spec()}, lhs, rhs, _close(lhs, rhs, tol))


@check("semivar-set-function", "semivariation-set-function")
def _set_function(rng, tol):
    m = random_measure(rng, n=int(rng.integers(2, 9)))
    A = rng.random(m.n_atoms) < 0.5
    B = rng.random(m.n_atoms) < 0.5
    a, ab, b = semivariation(m, A), semivariation(m, A | B), semivariation(m, B)
    ok = _le(a, ab, tol) and _le(ab, a + b, tol)
    return Outcome({"measure": m.to_spec(), "A": A.tolist(), "B": B.tolist()}, ab, a + b, ok)


@check("semivar-scalar-bound", "semivariation-scalar")
def _scalar_bound(rng, tol):
    m = random_measure(rng, n=int(rng.integers(2, 9)))
    A = rng.random(m.n_atoms) < 0.6
    y = rng.normal(size=m.target.dim)
    y /= m.target.dual_norm(y)
    sv = semivariation(m, A)
    lhs = max(scalar_variation(m, y, A), float(m.target.norm(m.vector(A))))
    return Outcome({"measure": m.to_spec(), "A": A.tolist(), "ystar": y.tolist()}, lhs, sv,
                   _le(lhs, sv, tol))


@check("semivar-rybakov-null", "rybakov", budget=50)
def _rybakov(rng, tol):
    m = random_measure(rng, n=int(rng.integers(2, 9)))
    V = np.array(m.atom_vectors)
    V[rng.random(m.n_atoms) < 0.3] = 0.0
    m = VectorMeasure(m.space, m.target, V)
    ctrl = rybakov(m, seed=int(rng.integers(2**31)))
    null = ~np.any(V != 0, axis=1)
    ok = bool(np.all((ctrl.weights == 0) == null))
    return Outcome({"measure": m.to_spec(), "ystar": ctrl.ystar.tolist()},
                   float(ctrl.weights[~null].min()) if (~null).any() else 0.0, 0.0, ok)


@check("semivar-layer-cake", "layer-cake", tolerance=1e-12)
def _layer_cake(rng, tol):
    space = random_space(rng, n=int(rng.integers(1, 9)))
    w = rng.uniform(0.1, 3.0, len(space))
    m = VectorMeasure.from_vectors(w[:, None], "l2", space)
    f = random_fn(rng, len(space))
    lhs = L1Semivariation(m).norm(f)
    rhs = float(np.abs(f) @ w)
    dist = distribution_function(m, f).integral()
    ok = _close(lhs, rhs, tol) and _close(dist, choquet_l1_norm(m, f), tol)
    return Outcome({"measure": m.to_spec(), "f": f.tolist()}, lhs, rhs, ok)


# ---------------------------------------------------------------------------
# Young functions

@check("young-quasi-subadditive", "quasi-subadditivity")
def _quasi_sub(rng, tol):
    phi = random_phi(rng, ("power", "power-log", "scaled"))
    alpha = float(rng.uniform(1.0, 3.0))
    ts = np.exp(rng.normal(-1.0, 1.0, int(rng.integers(1, 6))))
    lhs, rhs = young.quasi_subadditive_bound(phi, alpha, ts)
    return Outcome({"phi": phi.to_spec(), "alpha": alpha, "ts": ts.tolist()}, lhs, rhs,
                   _le(lhs, rhs, tol))


@check("young-delta2", "delta2", budget=50)
def _delta2(rng, tol):
    phi = random_phi(rng)
    est = phi.delta2
    if isinstance(phi, young.ExpMinusOne):
        return Outcome({"phi": phi.to_spec()}, est.constant, math.inf, est.unbounded)
    t = np.exp(rng.uniform(-5, 5, 32))
    ratio = float(np.max(phi(2 * t) / phi(t)))
    ok = not est.unbounded and _le(ratio, est.constant, tol)
    return Outcome({"phi": phi.to_spec(), "t": t.tolist()}, ratio, est.constant, ok,
                   {"doubling": est.constant})


# ---------------------------------------------------------------------------
# Orlicz norm and modular

@check("lem-linf-inclusion-i", "chi-norm")
def _chi(rng, tol):
    OS = random_orlicz(rng)
    A = rng.random(OS.n_atoms) < 0.5
    A[int(rng.integers(OS.n_atoms))] = True
    chi = A.astype(float)
    if OS.base.norm(chi) == 0:
        return None
    lhs, rhs = OS.char_norm(A), OS.norm(chi)
    return Outcome({"space": OS.to_spec(), "A": A.tolist()}, lhs, rhs, _close(lhs, rhs, tol))


@check("lem-linf-inclusion-ii", "linf-embedding")
def _linf(rng, tol):
    OS = random_orlicz(rng)
    f = random_fn(rng, OS.n_atoms)
    lhs, rhs = orlicz.linf_embedding_bound(OS, f)
    return Outcome({"space": OS.to_spec(), "f": f.tolist()}, lhs, rhs, _le(lhs, rhs, tol),
                   {"inclusion_ratio": orlicz.inclusion_ratio(OS, f)})


def _report_outcome(OS, f, report, attr, lhs, rhs):
    value = getattr(report, attr)
    return Outcome({"space": OS.to_spec(), "f": f.tolist()}, lhs, rhs, value is not False)


@check("lem-bounded-modular-i", "norm-below-modular", budget=200)
def _bounded_i(rng, tol):
    OS = random_orlicz(rng)
    f = random_fn(rng, OS.n_atoms)
    r = orlicz.norm_modular_relations(OS, f, tol)
    return _report_outcome(OS, f, r, "bounded_by_modular", r.luxemburg, max(1.0, r.modular))


@check("lem-bounded-modular-ii", "bounded-family", budget=50)
def _bounded_ii(rng, tol):
    OS = random_orlicz(rng)
    H = np.array([random_fn(rng, OS.n_atoms, float(rng.uniform(0.1, 2))) for _ in range(8)])
    r = orlicz.bounded_set_transfer(OS, H, tol=tol)
    return Outcome({"space": OS.to_spec(), "H": H.tolist()}, r.sup_luxemburg,
                   max(1.0, r.sup_modular), r.bound_in_orlicz)


@check("lem-norm-modular-i", "modular-below-norm", budget=200)
def _modular_i(rng, tol):
    OS = random_orlicz(rng)
    f = random_fn(rng, OS.n_atoms)
    f = f / OS.norm(f) * float(rng.uniform(0.01, 0.999))
    r = orlicz.norm_modular_relations(OS, f, tol)
    return _report_outcome(OS, f, r, "below_one", r.modular, r.luxemburg)


@check("lem-norm-modular-ii", "modular-above-norm", budget=200)
def _modular_ii(rng, tol):
    OS = random_orlicz(rng)
    f = random_fn(rng, OS.n_atoms)
    f = f / OS.norm(f) * float(rng.uniform(1.001, 20.0))
    r = orlicz.norm_modular_relations(OS, f, tol)
    return _report_outcome(OS, f, r, "above_one", r.luxemburg, r.modular)


@check("lem-norm-modular-iii", "bounded-to-modular", budget=50)
def _modular_iii(rng, tol):
    OS = random_orlicz(rng)
    H = np.array([random_fn(rng, OS.n_atoms) for _ in range(8)])
    r = orlicz.bounded_set_transfer(OS, H, tol=tol)
    return Outcome({"space": OS.to_spec(), "H": H.tolist(), "M": r.M}, r.sup_psi_modular, 1.0,
                   r.certified)


@check("thm-fatou-i", "fatou-normalized")
def _fatou_i(rng, tol):
    OS = random_orlicz(rng, kind=str(rng.choice(FATOU_KINDS)))
    f = random_fn(rng, OS.n_atoms)
    lhs = orlicz.normalized_modular(OS, f, slack=tol)
    return Outcome({"space": OS.to_spec(), "f": f.tolist()}, lhs, 1.0, _le(lhs, 1.0, tol))


@check("thm-fatou-ii", "fatou-modular", budget=200)
def _fatou_ii(rng, tol):
    OS = random_orlicz(rng, kind=str(rng.choice(FATOU_KINDS)))
    f = random_fn(rng, OS.n_atoms)
    f = f / OS.norm(f) * float(rng.uniform(0.01, 1.0))
    r = orlicz.norm_modular_relations(OS, f, tol)
    return _report_outcome(OS, f, r, "fatou_at_most_one", r.modular, r.luxemburg)


def random_chain(rng, f, length=None):
    """Increasing chain 0 <= f_1 <= ... <= f_N <= |f| followed by |f| itself."""
    length = int(rng.integers(5, 40)) if length is None else length
    a = np.abs(f)
    rho = rng.uniform(0.05, 0.5, len(a))
    start = rng.uniform(0.0, 1.0, len(a))
    n = np.arange(1, length + 1)[:, None]
    fracs = 1.0 - start * rho ** (n * 60.0 / length)
    return np.vstack([fracs * a, a])


@check("thm-fatou-iii", "fatou-transfer")
def _fatou_iii(rng, tol):
    OS = random_orlicz(rng, kind=str(rng.choice(FATOU_KINDS)))
    f = random_fn(rng, OS.n_atoms)
    chain = random_chain(rng, f)
    lhs, rhs = orlicz.fatou_transfer(OS, chain)
    return Outcome({"space": OS.to_spec(), "chain": chain.tolist()}, lhs, rhs, _close(lhs, rhs, tol))


def random_sequence(rng, n_atoms, null):
    """Sequence whose last term is far below 1e-8 (null) or of order one (not null)."""
    f = np.abs(random_fn(rng, n_atoms, scale=1.0))
    length = 30
    if null:
        scales = np.geomspace(1.0, float(10 ** rng.uniform(-16, -12)), length)
    else:
        scales = float(rng.uniform(0.2, 3.0)) * (1 + 0.5 * np.sin(np.arange(length)))
    return scales[:, None] * f


@check("thm-delta2-ii", "delta2-null-sequences", tolerance=1e-8)
def _delta2_ii(rng, tol):
    OS = random_orlicz(rng, families=("power", "power-log"))
    null = bool(rng.random() < 0.5)
    seq = random_sequence(rng, OS.n_atoms, null)
    r = orlicz.delta2_consequences(OS, sequences=[seq], threshold=tol)
    L, M, agree = r.sequences[0]
    return Outcome({"space": OS.to_spec(), "last": seq[-1].tolist(), "null": null}, L, M, agree)


@check("thm-delta2-iii", "delta2-order-continuity", tolerance=1e-8)
def _delta2_iii(rng, tol):
    OS = random_orlicz(rng, families=("power", "power-log", "scaled"))
    f = random_fn(rng, OS.n_atoms)
    chain = random_chain(rng, f, length=60)
    r = orlicz.delta2_consequences(OS, chains=[chain], threshold=tol)
    gap, ok = r.chains[0]
    return Outcome({"space": OS.to_spec(), "chain": chain.tolist()}, gap, tol, ok)


# ---------------------------------------------------------------------------
# vector-measure Orlicz spaces

@check("vec-weak-orlicz", "weak-orlicz", budget=30)
def _weak(rng, tol):
    m = random_measure(rng)
    phi = random_phi(rng, ("power", "power-log", "scaled"))
    fs = np.array([random_fn(rng, m.n_atoms, float(rng.uniform(0.2, 3))) for _ in range(3)])
    r = orlicz.vector_orlicz_identities(m, phi, fs, n_directions=32,
                                        seed=int(rng.integers(2**31)), tol=tol)
    gap = max(abs(w - e) / max(1.0, e) for e, w, _ in r.rows)
    return Outcome({"measure": m.to_spec(), "phi": phi.to_spec(), "fs": fs.tolist()}, gap, tol,
                   r.passed)


@check("vec-semivar-battery", "semivariation-orlicz", budget=100)
def _semivar_battery(rng, tol):
    OS = orlicz.OrliczSpace(L1Semivariation(random_measure(rng)), random_phi(rng))
    f = random_fn(rng, OS.n_atoms)
    r = orlicz.norm_modular_relations(OS, f, tol)
    return Outcome({"space": OS.to_spec(), "f": f.tolist()}, r.luxemburg, r.modular, r.passed)


@check("vec-semivar-delta2", "semivariation-orlicz", tolerance=1e-8, budget=50)
def _semivar_delta2(rng, tol):
    OS = orlicz.OrliczSpace(L1Semivariation(random_measure(rng)),
                            random_phi(rng, ("power", "power-log")))
    null = bool(rng.random() < 0.5)
    seq = random_sequence(rng, OS.n_atoms, null)
    chain = random_chain(rng, random_fn(rng, OS.n_atoms), length=60)
    r = orlicz.delta2_consequences(OS, sequences=[seq], chains=[chain], threshold=tol)
    return Outcome({"space": OS.to_spec(), "last": seq[-1].tolist(), "chain": chain.tolist()},
                   r.sequences[0][0], r.sequences[0][1], r.passed)


# ---------------------------------------------------------------------------
# convexity and interpolation

@check("interp-s-convexity", "s-convexity", budget=40)
def _s_convexity(rng, tol):
    if rng.random() < 0.5:
        X, s, C = L1Mu(random_space(rng)), float(rng.uniform(0.3, 1.0)), 1.0
    else:
        X, s, C = L1Semivariation(random_measure(rng)), 0.5, math.inf
    tuples = [[random_fn(rng, X.n_atoms) for _ in range(int(rng.integers(1, 5)))] for _ in range(25)]
    r = interp.s_convexity_check(X, s, C, tuples, tol=tol)
    ok = r.passed and math.isfinite(r.best_constant)
    return Outcome({"space": X.to_spec(), "s": s, "tuples": [[g.tolist() for g in t] for t in tuples]},
                   r.best_constant, C, ok, {"best_constant": r.best_constant})


@check("interp-lconvex-transfer", "l-convexity-transfer", budget=10)
def _lconvex(rng, tol):
    base = L1Mu(random_space(rng))
    phi = young.Power(float(rng.uniform(1.0, 3.0)))
    eps = 0.49
    seed = int(rng.integers(2**31))
    cert = interp.l_convexity_search(base, eps, 1000, seed=seed)
    delta = interp.l_convexity_transfer(base, phi, eps)
    res = interp.l_convexity_search(orlicz.OrliczSpace(base, phi), delta, 5000, seed=seed + 1)
    ok = cert.passed and res.passed
    return Outcome({"space": base.to_spec(), "phi": phi.to_spec(), "eps": eps, "delta": delta,
                    "witness": res.witness}, res.worst_ratio, delta, ok,
                   {"worst_ratio": res.worst_ratio})


def _power_pair(rng):
    p0 = float(rng.uniform(1.0, 3.0))
    p1 = float(rng.uniform(1.0, 4.0))
    return young.Power(p0), young.Power(p1), float(rng.uniform(0.1, 0.9))


@check("interp-cp-orlicz", "calderon-orlicz", tolerance=1e-6, budget=30)
def _cp(rng, tol):
    base = random_base(rng, str(rng.choice(["l1mu", "l1semivar"])), n=3)
    phi0, phi1, theta = _power_pair(rng)
    f = random_fn(rng, 3, float(rng.uniform(0.2, 3)))
    r = interp.cp_orlicz_identity(base, phi0, phi1, theta, [f], rtol=tol)
    lower, upper, grid, ok = r.rows[0]
    return Outcome({"base": base.to_spec(), "phi0": phi0.to_spec(), "phi1": phi1.to_spec(),
                    "theta": theta, "f": f.tolist()}, upper, lower, ok,
                   {"grid_over_lower": grid / lower if grid is not None else None})


@check("interp-cp-onesided", "calderon-orlicz", tolerance=1e-6, budget=30)
def _cp_onesided(rng, tol):
    base = random_base(rng, n=10)
    phi0, phi1, theta = _power_pair(rng)
    f = random_fn(rng, 10, float(rng.uniform(0.2, 3)))
    r = interp.cp_orlicz_identity(base, phi0, phi1, theta, [f], rtol=tol, use_grid=False)
    lower, upper, _, ok = r.rows[0]
    return Outcome({"base": base.to_spec(), "phi0": phi0.to_spec(), "phi1": phi1.to_spec(),
                    "theta": theta, "f": f.tolist()}, lower, upper, ok)


@check("interp-exponent", "interpolation-exponent", budget=20)
def _exponent(rng, tol):
    base = L1Semivariation(random_measure(rng))
    phi0, phi1, theta = _power_pair(rng)
    cert = interp.l_convexity_search(base, 0.25, 200, seed=int(rng.integers(2**31)))
    S = interp.complex_interpolation(base, phi0, phi1, theta, certificate=cert)
    p = interp.interpolation_exponent(phi0.p, phi1.p, theta)
    ref = power_space(base, 1.0 / p)
    F = np.array([random_fn(rng, base.n_atoms) for _ in range(10)])
    a, b = S.norms(F), ref.norms(F)
    gap = float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(a, b))))
    ok = gap <= tol and abs(1 / S.exponent - 1 / p) <= 1e-12
    return Outcome({"base": base.to_spec(), "phi0": phi0.to_spec(), "phi1": phi1.to_spec(),
                    "theta": theta, "F": F.tolist()}, gap, tol, ok)


@check("interp-powers", "calderon-powers", tolerance=1e-6, budget=10)
def _powers(rng, tol):
    space = random_space(rng, n=int(rng.integers(2, 4)))
    X0 = L1Mu(space)
    X1 = power_space(L1Mu(space), float(rng.uniform(0.25, 0.9)))
    theta = float(rng.uniform(0.1, 0.9))
    r = float(rng.uniform(0.5, 2.0))
    f = random_fn(rng, len(space), float(rng.uniform(0.2, 3)))
    lhs = power_space(interp.CalderonSpace(X0, X1, theta), r).norm(f)
    rhs = interp.CalderonSpace(power_space(X0, r), power_space(X1, r), theta).norm(f)
    return Outcome({"x0": X0.to_spec(), "x1": X1.to_spec(), "theta": theta, "r": r,
                    "f": f.tolist()}, lhs, rhs, _close(lhs, rhs, tol))


@check("interp-equal-collapse", "calderon-product", budget=30)
def _collapse(rng, tol):
    X = random_base(rng, str(rng.choice(["l1mu", "linf", "l1w"])), n=int(rng.integers(1, 4)))
    X = orlicz.OrliczSpace(X, young.Power(float(rng.uniform(1, 3)))) if rng.random() < 0.5 else X
    theta = float(rng.uniform(0.1, 0.9))
    f = random_fn(rng, X.n_atoms)
    lam, fac = interp.calderon_norm_upper(interp.CalderonInstance(X, X, theta), f,
                                          "grid-oracle", collapse=False)
    rhs = X.norm(f)
    feasible = (np.all(np.abs(f) <= fac.lam * fac.f0 ** (1 - theta) * fac.f1 ** theta
                       * (1 + 1e-12)) and X.norm(fac.f0) <= 1 + tol and X.norm(fac.f1) <= 1 + tol)
    return Outcome({"space": X.to_spec(), "theta": theta, "f": f.tolist()}, lam, rhs,
                   bool(feasible) and _close(lam, rhs, tol))


# ---------------------------------------------------------------------------
# running

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return x


def digest(inputs):
    blob = json.dumps(_jsonable(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def select(filter=None):
    """Check specs whose id matches the glob ``filter`` (all when empty)."""
    if not REGISTRY:
        raise RuntimeError("registry is empty")
    if not filter:
        return [REGISTRY[k] for k in sorted(REGISTRY)]
    patterns = [p.strip() for p in filter.split(",") if p.strip()]
    chosen = [REGISTRY[k] for k in sorted(REGISTRY)
              if any(fnmatch.fnmatchcase(k, p) for p in patterns)]
    if not chosen:
        raise UnknownFilter(filter)
    return chosen


def run_check(spec, seed=0, budget=None):
    n = spec.budget if budget is None else int(budget)
    failures, records = [], []
    constants: dict = {}
    done = 0
    for i in range(n):
        out = spec.run(instance_rng(seed, spec.id, i), spec.tolerance)
        if out is None:  # instance outside the check's hypotheses
            continue
        done += 1
        d = digest(out.inputs)
        records.append({"check": spec.id, "index": i, "inputs_digest": d,
                        "lhs": out.lhs, "rhs": out.rhs, "pass": bool(out.ok)})
        for k, v in out.constants.items():
            if v is not None and (k not in constants or v > constants[k]):
                constants[k] = v
        if not out.ok:
            failures.append({"index": i, "seed": [seed, zlib.crc32(spec.id.encode()), i],
                             "inputs_digest": d, "inputs": out.inputs,
                             "lhs": out.lhs, "rhs": out.rhs})
    return Verdict(spec.id, spec.anchor, done, _jsonable(failures), _jsonable(constants),
                   _jsonable(records))


def thread_count():
    try:
        return max(1, int(os.environ.get("ORLICZ_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(filter=None, seed=0, budget=None, threads=None):
    """Run every matching check; verdicts come back ordered by check id."""
    specs = select(filter)
    threads = thread_count() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(lambda s: run_check(s, seed, budget), specs))
    else:
        verdicts = [run_check(s, seed, budget) for s in specs]
    return sorted(verdicts, key=lambda v: v.check)


def replay(check_id, seed, index):
    """Re-run a single instance of a check."""
    spec = REGISTRY[check_id]
    return spec.run(instance_rng(seed, check_id, index), spec.tolerance)


def report(verdicts, seed, budget, filter=None):
    return {"v": SCHEMA_VERSION, "seed": seed, "budget": budget, "filter": filter or "",
            "pass": all(v.passed for v in verdicts),
            "verdicts": [v.to_dict() for v in verdicts]}


def dumps_report(doc):
    return json.dumps(_jsonable(doc), sort_keys=True, indent=1)
