"""Orlicz spaces X^Phi over a quasi-normed function space X.

The Luxemburg quasi-norm inf{k > 0 : |Phi(|f|/k)|_X <= 1} is found by
bracketing k (log-log secant steps with a bisection safeguard), which is
valid because k -> |Phi(|f|/k)|_X is non-increasing.
The bracket is seeded from two closed-form bounds: below by the
characteristic-function formula applied to a sub-level of |f|, above by the
L-infinity embedding bound and by max(1, modular).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainOverflow, NullSet, PreconditionViolation
from .qbfs import L1Mu, L1Semivariation, L1Weak, QuasiNormedSpace
from .young import refine_root, scale_argument

DEFAULT_TOL = 1e-10


class OrliczSpace(QuasiNormedSpace):
    """X^Phi with the Luxemburg quasi-norm; inherits the quasi-triangle constant of X."""

    def __init__(self, base, phi, tol=DEFAULT_TOL):
        super().__init__(base.space)
        self.base = base
        self.phi = phi
        self.tol = float(tol)
        self.K = base.K
        self.is_norm = base.is_norm
        self.sigma_fatou = base.sigma_fatou
        self.name = f"{base.name}^Phi"
        self._chi_single = None

    @property
    def sigma_order_continuous(self):
        return self.base.sigma_order_continuous and self.phi.is_delta2

    def to_spec(self):
        return {"kind": "orlicz", "base": self.base.to_spec(), "phi": self.phi.to_spec(),
                "tol": self.tol}

    # -- modular -----------------------------------------------------------

    def modular(self, f):
        """|Phi(|f|)|_X."""
        f = self.space.fn(f)
        return float(self.base.norm(self.phi(np.abs(f))))

    def modulars(self, F):
        return self.base.norms(self.phi(np.abs(np.asarray(F, dtype=float))))

    def _scaled_modulars(self, A, k):
        """|Phi(A_i / k_i)|_X per row; rows leaving the domain of Phi give inf."""
        X = A / k[:, None]
        out = np.full(len(A), math.inf)
        ok = np.all(X <= self.phi.domain_cap, axis=1)
        if ok.any():
            out[ok] = self.base.norms(self.phi(X[ok]))
        return out

    # -- Luxemburg quasi-norm ----------------------------------------------

    def _singleton_chi_norms(self):
        if self._chi_single is None:
            self._chi_single = self.base.norms(np.eye(self.n_atoms))
        return self._chi_single

    def _char_from_chi(self, chi):
        chi = np.asarray(chi, dtype=float)
        with np.errstate(divide="ignore"):
            inv = self.phi.inverse(np.where(chi > 0, 1.0 / np.where(chi > 0, chi, 1.0), math.inf))
        return np.where(chi > 0, 1.0 / inv, 0.0)

    def _bracket(self, A):
        n = len(A)
        peak = A.max(axis=1)
        # upper: |f|_inf / Phi^{-1}(1 / |chi_Omega|_X)
        hi = peak * float(self._char_from_chi([self.base.chi_norm()])[0])
        # upper: max(1, modular) where the modular is finite
        inside = peak <= self.phi.domain_cap
        if inside.any():
            mods = np.full(n, math.inf)
            mods[inside] = self.base.norms(self.phi(A[inside]))
            hi = np.minimum(hi, np.maximum(1.0, mods))
        # lower: |f| >= max|f| chi_{argmax} and |f| >= min_{supp}|f| chi_{supp}
        single = self._char_from_chi(self._singleton_chi_norms())
        lo = peak * single[np.argmax(A, axis=1)]
        supp = A > 0
        floor = np.where(supp, A, math.inf).min(axis=1)
        lo = np.maximum(lo, floor * self._char_from_chi(self.base.norms(supp.astype(float))))
        return np.minimum(lo, hi), hi

    def norms(self, F):
        """Row-wise Luxemburg quasi-norms."""
        A = np.abs(np.asarray(F, dtype=float))
        out = np.zeros(len(A))
        live = np.flatnonzero(A.max(axis=1) > 0)
        if len(live) == 0:
            return out
        A = A[live]
        lo, hi = self._bracket(A)
        # a vanishing lower bound means the seminorm may not see f at all
        blind = np.flatnonzero(lo <= 0)
        if len(blind):
            tiny = np.maximum(hi[blind] * 1e-200, 1e-300)
            # |f| <= max|f| chi_supp, so a support the base cannot see gives 0
            unseen = self.base.norms((A[blind] > 0).astype(float)) == 0
            with np.errstate(all="ignore"):
                zero = (hi[blind] == 0) | unseen | (self._scaled_modulars(A[blind], tiny) <= 1.0)
            lo[blind] = np.where(zero, 0.0, tiny)
            hi[blind] = np.where(zero, 0.0, hi[blind])
        with np.errstate(divide="ignore"):
            lo, hi = refine_root(lambda k, idx: 1.0 / self._scaled_modulars(A[idx], k),
                                 lo, hi, self.tol)
        res = 0.5 * (lo + hi)
        out[live] = res
        return out

    def luxemburg(self, f):
        return self.norm(f)

    def char_norm(self, A=None):
        """|chi_A|_{X^Phi} = 1 / Phi^{-1}(1 / |chi_A|_X)."""
        chi = self.base.chi_norm(A)
        if chi <= 0:
            raise NullSet("chi_A has zero quasi-norm in the base space")
        return 1.0 / self.phi.inverse(1.0 / chi)


def luxemburg(OS, f):
    return OS.norm(f)


def modular(OS, f):
    return OS.modular(f)


def char_norm(OS, A=None):
    return OS.char_norm(A)


def linf_embedding_bound(OS, f):
    """(|f|_{X^Phi}, |f|_inf / Phi^{-1}(1/|chi_Omega|_X)); the first never exceeds the second."""
    f = OS.space.fn(f)
    peak = float(np.abs(f).max()) if len(f) else 0.0
    if peak == 0:
        return 0.0, 0.0
    return OS.norm(f), peak * OS.char_norm()


def inclusion_ratio(OS, F):
    """Empirical bound of the inclusion X^Phi -> X: max |f|_X / |f|_{X^Phi} over nonzero rows.

    No constant is asserted; rows invisible to the Orlicz quasi-norm are skipped.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    lux = OS.norms(F)
    keep = lux > 0
    if not keep.any():
        return 0.0
    return float(np.max(OS.base.norms(F[keep]) / lux[keep]))


def _close_le(a, b, tol):
    """a <= b up to a tolerance relative to max(1, |b|)."""
    return a <= b + tol * max(1.0, abs(b))


@dataclass
class NormModularReport:
    """Luxemburg norm L, modular M and the four inequalities between them.

    A check is None when its hypothesis does not hold for this f.
    """

    luxemburg: float
    modular: float
    bounded_by_modular: bool
    below_one: bool | None
    above_one: bool | None
    fatou_at_most_one: bool | None

    @property
    def passed(self):
        return all(c is not False for c in (self.bounded_by_modular, self.below_one,
                                             self.above_one, self.fatou_at_most_one))


def norm_modular_relations(OS, f, tol=1e-9):
    L = OS.norm(f)
    try:
        M = OS.modular(f)
    except DomainOverflow:
        M = math.inf
    bounded = _close_le(L, max(1.0, M), tol)
    below = _close_le(M, L, tol) if L < 1 else None
    above = _close_le(L, M, tol) if L > 1 else None
    fatou = None
    if L <= 1 and OS.base.sigma_fatou:
        fatou = _close_le(M, L, tol)
    return NormModularReport(L, M, bounded, below, above, fatou)


@dataclass
class BoundedSetReport:
    """Both directions of the modular/Luxemburg boundedness transfer for a family H.

    ``bound_in_orlicz``: sup |h|_{X^Phi} <= max(1, sup |Phi(|h|)|_X).
    ``certified``: with Psi(t) = Phi(t/M), sup |Psi(|h|)|_X <= 1.
    """

    sup_modular: float
    sup_luxemburg: float
    bound_in_orlicz: bool
    M: float
    psi: object
    sup_psi_modular: float
    certified: bool


def bounded_set_transfer(OS, H, M=None, tol=1e-9):
    if len(H) == 0:
        raise ValueError("H must be non-empty")
    F = np.array([OS.space.fn(h) for h in H])
    lux = OS.norms(F)
    try:
        mods = OS.modulars(F)
    except DomainOverflow:
        mods = np.full(len(F), math.inf)
    B = float(mods.max())
    sup_lux = float(lux.max())
    if M is None:
        M = 2.0 * sup_lux if sup_lux > 0 else 1.0
    if not sup_lux < M:
        raise ValueError("M must exceed sup of the Luxemburg norms")
    psi = scale_argument(OS.phi, M)
    psi_mods = OS.base.norms(psi(np.abs(F)))
    sup_psi = float(psi_mods.max())
    return BoundedSetReport(B, sup_lux, _close_le(sup_lux, max(1.0, B), tol), float(M), psi,
                            sup_psi, _close_le(sup_psi, 1.0, tol))


@dataclass
class Delta2Report:
    """Convergence consequences of Phi in Delta2.

    ``class_equals_space`` is always True on atoms: every function is in both.
    ``sequences``: per sequence (luxemburg tail, modular tail, agree).
    ``chains``: per increasing chain, luxemburg(f - f_last) and whether it is below threshold.
    """

    threshold: float
    class_equals_space: bool = True
    sequences: list = field(default_factory=list)
    chains: list = field(default_factory=list)

    @property
    def passed(self):
        return all(s[2] for s in self.sequences) and all(c[1] for c in self.chains)


def delta2_consequences(OS, sequences=(), chains=(), threshold=1e-8):
    """Check |f_n|_{X^Phi} -> 0 iff |Phi(|f_n|)|_X -> 0 by a tail test, and sigma-order
    continuity along chains given as ``(f_1, ..., f_N, f)`` with f_n increasing to f.
    """
    if not OS.phi.is_delta2:
        raise PreconditionViolation("Phi is not flagged Delta2")
    report = Delta2Report(threshold)
    for seq in sequences:
        last = OS.space.fn(seq[-1])
        L, M = OS.norm(last), OS.modular(last)
        report.sequences.append((L, M, (L < threshold) == (M < threshold)))
    for chain in chains:
        *fs, f = [np.abs(OS.space.fn(g)) for g in chain]
        if any(np.any(a > b) for a, b in zip(fs, fs[1:] + [f])):
            raise ValueError("chain is not increasing towards its limit")
        gap = OS.norm(f - fs[-1])
        report.chains.append((gap, gap < threshold))
    return report


@dataclass
class VectorOrliczReport:
    """Weak vector-measure Orlicz norm against its scalarizations, per sample.

    ``rows``: (exact, witness, grid_sup) where exact is the Luxemburg norm over
    L1w(m), witness the Luxemburg norm over L1(|<m, y*>|) at the norming
    functional of the Luxemburg point, grid_sup the max over random directions.
    """

    rows: list = field(default_factory=list)
    semivariation_battery: list = field(default_factory=list)
    bounded: BoundedSetReport | None = None
    tol: float = 1e-9

    @property
    def passed(self):
        ok = all(g <= e * (1 + self.tol) + self.tol and abs(w - e) <= self.tol * max(1.0, e)
                 for e, w, g in self.rows)
        ok = ok and all(r.passed for r in self.semivariation_battery)
        return ok and (self.bounded is None or (self.bounded.bound_in_orlicz and self.bounded.certified))


def _scalarized(m, phi, ystar):
    weights = np.abs(m.atom_vectors @ ystar)
    return OrliczSpace(L1Mu(m.space, weights), phi)


def vector_orlicz_identities(m, phi, fs, n_directions=64, seed=0, tol=1e-9):
    weak = OrliczSpace(L1Weak(m), phi)
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_directions, m.target.dim))
    dirs /= m.target.dual_norm(dirs)[:, None]
    report = VectorOrliczReport(tol=tol)
    F = np.array([m.space.fn(f) for f in fs])
    exact = weak.norms(F)
    for f, e in zip(F, exact):
        if e == 0:
            report.rows.append((0.0, 0.0, 0.0))
            continue
        ystar = weak.base.norming_functional(phi(np.abs(f) / e))
        witness = _scalarized(m, phi, ystar).norm(f)
        grid = max(_scalarized(m, phi, y).norm(f) for y in dirs)
        report.rows.append((float(e), float(witness), float(grid)))
    semi = OrliczSpace(L1Semivariation(m), phi)
    report.semivariation_battery = [norm_modular_relations(semi, f, tol) for f in F]
    report.bounded = bounded_set_transfer(semi, list(F), tol=tol)
    return report


def normalized_modular(OS, f, slack=1e-9):
    """|Phi(|f| / k)|_X at k = (1 + slack) |f|_{X^Phi}; at most 1 when X is sigma-Fatou.

    The slack keeps the comparison insensitive to the bracketing error of
    the Luxemburg norm, which Phi can amplify steeply.
    """
    f = OS.space.fn(f)
    L = OS.norm(f)
    if L == 0:
        return 0.0
    return float(OS._scaled_modulars(np.abs(f)[None, :], np.array([L * (1 + slack)]))[0])


def fatou_transfer(OS, chain):
    """(sup_n |f_n|, |f|) for a chain ``(f_1, ..., f_N, f)`` with 0 <= f_n increasing to f."""
    F = np.abs(np.array([OS.space.fn(g) for g in chain]))
    if np.any(np.diff(F, axis=0) < 0):
        raise ValueError("chain is not increasing towards its limit")
    norms = OS.norms(F)
    return float(norms[:-1].max()), float(norms[-1])
