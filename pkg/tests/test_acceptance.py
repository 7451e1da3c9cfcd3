"""Acceptance criteria, each at its stated tolerance and instance count.

Every test records one PASS/FAIL line; ``conftest.py`` prints them at the end of
the run.
"""

import time

import numpy as np
import pytest

from orliczlab import interp, orlicz, young
from orliczlab.orlicz import OrliczSpace
from orliczlab.qbfs import L1Mu, L1Semivariation, empirical_quasi_triangle, power_space
from orliczlab.space import AtomicMeasureSpace
from orliczlab.vecmeasure import (VectorMeasure, choquet_l1_norms, max_signed_sum,
                                  max_signed_sum_bruteforce)
from orliczlab.verify import (BASE_KINDS, random_base, random_chain, random_fn, random_measure,
                              random_orlicz, random_sequence, random_space)

RESULTS = []


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    RESULTS.append(line)
    assert ok, line


def rel_gap(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)))


def test_semivariation_oracle():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(500):
        n, d = int(rng.integers(1, 13)), int(rng.integers(1, 5))
        kind = ("l1", "l2", "linf")[i % 3]
        V = rng.normal(size=(n, d)) * np.exp(rng.normal(size=(n, 1)))
        fast = max_signed_sum(V, kind)[0]
        slow = max_signed_sum_bruteforce(V, kind)
        worst = max(worst, abs(fast - slow) / max(1.0, slow))
    elapsed = time.perf_counter() - t0
    record(1, worst <= 1e-12 and elapsed < 10.0,
           f"branch-and-bound vs enumeration, 500 instances, worst rel gap {worst:.1e}, {elapsed:.1f} s")


def test_classical_collapse():
    rng = np.random.default_rng(102)
    worst_choquet = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        w = rng.uniform(0.1, 3.0, n)
        m = VectorMeasure.from_vectors(w[:, None], str(rng.choice(["l1", "l2", "linf"])))
        f = random_fn(rng, n)
        worst_choquet = max(worst_choquet, rel_gap(choquet_l1_norms(m, f[None])[0], np.abs(f) @ w))
    worst_p = 0.0
    for p in (1.0, 1.5, 2.0, 3.0):
        w = rng.uniform(0.1, 3.0, 6)
        OS = OrliczSpace(L1Mu(AtomicMeasureSpace.from_weights(w)), young.Power(p))
        F = np.array([random_fn(rng, 6) for _ in range(200)])
        worst_p = max(worst_p, rel_gap(OS.norms(F), (np.abs(F) ** p @ w) ** (1 / p)))
    record(2, worst_choquet <= 1e-12 and worst_p <= 1e-9,
           f"d=1 layer-cake gap {worst_choquet:.1e}, Luxemburg vs p-norm gap {worst_p:.1e}")


def test_char_norm_formula():
    rng = np.random.default_rng(103)
    worst, done = 0.0, 0
    while done < 100:
        OS = random_orlicz(rng, kind=BASE_KINDS[done % 4])
        A = rng.random(OS.n_atoms) < 0.5
        A[int(rng.integers(OS.n_atoms))] = True
        if OS.base.norm(A.astype(float)) == 0:
            continue
        worst = max(worst, rel_gap(OS.char_norm(A), OS.norm(A.astype(float))))
        done += 1
    record(3, worst <= 1e-9, f"char_norm vs Luxemburg of chi_A, 100 triples, worst rel gap {worst:.1e}")


def test_norm_modular_battery():
    rng = np.random.default_rng(104)
    failures = 0
    exercised = {"bounded_by_modular": 0, "below_one": 0, "above_one": 0, "fatou_at_most_one": 0}
    for _ in range(1000):
        OS = random_orlicz(rng)
        f = random_fn(rng, OS.n_atoms)
        # spread norms across both sides of 1 so every gated inequality is tested
        f = f / OS.norm(f) * float(np.exp(rng.uniform(-4, 3)))
        r = orlicz.norm_modular_relations(OS, f, tol=1e-9)
        failures += not r.passed
        for k in exercised:
            exercised[k] += getattr(r, k) is not None
    ok = failures == 0 and all(exercised.values())
    record(4, ok, f"norm-modular inequalities, 1000 instances, {failures} failures, "
                  f"applicable counts {exercised}")


def test_fatou_transfer():
    rng = np.random.default_rng(105)
    worst, total = 0.0, 0
    for kind in BASE_KINDS:
        for _ in range(200):
            OS = random_orlicz(rng, kind=kind)
            assert OS.base.tags["sigma_fatou"]
            chain = random_chain(rng, random_fn(rng, OS.n_atoms))
            sup, limit = orlicz.fatou_transfer(OS, chain)
            worst = max(worst, abs(sup - limit) / max(1.0, limit))
            total += 1
    record(5, worst <= 1e-9, f"sup of chain norms vs limit norm, {total} chains over 4 bases, "
                             f"worst gap {worst:.1e}")


def test_delta2_sequences():
    rng = np.random.default_rng(106)
    disagree = 0
    for i in range(100):
        phi = young.Power(float(rng.uniform(1, 4))) if i % 2 else young.PowerLog(1.0, 1.0)
        OS = OrliczSpace(random_base(rng), phi)
        null = bool(i % 4 < 2)
        seq = random_sequence(rng, OS.n_atoms, null)
        L, M, agree = orlicz.delta2_consequences(OS, sequences=[seq], threshold=1e-8).sequences[0]
        disagree += not agree or (L < 1e-8) != null
    est = young.delta2_constant(young.ExpMinusOne(1.0))
    record(6, disagree == 0 and est.unbounded,
           f"norm->0 iff modular->0 on 100 sequences, {disagree} disagreements; "
           f"exp flagged non-doubling: {est.unbounded}")


def test_calderon_orlicz_identity():
    rng = np.random.default_rng(107)
    worst = 0.0
    for i in range(50):
        base = random_base(rng, ("l1mu", "l1semivar")[i % 2], n=3)
        phi0, phi1 = young.Power(float(rng.uniform(1, 3))), young.Power(float(rng.uniform(1, 4)))
        theta = float(rng.uniform(0.1, 0.9))
        f = random_fn(rng, 3, float(rng.uniform(0.2, 3)))
        lower, upper, grid, _ = interp.cp_orlicz_identity(base, phi0, phi1, theta, [f]).rows[0]
        worst = max(worst, rel_gap(upper, lower), rel_gap(grid, lower))
    violations = 0
    for i in range(200):
        base = random_base(rng, BASE_KINDS[i % 4], n=10)
        phi0, phi1 = young.Power(float(rng.uniform(1, 3))), young.Power(float(rng.uniform(1, 4)))
        theta = float(rng.uniform(0.1, 0.9))
        f = random_fn(rng, 10, float(rng.uniform(0.2, 3)))
        lower, upper, _, _ = interp.cp_orlicz_identity(base, phi0, phi1, theta, [f],
                                                       use_grid=False).rows[0]
        violations += not lower <= upper * (1 + 1e-6)
    record(7, worst <= 1e-6 and violations == 0,
           f"3-atom constructive/grid/Luxemburg worst gap {worst:.1e}; "
           f"10-atom one-sided violations {violations}/200")


@pytest.mark.parametrize("p0, p1, theta", [(1, 3, 0.5), (2, 4, 0.25), (1.5, 2, 0.75)])
def test_interpolation_exponent(p0, p1, theta):
    rng = np.random.default_rng(108)
    base = L1Semivariation(random_measure(rng, n=5, d=3, norm="l2"))
    S = interp.complex_interpolation(base, young.Power(p0), young.Power(p1), theta)
    p = 1.0 / ((1 - theta) / p0 + theta / p1)
    F = np.array([random_fn(rng, 5) for _ in range(200)])
    gap = rel_gap(S.norms(F), power_space(base, 1.0 / p).norms(F))
    record(8, gap <= 1e-9, f"({p0}, {p1}, {theta}): exponent {S.exponent:.6g}, "
                           f"200 functions, worst rel gap {gap:.1e}")


def test_l_convexity_transfer():
    base = L1Mu(random_space(np.random.default_rng(109), 5))
    cert = interp.l_convexity_search(base, 0.49, 10_000, seed=1)
    delta = interp.l_convexity_transfer(base, young.Power(2), 0.49)
    res = interp.l_convexity_search(OrliczSpace(base, young.Power(2)), delta, 100_000, seed=2)
    ok = cert.passed and abs(delta - (1 - 0.51 ** 0.25)) <= 1e-15 and res.passed
    record(9, ok, f"delta {delta:.6f}, 1e5 trials, worst ratio {res.worst_ratio:.4f}, "
                  f"witness {'none' if res.witness is None else 'found'}")


def test_quasi_triangle_bookkeeping():
    rng = np.random.default_rng(110)
    worst_excess, pairs = -np.inf, 0
    for _ in range(100):
        OS = random_orlicz(rng)
        F = np.array([random_fn(rng, OS.n_atoms) for _ in range(10)])
        G = np.array([random_fn(rng, OS.n_atoms) for _ in range(10)])
        worst_excess = max(worst_excess, empirical_quasi_triangle(OS, F, G) - OS.base.K)
        pairs += len(F)
    record(10, worst_excess <= 1e-9 and pairs == 1000,
           f"{pairs} pairs, max(Q3 - K) = {worst_excess:.3g}")
