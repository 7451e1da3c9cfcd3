import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from orliczlab.exceptions import NotFound, SizeExceeded, SpaceMismatch
from orliczlab.vecmeasure import (TargetNorm, VectorMeasure, choquet_l1_norm, choquet_l1_norms,
                                  distribution_function, is_m_null, max_signed_sum,
                                  max_signed_sum_bruteforce, rybakov, scalar_variation,
                                  semivariation, semivariation_bruteforce)


def unit_l2():
    return VectorMeasure.from_vectors([[1, 0], [0, 1]], "l2")


def test_semivariation_unit_vectors():
    m = unit_l2()
    assert semivariation(m, ["a1"]) == 1.0
    assert semivariation(m, ["a1", "a2"]) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert semivariation(m, []) == 0.0


def test_semivariation_three_atoms():
    # sign patterns enumerated by hand
    V = [(1, 2), (-1, 1), (3, -1)]
    assert semivariation(VectorMeasure.from_vectors(V, "l1")) == 7.0
    assert semivariation(VectorMeasure.from_vectors(V, "l2")) == pytest.approx(5.0, rel=1e-15)


def test_linf_target_closed_form():
    m = VectorMeasure.from_vectors([[1, -2], [-1, 2]], "linf")
    assert semivariation(m) == 4.0


def test_max_signed_sum_returns_maximizer():
    V = np.array([[1.0, 2.0], [-1.0, 1.0], [3.0, -1.0]])
    value, signs = max_signed_sum(V, "l2")
    assert np.linalg.norm(signs @ V) == pytest.approx(value)


@settings(max_examples=300, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 10), st.integers(1, 4)),
              elements=st.floats(-10, 10, allow_subnormal=False)),
       st.sampled_from(["l1", "l2", "linf"]))
def test_branch_and_bound_matches_enumeration(V, kind):
    fast = max_signed_sum(V, kind)[0]
    slow = max_signed_sum_bruteforce(V, kind)
    assert fast == pytest.approx(slow, rel=1e-12, abs=1e-12)


def test_bruteforce_size_limit():
    with pytest.raises(SizeExceeded):
        max_signed_sum_bruteforce(np.ones((25, 1)), "l2")


def test_scalar_variation():
    m = VectorMeasure.from_vectors([[1, 2], [3, -1]], "l2")
    assert scalar_variation(m, [1, 1]) == 5.0
    with pytest.raises(SpaceMismatch):
        scalar_variation(m, [1, 1, 1])


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.just(3)),
              elements=st.floats(-5, 5, allow_subnormal=False)),
       arrays(np.float64, 3, elements=st.floats(-1, 1)))
def test_semivariation_dominates_scalarizations(V, y):
    m = VectorMeasure.from_vectors(V, "l2")
    n = np.linalg.norm(y)
    if n > 0:
        y = y / n
    sv = semivariation(m)
    assert scalar_variation(m, y) <= sv * (1 + 1e-12) + 1e-12
    assert np.linalg.norm(V.sum(axis=0)) <= sv * (1 + 1e-12) + 1e-12


def test_semivariation_cache_consistent():
    m = VectorMeasure.from_vectors(np.random.default_rng(3).normal(size=(6, 2)), "l1")
    mask = np.array([1, 0, 1, 1, 0, 1], bool)
    assert semivariation(m, mask) == semivariation(m, mask)
    assert semivariation(m, mask) == pytest.approx(semivariation_bruteforce(m, mask), rel=1e-12)


def test_rybakov_control():
    m = VectorMeasure.from_vectors([[1, 0], [0, 0], [0, 1], [1, -1]], "l2")
    ctrl = rybakov(m)
    assert ctrl.weights[1] == 0
    assert np.all(ctrl.weights[[0, 2, 3]] > 0)
    assert np.linalg.norm(ctrl.ystar) == pytest.approx(1.0)
    assert is_m_null(m, ["a2"]) and not is_m_null(m, ["a1"])


def test_rybakov_all_null():
    m = VectorMeasure.from_vectors(np.zeros((3, 2)), "l2")
    assert np.all(rybakov(m).weights == 0)


def test_rybakov_not_found(monkeypatch):
    import orliczlab.vecmeasure as vm

    m = VectorMeasure.from_vectors([[1, 0], [0, 1]], "l2")
    monkeypatch.setattr(vm.TargetNorm, "dual_norm", lambda self, v: 0.0)
    with pytest.raises(NotFound):
        rybakov(m, budget=3)


def test_distribution_function_example():
    # f = (1, 2) on unit vectors: sqrt(2) on [0, 1), 1 on [1, 2), 0 afterwards
    step = distribution_function(unit_l2(), [1.0, 2.0])
    assert step(0.5) == pytest.approx(math.sqrt(2))
    assert step(1.0) == 1.0
    assert step(2.0) == 0.0
    assert step.integral() == pytest.approx(1 + math.sqrt(2), rel=1e-15)


def test_choquet_scalar_collapse():
    # d = 1 with positive atoms: the layer-cake integral is the weighted L1 norm
    w = np.array([0.5, 2.0, 1.5])
    m = VectorMeasure.from_vectors(w[:, None], "l2")
    f = np.array([3.0, -1.0, 0.25])
    assert choquet_l1_norm(m, f) == pytest.approx(float(np.abs(f) @ w), rel=1e-14)


def test_choquet_batch_matches_single():
    rng = np.random.default_rng(0)
    m = VectorMeasure.from_vectors(rng.normal(size=(5, 3)), "l2")
    F = rng.normal(size=(40, 5)) * (rng.random((40, 5)) > 0.3)
    single = [choquet_l1_norm(m, f) for f in F]
    np.testing.assert_allclose(choquet_l1_norms(m, F), single, rtol=1e-13)


def test_target_norms():
    T = TargetNorm(2, "l1")
    assert T.norm([3, -4]) == 7.0 and T.dual_norm([3, -4]) == 4.0
    y = TargetNorm(2, "linf").norming_functional(np.array([1.0, -5.0]))
    assert y.tolist() == [0.0, -1.0]
    with pytest.raises(ValueError):
        TargetNorm(2, "l3")


def test_spec_round_trip():
    m = VectorMeasure.from_vectors([[1, 2], [3, 4]], "linf")
    again = VectorMeasure.from_spec(m.to_spec())
    assert again.space == m.space and again.target == m.target
    assert np.array_equal(again.atom_vectors, m.atom_vectors)


def test_shape_mismatch():
    m = unit_l2()
    with pytest.raises(SpaceMismatch):
        VectorMeasure(m.space, TargetNorm(3, "l2"), np.ones((2, 2)))


def test_sign_enumeration_agrees_with_itertools():
    V = np.array([[1.0, 0.5], [0.2, -2.0], [-1.5, 1.0], [0.3, 0.3]])
    ref = max(np.abs(np.array(s) @ V).sum() for s in itertools.product([1, -1], repeat=4))
    assert max_signed_sum(V, "l1")[0] == pytest.approx(ref, rel=1e-15)
