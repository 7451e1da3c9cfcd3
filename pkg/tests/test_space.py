import numpy as np
import pytest

from orliczlab.exceptions import SpaceMismatch
from orliczlab.space import (AtomicMeasureSpace, add, level_set, pointwise_leq, pointwise_max,
                             scale)


def test_uniform_space():
    S = AtomicMeasureSpace.uniform(3)
    assert S.atom_ids == ("a1", "a2", "a3")
    assert S.total == 3.0
    assert S.mu(["a1", "a3"]) == 2.0


@pytest.mark.parametrize("ids, weights", [
    (("a", "b"), [1.0, 0.0]),
    (("a", "a"), [1.0, 1.0]),
    (("a",), [1.0, 2.0]),
    ((), []),
])
def test_invalid_spaces(ids, weights):
    with pytest.raises(ValueError):
        AtomicMeasureSpace(ids, np.array(weights))


def test_weights_read_only():
    S = AtomicMeasureSpace.from_weights([1, 2])
    with pytest.raises(ValueError):
        S.weights[0] = 5.0


def test_fn_validation():
    S = AtomicMeasureSpace.uniform(2)
    with pytest.raises(SpaceMismatch):
        S.fn([1, 2, 3])
    with pytest.raises(ValueError):
        S.fn([1, np.nan])


def test_atom_set_and_chi():
    S = AtomicMeasureSpace.from_weights([1, 2, 3])
    mask = S.atom_set(["a2"])
    assert mask.tolist() == [False, True, False]
    assert S.chi(mask).tolist() == [0.0, 1.0, 0.0]
    assert S.chi().tolist() == [1.0, 1.0, 1.0]
    with pytest.raises(SpaceMismatch):
        S.atom_set(["zz"])
    with pytest.raises(SpaceMismatch):
        S.atom_set(np.array([True]))


def test_spec_round_trip():
    S = AtomicMeasureSpace(("x", "y"), np.array([0.5, 2.0]))
    assert AtomicMeasureSpace.from_spec(S.to_spec()) == S
    assert hash(AtomicMeasureSpace.from_spec(S.to_spec())) == hash(S)


def test_lattice_operations():
    f, g = np.array([1.0, -3.0]), np.array([2.0, 0.5])
    assert pointwise_max(f, g).tolist() == [2.0, 0.5]
    assert pointwise_leq(np.abs(f) * 0, np.abs(g))
    assert pointwise_leq(f, g)
    assert not pointwise_leq(g, f)
    assert add(f, g).tolist() == [3.0, -2.5]
    assert scale(f, -2).tolist() == [-2.0, 6.0]
    with pytest.raises(SpaceMismatch):
        add(f, np.ones(3))


def test_level_set_is_strict():
    assert level_set([1.0, 2.0, -3.0], 2.0).tolist() == [False, False, True]
