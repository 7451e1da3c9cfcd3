"""Finite atomic measure spaces and the lattice of real functions on them.

Functions are plain 1-D float arrays (one value per atom) and measurable sets
are boolean masks; :meth:`AtomicMeasureSpace.fn` and
:meth:`AtomicMeasureSpace.atom_set` validate them against a space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SpaceMismatch


@dataclass(frozen=True, eq=False)
class AtomicMeasureSpace:
    """Atoms with strictly positive weights mu({a_i})."""

    atom_ids: tuple
    weights: np.ndarray

    def __post_init__(self):
        ids = tuple(str(a) for a in self.atom_ids)
        w = np.array(self.weights, dtype=float).reshape(-1)
        w.setflags(write=False)
        if len(ids) != len(w):
            raise ValueError("atom_ids and weights differ in length")
        if len(set(ids)) != len(ids):
            raise ValueError("atom ids must be unique")
        if len(w) == 0:
            raise ValueError("a space needs at least one atom")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and strictly positive")
        object.__setattr__(self, "atom_ids", ids)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n, weight=1.0):
        return cls(tuple(f"a{i + 1}" for i in range(n)), np.full(n, float(weight)))

    @classmethod
    def from_weights(cls, weights):
        weights = np.asarray(weights, dtype=float)
        return cls(tuple(f"a{i + 1}" for i in range(len(weights))), weights)

    def __len__(self):
        return len(self.atom_ids)

    def __eq__(self, other):
        return (isinstance(other, AtomicMeasureSpace) and self.atom_ids == other.atom_ids
                and np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.atom_ids, self.weights.tobytes()))

    @property
    def total(self):
        return float(self.weights.sum())

    def fn(self, values):
        """Validate ``values`` as a function on this space and return it as an array."""
        f = np.asarray(values, dtype=float)
        if f.shape != (len(self),):
            raise SpaceMismatch(f"function has shape {f.shape}, space has {len(self)} atoms")
        if not np.all(np.isfinite(f)):
            raise ValueError("function values must be finite")
        return f

    def atom_set(self, members):
        """Boolean mask from a mask, or from an iterable of atom ids."""
        if isinstance(members, np.ndarray) and members.dtype == bool:
            if members.shape != (len(self),):
                raise SpaceMismatch("mask length does not match the space")
            return members
        index = {a: i for i, a in enumerate(self.atom_ids)}
        mask = np.zeros(len(self), dtype=bool)
        for a in members:
            try:
                mask[index[str(a)]] = True
            except KeyError:
                raise SpaceMismatch(f"unknown atom {a!r}") from None
        return mask

    def mu(self, A):
        return float(self.weights[self.atom_set(A)].sum())

    def chi(self, A=None):
        """Characteristic function of A (of the whole space when A is None)."""
        if A is None:
            return np.ones(len(self))
        return self.atom_set(A).astype(float)

    def to_spec(self):
        return {"atoms": list(self.atom_ids), "weights": [float(w) for w in self.weights]}

    @classmethod
    def from_spec(cls, spec):
        return cls(tuple(spec["atoms"]), np.asarray(spec["weights"], dtype=float))


def _pair(f, g):
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise SpaceMismatch(f"shapes {f.shape} and {g.shape} differ")
    return f, g


def absolute(f):
    return np.abs(np.asarray(f, dtype=float))


def pointwise_max(f, g):
    f, g = _pair(f, g)
    return np.maximum(f, g)


def pointwise_leq(f, g):
    f, g = _pair(f, g)
    return bool(np.all(f <= g))


def scale(f, c):
    return c * np.asarray(f, dtype=float)


def add(f, g):
    f, g = _pair(f, g)
    return f + g


def level_set(f, t):
    """The set [|f| > t] (strict inequality)."""
    return np.abs(np.asarray(f, dtype=float)) > t
