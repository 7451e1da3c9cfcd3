"""Vector measures on atomic spaces with values in (R^d, l1 | l2 | linf).

The semivariation sup_{|y*|<=1} |<m, y*>|(A) equals, on atoms, the largest
norm of a signed sum ``sum_i s_i m_i`` over sign vectors ``s`` (swap the two
suprema).  That maximum is found by branch and bound; a brute-force
enumeration is kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotFound, SizeExceeded, SpaceMismatch
from .space import AtomicMeasureSpace, level_set

NORM_KINDS = ("l1", "l2", "linf")
_DUAL = {"l1": "linf", "l2": "l2", "linf": "l1"}
BRUTEFORCE_MAX_ATOMS = 24


def _norm_rows(V, kind):
    if kind == "l1":
        return np.abs(V).sum(axis=-1)
    if kind == "l2":
        # scale by the row maximum so huge entries do not overflow when squared
        top = np.abs(V).max(axis=-1, keepdims=True)
        safe = np.where((top > 0) & np.isfinite(top), top, 1.0)
        W = V / safe
        return np.sqrt((W * W).sum(axis=-1)) * safe[..., 0]
    return np.abs(V).max(axis=-1)


@dataclass(frozen=True)
class TargetNorm:
    dim: int
    kind: str = "l2"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind not in NORM_KINDS:
            raise ValueError(f"norm kind must be one of {NORM_KINDS}")

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        out = _norm_rows(v, self.kind)
        return float(out) if np.ndim(out) == 0 else out

    def dual_norm(self, v):
        v = np.asarray(v, dtype=float)
        out = _norm_rows(v, _DUAL[self.kind])
        return float(out) if np.ndim(out) == 0 else out

    def norming_functional(self, v):
        """y* in the dual unit ball with <v, y*> = |v|."""
        v = np.asarray(v, dtype=float)
        y = np.zeros_like(v)
        if not np.any(v):
            return y
        if self.kind == "l2":
            return v / np.sqrt(v @ v)
        if self.kind == "l1":
            return np.sign(v)
        j = int(np.argmax(np.abs(v)))
        y[j] = np.sign(v[j])
        return y


def max_signed_sum(vectors, kind):
    """max over s in {+-1}^k of |sum_i s_i v_i|, with a maximizing sign vector.

    Level-wise branch and bound: atoms are taken in decreasing norm; a partial
    sum P is discarded once |P| + (remaining norms) falls below the best |P'|
    seen at that depth, which is a valid lower bound because some completion
    of P' has norm >= |P'|.
    """
    V = np.asarray(vectors, dtype=float)
    k = len(V)
    signs_out = np.ones(k)
    if k == 0:
        return 0.0, signs_out
    V = V.reshape(k, -1)
    norms = _norm_rows(V, kind)
    if kind == "linf":
        col = np.abs(V).sum(axis=0)
        j = int(np.argmax(col))
        signs_out = np.where(V[:, j] < 0, -1.0, 1.0)
        return float(col[j]), signs_out
    order = np.argsort(-norms, kind="stable")
    Vs = V[order]
    suffix = np.append(np.cumsum(norms[order][::-1])[::-1], 0.0)
    partial = Vs[:1].copy()
    signs = np.ones((1, 1), dtype=np.int8)
    for i in range(1, k):
        v = Vs[i]
        partial = np.concatenate([partial + v, partial - v])
        signs = np.concatenate([
            np.hstack([signs, np.ones((len(signs), 1), np.int8)]),
            np.hstack([signs, -np.ones((len(signs), 1), np.int8)])])
        pn = _norm_rows(partial, kind)
        keep = pn + suffix[i + 1] >= pn.max()
        partial, signs = partial[keep], signs[keep]
    pn = _norm_rows(partial, kind)
    best = int(np.argmax(pn))
    signs_out[order] = signs[best]
    return float(pn[best]), signs_out


def max_signed_sum_bruteforce(vectors, kind):
    """Full 2^k enumeration of sign patterns, no pruning (k <= 24)."""
    V = np.asarray(vectors, dtype=float)
    k = len(V)
    if k > BRUTEFORCE_MAX_ATOMS:
        raise SizeExceeded(f"brute force limited to {BRUTEFORCE_MAX_ATOMS} atoms, got {k}")
    if k == 0:
        return 0.0
    V = V.reshape(k, -1)
    bits = np.arange(k)
    best = 0.0
    chunk = 1 << 16
    total = 1 << k
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total))
        S = 1.0 - 2.0 * ((codes[:, None] >> bits) & 1)
        best = max(best, float(_norm_rows(S @ V, kind).max()))
    return best


@dataclass(frozen=True, eq=False)
class VectorMeasure:
    """m(A) = sum_{i in A} atom_vectors[i]."""

    space: AtomicMeasureSpace
    target: TargetNorm
    atom_vectors: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        V = np.array(self.atom_vectors, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        if V.shape != (len(self.space), self.target.dim):
            raise SpaceMismatch(
                f"atom_vectors shape {V.shape} != ({len(self.space)}, {self.target.dim})")
        if not np.all(np.isfinite(V)):
            raise ValueError("atom vectors must be finite")
        V.setflags(write=False)
        object.__setattr__(self, "atom_vectors", V)

    @classmethod
    def from_vectors(cls, vectors, norm="l2", space=None):
        V = np.asarray(vectors, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        space = space or AtomicMeasureSpace.uniform(len(V))
        return cls(space, TargetNorm(V.shape[1], norm), V)

    @property
    def n_atoms(self):
        return len(self.space)

    def to_spec(self):
        return {"target": {"dim": self.target.dim, "norm": self.target.kind},
                "atom_vectors": self.atom_vectors.tolist(),
                "space": self.space.to_spec()}

    @classmethod
    def from_spec(cls, spec):
        space = AtomicMeasureSpace.from_spec(spec["space"]) if "space" in spec else None
        V = np.asarray(spec["atom_vectors"], dtype=float)
        target = spec.get("target", {})
        dim = int(target.get("dim", V.shape[1] if V.ndim == 2 else 1))
        kind = target.get("norm", "l2")
        space = space or AtomicMeasureSpace.uniform(len(V))
        return cls(space, TargetNorm(dim, kind), V)

    def vector(self, A):
        return self.atom_vectors[self.space.atom_set(A)].sum(axis=0)

    def semivariation_code(self, code):
        """Semivariation of the set whose atom bitmask is the integer ``code`` (cached)."""
        value = self._cache.get(code)
        if value is None:
            mask = ((code >> np.arange(self.n_atoms)) & 1).astype(bool)
            value, _ = max_signed_sum(self.atom_vectors[mask], self.target.kind)
            self._cache[code] = value
        return value


def _mask_code(mask):
    return int(sum(1 << int(i) for i in np.flatnonzero(mask)))


def scalar_variation(m, ystar, A=None):
    """|<m, y*>|(A) = sum_{i in A} |<m_i, y*>|."""
    ystar = np.asarray(ystar, dtype=float).reshape(-1)
    if ystar.shape != (m.target.dim,):
        raise SpaceMismatch("y* dimension does not match the target")
    mask = np.ones(m.n_atoms, bool) if A is None else m.space.atom_set(A)
    return float(np.abs(m.atom_vectors[mask] @ ystar).sum())


def semivariation(m, A=None):
    """||m||(A), exact, by branch and bound over sign vectors."""
    mask = np.ones(m.n_atoms, bool) if A is None else m.space.atom_set(A)
    return m.semivariation_code(_mask_code(mask))


def semivariation_bruteforce(m, A=None):
    mask = np.ones(m.n_atoms, bool) if A is None else m.space.atom_set(A)
    return max_signed_sum_bruteforce(m.atom_vectors[mask], m.target.kind)


def is_m_null(m, A=None):
    mask = np.ones(m.n_atoms, bool) if A is None else m.space.atom_set(A)
    return not np.any(m.atom_vectors[mask])


@dataclass(frozen=True)
class RybakovControl:
    """Functional y* in the dual unit ball and the control weights |<m_i, y*>|.

    Weights vanish exactly on the m-null atoms.
    """

    ystar: np.ndarray
    weights: np.ndarray

    def mu(self, mask):
        return float(self.weights[np.asarray(mask, bool)].sum())


def rybakov(m, seed=0, budget=64):
    """Find y* with <m_i, y*> != 0 on every non-null atom.

    Tries the normalized combination sum_i 3^-i m_i/|m_i| first, then ``budget``
    seeded random directions.  Raises :class:`NotFound` when all fail.
    """
    V = m.atom_vectors
    norms = m.target.norm(V)
    live = norms > 0
    d = m.target.dim

    def accept(y):
        dn = m.target.dual_norm(y)
        if dn == 0:
            return None
        y = y / dn
        inner = np.abs(V @ y)
        if np.all(inner[live] > 1e-12 * norms[live]):
            return y, inner
        return None

    if not live.any():
        y = np.zeros(d)
        y[0] = 1.0
        return RybakovControl(y, np.zeros(m.n_atoms))
    coeffs = 3.0 ** -np.arange(m.n_atoms)
    candidate = (coeffs[live, None] * V[live] / norms[live, None]).sum(axis=0)
    rng = np.random.default_rng(seed)
    tries = [candidate] + [rng.standard_normal(d) for _ in range(budget)]
    for y in tries:
        found = accept(y)
        if found is not None:
            y, inner = found
            inner = np.where(live, inner, 0.0)
            return RybakovControl(y, inner)
    raise NotFound(f"no Rybakov functional found within {budget} random trials")


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous non-increasing step function; ``values[j]`` holds on [t_j, t_{j+1})."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __call__(self, t):
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        vals = np.append(self.values, 0.0)
        out = vals[np.where(idx >= len(self.values), -1, idx)]
        return float(out) if np.ndim(out) == 0 else out

    def integral(self):
        widths = np.diff(self.breakpoints)
        return float(np.dot(widths, self.values[:-1]))


def distribution_function(m, f):
    """t -> ||m||([|f| > t]) as an exact step function."""
    a = np.abs(m.space.fn(f))
    breaks = np.unique(np.concatenate([[0.0], a]))
    values = np.array([semivariation(m, level_set(a, t)) for t in breaks])
    return StepFunction(breaks, values)


def choquet_l1_norm(m, f):
    """Integral over (0, inf) of the distribution function of f."""
    return distribution_function(m, f).integral()


def choquet_l1_norms(m, F):
    """Row-wise :func:`choquet_l1_norm` for a batch ``F`` of shape (N, n_atoms).

    Uses the layer-cake sum over the decreasing rearrangement:
    sum_k (a_(k) - a_(k+1)) * ||m||(top-k atoms).
    """
    A = np.abs(np.asarray(F, dtype=float))
    N, n = A.shape
    order = np.argsort(-A, axis=1, kind="stable")
    sorted_a = np.take_along_axis(A, order, axis=1)
    gaps = sorted_a - np.concatenate([sorted_a[:, 1:], np.zeros((N, 1))], axis=1)
    codes = np.cumsum(np.left_shift(np.int64(1), order.astype(np.int64)), axis=1)
    uniq, inv = np.unique(codes, return_inverse=True)
    sv = np.array([m.semivariation_code(int(c)) for c in uniq])
    return (gaps * sv[inv.reshape(codes.shape)]).sum(axis=1)
