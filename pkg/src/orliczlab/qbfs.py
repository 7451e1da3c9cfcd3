"""Quasi-normed function spaces over an atomic measure space.

Every space evaluates a single function with :meth:`QuasiNormedSpace.norm`
and a batch of functions (rows of a 2-D array) with
:meth:`QuasiNormedSpace.norms`.  Each carries its quasi-triangle constant
``K`` (``|f+g| <= K(|f|+|g|)``) and the lattice tags used by the Orlicz
construction.
"""

from __future__ import annotations

import numpy as np

from .space import AtomicMeasureSpace
from .vecmeasure import VectorMeasure, _norm_rows, choquet_l1_norms, max_signed_sum

__all__ = [
    "QuasiNormedSpace", "L1Mu", "LInf", "L1Weak", "L1Semivariation", "PowerSpace",
    "l1_mu", "linf", "l1w", "l1_semivar", "power_space", "lp_semivar",
    "empirical_quasi_triangle",
]


class QuasiNormedSpace:
    """Base class.  Subclasses implement :meth:`norms` (row-wise)."""

    name = "X"
    K = 1.0
    is_norm = True
    sigma_order_continuous = False
    sigma_fatou = False

    def __init__(self, space):
        self.space = space

    @property
    def n_atoms(self):
        return len(self.space)

    def norms(self, F):
        raise NotImplementedError

    def norm(self, f):
        f = self.space.fn(f)
        return float(self.norms(f[None, :])[0])

    __call__ = norm

    def chi_norm(self, A=None):
        """Quasi-norm of the characteristic function of A (of the whole space by default)."""
        return self.norm(self.space.chi(A))

    @property
    def tags(self):
        return {"is_norm": self.is_norm, "sigma_order_continuous": self.sigma_order_continuous,
                "sigma_fatou": self.sigma_fatou}

    def to_spec(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.name} on {self.n_atoms} atoms, K={self.K:g}>"


class L1Mu(QuasiNormedSpace):
    """L^1 of the atomic measure; ``weights`` may override the space weights.

    Overriding weights may contain zeros (e.g. |<m, y*>| for a Rybakov-type
    functional), in which case the evaluator is only a seminorm.
    """

    name = "L1(mu)"
    sigma_order_continuous = True
    sigma_fatou = True

    def __init__(self, space, weights=None):
        super().__init__(space)
        self._override = weights is not None
        w = space.weights if weights is None else np.asarray(weights, dtype=float)
        if w.shape != (len(space),) or np.any(w < 0):
            raise ValueError("weights must be non-negative, one per atom")
        self.weights = w
        self.is_norm = bool(np.all(w > 0))

    def norms(self, F):
        return np.abs(np.asarray(F, dtype=float)) @ self.weights

    def to_spec(self):
        spec = {"kind": "l1mu", "space": self.space.to_spec()}
        if self._override:
            spec["weights"] = self.weights.tolist()
        return spec


class LInf(QuasiNormedSpace):
    name = "Linf"
    sigma_fatou = True

    def norms(self, F):
        return np.abs(np.asarray(F, dtype=float)).max(axis=1)

    def to_spec(self):
        return {"kind": "linf", "space": self.space.to_spec()}


_SIGN_TABLE_MAX = 10
_BATCH_CELLS = 1 << 20


def _sign_table(n):
    codes = np.arange(1 << (n - 1))[:, None]
    return np.hstack([np.ones((len(codes), 1)), 1.0 - 2.0 * ((codes >> np.arange(n - 1)) & 1)])


class L1Weak(QuasiNormedSpace):
    """L^1_w(m) = L^1(m) on atoms: sup over the dual ball of int |f| d|<m, y*>|."""

    name = "L1w(m)"
    sigma_order_continuous = True
    sigma_fatou = True

    def __init__(self, measure):
        super().__init__(measure.space)
        self.measure = measure

    def _one(self, a):
        V = a[:, None] * self.measure.atom_vectors
        return max_signed_sum(V, self.measure.target.kind)

    def norms(self, F):
        A = np.abs(np.asarray(F, dtype=float))
        V = self.measure.atom_vectors
        kind = self.measure.target.kind
        if kind == "linf":
            return (A @ np.abs(V)).max(axis=1)
        n = A.shape[1]
        if n <= _SIGN_TABLE_MAX:
            # all sign patterns with the first sign fixed, batched over rows
            signs = _sign_table(n)
            out = np.empty(len(A))
            step = max(1, _BATCH_CELLS // (len(signs) * V.shape[1]))
            for i in range(0, len(A), step):
                W = A[i:i + step, :, None] * V[None]  # rows x atoms x dim
                sums = np.einsum("sn,rnd->rsd", signs, W)
                out[i:i + step] = _norm_rows(sums, kind).max(axis=1)
            return out
        return np.array([self._one(a)[0] for a in A])

    def norming_functional(self, f):
        """y* in the dual unit ball attaining the sup for |f|."""
        a = np.abs(self.space.fn(f))
        _, signs = self._one(a)
        v = (signs * a) @ self.measure.atom_vectors
        return self.measure.target.norming_functional(v)

    def to_spec(self):
        return {"kind": "l1w", "measure": self.measure.to_spec()}


class L1Semivariation(QuasiNormedSpace):
    """L^1(||m||): Choquet integral of the semivariation distribution function.

    K = 2 from [|f+g| > t] in [|f| > t/2] u [|g| > t/2] and subadditivity of ||m||.
    """

    name = "L1(||m||)"
    K = 2.0
    is_norm = False
    sigma_order_continuous = True
    sigma_fatou = True

    def __init__(self, measure):
        super().__init__(measure.space)
        self.measure = measure

    def norms(self, F):
        return choquet_l1_norms(self.measure, F)

    def to_spec(self):
        return {"kind": "l1semivar", "measure": self.measure.to_spec()}


def _power_K(K, s):
    if s <= 1:
        return 1.0 if K == 1 else K ** s * 2.0 ** (1.0 - s)
    return K ** s * 2.0 ** (s - 1.0)


class PowerSpace(QuasiNormedSpace):
    """s-th power X_[s]: |f|_{X_[s]} = |(|f|^(1/s))|_X ** s."""

    def __init__(self, base, s):
        if s <= 0:
            raise ValueError("s must be positive")
        super().__init__(base.space)
        self.base = base
        self.s = float(s)
        self.K = _power_K(base.K, self.s)
        self.is_norm = base.is_norm and self.s <= 1
        self.sigma_order_continuous = base.sigma_order_continuous
        self.sigma_fatou = base.sigma_fatou
        self.name = f"{base.name}_[{self.s:g}]"

    def norms(self, F):
        A = np.abs(np.asarray(F, dtype=float))
        return self.base.norms(A ** (1.0 / self.s)) ** self.s

    def to_spec(self):
        return {"kind": "power", "base": self.base.to_spec(), "s": self.s}


def l1_mu(space, weights=None):
    return L1Mu(space, weights)


def linf(space):
    return LInf(space)


def l1w(measure):
    return L1Weak(measure)


def l1_semivar(measure):
    return L1Semivariation(measure)


def power_space(X, s):
    if s == 1:
        return X
    return PowerSpace(X, s)


def lp_semivar(measure, p):
    """L^p(||m||) as the 1/p-th power of L^1(||m||)."""
    return power_space(l1_semivar(measure), 1.0 / p)


def empirical_quasi_triangle(X, F, G):
    """Largest observed |f+g| / (|f| + |g|) over paired rows of F and G."""
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    denom = X.norms(F) + X.norms(G)
    num = X.norms(F + G)
    live = denom > 0
    return float((num[live] / denom[live]).max()) if live.any() else 0.0


def space_from_spec(spec, n_atoms=None):
    """Build a space from its JSON description.

    Missing carriers default to ``n_atoms`` unit-weight atoms.
    """
    from .orlicz import OrliczSpace
    from .young import validate

    kind = spec.get("kind")
    if "space" in spec:
        space = AtomicMeasureSpace.from_spec(spec["space"])
    elif n_atoms is not None:
        space = AtomicMeasureSpace.uniform(n_atoms)
    else:
        space = None

    def measure():
        m = spec.get("measure")
        if m is None:
            raise ValueError(f"space kind {kind!r} needs a 'measure'")
        return VectorMeasure.from_spec(m)

    if kind == "l1mu":
        if space is None:
            raise ValueError("l1mu needs a 'space' or a known atom count")
        return L1Mu(space, spec.get("weights"))
    if kind == "linf":
        if space is None:
            raise ValueError("linf needs a 'space' or a known atom count")
        return LInf(space)
    if kind == "l1w":
        return L1Weak(measure())
    if kind == "l1semivar":
        return L1Semivariation(measure())
    if kind == "power":
        return power_space(space_from_spec(spec["base"], n_atoms), float(spec["s"]))
    if kind == "orlicz":
        return OrliczSpace(space_from_spec(spec["base"], n_atoms), validate(spec["phi"]),
                           tol=float(spec.get("tol", 1e-10)))
    raise ValueError(f"unknown space kind {kind!r}")
