"""Calderon products, the Orlicz factorization, and lattice-convexity diagnostics.

Any factorization |f| = lam |f0|^(1-theta) |f1|^theta can be written, on the
support of f, as

    f0 ~ |f| u^theta,   f1 ~ |f| u^(theta-1)      (u > 0 per atom)

rescaled to the unit balls, so the Calderon quasi-norm is

    inf_u |(|f| u^theta)|_0^(1-theta) * |(|f| u^(theta-1))|_1^theta.

The ``alternating`` and ``grid-oracle`` methods minimise this over log u.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import MethodInapplicable, NonConvergence, PreconditionViolation
from .orlicz import OrliczSpace
from .qbfs import QuasiNormedSpace
from .young import Power, calderon_combine

METHODS = ("orlicz-constructive", "alternating", "grid-oracle")
GRID_MAX_ATOMS = 3
GRID_POINTS = 64
ZOOM_POINTS = 17


@dataclass(frozen=True)
class CalderonInstance:
    X0: QuasiNormedSpace
    X1: QuasiNormedSpace
    theta: float

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        if self.X0.space != self.X1.space:
            raise ValueError("X0 and X1 must share the atomic carrier")


@dataclass
class Factorization:
    """|f| <= lam * |f0|^(1-theta) * |f1|^theta with f0, f1 in the unit balls."""

    f0: np.ndarray
    f1: np.ndarray
    lam: float


def _feasible(f, f0, f1, theta, lam):
    """Smallest lam' >= lam making the pointwise inequality hold exactly in floating point."""
    a = np.abs(f)
    supp = a > 0
    if not supp.any():
        return lam
    prod = f0[supp] ** (1 - theta) * f1[supp] ** theta
    need = float(np.max(a[supp] / prod))
    return max(lam, need)


def _objective(inst, a, logu):
    """lam(u) and the unnormalized factors for a batch of log u rows (support only)."""
    th = inst.theta
    U = np.exp(logu)
    G0 = a * U ** th
    G1 = a * U ** (th - 1.0)
    n0 = inst.X0.norms(G0)
    n1 = inst.X1.norms(G1)
    return n0 ** (1 - th) * n1 ** th, G0, G1, n0, n1


def _from_logu(inst, f, logu):
    a = np.abs(f)
    lam, G0, G1, n0, n1 = _objective(inst, a[None, :], logu[None, :])
    f0 = G0[0] / n0[0]
    f1 = G1[0] / n1[0]
    return Factorization(f0, f1, _feasible(f, f0, f1, inst.theta, float(lam[0])))


def _logu_bounds(inst, a):
    supp = a[a > 0]
    spread = math.log(supp.max() / supp.min()) if len(supp) > 1 else 0.0
    return (2.0 * spread + 4.0) / min(inst.theta, 1.0 - inst.theta)


def _grid_oracle(inst, f, levels=40):
    a = np.abs(f)
    supp = np.flatnonzero(a > 0)
    k = len(supp)
    if k > GRID_MAX_ATOMS:
        raise MethodInapplicable(f"grid oracle handles at most {GRID_MAX_ATOMS} atoms, got {k}")
    center = np.zeros(len(a))
    if k == 1:
        return _from_logu(inst, f, center)
    free = supp[1:]  # the objective is invariant under u -> c u
    half = _logu_bounds(inst, a)
    points = GRID_POINTS
    for level in range(levels):
        axis = np.linspace(-half, half, points)
        offsets = np.array(list(itertools.product(axis, repeat=len(free))))
        L = np.tile(center, (len(offsets), 1))
        L[:, free] += offsets
        vals = _objective(inst, a[None, :], L)[0]
        i = int(np.argmin(vals))
        center = L[i]
        if level == 0 and np.any(np.abs(offsets[i]) >= half):
            # optimum on the edge of the first window: widen and rescan
            half *= 4.0
            continue
        half = 2.0 * (2.0 * half / (points - 1))
        points = ZOOM_POINTS
        if half < 1e-12:
            break
    return _from_logu(inst, f, center)


def _alternating(inst, f, max_iter=500, rtol=1e-8):
    a = np.abs(f)
    supp = np.flatnonzero(a > 0)
    logu = np.zeros(len(a))
    lam = float(_objective(inst, a[None, :], logu[None, :])[0][0])
    if len(supp) <= 1:
        return _from_logu(inst, f, logu)
    width = _logu_bounds(inst, a) / 4.0
    axis = np.linspace(-1.0, 1.0, 33)
    for _ in range(max_iter):
        before = lam
        for i in supp[1:]:
            # per-atom reallocation: exhaustive line search, then zoom
            w = width
            for _zoom in range(6):
                L = np.tile(logu, (len(axis), 1))
                L[:, i] = logu[i] + w * axis
                vals = _objective(inst, a[None, :], L)[0]
                j = int(np.argmin(vals))
                if vals[j] < lam:
                    lam = float(vals[j])
                    logu = L[j]
                w /= 8.0
        if before - lam <= rtol * before:
            return _from_logu(inst, f, logu)
    fac = _from_logu(inst, f, logu)
    raise NonConvergence("alternating method hit its iteration cap", best=fac)


def orlicz_factorize(base, phi0, phi1, theta, f):
    """Factor f through X^Phi0 and X^Phi1, with Phi^-1 = (Phi0^-1)^(1-theta) (Phi1^-1)^theta.

    With c the Luxemburg norm of f in X^Phi and h = Phi(|f|/c), the factors are
    Phi0^-1(h) and Phi1^-1(h) rescaled by the larger of their Orlicz norms.
    """
    f = base.space.fn(f)
    if not np.any(f):
        raise ValueError("cannot factorize the zero function")
    phi = calderon_combine(phi0, phi1, theta)
    c = OrliczSpace(base, phi).norm(f)
    h = phi(np.abs(f) / c)
    g0 = phi0.inverse(h)
    g1 = phi1.inverse(h)
    alpha = max(OrliczSpace(base, phi0).norm(g0), OrliczSpace(base, phi1).norm(g1))
    f0, f1 = g0 / alpha, g1 / alpha
    return Factorization(f0, f1, _feasible(f, f0, f1, theta, c * alpha))


def _same_space(X0, X1):
    if X0 is X1:
        return True
    try:
        return X0.to_spec() == X1.to_spec()
    except NotImplementedError:
        return False


def calderon_norm_upper(inst, f, method="alternating", collapse=True):
    """A feasible lam for the Calderon product X0^(1-theta) X1^theta, with its witness.

    With ``collapse`` and X0 = X1 the factorization f0 = f1 = |f| / |f| is
    also tried and the better of the two is returned.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    f = inst.X0.space.fn(f)
    if not np.any(f):
        z = np.zeros_like(f)
        return 0.0, Factorization(z, z.copy(), 0.0)
    if method == "orlicz-constructive":
        X0, X1 = inst.X0, inst.X1
        if not (isinstance(X0, OrliczSpace) and isinstance(X1, OrliczSpace)
                and _same_space(X0.base, X1.base)):
            raise MethodInapplicable("orlicz-constructive needs two Orlicz spaces over one base")
        fac = orlicz_factorize(X0.base, X0.phi, X1.phi, inst.theta, f)
    elif method == "grid-oracle":
        fac = _grid_oracle(inst, f)
    else:
        fac = _alternating(inst, f)
    if collapse and _same_space(inst.X0, inst.X1):
        # f / |f| in both unit balls is always feasible
        n = inst.X0.norm(f)
        if n < fac.lam:
            g = np.abs(f) / n
            fac = Factorization(g, g.copy(), _feasible(f, g, g, inst.theta, n))
    return fac.lam, fac


class CalderonSpace(QuasiNormedSpace):
    """Calderon product evaluated by one of the upper-bound methods."""

    def __init__(self, X0, X1, theta, method="grid-oracle"):
        super().__init__(X0.space)
        self.inst = CalderonInstance(X0, X1, theta)
        self.method = method
        self.K = max(X0.K, X1.K)
        self.is_norm = X0.is_norm and X1.is_norm
        self.name = f"{X0.name}^(1-t) {X1.name}^t"

    def norms(self, F):
        return np.array([calderon_norm_upper(self.inst, f, self.method)[0]
                         for f in np.asarray(F, dtype=float)])

    def to_spec(self):
        return {"kind": "calderon", "x0": self.inst.X0.to_spec(), "x1": self.inst.X1.to_spec(),
                "theta": self.inst.theta, "method": self.method}


@dataclass
class CPIdentityReport:
    """Per sample: (luxemburg over X^Phi, constructive lam, grid lam or None, ok)."""

    rows: list = field(default_factory=list)
    rtol: float = 1e-6

    @property
    def passed(self):
        return all(r[3] for r in self.rows)


def cp_orlicz_identity(base, phi0, phi1, theta, samples, rtol=1e-6, use_grid=True):
    phi = calderon_combine(phi0, phi1, theta)
    target = OrliczSpace(base, phi)
    inst = CalderonInstance(OrliczSpace(base, phi0), OrliczSpace(base, phi1), theta)
    report = CPIdentityReport(rtol=rtol)
    for f in samples:
        f = base.space.fn(f)
        lower = target.norm(f)
        upper, _ = calderon_norm_upper(inst, f, "orlicz-constructive")
        grid = None
        if use_grid and np.count_nonzero(f) <= GRID_MAX_ATOMS:
            grid, _ = calderon_norm_upper(inst, f, "grid-oracle")
        if grid is not None and grid >= upper * (1 - rtol):
            ok = abs(upper - lower) <= rtol * lower
        else:
            ok = lower <= upper * (1 + rtol)
        report.rows.append((lower, upper, grid, ok))
    return report


class InterpolationSpace(OrliczSpace):
    """X^Phi realizing [X^Phi0, X^Phi1]_theta, with the preconditions it was built under."""

    def __init__(self, base, phi0, phi1, theta, certificate):
        super().__init__(base, calderon_combine(phi0, phi1, theta))
        self.phi0, self.phi1, self.theta = phi0, phi1, float(theta)
        self.certificate = certificate
        self.exponent = None
        if isinstance(phi0, Power) and isinstance(phi1, Power):
            self.exponent = 1.0 / ((1 - theta) / phi0.p + theta / phi1.p)

    @property
    def preconditions(self):
        return {"phi0_delta2": self.phi0.is_delta2, "phi1_delta2": self.phi1.is_delta2,
                "base_lconvex": bool(self.certificate.passed),
                "lconvex_eps": self.certificate.eps, "lconvex_trials": self.certificate.trials}


def complex_interpolation(base, phi0, phi1, theta, certificate=None, seed=0):
    """The Orlicz space representing the complex interpolation space of X^Phi0, X^Phi1.

    Needs Phi0, Phi1 in Delta2 and an L-convexity certificate for the base
    (searched for with a moderate budget when not supplied).
    """
    for name, phi in (("phi0", phi0), ("phi1", phi1)):
        if not phi.is_delta2:
            raise PreconditionViolation(f"{name} is not flagged Delta2")
    if certificate is None:
        certificate = l_convexity_search(base, eps=0.25, trials=2000, seed=seed)
    if not certificate.passed:
        raise PreconditionViolation("base space has an L-convexity violation witness")
    return InterpolationSpace(base, phi0, phi1, theta, certificate)


def interpolation_exponent(p0, p1, theta):
    """p with 1/p = (1-theta)/p0 + theta/p1."""
    return 1.0 / ((1 - theta) / p0 + theta / p1)


# ---------------------------------------------------------------------------
# lattice convexity

@dataclass
class LConvexityResult:
    """Outcome of a randomized search for an L-convexity violation.

    ``passed`` is budget-relative: no witness among ``trials`` attempts.
    ``worst_ratio`` is the smallest observed max_i |f_i| / |f|.
    """

    passed: bool
    eps: float
    trials: int
    n_max: int
    seed: int
    worst_ratio: float
    witness: dict | None = None


def _lconvex_batch(rng, n_atoms, eps, T, n_max):
    """T trials: f (T, n), pieces (T, n_max, n), active row mask (T, n_max)."""
    f = np.exp(rng.normal(0.0, 1.5, (T, n_atoms)))
    f *= rng.random((T, n_atoms)) > 0.2
    empty = ~np.any(f > 0, axis=1)
    f[empty, 0] = 1.0
    n = rng.integers(1, n_max + 1, T)
    active = np.arange(n_max)[None, :] < n[:, None]
    nact = n[:, None].astype(float)
    budget = np.floor(nact * eps)  # zeros allowed per column among active rows

    # strategy A: holes, pieces are f or 0 with at most floor(n eps) zeros per atom
    score = rng.random((T, n_max, n_atoms))
    score[~active] = np.inf
    rank = np.argsort(np.argsort(score, axis=1), axis=1)
    holes = rank < budget[:, :, None]
    R_a = np.where(holes, 0.0, 1.0)

    # strategy B: random deficits shrunk so each atom's mean deficit is <= eps
    D = rng.random((T, n_max, n_atoms)) ** rng.uniform(0.2, 3.0, (T, 1, 1))
    D[~active] = 0.0
    mean = D.sum(axis=1) / nact
    shrink = np.where(mean > eps, eps * (1 - 1e-12) / np.where(mean > 0, mean, 1.0), 1.0)
    R_b = 1.0 - D * shrink[:, None, :]

    use_a = rng.random(T) < 0.5
    R = np.where(use_a[:, None, None], R_a, R_b)
    R[~active] = 1.0
    pieces = R * f[:, None, :]
    ok = (pieces * active[:, :, None]).sum(axis=1) / nact >= (1 - eps) * f
    valid = np.all(ok, axis=1)
    return f[valid], pieces[valid], active[valid]


def l_convexity_search(X, eps, trials, n_max=8, seed=0, chunk=2000):
    """Search for f and 0 <= f_i <= f with mean(f_i) >= (1-eps) f but max |f_i| < eps |f|."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    done = 0
    worst = math.inf
    while done < trials:
        T = min(chunk, trials - done)
        f, pieces, active = _lconvex_batch(rng, X.n_atoms, eps, T, n_max)
        done += T
        if len(f) == 0:
            continue
        nf = X.norms(f)
        npieces = X.norms(pieces.reshape(-1, X.n_atoms)).reshape(pieces.shape[:2])
        npieces[~active] = 0.0
        ratio = npieces.max(axis=1) / nf
        worst = min(worst, float(ratio.min()))
        bad = np.flatnonzero(ratio < eps)
        if len(bad):
            b = bad[0]
            witness = {"f": f[b].tolist(),
                       "pieces": pieces[b][active[b]].tolist(),
                       "ratio": float(ratio[b])}
            return LConvexityResult(False, eps, done, n_max, seed, worst, witness)
    return LConvexityResult(True, eps, trials, n_max, seed, worst)


@dataclass
class SConvexityReport:
    s: float
    C: float
    best_constant: float
    passed: bool


def s_convexity_check(X, s, C, tuples, tol=1e-9):
    """|(sum |f_k|^s)^(1/s)|_X <= C (sum |f_k|_X^s)^(1/s) for every tuple."""
    if s <= 0 or C < 1:
        raise ValueError("need s > 0 and C >= 1")
    best = 0.0
    for tup in tuples:
        Fs = np.abs(np.array([X.space.fn(g) for g in tup]))
        lhs = X.norm((Fs ** s).sum(axis=0) ** (1.0 / s))
        rhs = float((X.norms(Fs) ** s).sum() ** (1.0 / s))
        if rhs > 0:
            best = max(best, lhs / rhs)
    return SConvexityReport(float(s), float(C), best, best <= C * (1 + tol))


def lconvexity_delta(eps, s):
    """delta with (1 - delta)^s = 1 - eps."""
    if not 0 < eps < 1 or s <= 0:
        raise ValueError("need 0 < eps < 1 and s > 0")
    return 1.0 - (1.0 - eps) ** (1.0 / s)


def l_convexity_transfer(base, phi, eps_base):
    """L-convexity constant of X^Phi from that of X and the doubling constant of Phi."""
    est = phi.delta2
    if est.unbounded:
        raise PreconditionViolation("Phi is not flagged Delta2")
    return lconvexity_delta(eps_base, est.constant)
