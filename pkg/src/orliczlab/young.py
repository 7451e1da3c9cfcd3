"""Young functions: convex gauges Phi with Phi(0)=0, strictly increasing, Phi(t) -> inf.

Every Young function is vectorized: calling it (or its ``inverse``) on an
array evaluates elementwise; scalars come back as Python floats.

>>> phi = Power(2)
>>> phi(3.0)
9.0
>>> phi.inverse(9.0)
3.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DomainOverflow, InvalidYoungFunction

__all__ = [
    "YoungFunction", "Power", "PowerLog", "ExpMinusOne", "Scaled",
    "CalderonCombined", "Tabulated", "Delta2Estimate",
    "validate", "diagnose", "from_spec", "delta2_constant", "scale_argument",
    "calderon_combine", "quasi_subadditive_bound", "solve_increasing",
]

# bracket relative width at which inversion by bisection stops
INVERSE_RTOL = 1e-12
# exponential kinds are capped where Phi reaches this value
OVERFLOW_VALUE = 1e300


def solve_increasing(g, target, cap=math.inf, rtol=INVERSE_RTOL):
    """Solve ``g(x) = target`` elementwise for a continuous increasing ``g`` with g(0)=0.

    The bracket is found by doubling/halving from 1 and then bisected until its
    relative width drops below ``rtol``; the midpoint is returned.  Raises
    :class:`DomainOverflow` if the doubling bracket passes ``cap``.
    """
    target = np.asarray(target, dtype=float)
    scalar = target.ndim == 0
    target = np.atleast_1d(target)
    out = np.zeros_like(target)
    live = target > 0
    if not live.any():
        return float(out[0]) if scalar else out
    tgt = target[live]
    hi = np.ones_like(tgt)
    # grow until g(hi) >= target
    low_mask = g(hi) < tgt
    while low_mask.any():
        hi[low_mask] *= 2.0
        if np.any(hi[low_mask] > cap):
            raise DomainOverflow(f"bracket exceeds domain cap {cap:g}")
        low_mask[low_mask] = g(hi[low_mask]) < tgt[low_mask]
    # shrink while g(hi/2) >= target
    shrink = g(hi / 2.0) >= tgt
    while shrink.any():
        hi[shrink] /= 2.0
        shrink[shrink] = (hi[shrink] > 1e-300) & (g(hi[shrink] / 2.0) >= tgt[shrink])
    lo = hi / 2.0
    lo, hi = refine_root(lambda x, idx: g(x) / tgt[idx], lo, hi, rtol)
    out[live] = 0.5 * (lo + hi)
    return float(out[0]) if scalar else out


def refine_root(r, lo, hi, rtol, r_lo=None, r_hi=None):
    """Shrink brackets [lo, hi] around the crossing r(x) = 1 of increasing r.

    ``r(x, idx)`` evaluates rows ``idx`` at points ``x`` (values may be 0 or
    inf).  Each step places two points a relative distance ``rtol/2`` apart
    around the log-log secant estimate, so power-like r converge in a few
    steps; a step that fails to halve the bracket is followed by a plain
    bisection step.  Returns the final (lo, hi).
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    all_idx = np.arange(len(lo))
    with np.errstate(all="ignore"):
        r_lo = r(lo, all_idx) if r_lo is None else np.array(r_lo, dtype=float)
        r_hi = r(hi, all_idx) if r_hi is None else np.array(r_hi, dtype=float)
    plain = np.zeros(len(lo), dtype=bool)
    open_ = hi - lo > rtol * hi
    for _ in range(10_000):
        if not open_.any():
            break
        idx = np.flatnonzero(open_)
        l_, h, rl, rh = lo[idx], hi[idx], r_lo[idx], r_hi[idx]
        mid = np.where((l_ > 0) & (h > 2.0 * l_), np.sqrt(l_ * h), 0.5 * (l_ + h))
        with np.errstate(all="ignore"):
            good = ((l_ > 0) & (rl > 0) & (rh > rl) & np.isfinite(rh) & ~plain[idx])
            frac = -np.log(rl) / (np.log(rh) - np.log(rl))
            c = np.exp(np.log(l_) + frac * (np.log(h) - np.log(l_)))
        c = np.where(good & np.isfinite(c), c, mid)
        a = np.clip(np.where(good, c * (1 - rtol / 4), c), l_, h)
        b = np.clip(np.where(good, c * (1 + rtol / 4), c), l_, h)
        with np.errstate(all="ignore"):
            vals = r(np.concatenate([a, b]), np.concatenate([idx, idx]))
        ra, rb = vals[:len(idx)], vals[len(idx):]
        new_l, new_h = l_.copy(), h.copy()
        new_rl, new_rh = rl.copy(), rh.copy()
        up = rb < 1.0
        down = ~up & (ra >= 1.0)
        mid_ = ~up & ~down
        new_l[up], new_rl[up] = b[up], rb[up]
        new_h[down], new_rh[down] = a[down], ra[down]
        new_l[mid_], new_rl[mid_] = a[mid_], ra[mid_]
        new_h[mid_], new_rh[mid_] = b[mid_], rb[mid_]
        plain[idx] = (new_h - new_l) > 0.5 * (h - l_)
        lo[idx], hi[idx], r_lo[idx], r_hi[idx] = new_l, new_h, new_rl, new_rh
        open_ = hi - lo > rtol * hi
    return lo, hi


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


class YoungFunction:
    """Base class.  Subclasses implement ``_eval``, ``_inverse`` and ``to_spec``."""

    kind = "abstract"
    domain_cap = math.inf

    def __call__(self, t):
        arr, scalar = _as_array(t)
        if np.any(arr < 0):
            raise ValueError("Young functions are defined on [0, inf)")
        if np.any(arr > self.domain_cap):
            raise DomainOverflow(
                f"{self!r}: argument {float(arr.max()):g} exceeds domain cap {self.domain_cap:g}")
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if scalar else out.reshape(arr.shape)

    def inverse(self, u):
        """The unique t >= 0 with Phi(t) = u."""
        arr, scalar = _as_array(u)
        if np.any(arr < 0):
            raise ValueError("inverse is defined on [0, inf)")
        out = self._inverse(np.atleast_1d(arr))
        return float(out[0]) if scalar else out.reshape(arr.shape)

    def _inverse(self, u):
        return solve_increasing(self._eval, u, cap=self.domain_cap)

    def to_spec(self):
        raise NotImplementedError

    @cached_property
    def delta2(self):
        """Default-grid doubling estimate, see :func:`delta2_constant`."""
        return delta2_constant(self)

    @property
    def is_delta2(self):
        return not self.delta2.unbounded

    def __eq__(self, other):
        return isinstance(other, YoungFunction) and self.to_spec() == other.to_spec()

    def __hash__(self):
        return hash(repr(self.to_spec()))

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.to_spec().items() if k != "kind")
        return f"{type(self).__name__}({params})"


class Power(YoungFunction):
    """Phi(t) = t**p."""

    kind = "power"

    def __init__(self, p):
        self.p = float(p)

    def _eval(self, t):
        return t ** self.p

    def _inverse(self, u):
        return u ** (1.0 / self.p)

    def to_spec(self):
        return {"kind": "power", "p": self.p}


class PowerLog(YoungFunction):
    """Phi(t) = t**p * log(1+t)**q."""

    kind = "power-log"

    def __init__(self, p, q):
        self.p = float(p)
        self.q = float(q)

    def _eval(self, t):
        return t ** self.p * np.log1p(t) ** self.q

    def to_spec(self):
        return {"kind": "power-log", "p": self.p, "q": self.q}


class ExpMinusOne(YoungFunction):
    """Phi(t) = exp(t**a) - 1; not Delta2."""

    kind = "exp"

    def __init__(self, a):
        self.a = float(a)
        self.domain_cap = math.log1p(OVERFLOW_VALUE) ** (1.0 / self.a) if self.a > 0 else math.inf

    def _eval(self, t):
        return np.expm1(t ** self.a)

    def _inverse(self, u):
        return np.log1p(u) ** (1.0 / self.a)

    def to_spec(self):
        return {"kind": "exp", "a": self.a}


class Scaled(YoungFunction):
    """Psi(t) = inner(t / M)."""

    kind = "scaled"

    def __init__(self, inner, M):
        self.inner = inner
        self.M = float(M)
        self.domain_cap = self.M * inner.domain_cap

    def _eval(self, t):
        return self.inner._eval(t / self.M)

    def _inverse(self, u):
        return self.M * self.inner._inverse(u)

    def to_spec(self):
        return {"kind": "scaled", "inner": self.inner.to_spec(), "M": self.M}


class CalderonCombined(YoungFunction):
    """Young function known through its inverse, inv0(u)**(1-theta) * inv1(u)**theta.

    Forward values come from bisection on that inverse.
    """

    kind = "calderon"

    def __init__(self, phi0, phi1, theta):
        self.phi0 = phi0
        self.phi1 = phi1
        self.theta = float(theta)
        caps = [phi._eval(np.array([phi.domain_cap]))[0] if math.isfinite(phi.domain_cap)
                else math.inf for phi in (phi0, phi1)]
        self.u_cap = min(caps)
        self.domain_cap = (float(self._inverse(np.array([self.u_cap]))[0])
                           if math.isfinite(self.u_cap) else math.inf)

    def _inverse(self, u):
        return self.phi0._inverse(u) ** (1.0 - self.theta) * self.phi1._inverse(u) ** self.theta

    def _eval(self, t):
        return solve_increasing(self._inverse, t, cap=self.u_cap)

    def to_spec(self):
        return {"kind": "calderon", "phi0": self.phi0.to_spec(),
                "phi1": self.phi1.to_spec(), "theta": self.theta}


class Tabulated(YoungFunction):
    """Piecewise-linear Young function through ``points``, extended with ``terminal_slope``."""

    kind = "tabulated"

    def __init__(self, points, terminal_slope):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        self.ts = pts[:, 0].copy()
        self.us = pts[:, 1].copy()
        self.terminal_slope = float(terminal_slope)

    def _eval(self, t):
        out = np.interp(t, self.ts, self.us)
        tail = t > self.ts[-1]
        out[tail] = self.us[-1] + self.terminal_slope * (t[tail] - self.ts[-1])
        return out

    def _inverse(self, u):
        out = np.interp(u, self.us, self.ts)
        tail = u > self.us[-1]
        out[tail] = self.ts[-1] + (u[tail] - self.us[-1]) / self.terminal_slope
        return out

    def to_spec(self):
        return {"kind": "tabulated", "points": [[float(t), float(u)] for t, u in zip(self.ts, self.us)],
                "terminal_slope": self.terminal_slope}


# ---------------------------------------------------------------------------
# construction and validation

def _build(spec):
    """Construct without axiom checks; raises ``ValueError`` on malformed input."""
    if isinstance(spec, YoungFunction):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("spec must be a mapping with a 'kind' key")
    kind = spec["kind"]

    def num(key):
        try:
            value = float(spec[key])
        except (KeyError, TypeError, ValueError):
            raise ValueError(f"missing or non-numeric parameter {key!r}") from None
        if not math.isfinite(value):
            raise ValueError(f"parameter {key!r} must be finite")
        return value

    if kind == "power":
        return Power(num("p"))
    if kind == "power-log":
        return PowerLog(num("p"), num("q"))
    if kind == "exp":
        return ExpMinusOne(num("a"))
    if kind == "scaled":
        M = num("M")
        if M <= 0:
            raise ValueError("scale M must be positive")
        return Scaled(validate(spec["inner"]), M)
    if kind == "calderon":
        theta = num("theta")
        if not 0 < theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        return CalderonCombined(validate(spec["phi0"]), validate(spec["phi1"]), theta)
    if kind == "tabulated":
        pts = np.asarray(spec.get("points", []), dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2 or not np.all(np.isfinite(pts)):
            raise ValueError("points must be a list of at least two finite [t, u] pairs")
        return Tabulated(pts, num("terminal_slope"))
    raise ValueError(f"unknown Young function kind {kind!r}")


def _tabulated_diagnostics(phi):
    out = []
    ts, us = phi.ts, phi.us
    if ts[0] != 0 or us[0] != 0:
        out.append("phi(0) != 0")
    if np.any(np.diff(ts) <= 0):
        out.append("breakpoints not strictly increasing in t")
        return out
    slopes = np.append(np.diff(us) / np.diff(ts), phi.terminal_slope)
    if np.any(slopes[:-1] <= 0):
        out.append("monotonicity violated")
    if np.any(np.diff(slopes) < -1e-12 * np.maximum(1.0, np.abs(slopes[:-1]))):
        out.append("convexity violated")
    if phi.terminal_slope <= 0:
        out.append("divergence violated")
    return out


def _sampled_diagnostics(phi):
    out = []
    cap = phi.domain_cap
    hi = min(1e6, cap)
    grid = np.concatenate([[0.0], np.geomspace(hi * 1e-12, hi, 241)])
    with np.errstate(all="ignore"):
        vals = phi._eval(grid)
    if not np.all(np.isfinite(vals)):
        out.append("non-finite values")
        return out
    if vals[0] != 0:
        out.append("phi(0) != 0")
    if np.any(np.diff(vals) <= 0):
        out.append("monotonicity violated")
    slopes = np.diff(vals) / np.diff(grid)
    if np.any(np.diff(slopes) < -1e-9 * np.abs(slopes[1:])):
        out.append("convexity violated")
    if slopes[-1] <= 0:
        out.append("divergence violated")
    return out


def diagnose(spec):
    """Every violated Young-function axiom for ``spec`` (empty list when valid)."""
    try:
        phi = _build(spec)
    except InvalidYoungFunction as exc:
        return [f"inner: {d}" for d in exc.diagnostics]
    except ValueError as exc:
        return [f"malformed spec: {exc}"]
    if isinstance(phi, Tabulated):
        return _tabulated_diagnostics(phi)
    return _sampled_diagnostics(phi)


def validate(spec):
    """Build a :class:`YoungFunction` from a JSON-style spec, checking the axioms.

    Raises :class:`InvalidYoungFunction` listing every violation.
    """
    problems = diagnose(spec)
    if problems:
        raise InvalidYoungFunction(problems)
    return _build(spec)


from_spec = validate


# ---------------------------------------------------------------------------
# operations

@dataclass(frozen=True)
class Delta2Estimate:
    """Grid estimate of sup Phi(2t)/Phi(t); ``unbounded`` flags heuristic Delta2 failure."""

    constant: float
    unbounded: bool
    t_min: float
    t_max: float
    n_grid: int


def delta2_constant(phi, t_max=None, n_grid=64):
    """Estimate the doubling constant of ``phi`` on a geometric grid over [t_max*1e-8, t_max]."""
    if n_grid < 16:
        raise ValueError("n_grid must be at least 16")
    if t_max is None:
        t_max = min(1e4, phi.domain_cap / 2.0)
    grid = np.geomspace(t_max * 1e-8, t_max, n_grid)
    ratios = phi(2.0 * grid) / phi(grid)
    top = ratios[grid >= t_max / 10.0]
    growing = bool(np.all(np.diff(top) >= -1e-9 * top[1:]) and top[-1] > 2.0 * top[0])
    constant = math.inf if growing else float(ratios.max())
    return Delta2Estimate(constant, growing, float(grid[0]), float(t_max), int(n_grid))


def scale_argument(phi, M):
    """Psi(t) = Phi(t / M)."""
    if M <= 0:
        raise ValueError("M must be positive")
    return Scaled(phi, M)


def calderon_combine(phi0, phi1, theta):
    """Young function whose inverse is phi0^{-1}**(1-theta) * phi1^{-1}**theta."""
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if phi0 == phi1:
        return phi0
    combined = CalderonCombined(phi0, phi1, theta)
    grid = np.geomspace(1e-6, min(1e6, combined.domain_cap), 61)
    if np.any(np.diff(combined(grid)) <= 0):
        raise InvalidYoungFunction(["monotonicity violated"])
    return combined


def quasi_subadditive_bound(phi, alpha, ts):
    """(Phi(sum t_n), sum Phi(2^n alpha^n t_n) / (2^n alpha^n)) for n = 1..N."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    ts = np.asarray(ts, dtype=float)
    lhs = phi(float(ts.sum()))
    scale = (2.0 * alpha) ** np.arange(1, len(ts) + 1)
    rhs = float(np.sum(phi(scale * ts) / scale))
    return lhs, rhs
