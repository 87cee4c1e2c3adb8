"""Classical Wiener-space specifics and the measurable-norm tail experiment.

Piecewise-linear paths starting at the origin form the natural finite
playground for the Brownian covariance: the inner product of two paths is
the integral of the product of their slopes, and the covariance sections
min(s, .) reproduce min(s, t) under it. ``sample_bm_paths`` draws the
process itself on a grid by delegating to the generic Gaussian sampler on
the min-kernel Gram matrix.

``tail_mass`` probes the norm |h| = sqrt(sum_n <e_n, h>^2 / n^2) on the
span of basis directions N+1 .. N+k: under a standard Gaussian on that
span, |h|^2 = sum xi_n^2 / n^2, whose mean gives the rigorous Markov bound
P(|h| > eps) <= (sum n^-2) / eps^2. The Monte Carlo estimate sits below
the bound and shrinks as N grows, which is the finite-dimensional shadow
of the smallness property that makes the weighted norm measurable.
"""

from dataclasses import dataclass

import numpy as np

from . import gauss, rng
from .errors import ValidationError
from .kernels import BrownianMin

__all__ = [
    "PiecewiseLinearPath",
    "bm_section",
    "cameron_martin_norm_sq",
    "cm_inner",
    "sample_bm_paths",
    "tail_mass",
    "TailMassReport",
]


@dataclass(frozen=True)
class PiecewiseLinearPath:
    """Continuous piecewise-linear path on [0, T] with value 0 at time 0."""

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.knots, dtype=float).reshape(-1)
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if t.shape[0] < 2 or t.shape[0] != v.shape[0]:
            raise ValidationError("need matching knot and value arrays with at least two knots")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValidationError("knots and values must be finite")
        if t[0] != 0.0 or v[0] != 0.0:
            raise ValidationError("paths start at (0, 0)")
        if np.any(np.diff(t) <= 0.0):
            raise ValidationError("knot times must be strictly increasing")
        object.__setattr__(self, "knots", t)
        object.__setattr__(self, "values", v)

    @property
    def horizon(self):
        return float(self.knots[-1])

    def slopes(self):
        return np.diff(self.values) / np.diff(self.knots)

    def value_at(self, t):
        return float(np.interp(t, self.knots, self.values))


def bm_section(s, horizon):
    """The covariance section min(s, .): slope 1 up to time s, flat after."""
    if not (0.0 <= s <= horizon):
        raise ValidationError(f"section time {s} outside [0, {horizon}]")
    if s == 0.0:
        return PiecewiseLinearPath(knots=[0.0, horizon], values=[0.0, 0.0])
    if s == horizon:
        return PiecewiseLinearPath(knots=[0.0, horizon], values=[0.0, horizon])
    return PiecewiseLinearPath(knots=[0.0, s, horizon], values=[0.0, s, s])


def cameron_martin_norm_sq(path):
    """Integral of the squared slope over the horizon."""
    sl = path.slopes()
    return float(sl @ (sl * np.diff(path.knots)))


def cm_inner(f, g):
    """Integral of the product of slopes; both paths must share a horizon."""
    if f.horizon != g.horizon:
        raise ValidationError(f"horizon mismatch: {f.horizon} vs {g.horizon}")
    cuts = np.union1d(f.knots, g.knots)
    mids = (cuts[:-1] + cuts[1:]) / 2.0
    sf = f.slopes()[np.searchsorted(f.knots, mids) - 1]
    sg = g.slopes()[np.searchsorted(g.knots, mids) - 1]
    return float((sf * sg) @ np.diff(cuts))


def sample_bm_paths(grid, count, seed):
    """Draw Brownian paths on a strictly increasing grid in (0, T].

    Delegates to the generic Gaussian sampler on the min-kernel Gram
    matrix, so all determinism guarantees of gauss.sample apply.
    """
    t = np.asarray(grid, dtype=float).reshape(-1)
    if t.shape[0] < 1:
        raise ValidationError("grid is empty")
    if t[0] <= 0.0 or np.any(np.diff(t) <= 0.0):
        raise ValidationError("grid times must be strictly increasing and positive")
    marginal = gauss.prior_marginal(BrownianMin(horizon=float(t[-1])), t)
    return gauss.sample(marginal, count, seed)


@dataclass(frozen=True)
class TailMassReport:
    """Estimated Gaussian mass outside an eps-ball of the weighted norm."""

    N: int
    k: int
    epsilon: float
    estimate: float
    std_error: float
    markov_bound: float
    samples: int
    seed: int


def tail_mass(N, k, epsilon, samples, seed):
    """Estimate P(|h| > eps) for h standard Gaussian on directions N+1..N+k.

    |h|^2 = sum_{n=N+1}^{N+k} xi_n^2 / n^2 with xi standard normal. The
    report carries both the estimate and the Markov bound
    (sum n^-2) / eps^2, which holds exactly at any (N, k).
    """
    if N < 1 or k < 1:
        raise ValidationError("N and k must be >= 1")
    if not (np.isfinite(epsilon) and epsilon > 0):
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    samples = int(samples)
    if samples < 1000:
        raise ValidationError(f"samples must be >= 1000, got {samples}")
    indices = np.arange(N + 1, N + k + 1, dtype=float)
    weights = indices ** -2
    xi = rng.normal_rows(seed, 0, samples, k)
    norm_sq = (xi * xi) @ weights
    exceed = (norm_sq > epsilon * epsilon).astype(float)
    estimate = float(exceed.mean())
    std_error = float(exceed.std(ddof=1) / np.sqrt(samples))
    return TailMassReport(
        N=int(N),
        k=int(k),
        epsilon=float(epsilon),
        estimate=estimate,
        std_error=std_error,
        markov_bound=float(weights.sum() / (epsilon * epsilon)),
        samples=samples,
        seed=int(seed),
    )
