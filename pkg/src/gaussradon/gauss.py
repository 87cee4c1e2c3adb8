"""Finite-dimensional Gaussian vectors: conditioning and sampling.

The library never builds an infinite-dimensional object. A centered
Gaussian process with covariance K is represented through the covariance
matrix of its values on a finite coordinate set, and noisy regression
observations enter as extra independent coordinates folded into the joint
covariance: observing target j adds lam to the (j, j) training entry while
leaving every cross-covariance with query coordinates untouched.

Conditioning follows the usual partitioned formulas: with covariance
blocks A (observed), B (query x observed) and C (query), observing values
y gives mean B A^-1 y (plus the prior mean terms when nonzero) and
covariance C - B A^-1 B^T. ``ridge_via_conditioning`` composes these two
steps; the test suite checks it against the direct ridge solve.

Sampling is reproducible by construction: the normal variate feeding
(sample i, coordinate j) is keyed by (seed, i, j) through a counter-based
generator, so any split of the sample range yields the same matrix as a
single sequential pass. Degenerate (singular PSD) covariances are allowed
and sampled through a rank-truncated pivoted factor.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ValidationError
from .kernels import as_points, cross_gram, gram
from .linalg import SpdMatrix, psd_factor

__all__ = [
    "JointGaussian",
    "ConditionalGaussian",
    "condition",
    "noise_augmented_joint",
    "prior_marginal",
    "ridge_via_conditioning",
    "posterior_mean",
    "sample",
    "iter_sample_blocks",
]

# Fixed sampling block size (entries per block); independent of worker count
# and sample count so chunked and one-shot sampling agree bit for bit.
_BLOCK_ENTRIES = 4_000_000


def _as_mean(mean, n):
    m = np.asarray(mean, dtype=float).reshape(-1)
    if m.shape[0] != n:
        raise ValidationError(f"mean has length {m.shape[0]}, covariance is {n} x {n}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("mean entries must be finite")
    return m


def _as_labels(labels, n):
    if labels is None:
        return tuple(f"z{i}" for i in range(n))
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValidationError(f"{len(labels)} labels for {n} coordinates")
    return labels


@dataclass(frozen=True)
class JointGaussian:
    """Gaussian vector: mean, covariance, and a name per coordinate."""

    mean: np.ndarray
    covariance: SpdMatrix
    labels: tuple = None

    def __post_init__(self):
        cov = self.covariance
        if not isinstance(cov, SpdMatrix):
            cov = SpdMatrix(cov)
            object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "mean", _as_mean(self.mean, cov.n))
        object.__setattr__(self, "labels", _as_labels(self.labels, cov.n))

    @property
    def dim(self):
        return self.covariance.n


@dataclass(frozen=True)
class ConditionalGaussian:
    """Posterior mean and covariance over the query coordinates.

    ``conditioned_on`` records (label, observed value) pairs; it is empty
    for an unconditioned marginal. The covariance may be singular (exact
    interpolation pins observed coordinates at zero variance).
    """

    mean: np.ndarray
    covariance: SpdMatrix
    labels: tuple = None
    conditioned_on: tuple = ()

    def __post_init__(self):
        cov = self.covariance
        if not isinstance(cov, SpdMatrix):
            cov = SpdMatrix(cov)
            object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "mean", _as_mean(self.mean, cov.n))
        object.__setattr__(self, "labels", _as_labels(self.labels, cov.n))
        object.__setattr__(
            self,
            "conditioned_on",
            tuple((str(name), float(value)) for name, value in self.conditioned_on),
        )

    @property
    def dim(self):
        return self.covariance.n

    def as_joint(self):
        """Reinterpret as a joint vector, e.g. for further conditioning."""
        return JointGaussian(mean=self.mean, covariance=self.covariance, labels=self.labels)


def condition(joint, observed_idx, observed_values):
    """Condition a joint Gaussian on exact values of some coordinates.

    The observed index set must be a nonempty proper subset; the observed
    covariance block must be invertible (after at most the standard jitter
    escalation), otherwise a SingularMatrixError propagates.
    """
    m = joint.dim
    idx = np.asarray(observed_idx, dtype=int).reshape(-1)
    if idx.size == 0:
        raise ValidationError("observed index set is empty")
    if np.unique(idx).size != idx.size:
        raise ValidationError("observed indices must be distinct")
    if idx.min() < 0 or idx.max() >= m:
        raise ValidationError(f"observed indices out of range for dimension {m}")
    if idx.size >= m:
        raise ValidationError("observed index set must be a proper subset of the coordinates")
    y = np.asarray(observed_values, dtype=float).reshape(-1)
    if y.shape[0] != idx.size:
        raise ValidationError(f"{idx.size} observed indices but {y.shape[0]} values")
    if not np.all(np.isfinite(y)):
        raise ValidationError("observed values must be finite")

    keep = np.setdiff1d(np.arange(m), idx, assume_unique=False)
    cov = joint.covariance.entries
    A = SpdMatrix(cov[np.ix_(idx, idx)])
    B = cov[np.ix_(keep, idx)]
    C = cov[np.ix_(keep, keep)]

    solved = A.solve(np.column_stack([y - joint.mean[idx], B.T]))
    gain = solved[:, 0]
    cross = B @ solved[:, 1:]
    mean_q = joint.mean[keep] + B @ gain
    cov_q = C - (cross + cross.T) / 2.0

    labels = tuple(joint.labels[i] for i in keep)
    observed_labels = tuple(joint.labels[i] for i in idx)
    return ConditionalGaussian(
        mean=mean_q,
        covariance=SpdMatrix((cov_q + cov_q.T) / 2.0),
        labels=labels,
        conditioned_on=tuple(zip(observed_labels, y)),
    )


def noise_augmented_joint(kernel, train_points, query_points, lam):
    """Joint covariance over [query | train] with observation noise lam.

    The query block is the plain Gram matrix, the cross block carries no
    noise (the noise coordinates are orthogonal to every kernel section),
    and the training block is Gram + lam * I. Coordinates are labeled
    q0..q{m-1} and t0..t{n-1}; the training set may be empty.
    """
    if not (np.isfinite(lam) and lam >= 0):
        raise ValidationError(f"noise level must be finite and >= 0, got {lam}")
    qpts = kernel.validate(as_points(query_points))
    nq = qpts.shape[0]
    train = np.asarray(train_points, dtype=float)
    n_train = 0 if train.size == 0 else as_points(train_points).shape[0]

    if n_train == 0:
        cov = gram(kernel, qpts).entries
        tpts = np.zeros((0, qpts.shape[1]))
    else:
        tpts = kernel.validate(as_points(train_points))
        Kqq = gram(kernel, qpts).entries
        Kqt = cross_gram(kernel, qpts, tpts)
        Ktt = gram(kernel, tpts).entries + lam * np.eye(n_train)
        cov = np.block([[Kqq, Kqt], [Kqt.T, Ktt]])

    labels = tuple(f"q{i}" for i in range(nq)) + tuple(f"t{j}" for j in range(n_train))
    return JointGaussian(mean=np.zeros(nq + n_train), covariance=SpdMatrix(cov), labels=labels)


def prior_marginal(kernel, points):
    """Unconditioned centered marginal of the kernel process on a point set."""
    pts = kernel.validate(as_points(points))
    cov = gram(kernel, pts).entries
    labels = tuple(f"q{i}" for i in range(pts.shape[0]))
    return ConditionalGaussian(mean=np.zeros(pts.shape[0]), covariance=SpdMatrix(cov), labels=labels)


def posterior_mean(data, kernel, lam, query_points):
    """Posterior mean at the query points given noisy training targets."""
    qpts = kernel.validate(as_points(query_points))
    joint = noise_augmented_joint(kernel, data.points, qpts, lam)
    nq = qpts.shape[0]
    observed = np.arange(nq, nq + data.n)
    return condition(joint, observed, data.targets).mean


def ridge_via_conditioning(data, kernel, lam, p):
    """Predict at one point by Gaussian conditioning instead of solving.

    Must agree with predict(ridge_fit(...), p); lam = 0 reproduces the
    minimum-norm interpolant when the Gram matrix is invertible.
    """
    return float(posterior_mean(data, kernel, lam, [np.atleast_1d(np.asarray(p, dtype=float))])[0])


def _block_rows(dim):
    return max(1, _BLOCK_ENTRIES // max(1, dim))


def iter_sample_blocks(gaussian, count, seed, transform=None):
    """Yield (row_start, block) pairs of draws in fixed-size row blocks.

    Blocks concatenate to exactly sample(gaussian, count, seed). The
    factor may be precomputed and passed as ``transform``.
    """
    if count < 1:
        raise ValidationError(f"sample count must be >= 1, got {count}")
    rng.check_seed(seed)
    L = psd_factor(gaussian.covariance.entries) if transform is None else transform
    mean = gaussian.mean
    dim = gaussian.dim
    step = _block_rows(dim)
    for start in range(0, count, step):
        stop = min(start + step, count)
        z = rng.normal_rows(seed, start, stop - start, dim)
        yield start, mean + z @ L.T


def sample(gaussian, count, seed):
    """Draw (count, dim) rows of mean + L z, z standard normal.

    Identical (gaussian, count, seed) always produce the identical matrix;
    the draw feeding entry (i, j) is keyed by (seed, i, j) alone.
    """
    out = np.empty((count, gaussian.dim))
    for start, block in iter_sample_blocks(gaussian, count, seed):
        out[start:start + block.shape[0]] = block
    return out
