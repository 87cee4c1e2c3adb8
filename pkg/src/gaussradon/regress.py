"""Kernel ridge regression and minimal-norm interpolation.

Two equivalent computational paths produce the ridge coefficients:

* ``closed_form``  c = (K + lam*I)^-1 y, solving directly in the Gram basis;
* ``geometric``    scale the Gram by 1/lam, solve (K/lam + I) u = y, and
  set c = u / lam. This route also yields the offset vector b = -u of the
  nearest-point construction, so the minimum of the objective can be
  cross-checked as <-y, b>.

Coefficient agreement between the paths, and agreement of the objective at
the fitted model with its closed forms, are enforced by the test suite
rather than assumed here.

``spline_fit`` is the lam = 0 limit: the unique minimum-norm interpolant
c0 = K^-1 y, which requires the kernel sections at the training points to
be linearly independent (duplicate points are rejected).
"""

from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .errors import SingularMatrixError, ValidationError
from .kernels import as_points, cross_gram, gram, kernel_from_spec, kernel_to_spec
from .linalg import JITTER_FIRST, SpdMatrix, spd_function

__all__ = [
    "Dataset",
    "RidgeModel",
    "ridge_fit",
    "spline_fit",
    "predict",
    "objective",
    "min_objective_closed_form",
    "rkhs_norm_sq",
    "fitted_norm_sq_closed_form",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
]

SOLVE_PATHS = ("closed_form", "geometric")

# Smallest acceptable Cholesky pivot for interpolation, times max diagonal.
SPLINE_PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Training pairs: an (n, d) point array and a length-n target vector."""

    points: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        pts = as_points(self.points)
        y = np.asarray(self.targets, dtype=float).reshape(-1)
        if pts.shape[0] < 1:
            raise ValidationError("a dataset needs at least one observation")
        if y.shape[0] != pts.shape[0]:
            raise ValidationError(f"{pts.shape[0]} points but {y.shape[0]} targets")
        if not np.all(np.isfinite(y)):
            raise ValidationError("targets must be finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "targets", y)

    @property
    def n(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class RidgeModel:
    """Fitted kernel expansion sum_j c_j K(p_j, .); immutable after fit."""

    kernel: object
    points: np.ndarray
    coefficients: np.ndarray
    lam: float
    solve_path: str
    jitter_applied: float = 0.0
    b: np.ndarray | None = field(default=None, repr=False)

    def predict(self, query):
        return predict(self, query)


def _query_points(model, query):
    """Interpret query as one point or many, matching the model dimension."""
    arr = np.asarray(query, dtype=float)
    d = model.points.shape[1]
    if arr.ndim == 0:
        if d != 1:
            raise ValidationError(f"scalar query for a {d}-dimensional model")
        return arr.reshape(1, 1), True
    if arr.ndim == 1 and d > 1 and arr.shape[0] == d:
        return arr.reshape(1, d), True
    pts = as_points(arr)
    return pts, False


def ridge_fit(data, kernel, lam, path="closed_form"):
    """Fit the regularized least-squares model for lam > 0.

    Use spline_fit for exact interpolation; lam = 0 is rejected here
    because the unregularized system is a different problem with its own
    invertibility requirement.
    """
    if path not in SOLVE_PATHS:
        raise ValidationError(f"unknown solve path {path!r}; expected one of {SOLVE_PATHS}")
    if not (np.isfinite(lam) and lam > 0):
        raise ValidationError(f"ridge_fit needs lam > 0, got {lam}; use spline_fit for lam = 0")
    K = gram(kernel, data.points)
    n = data.n
    if path == "closed_form":
        system = SpdMatrix(K.entries + lam * np.eye(n))
        coef = system.solve(data.targets)
        b = None
    else:
        system = SpdMatrix(K.entries / lam + np.eye(n))
        u = system.solve(data.targets)
        b = -u
        coef = u / lam
    return RidgeModel(
        kernel=kernel,
        points=K.points,
        coefficients=coef,
        lam=float(lam),
        solve_path=path,
        jitter_applied=system.jitter_applied,
        b=b,
    )


def spline_fit(data, kernel):
    """Minimum-norm exact interpolant: coefficients K^-1 y, lam = 0.

    Requires linearly independent kernel sections at the training points;
    duplicates or a numerically singular Gram matrix (smallest pivot at or
    below 1e-10 * max diagonal after at most first-level jitter) are
    rejected.
    """
    K = gram(kernel, data.points)
    if K.has_duplicates:
        raise SingularMatrixError(
            "duplicate training points make the kernel sections linearly dependent"
        )
    system = SpdMatrix(K.entries, max_jitter_scale=JITTER_FIRST)
    try:
        pivot = system.smallest_pivot()
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"Gram matrix is numerically singular ({exc}); "
            "the kernel sections at the training points are linearly dependent"
        ) from exc
    if pivot <= SPLINE_PIVOT_TOL * system.max_diag:
        raise SingularMatrixError(
            f"Gram matrix is numerically singular (smallest pivot {pivot:.6e}); "
            "the kernel sections at the training points are linearly dependent"
        )
    coef = system.solve(data.targets)
    return RidgeModel(
        kernel=kernel,
        points=K.points,
        coefficients=coef,
        lam=0.0,
        solve_path="closed_form",
        jitter_applied=system.jitter_applied,
    )


def predict(model, query):
    """Evaluate sum_j c_j K(p_j, q); scalar in, scalar out."""
    pts, single = _query_points(model, query)
    values = cross_gram(model.kernel, pts, model.points) @ model.coefficients
    return float(values[0]) if single else values


def rkhs_norm_sq(model):
    """Squared kernel-space norm c^T K c of the expansion."""
    K = gram(model.kernel, model.points)
    c = model.coefficients
    return float(c @ K.entries @ c)


def objective(model, data):
    """Sum of squared residuals on the data plus lam times the squared norm."""
    residuals = data.targets - predict(model, data.points)
    return float(residuals @ residuals + model.lam * rkhs_norm_sq(model))


def min_objective_closed_form(data, kernel, lam):
    """Minimum objective value, computed as |(I + K/lam)^(-1/2) y|^2.

    Goes through the eigensystem-based inverse square root on purpose: it
    is an independent route from the Cholesky solve used in fitting.
    """
    if not (np.isfinite(lam) and lam > 0):
        raise ValidationError(f"min_objective_closed_form needs lam > 0, got {lam}")
    K = gram(kernel, data.points)
    system = SpdMatrix(np.eye(data.n) + K.entries / lam)
    half = spd_function(system, "inv_sqrt")
    v = half.entries @ data.targets
    return float(v @ v)


def fitted_norm_sq_closed_form(data, kernel, lam):
    """Squared norm of the fitted ridge model via its spectral identity.

    Evaluates (1/lam) |(K/lam)^(1/2) (K/lam + I)^-1 y|^2, which must match
    rkhs_norm_sq of the fitted model.
    """
    if not (np.isfinite(lam) and lam > 0):
        raise ValidationError(f"fitted_norm_sq_closed_form needs lam > 0, got {lam}")
    K = gram(kernel, data.points)
    scaled = K.entries / lam
    root = spd_function(SpdMatrix(scaled), "sqrt")
    u = SpdMatrix(scaled + np.eye(data.n)).solve(data.targets)
    w = root.entries @ u
    return float(w @ w) / lam


def model_to_dict(model):
    """JSON-ready dict with every double preserved bit-exactly on reload."""
    return {
        "kernel": kernel_to_spec(model.kernel),
        "points": [list(row) for row in model.points],
        "coefficients": list(model.coefficients),
        "lambda": float(model.lam),
        "solve_path": model.solve_path,
        "jitter_applied": float(model.jitter_applied),
    }


_MODEL_KEYS = {"kernel", "points", "coefficients", "lambda", "solve_path", "jitter_applied"}


def model_from_dict(doc):
    if not isinstance(doc, dict):
        raise ValidationError("model document must be an object")
    extra = set(doc) - _MODEL_KEYS
    if extra:
        raise ValidationError(f"unknown model keys {sorted(extra)}")
    missing = _MODEL_KEYS - set(doc)
    if missing:
        raise ValidationError(f"model document is missing {sorted(missing)}")
    path = doc["solve_path"]
    if path not in SOLVE_PATHS:
        raise ValidationError(f"unknown solve path {path!r}")
    points = as_points(doc["points"])
    coef = np.asarray(doc["coefficients"], dtype=float).reshape(-1)
    if coef.shape[0] != points.shape[0]:
        raise ValidationError("coefficient and point counts differ")
    lam = float(doc["lambda"])
    if not (np.isfinite(lam) and lam >= 0):
        raise ValidationError(f"lambda must be finite and nonnegative, got {lam}")
    return RidgeModel(
        kernel=kernel_from_spec(doc["kernel"]),
        points=points,
        coefficients=coef,
        lam=lam,
        solve_path=path,
        jitter_applied=float(doc["jitter_applied"]),
    )


def save_model(path, model):
    jsonio.dump_json(path, model_to_dict(model))


def load_model(path):
    return model_from_dict(jsonio.load_json(path))
