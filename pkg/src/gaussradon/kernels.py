"""Kernel functions, Gram matrices, and feature-map geometry.

A kernel is a symmetric positive-definite function on points of R^d. Three
kinds are built in:

* ``RBF(scale)``      exp(-|p - q|^2 / (2 * scale)) for any d
* ``BrownianMin(T)``  min(s, t) on scalar times in [0, T]
* ``Linear()``        the plain dot product

The registry of serializable kernels is closed; ``CustomKernel`` is the one
extension point and wraps a user-supplied pure function (it cannot be
serialized). Evaluation is exactly symmetric by construction: pairwise
values are computed by elementwise-commutative operations, so gram(X) is
bit-exact symmetric without a symmetrization pass.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "RBF",
    "BrownianMin",
    "Linear",
    "CustomKernel",
    "GramMatrix",
    "as_point",
    "as_points",
    "eval_kernel",
    "gram",
    "cross_gram",
    "feature_distance_sq",
    "kernel_from_spec",
    "kernel_to_spec",
]


def as_point(p):
    """Coerce a scalar or length-d sequence to a (d,) float array."""
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise ValidationError(f"a point must be a scalar or 1-d sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("point coordinates must be finite")
    return arr


def as_points(points):
    """Coerce to an (n, d) float array; a 1-d input is read as n scalar points."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValidationError(f"points must form an (n, d) array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("point coordinates must be finite")
    return arr


@dataclass(frozen=True)
class RBF:
    """Gaussian radial basis kernel exp(-|p - q|^2 / (2 * scale))."""

    scale: float = 1.0
    kind = "rbf"

    def __post_init__(self):
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ValidationError(f"RBF scale must be positive and finite, got {self.scale}")

    def validate(self, pts):
        return pts

    def pairwise(self, X, Y):
        diff = X[:, None, :] - Y[None, :, :]
        return np.exp(-(diff * diff).sum(axis=-1) / (2.0 * self.scale))


@dataclass(frozen=True)
class BrownianMin:
    """Brownian-motion covariance min(s, t) on times in [0, horizon]."""

    horizon: float = 1.0
    kind = "brownian_min"

    def __post_init__(self):
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            raise ValidationError(f"BrownianMin horizon must be positive, got {self.horizon}")

    def validate(self, pts):
        if pts.shape[1] != 1:
            raise ValidationError("BrownianMin requires 1-d points (times)")
        if pts.min() < 0.0 or pts.max() > self.horizon:
            raise ValidationError(f"BrownianMin times must lie in [0, {self.horizon}]")
        return pts

    def pairwise(self, X, Y):
        return np.minimum(X, Y[:, 0][None, :])


@dataclass(frozen=True)
class Linear:
    """Dot-product kernel."""

    kind = "linear"

    def validate(self, pts):
        return pts

    def pairwise(self, X, Y):
        return (X[:, None, :] * Y[None, :, :]).sum(axis=-1)


@dataclass(frozen=True)
class CustomKernel:
    """Extension point: wrap a pure symmetric function k(p, q) -> float.

    The function receives two (d,) arrays and must be deterministic and
    symmetric in its arguments. Custom kernels cannot be serialized to a
    kernel spec.
    """

    fn: object
    name: str = "custom"
    kind = "custom"

    def validate(self, pts):
        return pts

    def pairwise(self, X, Y):
        out = np.empty((X.shape[0], Y.shape[0]))
        if X is Y:
            # one evaluation per unordered pair keeps the Gram exactly symmetric
            for i, p in enumerate(X):
                for j in range(i, X.shape[0]):
                    out[i, j] = out[j, i] = self.fn(p, X[j])
            return out
        for i, p in enumerate(X):
            for j, q in enumerate(Y):
                out[i, j] = self.fn(p, q)
        return out


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise kernel values over a point set, with the generating points."""

    entries: np.ndarray
    points: np.ndarray
    has_duplicates: bool = field(default=False)

    @property
    def n(self):
        return self.entries.shape[0]


def _validated_pair(kernel, p, q):
    P = kernel.validate(as_point(p).reshape(1, -1))
    Q = kernel.validate(as_point(q).reshape(1, -1))
    if P.shape[1] != Q.shape[1]:
        raise ValidationError(f"point dimensions differ: {P.shape[1]} vs {Q.shape[1]}")
    return P, Q


def eval_kernel(kernel, p, q):
    """Evaluate K(p, q) for two points."""
    P, Q = _validated_pair(kernel, p, q)
    return float(kernel.pairwise(P, Q)[0, 0])


def gram(kernel, points):
    """Pairwise kernel matrix over a nonempty point list.

    Duplicate points are allowed but flagged on the result; downstream
    solvers decide whether they are acceptable.
    """
    pts = kernel.validate(as_points(points))
    if pts.shape[0] < 1:
        raise ValidationError("gram requires at least one point")
    entries = kernel.pairwise(pts, pts)
    has_dup = np.unique(pts, axis=0).shape[0] < pts.shape[0]
    return GramMatrix(entries=entries, points=pts, has_duplicates=bool(has_dup))


def cross_gram(kernel, X, Y):
    """Rectangular kernel matrix K(x_i, y_j) between two nonempty point sets."""
    Xp = kernel.validate(as_points(X))
    Yp = kernel.validate(as_points(Y))
    if Xp.shape[1] != Yp.shape[1]:
        raise ValidationError(f"point dimensions differ: {Xp.shape[1]} vs {Yp.shape[1]}")
    return kernel.pairwise(Xp, Yp)


def feature_distance_sq(kernel, p, q):
    """Squared feature-map distance K(p,p) - 2 K(p,q) + K(q,q).

    Nonnegative for any positive-definite kernel; tiny negative roundoff
    (within 1e-12 at the scale of the diagonal terms) is clamped to zero.
    """
    kpp = eval_kernel(kernel, p, p)
    kqq = eval_kernel(kernel, q, q)
    kpq = eval_kernel(kernel, p, q)
    val = kpp - 2.0 * kpq + kqq
    if val < 0.0:
        if val >= -1e-12 * max(1.0, abs(kpp) + abs(kqq)):
            return 0.0
        raise ValidationError(f"feature distance came out negative ({val}); kernel is not positive definite")
    return val


_KERNEL_SPECS = {
    "rbf": (RBF, ("scale",)),
    "brownian_min": (BrownianMin, ("horizon",)),
    "linear": (Linear, ()),
}


def kernel_from_spec(spec):
    """Build a kernel from a JSON-style dict like {"kind": "rbf", "scale": 1.0}."""
    if not isinstance(spec, dict):
        raise ValidationError("kernel spec must be an object")
    kind = spec.get("kind")
    if kind not in _KERNEL_SPECS:
        raise ValidationError(f"unknown kernel kind {kind!r}; expected one of {sorted(_KERNEL_SPECS)}")
    cls, params = _KERNEL_SPECS[kind]
    extra = set(spec) - {"kind"} - set(params)
    if extra:
        raise ValidationError(f"unknown kernel spec keys {sorted(extra)} for kind {kind!r}")
    missing = [name for name in params if name not in spec]
    if missing:
        raise ValidationError(f"kernel spec for {kind!r} is missing {missing}")
    return cls(**{name: float(spec[name]) for name in params})


def kernel_to_spec(kernel):
    """Serialize a built-in kernel to its JSON-style spec dict."""
    if kernel.kind not in _KERNEL_SPECS:
        raise ValidationError(f"kernel kind {kernel.kind!r} cannot be serialized")
    _, params = _KERNEL_SPECS[kernel.kind]
    spec = {"kind": kernel.kind}
    for name in params:
        spec[name] = float(getattr(kernel, name))
    return spec
