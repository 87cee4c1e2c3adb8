"""Dense SPD linear algebra: jittered Cholesky solves, a cyclic Jacobi
eigensolver, symmetric matrix functions, and a PSD-safe pivoted factor.

Sized for desk-scale problems (n up to a few hundred for the eigensolver,
a few thousand for factorizations); everything is dense row-major and
there is no sparse or blocked path.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla
from scipy.linalg.lapack import dpstrf

from .errors import ConvergenceError, NotPsdError, SingularMatrixError, ValidationError

__all__ = [
    "SpdMatrix",
    "EigenDecomp",
    "cholesky_solve",
    "sym_eigen",
    "spd_function",
    "psd_factor",
]

SYM_TOL = 1e-12          # allowed asymmetry, relative to the matrix scale
JITTER_FIRST = 1e-12     # first jitter level, times max diagonal
JITTER_LAST = 1e-6       # escalation cap, times max diagonal
PSD_TOL = 1e-10          # eigenvalues below -PSD_TOL are treated as errors
JACOBI_TOL = 1e-12       # off-diagonal Frobenius threshold, relative to ||M||_F
JACOBI_MAX_SWEEPS = 100


def _check_symmetric(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix entries must be finite")
    scale = max(1.0, float(np.abs(A).max()) if A.size else 0.0)
    asym = float(np.abs(A - A.T).max()) if A.size else 0.0
    if asym > SYM_TOL * scale:
        raise ValidationError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return (A + A.T) / 2.0


def _smallest_ldl_pivot(A):
    # Diagnostic only: the smallest pivot of an LDL^T factorization.
    try:
        _, D, _ = sla.ldl(A)
        return float(np.min(np.diag(D)))
    except Exception:
        return float("nan")


class SpdMatrix:
    """Symmetric positive-(semi)definite matrix with a cached Cholesky factor.

    Factorization is lazy. If plain Cholesky fails, a diagonal jitter of
    1e-12 * max(diag) is added and escalated by factors of 10 up to
    ``max_jitter_scale * max(diag)`` (1e-6 by default); the jitter actually
    used is recorded in ``jitter_applied``. Beyond the cap a
    SingularMatrixError reports the smallest pivot. Instances are treated
    as immutable and are safe to share.
    """

    def __init__(self, entries, max_jitter_scale=JITTER_LAST):
        self.entries = _check_symmetric(entries)
        self.entries.setflags(write=False)
        self.max_jitter_scale = float(max_jitter_scale)
        self._chol = None
        self._jitter = 0.0

    @property
    def n(self):
        return self.entries.shape[0]

    @property
    def max_diag(self):
        return float(np.max(np.diag(self.entries))) if self.n else 0.0

    @property
    def jitter_applied(self):
        """Jitter added to the diagonal by the cached factorization (0 if clean)."""
        return self._jitter

    def cholesky(self):
        """Lower-triangular L with (entries + jitter*I) = L L^T."""
        if self._chol is not None:
            return self._chol
        scale = self.max_diag
        jitters = [0.0]
        if scale > 0.0:
            level = JITTER_FIRST
            while level <= self.max_jitter_scale * (1.0 + 1e-15):
                jitters.append(level * scale)
                level *= 10.0
        for jitter in jitters:
            A = self.entries if jitter == 0.0 else self.entries + jitter * np.eye(self.n)
            try:
                L = sla.cholesky(A, lower=True, check_finite=False)
            except sla.LinAlgError:
                continue
            self._chol = L
            self._jitter = jitter
            return L
        pivot = _smallest_ldl_pivot(self.entries)
        raise SingularMatrixError(
            f"Cholesky failed after jitter escalation to {self.max_jitter_scale:g} * max diagonal; "
            f"smallest pivot {pivot:.6e}"
        )

    def smallest_pivot(self):
        """Smallest squared diagonal of the (possibly jittered) Cholesky factor."""
        L = self.cholesky()
        return float(np.min(np.diag(L)) ** 2)

    def solve(self, rhs):
        """Solve (entries + jitter*I) x = rhs for a vector or matrix rhs."""
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape[0] != self.n:
            raise ValidationError(f"rhs has leading dimension {rhs.shape[0]}, expected {self.n}")
        L = self.cholesky()
        return sla.cho_solve((L, True), rhs, check_finite=False)


def cholesky_solve(m, rhs):
    """Solve m x = rhs for a vector right-hand side via the cached factor."""
    rhs = np.asarray(rhs, dtype=float)
    if rhs.ndim != 1:
        raise ValidationError(f"rhs must be a vector, got shape {rhs.shape}")
    return m.solve(rhs)


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _jacobi_rotate(A, V, p, q):
    apq = A[p, q]
    if apq == 0.0:
        return
    theta = (A[q, q] - A[p, p]) / (2.0 * apq)
    sgn = 1.0 if theta >= 0.0 else -1.0
    t = sgn / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # Two-sided rotation on rows/columns p and q.
    Ap = A[:, p].copy()
    Aq = A[:, q].copy()
    A[:, p] = c * Ap - s * Aq
    A[:, q] = s * Ap + c * Aq
    Ap = A[p, :].copy()
    Aq = A[q, :].copy()
    A[p, :] = c * Ap - s * Aq
    A[q, :] = s * Ap + c * Aq
    A[p, q] = 0.0
    A[q, p] = 0.0
    Vp = V[:, p].copy()
    Vq = V[:, q].copy()
    V[:, p] = c * Vp - s * Vq
    V[:, q] = s * Vp + c * Vq


def _off_diagonal_norm(A):
    off = A - np.diag(np.diag(A))
    return float(np.sqrt((off * off).sum()))


def sym_eigen(m):
    """Full eigendecomposition by cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius norm falls below 1e-12
    relative to the Frobenius norm of the input; more than 100 sweeps
    raises ConvergenceError. Eigenvalues are sorted ascending and each
    eigenvector is signed so its first nonzero component is positive.
    """
    A = np.array(m.entries, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    norm = float(np.sqrt((A * A).sum()))
    threshold = JACOBI_TOL * max(norm, np.finfo(float).tiny)
    # One extra sweep after crossing the threshold: convergence is quadratic,
    # so the polish drives off-diagonals to the roundoff floor. Small
    # eigenvalues then carry absolute (not norm-relative) accuracy, which the
    # spectral identities for ill-conditioned systems rely on.
    polished = False
    for _ in range(JACOBI_MAX_SWEEPS):
        off = _off_diagonal_norm(A)
        if off <= threshold:
            if polished or off == 0.0:
                break
            polished = True
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(A, V, p, q)
    else:
        raise ConvergenceError(f"Jacobi sweeps did not converge within {JACOBI_MAX_SWEEPS} sweeps")
    values = np.diag(A).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    V = V[:, order]
    for j in range(n):
        col = V[:, j]
        nonzero = np.nonzero(np.abs(col) > 1e-12)[0]
        if nonzero.size and col[nonzero[0]] < 0.0:
            V[:, j] = -col
    return EigenDecomp(eigenvalues=values, eigenvectors=V)


def spd_function(m, which):
    """Apply sqrt or inv_sqrt to an SPD matrix through its eigensystem.

    Eigenvalues in [-PSD_TOL, 0] are clamped to zero for sqrt and rejected
    for inv_sqrt; anything below -PSD_TOL raises NotPsdError.
    """
    if which not in ("sqrt", "inv_sqrt"):
        raise ValidationError(f"unknown matrix function {which!r}; expected 'sqrt' or 'inv_sqrt'")
    dec = sym_eigen(m)
    w = dec.eigenvalues.copy()
    if w.size and w[0] < -PSD_TOL:
        raise NotPsdError(f"matrix has eigenvalue {w[0]:.6e} below the PSD tolerance")
    if which == "inv_sqrt":
        if w.size and w[0] <= 0.0:
            raise NotPsdError(f"inv_sqrt needs strictly positive eigenvalues; smallest is {w[0]:.6e}")
        vals = 1.0 / np.sqrt(w)
    else:
        w[w < 0.0] = 0.0
        vals = np.sqrt(w)
    Q = dec.eigenvectors
    B = (Q * vals) @ Q.T
    return SpdMatrix((B + B.T) / 2.0)


def psd_factor(entries):
    """L with L L^T reproducing a PSD matrix, tolerating rank deficiency.

    Uses pivoted Cholesky truncated at the numerical rank with the trailing
    columns zeroed, so exactly singular covariances (for example a zero
    matrix) factor cleanly. Matrices that are indefinite beyond PSD_TOL are
    rejected: eigenvalues are checked directly for small n, and the
    factorization residual is checked otherwise.
    """
    A = _check_symmetric(entries)
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    scale = max(1.0, float(np.abs(np.diag(A)).max()))
    if float(np.min(np.diag(A))) < -PSD_TOL:
        raise NotPsdError("diagonal entry below the PSD tolerance")
    if n <= 256:
        wmin = float(np.linalg.eigvalsh(A)[0])
        if wmin < -PSD_TOL:
            raise NotPsdError(f"matrix has eigenvalue {wmin:.6e} below the PSD tolerance")
    c, piv, rank, _ = dpstrf(A, lower=1)
    L = np.tril(c)
    L[:, rank:] = 0.0
    undone = np.zeros_like(L)
    undone[piv - 1, :] = L
    resid = float(np.abs(A - undone @ undone.T).max())
    if resid > 1e-8 * scale:
        raise NotPsdError(f"pivoted factorization residual {resid:.3e} exceeds tolerance; matrix is not PSD")
    return undone
