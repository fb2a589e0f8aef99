"""Primitives for symmetric positive-semidefinite matrices.

All Gaussian formulas in this package reduce to eigendecompositions,
square roots and pseudoinverses of small symmetric PSD matrices; this
module centralizes them together with the clipping tolerances that decide
when float noise is forgiven and when a matrix is genuinely indefinite.
"""

import numpy as np

from .errors import InvalidMatrix, NotPSD

__all__ = [
    "symmetrize",
    "psd_tolerance",
    "eigh_sym",
    "sqrt_psd",
    "pinv_psd",
    "inv_sqrt_psd",
]

#: Relative eigenvalue tolerance: values in [-tol, 0) are clipped to zero,
#: anything below -tol raises NotPSD.
PSD_TOL_FACTOR = 1e-10

#: Pseudoinverse rank cutoff relative to the largest eigenvalue.
RANK_TOL_FACTOR = 1e-12


def symmetrize(m) -> np.ndarray:
    """Validate a square real matrix and return its symmetric part (M + M^T)/2.

    Raises
    ------
    InvalidMatrix
        If the input is not a finite square 2-d array.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix("matrix has non-finite entries")
    return (m + m.T) / 2.0


def psd_tolerance(m: np.ndarray) -> float:
    """Negative-eigenvalue tolerance scaled by the mean diagonal magnitude."""
    n = m.shape[0]
    return PSD_TOL_FACTOR * max(1.0, abs(np.trace(m)) / n)


def eigh_sym(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns eigenvalues in ascending order and the orthonormal eigenvector
    matrix ``V`` with ``m == V @ diag(w) @ V.T``.
    """
    return np.linalg.eigh(symmetrize(m))


def _clipped_eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with negatives clipped to zero within tolerance."""
    ms = symmetrize(m)
    w, v = np.linalg.eigh(ms)
    tol = psd_tolerance(ms)
    if w[0] < -tol:
        raise NotPSD(
            f"eigenvalue {w[0]:.3e} below the PSD tolerance -{tol:.3e}"
        )
    return np.clip(w, 0.0, None), v


def sqrt_psd(m) -> np.ndarray:
    """Symmetric PSD square root ``r`` with ``r @ r == m``.

    Eigenvalues in ``[-psd_tolerance, 0)`` are treated as zero; anything
    more negative raises ``NotPSD``.
    """
    w, v = _clipped_eigh(m)
    return symmetrize((v * np.sqrt(w)) @ v.T)


def pinv_psd(m) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric PSD matrix.

    Eigenvalues below ``RANK_TOL_FACTOR`` times the largest eigenvalue are
    treated as exact zeros, matching the singular-covariance conventions
    used throughout the Gaussian layer.
    """
    w, v = _clipped_eigh(m)
    cutoff = RANK_TOL_FACTOR * (w[-1] if w.size else 0.0)
    inv = np.where(w > cutoff, 1.0 / np.where(w > cutoff, w, 1.0), 0.0)
    return symmetrize((v * inv) @ v.T)


def inv_sqrt_psd(m) -> np.ndarray:
    """Pseudoinverse of the PSD square root, ``(m^{1/2})^+``."""
    w, v = _clipped_eigh(m)
    cutoff = RANK_TOL_FACTOR * (w[-1] if w.size else 0.0)
    inv = np.where(w > cutoff, 1.0 / np.sqrt(np.where(w > cutoff, w, 1.0)), 0.0)
    return symmetrize((v * inv) @ v.T)
