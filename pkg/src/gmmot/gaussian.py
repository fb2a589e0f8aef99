"""Wasserstein-2 geometry on the space of Gaussian distributions.

Provides the closed-form distance between two Gaussians, the optimal
cross-covariance of their coupling, constant-speed displacement
interpolation, and the weighted barycenter computed by fixed-point
iteration on the covariance. Singular (rank-deficient) covariances are
supported throughout; in the fully degenerate case the distance reduces
to the Euclidean distance between the means.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DimError, DomainError, NotPSD
from .psd import inv_sqrt_psd, psd_tolerance, sqrt_psd, symmetrize

__all__ = [
    "Gaussian",
    "w2_gaussian",
    "optimal_cross_covariance",
    "interpolate_gaussian",
    "gaussian_barycenter",
    "barycenter_covariance",
    "FixedPointInfo",
]

#: Tolerance for clamping tiny negative trace expressions caused by
#: cancellation between nearly identical covariances.
_TRACE_CLAMP = 1e-10

#: Covariance fixed-point iteration defaults.
FP_TOL = 1e-12
FP_MAX_ITER = 1000


@dataclass(frozen=True)
class Gaussian:
    """A Gaussian distribution on R^n given by mean vector and PSD covariance.

    The covariance is symmetrized and PSD-checked on construction; singular
    covariances (including the zero matrix, i.e. a point mass) are valid.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        if mean.ndim != 1 or not np.all(np.isfinite(mean)):
            raise DimError(f"mean must be a finite vector, got shape {mean.shape}")
        cov = symmetrize(self.cov)
        if cov.shape[0] != mean.shape[0]:
            raise DimError(
                f"mean has dimension {mean.shape[0]} but covariance is {cov.shape}"
            )
        w = np.linalg.eigvalsh(cov)
        if w[0] < -psd_tolerance(cov):
            raise NotPSD(f"covariance has eigenvalue {w[0]:.3e}")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def _check_dims(g0: Gaussian, g1: Gaussian):
    if g0.dim != g1.dim:
        raise DimError(f"dimension mismatch: {g0.dim} vs {g1.dim}")


def w2_gaussian(g0: Gaussian, g1: Gaussian) -> float:
    """Wasserstein-2 distance between two Gaussians.

    Computed as ``sqrt(|m0-m1|^2 + tr(S0) + tr(S1) - 2*nuc(S1^{1/2} S0^{1/2}))``
    where ``nuc`` is the nuclear norm (sum of singular values); the nuclear
    norm equals ``tr((S0^{1/2} S1 S0^{1/2})^{1/2})`` and is well defined for
    singular covariances without any inverse.

    The trace expression is clamped into ``[0, |S0^{1/2} - S1^{1/2}|_F^2]``.
    The upper bound is exact mathematics (align the square roots with the
    identity instead of the optimal unitary) and evaluates to exactly zero
    for equal inputs, which removes the cancellation noise that would
    otherwise leave a distance of order sqrt(eps) between identical
    Gaussians.
    """
    _check_dims(g0, g1)
    c0 = sqrt_psd(g0.cov)
    c1 = sqrt_psd(g1.cov)
    cross = np.linalg.svd(c1 @ c0, compute_uv=False).sum()
    trace_term = np.trace(g0.cov) + np.trace(g1.cov) - 2.0 * cross
    clamp = _TRACE_CLAMP * max(1.0, np.trace(g0.cov) + np.trace(g1.cov))
    if trace_term < -clamp:
        raise NotPSD(f"trace expression {trace_term:.3e} is significantly negative")
    upper = float(np.sum((c0 - c1) ** 2))
    mean_term = float(np.sum((g0.mean - g1.mean) ** 2))
    return float(np.sqrt(mean_term + min(max(trace_term, 0.0), upper)))


def optimal_cross_covariance(g0: Gaussian, g1: Gaussian) -> np.ndarray:
    """Cross-covariance ``S = E[(X - m0)(Y - m1)^T]`` of the optimal coupling.

    ``S`` maximizes ``tr(S)`` subject to the joint covariance block matrix
    ``[[S0, S], [S^T, S1]]`` being PSD; the maximizer is written as
    ``S0^{1/2} K S1^{1/2}`` with the orthogonal polar factor ``K`` of
    ``(S1^{1/2} S0^{1/2})^T``. For nonsingular ``S0`` this equals the closed
    form ``S0^{1/2} (S0^{1/2} S1 S0^{1/2})^{1/2} S0^{-1/2}``; the polar
    construction extends it to singular covariances while keeping the block
    matrix PSD.
    """
    _check_dims(g0, g1)
    c0 = sqrt_psd(g0.cov)
    c1 = sqrt_psd(g1.cov)
    u, _, vt = np.linalg.svd(c1 @ c0)
    return c0 @ (u @ vt).T @ c1


def interpolate_gaussian(g0: Gaussian, g1: Gaussian, t: float) -> Gaussian:
    """Displacement interpolation between two Gaussians at time t in [0, 1].

    The interpolant is the law of ``(1-t)X + tY`` under the optimal coupling:
    mean ``(1-t)m0 + t*m1`` and covariance
    ``(1-t)^2 S0 + t^2 S1 + t(1-t)(S + S^T)`` with ``S`` the optimal
    cross-covariance. For nonsingular ``S0`` this coincides with the
    inverse-square-root sandwich form
    ``S0^{-1/2}((1-t)S0 + t(S0^{1/2}S1S0^{1/2})^{1/2})^2 S0^{-1/2}``,
    and unlike that form it reproduces both endpoints exactly even for
    singular covariances.
    """
    _check_dims(g0, g1)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"interpolation parameter t={t} outside [0, 1]")
    if t == 0.0:
        return g0
    if t == 1.0:
        return g1
    s = optimal_cross_covariance(g0, g1)
    mean = (1.0 - t) * g0.mean + t * g1.mean
    cov = (1.0 - t) ** 2 * g0.cov + t**2 * g1.cov + t * (1.0 - t) * (s + s.T)
    return Gaussian(mean, cov)


@dataclass
class FixedPointInfo:
    """Diagnostics of the covariance fixed-point iteration."""

    iterations: int = 0
    residual: float = float("nan")
    ridge_events: list = field(default_factory=list)


def _fixed_point_residual(cov: np.ndarray, covs, weights) -> float:
    root = sqrt_psd(cov)
    acc = np.zeros_like(cov)
    for lam, ck in zip(weights, covs):
        acc += lam * sqrt_psd(root @ ck @ root)
    return float(np.linalg.norm(cov - acc, "fro"))


def barycenter_covariance(
    covs,
    weights,
    fp_tol: float = FP_TOL,
    max_iter: int = FP_MAX_ITER,
) -> tuple[np.ndarray, FixedPointInfo]:
    """Solve the barycenter covariance equation by fixed-point iteration.

    Iterates the sandwiched map
    ``S <- S^{-1/2} (sum_k w_k (S^{1/2} S_k S^{1/2})^{1/2})^2 S^{-1/2}``
    from the warm start ``sum_k w_k S_k`` until the residual of the
    stationarity equation ``S = sum_k w_k (S^{1/2} S_k S^{1/2})^{1/2}``
    drops below ``fp_tol * (1 + |S|_F)``. Rank-deficient iterates get a
    ridge of ``1e-12 * tr(S)/n`` before the inverse square root; each such
    event is recorded in the returned diagnostics.

    Raises
    ------
    ConvergenceError
        If the residual is still above tolerance after ``max_iter`` steps.
    """
    covs = [symmetrize(c) for c in covs]
    n = covs[0].shape[0]
    weights = np.asarray(weights, dtype=float)
    cov = sum(lam * ck for lam, ck in zip(weights, covs))
    info = FixedPointInfo()
    steps = 0
    residual = _fixed_point_residual(cov, covs, weights)
    while True:
        if residual <= fp_tol * (1.0 + np.linalg.norm(cov, "fro")):
            info.iterations = steps
            info.residual = residual
            return symmetrize(cov), info
        if steps >= max_iter:
            raise ConvergenceError(
                f"barycenter covariance did not converge in {max_iter} "
                f"iterations (residual {residual:.3e})",
                residual=residual,
            )
        eigvals = np.linalg.eigvalsh(cov)
        trace = np.trace(cov)
        if trace > 0 and eigvals[0] <= 1e-12 * trace / n:
            ridge = 1e-12 * trace / n
            cov = cov + ridge * np.eye(n)
            info.ridge_events.append((steps, ridge))
        root = sqrt_psd(cov)
        inv_root = inv_sqrt_psd(cov)
        acc = np.zeros_like(cov)
        for lam, ck in zip(weights, covs):
            acc += lam * sqrt_psd(root @ ck @ root)
        cov = symmetrize(inv_root @ (acc @ acc) @ inv_root)
        steps += 1
        residual = _fixed_point_residual(cov, covs, weights)


def gaussian_barycenter(
    items,
    fp_tol: float = FP_TOL,
    max_iter: int = FP_MAX_ITER,
) -> Gaussian:
    """Weighted Wasserstein barycenter of Gaussians.

    Parameters
    ----------
    items : sequence of (weight, Gaussian)
        Nonnegative weights summing to 1 and Gaussians of equal dimension.
        Zero-weight entries are dropped; the rest must be positive.

    The barycenter mean is the weighted mean of the input means; the
    covariance solves the fixed-point equation (see
    ``barycenter_covariance``).
    """
    items = [(w, g) for w, g in items if w != 0.0]
    if not items:
        raise DomainError("barycenter requires at least one positive weight")
    weights = np.asarray([w for w, _ in items], dtype=float)
    gaussians = [g for _, g in items]
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError("weights must be positive and sum to 1")
    dims = {g.dim for g in gaussians}
    if len(dims) != 1:
        raise DimError(f"mixed dimensions in barycenter inputs: {sorted(dims)}")
    mean = sum(w * g.mean for w, g in zip(weights, gaussians))
    cov, _ = barycenter_covariance(
        [g.cov for g in gaussians], weights, fp_tol=fp_tol, max_iter=max_iter
    )
    return Gaussian(mean, cov)
