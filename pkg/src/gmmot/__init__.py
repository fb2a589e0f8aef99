"""Optimal transport on the space of Gaussian mixture models.

The package treats a Gaussian mixture as a discrete measure on the
Wasserstein space of Gaussians. On top of the closed-form Gaussian
geometry it provides a transport metric between mixtures, structure
preserving geodesics, mixture barycenters, and independent numerical
oracles for the true Wasserstein distance between the mixture densities.
"""

from .errors import (
    ConvergenceError,
    DimError,
    DomainError,
    GmmOtError,
    InfeasibleMarginals,
    InvalidMatrix,
    InvalidModel,
    NotPSD,
    ParseError,
    ResourceError,
    SingularDensity,
    SolverError,
)
from .gaussian import (
    FixedPointInfo,
    Gaussian,
    barycenter_covariance,
    gaussian_barycenter,
    interpolate_gaussian,
    optimal_cross_covariance,
    w2_gaussian,
)
from .mixture import (
    GaussianMixture,
    density_at,
    load_model,
    read_model,
    save_model,
    validate_mixture,
    write_model,
)
from .mixture_ot import (
    BarycenterResult,
    MixtureTransportResult,
    mixture_barycenter,
    mixture_barycenter_result,
    mixture_distance,
    mixture_geodesic,
)
from .oracle import (
    GridSpec,
    SweepPoint,
    bimodal_sweep,
    mixture_quantiles,
    sweep_csv,
    w2_1d_quantile,
    w2_grid_lp,
)
from .psd import eigh_sym, inv_sqrt_psd, pinv_psd, sqrt_psd, symmetrize
from .transport import (
    BarycenterLP,
    BarycenterLPSolution,
    Coupling,
    TransportationProblem,
    solve_barycenter_lp,
    solve_transportation,
)

__version__ = "0.1.0"

__all__ = [
    "GmmOtError",
    "InvalidMatrix",
    "NotPSD",
    "DimError",
    "DomainError",
    "ConvergenceError",
    "InvalidModel",
    "SingularDensity",
    "ParseError",
    "InfeasibleMarginals",
    "SolverError",
    "ResourceError",
    "Gaussian",
    "FixedPointInfo",
    "w2_gaussian",
    "optimal_cross_covariance",
    "interpolate_gaussian",
    "gaussian_barycenter",
    "barycenter_covariance",
    "GaussianMixture",
    "validate_mixture",
    "density_at",
    "read_model",
    "write_model",
    "load_model",
    "save_model",
    "TransportationProblem",
    "Coupling",
    "solve_transportation",
    "BarycenterLP",
    "BarycenterLPSolution",
    "solve_barycenter_lp",
    "MixtureTransportResult",
    "mixture_distance",
    "mixture_geodesic",
    "BarycenterResult",
    "mixture_barycenter",
    "mixture_barycenter_result",
    "GridSpec",
    "mixture_quantiles",
    "w2_1d_quantile",
    "w2_grid_lp",
    "SweepPoint",
    "bimodal_sweep",
    "sweep_csv",
    "symmetrize",
    "eigh_sym",
    "sqrt_psd",
    "pinv_psd",
    "inv_sqrt_psd",
]
