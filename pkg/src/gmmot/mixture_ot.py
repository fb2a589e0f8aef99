"""Transport metric, geodesics and barycenters on Gaussian mixtures.

A mixture is treated as a discrete measure on the space of Gaussians; the
distance between two mixtures is the square root of the optimal value of a
transportation LP whose unit costs are squared Gaussian Wasserstein
distances between components. Geodesics interpolate every matched
component pair, so intermediate distributions remain Gaussian mixtures,
and barycenters are computed by a shared-marginal LP over a candidate
component support.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DimError, DomainError
from .gaussian import (
    Gaussian,
    gaussian_barycenter,
    interpolate_gaussian,
    w2_gaussian,
)
from .mixture import GaussianMixture, validate_mixture
from .transport import (
    BarycenterLP,
    BarycenterLPSolution,
    Coupling,
    TransportationProblem,
    solve_barycenter_lp,
    solve_transportation,
)

__all__ = [
    "MixtureTransportResult",
    "mixture_distance",
    "mixture_geodesic",
    "BarycenterResult",
    "mixture_barycenter",
    "mixture_barycenter_result",
]

#: Coupling entries below this are treated as exact zeros when building
#: geodesic or barycenter components.
PLAN_PRUNE_TOL = 1e-12

#: Pairwise distance below 1e-9 * (1 + scale) merges duplicate support points.
SUPPORT_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class MixtureTransportResult:
    """Distance, optimal component coupling and the underlying cost matrix."""

    distance: float
    coupling: Coupling
    cost_matrix: np.ndarray


def _check_mixture_dims(*mixtures: GaussianMixture):
    dims = {m.dim for m in mixtures}
    if len(dims) != 1:
        raise DimError(f"mixtures have different dimensions {sorted(dims)}")


def _pairwise_sq_w2(components0, components1) -> np.ndarray:
    cost = np.empty((len(components0), len(components1)))
    for i, g0 in enumerate(components0):
        for j, g1 in enumerate(components1):
            cost[i, j] = w2_gaussian(g0, g1) ** 2
    return cost


def mixture_distance(mu0: GaussianMixture, mu1: GaussianMixture) -> MixtureTransportResult:
    """Transport distance between two Gaussian mixtures.

    Solves the transportation LP between the component weight vectors with
    cost matrix ``c[i, j] = w2_gaussian(comp0_i, comp1_j)^2`` and returns
    ``sqrt`` of the optimal value together with the optimal coupling.
    """
    _check_mixture_dims(mu0, mu1)
    cost = _pairwise_sq_w2(mu0.components, mu1.components)
    coupling = solve_transportation(
        TransportationProblem(mu0.weights, mu1.weights, cost)
    )
    return MixtureTransportResult(
        distance=float(np.sqrt(max(coupling.cost_value, 0.0))),
        coupling=coupling,
        cost_matrix=cost,
    )


def mixture_geodesic(
    mu0: GaussianMixture, mu1: GaussianMixture, t: float
) -> GaussianMixture:
    """Point at time ``t`` on the mixture geodesic from ``mu0`` to ``mu1``.

    Every pair of components matched by the optimal coupling contributes
    one Gaussian, displaced by ordinary Gaussian interpolation; the pair's
    coupling mass becomes its weight. Coupling entries below
    ``PLAN_PRUNE_TOL`` are dropped so that vertex-solution float dust does
    not create spurious components.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"geodesic parameter t={t} outside [0, 1]")
    _check_mixture_dims(mu0, mu1)
    plan = mixture_distance(mu0, mu1).coupling.plan
    weights = []
    components = []
    for i, j in np.argwhere(plan > PLAN_PRUNE_TOL):
        weights.append(plan[i, j])
        components.append(
            interpolate_gaussian(mu0.components[i], mu1.components[j], t)
        )
    weights = np.asarray(weights)
    return validate_mixture(weights / weights.sum(), components)


@dataclass(frozen=True)
class BarycenterResult:
    """Barycenter mixture plus the LP evidence used to build it."""

    mixture: GaussianMixture
    objective: float
    support: tuple
    lp: BarycenterLPSolution


def _derived_support(mixtures, weights) -> list:
    """Candidate barycenter components: one per tuple of input components.

    Each tuple ``(i_1, ..., i_L)`` contributes the weighted Gaussian
    barycenter of the selected components. Zero-weight mixtures do not
    influence the candidates and are skipped; candidates closer than the
    merge tolerance to an already kept one are collapsed onto it, since
    duplicate support points only make the LP degenerate.
    """
    active = [(lam, mix) for lam, mix in zip(weights, mixtures) if lam > 0]
    candidates = [
        gaussian_barycenter(
            [(lam, mix.components[idx]) for (lam, mix), idx in zip(active, combo)]
        )
        for combo in product(*[range(mix.size) for _, mix in active])
    ]
    scale = max(
        float(np.linalg.norm(g.mean)) + float(np.sqrt(np.trace(g.cov)))
        for g in candidates
    )
    threshold = SUPPORT_MERGE_TOL * (1.0 + scale)
    kept: list = []
    for cand in candidates:
        if all(w2_gaussian(cand, f) >= threshold for f in kept):
            kept.append(cand)
    return kept


def mixture_barycenter_result(
    mixtures,
    weights,
    support=None,
) -> BarycenterResult:
    """Weighted barycenter of Gaussian mixtures, with full LP evidence.

    Parameters
    ----------
    mixtures : sequence of GaussianMixture
    weights : sequence of float
        Barycenter weights; positive, summing to 1.
    support : sequence of Gaussian, optional
        Fix the barycenter's component set instead of deriving it from
        per-tuple Gaussian barycenters of the input components.
    """
    mixtures = list(mixtures)
    if not mixtures:
        raise DomainError("barycenter requires at least one mixture")
    _check_mixture_dims(*mixtures)
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if weights.size != len(mixtures):
        raise DomainError(
            f"{weights.size} weights for {len(mixtures)} mixtures"
        )
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError("weights must be nonnegative and sum to 1")

    if support is None:
        support = _derived_support(mixtures, weights)
    else:
        support = list(support)
        if not support:
            raise DomainError("fixed support must be nonempty")
        dims = {g.dim for g in support} | {mixtures[0].dim}
        if len(dims) != 1:
            raise DimError(f"support dimensions {sorted(dims)} do not match")

    costs = [_pairwise_sq_w2(support, mix.components) for mix in mixtures]
    lp = BarycenterLP(
        costs=tuple(costs),
        marginals=tuple(mix.weights for mix in mixtures),
        weights=weights,
    )
    solution = solve_barycenter_lp(lp)
    mass = solution.shared_marginal
    keep = mass > PLAN_PRUNE_TOL
    mixture = validate_mixture(
        mass[keep] / mass[keep].sum(),
        [g for g, k in zip(support, keep) if k],
    )
    return BarycenterResult(
        mixture=mixture,
        objective=solution.objective,
        support=tuple(support),
        lp=solution,
    )


def mixture_barycenter(mixtures, weights, support=None) -> GaussianMixture:
    """Weighted barycenter of Gaussian mixtures (see ``mixture_barycenter_result``)."""
    return mixture_barycenter_result(mixtures, weights, support=support).mixture
