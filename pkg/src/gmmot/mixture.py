"""Gaussian mixture models: validation, density evaluation, JSON i/o.

The canonical on-disk model format is a UTF-8 JSON document::

    {"dim": n,
     "weights": [p1, ..., pN],
     "components": [{"mean": [...], "cov": [[...]]}, ...]}

Covariances are given as full n-by-n arrays; asymmetry beyond 1e-8 is a
parse error, smaller asymmetry is symmetrized away.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimError, InvalidModel, NotPSD, ParseError, SingularDensity
from .gaussian import Gaussian

__all__ = [
    "GaussianMixture",
    "validate_mixture",
    "density_at",
    "read_model",
    "write_model",
    "load_model",
    "save_model",
]

_WEIGHT_SUM_TOL = 1e-6
_COV_ASYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class GaussianMixture:
    """A finite Gaussian mixture: probability weights plus components.

    Instances are built through ``validate_mixture`` (or the JSON readers),
    which drops zero-weight components and renormalizes the weights.
    Equivalently, a mixture is a discrete probability measure on the space
    of Gaussians; that is the viewpoint the transport layer takes.
    """

    weights: np.ndarray
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        w = np.asarray(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return self.components[0].dim


def validate_mixture(weights, components) -> GaussianMixture:
    """Build a mixture from raw weights and components.

    Zero-weight components are dropped (not errored); negative weights and
    weight sums deviating from 1 by more than 1e-6 are rejected. Remaining
    weights are renormalized to sum to 1 exactly. Component order is
    preserved and identical components are kept separate.
    """
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    components = list(components)
    if weights.ndim != 1 or weights.size != len(components):
        raise InvalidModel(
            f"{weights.size} weights for {len(components)} components"
        )
    if weights.size == 0:
        raise InvalidModel("mixture must have at least one component")
    if not np.all(np.isfinite(weights)):
        raise InvalidModel("weights must be finite")
    if np.any(weights < 0):
        raise InvalidModel(f"negative weight {weights.min()}")
    total = weights.sum()
    if abs(total - 1.0) > _WEIGHT_SUM_TOL:
        raise InvalidModel(f"weights sum to {total}, expected 1")
    keep = weights > 0
    if not np.any(keep):
        raise InvalidModel("all weights are zero")
    weights = weights[keep] / weights[keep].sum()
    components = [c for c, k in zip(components, keep) if k]
    dims = {c.dim for c in components}
    if len(dims) != 1:
        raise DimError(f"components have mixed dimensions {sorted(dims)}")
    return GaussianMixture(weights, tuple(components))


def _gaussian_log_density(g: Gaussian, x: np.ndarray) -> np.ndarray:
    try:
        chol = np.linalg.cholesky(g.cov)
    except np.linalg.LinAlgError:
        raise SingularDensity(
            "density undefined for a singular covariance component"
        ) from None
    diff = x - g.mean
    z = np.linalg.solve(chol, diff.T)
    log_det = 2.0 * np.log(np.diagonal(chol)).sum()
    quad = np.sum(z * z, axis=0)
    return -0.5 * (quad + log_det + g.dim * np.log(2.0 * np.pi))


def density_at(mixture: GaussianMixture, x) -> float | np.ndarray:
    """Mixture probability density at a point (or batch of points).

    ``x`` may be a single point of shape ``(n,)`` or a batch ``(m, n)``;
    the result is a scalar or an ``(m,)`` array accordingly. Components
    must be nonsingular.
    """
    x = np.asarray(x, dtype=float)
    scalar_input = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[1] != mixture.dim:
        raise DimError(
            f"points have dimension {pts.shape[1]}, mixture has {mixture.dim}"
        )
    dens = np.zeros(pts.shape[0])
    for w, comp in zip(mixture.weights, mixture.components):
        dens += w * np.exp(_gaussian_log_density(comp, pts))
    return float(dens[0]) if scalar_input else dens


def _parse_component(entry, dim: int, where: str) -> Gaussian:
    if not isinstance(entry, dict):
        raise ParseError("component must be an object", where)
    for key in ("mean", "cov"):
        if key not in entry:
            raise ParseError(f'missing "{key}"', where)
    mean = np.asarray(entry["mean"], dtype=float)
    if mean.shape != (dim,):
        raise ParseError(f"mean must have length {dim}", f"{where}.mean")
    cov = np.asarray(entry["cov"], dtype=float)
    if cov.shape != (dim, dim):
        raise ParseError(f"cov must be {dim}x{dim}", f"{where}.cov")
    if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
        raise ParseError("non-finite entries", where)
    asym = np.abs(cov - cov.T).max()
    if asym > _COV_ASYMMETRY_TOL:
        raise ParseError(f"cov asymmetric by {asym:.2e}", f"{where}.cov")
    try:
        return Gaussian(mean, (cov + cov.T) / 2.0)
    except NotPSD as exc:
        raise ParseError(str(exc), f"{where}.cov") from exc


def read_model(data: bytes | str) -> GaussianMixture:
    """Parse a mixture from its canonical JSON document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    for key in ("dim", "weights", "components"):
        if key not in doc:
            raise ParseError(f'missing "{key}" field', "top level")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError("dim must be a positive integer", "dim")
    if not isinstance(doc["components"], list) or not doc["components"]:
        raise ParseError("components must be a nonempty array", "components")
    components = [
        _parse_component(entry, dim, f"components[{k}]")
        for k, entry in enumerate(doc["components"])
    ]
    try:
        weights = np.asarray(doc["weights"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError("weights must be an array of numbers", "weights") from exc
    try:
        return validate_mixture(weights, components)
    except (InvalidModel, DimError) as exc:
        raise ParseError(str(exc), "weights") from exc


def write_model(mixture: GaussianMixture) -> bytes:
    """Serialize a mixture to its canonical JSON document (UTF-8 bytes).

    Floats are written with ``repr`` precision, so a write/read round trip
    reproduces the model exactly.
    """
    doc = {
        "dim": mixture.dim,
        "weights": [float(w) for w in mixture.weights],
        "components": [
            {
                "mean": [float(v) for v in g.mean],
                "cov": [[float(v) for v in row] for row in g.cov],
            }
            for g in mixture.components
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def load_model(path) -> GaussianMixture:
    """Read a mixture from a JSON model file."""
    with open(path, "rb") as fh:
        return read_model(fh.read())


def save_model(mixture: GaussianMixture, path):
    """Write a mixture to a JSON model file."""
    with open(path, "wb") as fh:
        fh.write(write_model(mixture))
