"""
Random node deployment in d-dimensional balls and the order statistics of
neighbour distances.

Every stochastic function takes an explicit seed or ``numpy.random.Generator``;
nothing here touches global random state.
"""

from __future__ import annotations

import logging
import math
from typing import Union

import numpy as np
from scipy import special

from .base import DeploymentField, SpaceConfig
from .exceptions import EmptyFieldError, InvalidArgumentError, UnsupportedDimensionError

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]

SUPPORTED_DIMENSIONS = (1, 2, 3)

# Window angle that covers the whole ball. In 3-D the window is a cone whose
# half-angle is phi; in 2-D it is a sector of opening angle phi.
FULL_ANGLE = {1: 2.0 * math.pi, 2: 2.0 * math.pi, 3: math.pi}


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return ``seed`` unchanged if it is a Generator, else seed a new one."""
    return np.random.default_rng(seed)


def _check_dimension(d: int) -> None:
    if d not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(
            f"Dimension must be one of {SUPPORTED_DIMENSIONS}, got {d}", dimension=d
        )


def unit_ball_coeff(d: int) -> float:
    """Volume of the unit d-ball, pi^(d/2) / Gamma(1 + d/2)."""
    _check_dimension(d)
    return math.pi ** (d / 2.0) / math.gamma(1.0 + d / 2.0)


def sector_coeff(d: int, phi: float) -> float:
    """Volume coefficient of the angular window ``phi`` in d dimensions.

    In 1-D any window short of the full angle is a single ray.
    """
    _check_dimension(d)
    full = FULL_ANGLE[d]
    if not 0.0 < phi <= full:
        raise InvalidArgumentError(f"phi must lie in (0, {full}] for d={d}, got {phi}")
    if d == 1:
        return 2.0 if phi == full else 1.0
    if d == 2:
        return phi / 2.0
    return (2.0 * math.pi / 3.0) * (1.0 - math.cos(phi))


def node_count(space: SpaceConfig) -> int:
    """Deterministic node count round(density * volume) of a deployment."""
    volume = unit_ball_coeff(space.dimension) * space.field_radius**space.dimension
    return int(round(space.density * volume))


def sample_radii(space: SpaceConfig, size, rng: SeedLike) -> np.ndarray:
    """Distances to the centre of points uniform in the d-ball (R * U^(1/d))."""
    gen = as_generator(rng)
    return space.field_radius * gen.random(size) ** (1.0 / space.dimension)


def sample_directions(d: int, size: int, rng: SeedLike) -> np.ndarray:
    """Unit vectors uniform on the (d-1)-sphere, shape (size, d)."""
    _check_dimension(d)
    gen = as_generator(rng)
    if d == 1:
        return (2 * gen.integers(0, 2, size=size) - 1).astype(float).reshape(size, 1)
    if d == 2:
        theta = gen.uniform(0.0, 2.0 * math.pi, size=size)
        return np.column_stack((np.cos(theta), np.sin(theta)))
    v = gen.standard_normal((size, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def deploy_uniform(space: SpaceConfig, seed: SeedLike) -> DeploymentField:
    """
    Deploy round(density * c_d * R^d) nodes uniformly in the d-ball.

    Args:
        space: Dimension, field radius and density
        seed: Seed or generator; a fixed seed reproduces the same positions

    Returns:
        DeploymentField centred on the origin
    """
    n = node_count(space)
    if n == 0:
        raise EmptyFieldError(
            f"density {space.density} over radius {space.field_radius} yields no nodes"
        )
    gen = as_generator(seed)
    radii = sample_radii(space, n, gen)
    directions = sample_directions(space.dimension, n, gen)
    positions = directions * radii[:, None]
    logger.debug("Deployed %d nodes in a %d-ball of radius %g", n, space.dimension, space.field_radius)
    return DeploymentField(
        origin=np.zeros(space.dimension), positions=positions, space=space
    )


def nearest_radii(radii, k: int) -> np.ndarray:
    """
    The ``k`` smallest radii along the last axis, in ascending order.

    Works on one deployment (shape (n,)) or a batch of them (shape (trials, n)).
    """
    radii = np.asarray(radii, dtype=float)
    n = radii.shape[-1] if radii.ndim else 0
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k must lie in [1, {n}], got {k}")
    return np.sort(np.partition(radii, k - 1, axis=-1)[..., :k], axis=-1)


def nearest_distances(field: DeploymentField, k: int) -> np.ndarray:
    """Sorted distances from the origin to its ``k`` nearest nodes."""
    return nearest_radii(field.distances(), k)


def _check_order_statistic(r, k: int, n: int, space: SpaceConfig) -> np.ndarray:
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r > space.field_radius):
        raise InvalidArgumentError(f"r must lie in (0, {space.field_radius}]")
    return r


def kth_nearest_distance_pdf(r, k: int, n: int, space: SpaceConfig):
    """
    Density of the distance to the kth nearest of n uniform nodes in the ball.

    Args:
        r: Distance(s) in (0, field_radius]
        k: Neighbour order, 1 <= k <= n
        n: Number of nodes in the ball
        space: Dimension and ball radius

    Returns:
        Density value(s), same shape as ``r``
    """
    r = _check_order_statistic(r, k, n, space)
    d = space.dimension
    x = (r / space.field_radius) ** d
    log_pdf = (
        math.log(d)
        - np.log(r)
        - special.betaln(n - k + 1, k)
        + special.xlogy(k, x)
        + special.xlog1py(n - k, -x)
    )
    pdf = np.exp(log_pdf)
    return float(pdf) if pdf.ndim == 0 else pdf


def kth_nearest_distance_cdf(r, k: int, n: int, space: SpaceConfig):
    """P(r_k <= r), the regularised incomplete beta I_x(k, n - k + 1), x = (r/R)^d."""
    r = _check_order_statistic(r, k, n, space)
    x = (r / space.field_radius) ** space.dimension
    cdf = special.betainc(k, n - k + 1, x)
    return float(cdf) if np.ndim(cdf) == 0 else cdf
