"""
Energy of routing to the kth nearest neighbour.

With r0 = 1 m the path loss to the kth nearest of n uniform neighbours in a
ball of radius R is 𝔏_k = r_k^γ. Its expectation has a closed form in
gamma functions; the per-hop amortisation 𝔏̄_k = 𝔏_k / k tells whether
skipping to farther neighbours pays off.
"""

from __future__ import annotations

import logging
import math
from typing import List

import numpy as np
from scipy import special

from .base import RoutingMode, RoutingRow, RoutingScenario
from .exceptions import InvalidArgumentError
from .geometry import SeedLike, as_generator, nearest_radii, sample_radii

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 4096


def kth_path_loss_moment(k: int, n: int, gamma: float, dimension: int, radius: float) -> float:
    """
    E[r_k^γ] for the kth nearest of ``n`` uniform nodes in a d-ball.

    R^γ·Γ(n+1)/Γ(n+α+1)·Γ(k+α)/Γ(k) with α = γ/d, evaluated in log space.
    """
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if gamma <= 0 or radius <= 0:
        raise InvalidArgumentError("gamma and radius must be positive")
    alpha = gamma / dimension
    log_value = (
        gamma * math.log(radius)
        + special.gammaln(n + 1)
        - special.gammaln(n + alpha + 1)
        + special.gammaln(k + alpha)
        - special.gammaln(k)
    )
    return float(np.exp(log_value))


def expected_path_loss(k: int, scenario: RoutingScenario) -> float:
    """
    Expected single-hop path loss to the kth nearest neighbour.

    Args:
        k: Neighbour order, 1 <= k <= n
        scenario: Local ball, PLE and neighbour count

    Returns:
        E(𝔏_k), dimensionless
    """
    return kth_path_loss_moment(
        k,
        scenario.n_neighbors,
        scenario.gamma,
        scenario.space.dimension,
        scenario.space.field_radius,
    )


def k_efficiency(k, alpha: float):
    """
    f(k) = Γ(k+α)/Γ(k)·(ψ(k+α) - ψ(k)), the k-dependent part of ∂E(𝔏_k)/∂k.

    f is constant 1 for α = 1, decreasing in k for α < 1 and increasing for
    α > 1. Accepts a scalar or an array of k.
    """
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 1):
        raise InvalidArgumentError("k must be at least 1")
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    ratio = np.exp(special.gammaln(k_arr + alpha) - special.gammaln(k_arr))
    value = ratio * (special.digamma(k_arr + alpha) - special.digamma(k_arr))
    return float(value) if value.ndim == 0 else value


def lognormal_mean_factor(sigma: float) -> float:
    """E[10^(χ/10)] for χ ~ Normal(0, σ²): exp((σ·ln10/10)²/2)."""
    return math.exp((sigma * math.log(10.0) / 10.0) ** 2 / 2.0)


def simulate_kth_routing(
    scenario: RoutingScenario,
    trials: int,
    gen: SeedLike,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> List[RoutingRow]:
    """
    Monte Carlo estimate of 𝔏̄_k = 𝔏_k / k for k = 1..k_max.

    Each trial redeploys the n neighbours; with shadowing, each link loss is
    multiplied by 10^(χ/10), χ ~ Normal(0, σ²).

    Args:
        scenario: Routing scenario
        trials: Number of deployments
        gen: Seed or generator
        chunk_size: Deployments drawn per vectorised batch

    Returns:
        One RoutingRow per k with the mean and its standard error
    """
    if trials < 1:
        raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
    gen = as_generator(gen)
    n = scenario.n_neighbors
    k_max = scenario.k_max
    ks = np.arange(1, k_max + 1)

    total = np.zeros(k_max)
    total_sq = np.zeros(k_max)
    remaining = trials
    while remaining > 0:
        batch = min(chunk_size, remaining)
        radii = sample_radii(scenario.space, (batch, n), gen)
        nearest = nearest_radii(radii, k_max)
        loss = nearest**scenario.gamma
        if scenario.shadow_sigma > 0:
            chi = gen.normal(0.0, scenario.shadow_sigma, size=loss.shape)
            loss = loss * 10.0 ** (chi / 10.0)
        per_hop = loss / ks
        total += per_hop.sum(axis=0)
        total_sq += (per_hop**2).sum(axis=0)
        remaining -= batch

    mean = total / trials
    if trials > 1:
        variance = np.maximum(total_sq - trials * mean**2, 0.0) / (trials - 1)
        stderr = np.sqrt(variance / trials)
    else:
        stderr = [None] * k_max
    logger.debug("Simulated %d deployments of %d neighbours", trials, n)
    return [
        RoutingRow(
            mode=RoutingMode.MONTE_CARLO,
            k=int(k),
            gamma=scenario.gamma,
            sigma=scenario.shadow_sigma,
            value=float(m),
            stderr=None if s is None else float(s),
        )
        for k, m, s in zip(ks, mean, stderr)
    ]
