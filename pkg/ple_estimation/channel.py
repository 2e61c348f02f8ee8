"""
Received signal strength generation: log-distance path loss, lognormal
shadowing, optional transmit-power jitter and optional Nakagami-m fading
averaged over K slots.

Channel arithmetic is done in dB; conversion to watts happens only where
fading is applied.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from .base import ChannelParams, DeploymentField, Neighborhood, RssObservation
from .base.channel import friis_constant_db
from .exceptions import InvalidArgumentError, NearFieldError
from .geometry import SeedLike, as_generator

logger = logging.getLogger(__name__)

__all__ = [
    "friis_constant_db",
    "dbm_to_watts",
    "watts_to_dbm",
    "mean_path_loss_db",
    "calibrate_sensitivity",
    "sample_instantaneous_power",
    "average_over_slots",
    "sample_rss_db",
    "sample_rss",
    "observe_neighborhood",
]


def dbm_to_watts(power_dbm):
    return 10.0 ** (np.asarray(power_dbm, dtype=float) / 10.0) / 1000.0


def watts_to_dbm(power_w):
    return 10.0 * np.log10(np.asarray(power_w, dtype=float) * 1000.0)


def mean_path_loss_db(r, params: ChannelParams):
    """
    Deterministic part of the attenuation at distance ``r``.

    10*gamma*log10(r) - 10*log10(C1) - 10*gamma*log10(r0)

    Raises:
        NearFieldError: if any distance is below the reference distance
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < params.ref_distance):
        raise NearFieldError(
            f"Distance {r_arr.min()} is inside the reference distance {params.ref_distance}",
            distance=float(r_arr.min()),
            ref_distance=params.ref_distance,
        )
    loss = 10.0 * params.ple * np.log10(r_arr / params.ref_distance) - params.prop_constant_db
    return float(loss) if loss.ndim == 0 else loss


def calibrate_sensitivity(params: ChannelParams, transmission_range: float) -> float:
    """Receiver sensitivity whose noiseless reach is ``transmission_range``."""
    return params.tx_power_dbm - mean_path_loss_db(transmission_range, params)


def sample_instantaneous_power(
    mean_power, m: float, gen: SeedLike, size=None
):
    """
    Draw Nakagami-m instantaneous power: Gamma(shape=m, scale=E(p)/m).

    Args:
        mean_power: E(p) in watts, scalar or array
        m: Fading parameter, smaller means deeper fading
        gen: Seed or generator
        size: Output shape when ``mean_power`` is scalar
    """
    mean = np.asarray(mean_power, dtype=float)
    if np.any(mean <= 0) or m <= 0:
        raise InvalidArgumentError("mean_power and m must be positive")
    draw = as_generator(gen).gamma(m, mean / m, size=size if size is not None else mean.shape)
    return float(draw) if np.ndim(draw) == 0 else draw


def average_over_slots(
    mean_power, m: float, slots: int, gen: SeedLike, size=None
):
    """
    Mean of ``slots`` independent instantaneous powers.

    The variance of the result is E(p)^2 / (slots * m).
    """
    if slots < 1:
        raise InvalidArgumentError(f"slots must be at least 1, got {slots}")
    mean = np.asarray(mean_power, dtype=float)
    if np.any(mean <= 0) or m <= 0:
        raise InvalidArgumentError("mean_power and m must be positive")
    shape = tuple(np.atleast_1d(size)) if size is not None else mean.shape
    draws = as_generator(gen).gamma(m, (mean / m)[..., None], size=shape + (slots,))
    average = draws.mean(axis=-1)
    return float(average) if average.ndim == 0 else average


def sample_rss_db(distances, params: ChannelParams, gen: SeedLike) -> np.ndarray:
    """Vectorised RSS draw in dBm for an array of link distances."""
    gen = as_generator(gen)
    distances = np.atleast_1d(np.asarray(distances, dtype=float))
    rss = params.tx_power_dbm - mean_path_loss_db(distances, params)
    rss = rss - gen.normal(0.0, params.shadow_sigma, size=distances.shape)
    if params.tx_power_jitter_sigma > 0:
        rss = rss + gen.normal(0.0, params.tx_power_jitter_sigma, size=distances.shape)
    if params.nakagami_m is not None:
        faded = average_over_slots(dbm_to_watts(rss), params.nakagami_m, params.slots, gen)
        rss = watts_to_dbm(faded)
    return rss


def sample_rss(
    r: float, params: ChannelParams, gen: SeedLike, node_index: int = 0
) -> RssObservation:
    """
    Draw one received signal strength at distance ``r``.

    Args:
        r: Link distance, at least the reference distance
        params: Channel parameters
        gen: Seed or generator
        node_index: Index of the transmitting node

    Returns:
        RssObservation carrying ``r`` as ground truth
    """
    rss = sample_rss_db([r], params, gen)
    return RssObservation(node_index=node_index, rss_db=float(rss[0]), true_distance=r)


def observe_neighborhood(
    field: DeploymentField,
    params: ChannelParams,
    gen: SeedLike,
    distances: Optional[np.ndarray] = None,
) -> Neighborhood:
    """
    Sample one RSS per node and keep the nodes above the receiver sensitivity.

    Links shorter than the reference distance are evaluated at the reference
    distance. An empty result is a valid outcome, not an error.

    Args:
        field: Deployment around the estimating node
        params: Channel parameters, including ``rx_sensitivity_dbm``
        gen: Seed or generator
        distances: Precomputed node distances, to avoid recomputing them

    Returns:
        Neighborhood of reachable nodes with their true distances attached
    """
    if field.n_nodes == 0:
        raise InvalidArgumentError("Cannot observe an empty field")
    true_distance = field.distances() if distances is None else distances
    link = np.maximum(true_distance, params.ref_distance)
    rss = sample_rss_db(link, params, gen)
    reachable = rss > params.rx_sensitivity_dbm
    logger.debug("Observed %d of %d nodes above %.2f dBm", int(reachable.sum()), field.n_nodes, params.rx_sensitivity_dbm)
    return Neighborhood(np.flatnonzero(reachable), rss[reachable], true_distance[reachable])
