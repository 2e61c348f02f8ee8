"""
The rank-based linear regression model.

Received powers are ranked strongest first; every unordered pair of ranks
(i_hat < j_hat) yields a power difference ``delta_p`` and a rank-ratio
estimate ``l_hat = (10/d) log10(i_hat / j_hat)``, so that
``delta_p ~= gamma * l_hat``. Nothing here reads ground-truth distances.
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

import numpy as np

from .base import DeploymentField, Neighborhood, PairSampleSet, RankedRssSet, RssObservation
from .exceptions import InsufficientSamplesError, InvalidArgumentError, UnsupportedDimensionError
from .geometry import FULL_ANGLE, SeedLike, as_generator

logger = logging.getLogger(__name__)


def rank_rss(observations: Sequence[RssObservation]) -> RankedRssSet:
    """
    Rank observations by received power, strongest first.

    Ties keep their input order (stable sort), so ranking is deterministic.

    Raises:
        InsufficientSamplesError: with fewer than two observations
    """
    neighborhood = Neighborhood.from_observations(observations)
    if len(neighborhood) < 2:
        raise InsufficientSamplesError(
            f"Ranking needs at least 2 observations, got {len(neighborhood)}",
            required=2,
            actual=len(neighborhood),
        )
    order = np.argsort(-neighborhood.rss_db, kind="stable")
    return RankedRssSet(
        rss_db=neighborhood.rss_db[order],
        ranks=np.arange(1, len(neighborhood) + 1),
        source_indices=neighborhood.node_index[order],
    )


def pair_delta_p(ranked: RankedRssSet, i_hat: int, j_hat: int) -> float:
    """ΔP between ranks: P_r[j_hat] - P_r[i_hat] in dB (ranks are 1-based)."""
    n = ranked.n_hat
    if not (1 <= i_hat <= n and 1 <= j_hat <= n) or i_hat == j_hat:
        raise InvalidArgumentError(
            f"Ranks must be distinct and within [1, {n}], got ({i_hat}, {j_hat})"
        )
    return float(ranked.rss_db[j_hat - 1] - ranked.rss_db[i_hat - 1])


def l_hat(i_hat, j_hat, d: int):
    """Rank-ratio estimate (10/d) log10(i_hat / j_hat) in dB."""
    if d not in FULL_ANGLE:
        raise UnsupportedDimensionError(f"Unsupported dimension {d}", dimension=d)
    i_arr = np.asarray(i_hat, dtype=float)
    j_arr = np.asarray(j_hat, dtype=float)
    if np.any(i_arr < 1) or np.any(j_arr < 1):
        raise InvalidArgumentError("Ranks must be at least 1")
    value = (10.0 / d) * (np.log10(i_arr) - np.log10(j_arr))
    return float(value) if value.ndim == 0 else value


def pair_indices(flat, n: int):
    """
    Map flat indices into the lexicographic list of pairs i < j of range(n)
    back to (i, j) without building the list.
    """
    k = np.asarray(flat, dtype=np.int64)
    total = n * (n - 1) // 2
    if np.any(k < 0) or np.any(k >= total):
        raise InvalidArgumentError(f"Flat pair index out of range [0, {total})")
    root = np.sqrt(4.0 * n * (n - 1) - 8.0 * k - 7.0)
    i = n - 2 - np.floor(root / 2.0 - 0.5).astype(np.int64)
    # float rounding can land one row off for very large n
    start = i * n - i * (i + 1) // 2
    i = np.where(start > k, i - 1, i)
    start = i * n - i * (i + 1) // 2
    after = start + (n - i - 1)
    i = np.where(k >= after, i + 1, i)
    start = i * n - i * (i + 1) // 2
    j = k - start + i + 1
    return i, j


def build_samples(
    ranked: RankedRssSet,
    d: int,
    max_pairs: Optional[int] = None,
    rng: SeedLike = None,
) -> PairSampleSet:
    """
    Build the pair sample set over all rank pairs i_hat < j_hat.

    Pairs are enumerated in lexicographic order. With ``max_pairs`` set and
    exceeded, a uniform subset of that many pairs is kept (still in
    lexicographic order), drawn from ``rng``.

    Args:
        ranked: Ranked received powers
        d: Dimension of the deployment
        max_pairs: Optional cap on the number of pairs
        rng: Seed or generator for subsampling

    Returns:
        PairSampleSet with N = C(n_hat, 2) entries unless capped
    """
    n = ranked.n_hat
    if n < 2:
        raise InsufficientSamplesError(
            f"At least 2 ranked powers are needed, got {n}", required=2, actual=n
        )
    total = math.comb(n, 2)
    if max_pairs is not None and total > max_pairs:
        keep = np.sort(as_generator(rng).choice(total, size=max_pairs, replace=False))
        i_idx, j_idx = pair_indices(keep, n)
        logger.debug("Subsampled %d of %d pairs", max_pairs, total)
    else:
        i_idx, j_idx = np.triu_indices(n, k=1)
    delta_p = ranked.rss_db[j_idx] - ranked.rss_db[i_idx]
    ratios = l_hat(i_idx + 1, j_idx + 1, d)
    return PairSampleSet(
        delta_p=delta_p,
        l_hat=np.atleast_1d(ratios),
        rank_pairs=np.column_stack((i_idx + 1, j_idx + 1)),
        n_hat=n,
        dimension=d,
    )


def filter_angular(
    observations: Sequence[RssObservation],
    field: DeploymentField,
    phi: float,
    bearing,
) -> Neighborhood:
    """
    Keep the observations from nodes inside an angular window at the origin.

    In 2-D the window is the sector of opening ``phi`` centred on ``bearing``;
    in 3-D it is the cone of half-angle ``phi`` about ``bearing``. Nodes on
    the window boundary are kept.

    Raises:
        UnsupportedDimensionError: for 1-D fields
    """
    d = field.space.dimension
    if d == 1:
        raise UnsupportedDimensionError("Angular windows need d = 2 or 3", dimension=d)
    full = FULL_ANGLE[d]
    if not 0.0 < phi <= full:
        raise InvalidArgumentError(f"phi must lie in (0, {full}], got {phi}")
    neighborhood = Neighborhood.from_observations(observations)
    if phi == full or neighborhood.is_empty:
        return neighborhood

    axis = np.asarray(bearing, dtype=float)
    if axis.shape != (d,) or not np.any(axis):
        raise InvalidArgumentError(f"bearing must be a non-zero {d}-vector")
    axis = axis / np.linalg.norm(axis)
    half_angle = phi / 2.0 if d == 2 else phi

    offsets = field.positions[neighborhood.node_index] - field.origin
    norms = np.linalg.norm(offsets, axis=1)
    cosines = np.divide(offsets @ axis, norms, out=np.ones_like(norms), where=norms > 0)
    inside = cosines >= math.cos(half_angle) - 1e-12
    return neighborhood.select(inside)
