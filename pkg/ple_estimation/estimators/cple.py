"""
Cardinality-based baseline: the PLE from the change in neighbourhood size
when the receiver sensitivity is raised.
"""

from __future__ import annotations

import logging
import math

from ..base import EstimateReport, EstimatorMethod, Neighborhood
from ..exceptions import InsufficientSamplesError, InvalidArgumentError, UndefinedEstimateError

logger = logging.getLogger(__name__)


def c_ple(
    n1_hat: int,
    n2_hat: int,
    p_thres1: float,
    p_thres2: float,
    dimension: int = 2,
) -> EstimateReport:
    """
    γ̂ = d·ln(P_thres2 / P_thres1) / ln(n̂1 / n̂2), thresholds compared in watts.

    Args:
        n1_hat: Neighbourhood size at sensitivity ``p_thres1``
        n2_hat: Neighbourhood size at sensitivity ``p_thres2``
        p_thres1: First sensitivity in dBm
        p_thres2: Second sensitivity in dBm
        dimension: Dimension of the deployment

    Returns:
        EstimateReport; flagged degenerate when γ̂ <= 0

    Raises:
        InsufficientSamplesError: if either neighbourhood is empty
        UndefinedEstimateError: if both neighbourhoods have the same size
    """
    if dimension not in (1, 2, 3):
        raise InvalidArgumentError(f"dimension must be 1, 2 or 3, got {dimension}")
    if n1_hat < 1 or n2_hat < 1:
        raise InsufficientSamplesError(
            f"C-PLE needs non-empty neighbourhoods, got {n1_hat} and {n2_hat}",
            required=1,
            actual=min(n1_hat, n2_hat),
        )
    if p_thres1 == p_thres2:
        raise InvalidArgumentError("The two sensitivities must differ")
    if n1_hat == n2_hat:
        raise UndefinedEstimateError(
            f"Neighbourhood size did not change ({n1_hat}); C-PLE is undefined"
        )

    log_power_ratio = (p_thres2 - p_thres1) * math.log(10.0) / 10.0
    gamma_hat = dimension * log_power_ratio / math.log(n1_hat / n2_hat)
    if gamma_hat <= 0:
        logger.debug("C-PLE gave non-positive estimate %.4f", gamma_hat)
        return EstimateReport(
            method=EstimatorMethod.C_PLE,
            gamma_hat=gamma_hat,
            sample_count=n1_hat,
            degenerate=True,
            reason="non-positive estimate; the neighbourhood grew with the sensitivity",
        )
    return EstimateReport(method=EstimatorMethod.C_PLE, gamma_hat=gamma_hat, sample_count=n1_hat)


def c_ple_from_neighborhood(
    neighborhood: Neighborhood,
    p_thres1: float,
    threshold_ratio: float = 2.0,
    dimension: int = 2,
) -> EstimateReport:
    """
    C-PLE on one snapshot: both counts come from the same observed powers,
    the second above ``threshold_ratio`` times the first sensitivity.
    """
    if threshold_ratio <= 0 or threshold_ratio == 1:
        raise InvalidArgumentError(f"threshold_ratio must be positive and not 1, got {threshold_ratio}")
    p_thres2 = p_thres1 + 10.0 * math.log10(threshold_ratio)
    return c_ple(
        neighborhood.count_above(p_thres1),
        neighborhood.count_above(p_thres2),
        p_thres1,
        p_thres2,
        dimension=dimension,
    )
