"""
Total least squares fits of ΔP = γ·L̂, by singular value decomposition and by
the closed form of the stationary points.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..base import EstimateReport, EstimatorMethod, PairSampleSet, PleEstimator, WeightSet
from ..exceptions import InsufficientSamplesError

logger = logging.getLogger(__name__)

# |L̂ᵀΔP| at or below this fraction of ‖L̂‖‖ΔP‖ is treated as zero
DEGENERATE_TOLERANCE = 1e-12

# Relative singular-value gap below which the two right singular vectors tie
SVD_TIE_TOLERANCE = 1e-8

NEGATIVE_CORRELATION = "L̂ᵀΔP is negative; the positive root maximises the cost"


def _require_samples(samples: PairSampleSet, minimum: int = 1) -> None:
    if samples.sample_count < minimum:
        raise InsufficientSamplesError(
            f"At least {minimum} pair sample(s) required, got {samples.sample_count}",
            required=minimum,
            actual=samples.sample_count,
        )


def tls_roots(eta: float) -> Tuple[float, float]:
    """
    Both stationary points of the TLS cost for a given η.

    Returns:
        (positive root, negative root); their product is -1
    """
    s = math.hypot(1.0, eta)
    if eta >= 0:
        positive = eta + s
        negative = -1.0 / positive
    else:
        negative = eta - s
        positive = -1.0 / negative
    return positive, negative


def tls_cost(
    samples: PairSampleSet, gamma: float, weights: Optional[WeightSet] = None
) -> float:
    """Orthogonal-residual cost Σ ω (ΔP - γ L̂)² / (1 + γ²)."""
    residual = samples.delta_p - gamma * samples.l_hat
    w = 1.0 if weights is None else weights.weights
    return float(np.sum(w * residual**2) / (1.0 + gamma**2))


def closed_form_solution(
    method: EstimatorMethod,
    a: float,
    b: float,
    c: float,
    sample_count: int,
    weighted: bool = False,
) -> EstimateReport:
    """
    Positive root from the moment sums a = ΔPᵀWΔP, b = L̂ᵀWΔP, c = L̂ᵀWL̂.

    η = (a - c) / (2b). When b < 0 the positive root is the maximiser of
    the cost rather than the minimiser. It is still returned, with `reason`
    set so callers can tell the fit ran against the data.
    """
    if abs(b) <= DEGENERATE_TOLERANCE * math.sqrt(a * c):
        logger.debug("%s: L̂ᵀΔP vanishes, eta undefined", method.value)
        return EstimateReport(
            method=method,
            sample_count=sample_count,
            weighted=weighted,
            degenerate=True,
            reason="L̂ᵀΔP is zero; eta is undefined",
        )
    eta = (a - c) / (2.0 * b)
    gamma_hat, _ = tls_roots(eta)
    reason = None
    if b < 0:
        logger.debug("%s: %s", method.value, NEGATIVE_CORRELATION)
        reason = NEGATIVE_CORRELATION
    return EstimateReport(
        method=method,
        gamma_hat=gamma_hat,
        sample_count=sample_count,
        eta=eta,
        weighted=weighted,
        reason=reason,
    )


def tls_closed_form(samples: PairSampleSet) -> EstimateReport:
    """
    Closed-form TLS estimate in a single pass over the samples.

    Args:
        samples: Pair sample set with at least one entry

    Returns:
        EstimateReport carrying γ̂ and η, degenerate when L̂ᵀΔP = 0
    """
    _require_samples(samples)
    dp, lh = samples.delta_p, samples.l_hat
    return closed_form_solution(
        EstimatorMethod.TLS_CLOSED,
        a=float(dp @ dp),
        b=float(lh @ dp),
        c=float(lh @ lh),
        sample_count=samples.sample_count,
    )


def tls_svd(samples: PairSampleSet) -> EstimateReport:
    """
    TLS estimate from the right singular vector of the smallest singular
    value of the N x 2 matrix [L̂ ΔP].

    The sign is normalised so that γ̂ > 0: when the smallest singular vector
    gives a negative slope, the perpendicular vector is used instead.
    Singular-value ties and vertical solutions are flagged degenerate.
    """
    _require_samples(samples)
    n = samples.sample_count
    matrix = np.column_stack((samples.l_hat, samples.delta_p))
    # a single row needs the full V to expose the null direction
    _, singular, vt = np.linalg.svd(matrix, full_matrices=n < 2)
    singular = np.pad(singular, (0, 2 - singular.size))

    def degenerate(reason: str) -> EstimateReport:
        logger.debug("tls_svd: %s", reason)
        return EstimateReport(
            method=EstimatorMethod.TLS_SVD, sample_count=n, degenerate=True, reason=reason
        )

    if singular[0] == 0.0:
        return degenerate("sample matrix has rank zero")
    if (singular[0] - singular[1]) <= SVD_TIE_TOLERANCE * singular[0]:
        return degenerate("smallest singular value is not unique")

    v_l, v_p = vt[1]
    if v_p == 0.0:
        return degenerate("smallest singular vector gives a vertical solution")
    gamma_hat = -v_l / v_p
    if gamma_hat == 0.0:
        return degenerate("smallest singular vector gives a zero slope")
    reason = None
    if gamma_hat < 0:
        gamma_hat = -1.0 / gamma_hat
        reason = NEGATIVE_CORRELATION
    return EstimateReport(
        method=EstimatorMethod.TLS_SVD, gamma_hat=gamma_hat, sample_count=n, reason=reason
    )


class SvdTlsEstimator(PleEstimator):
    """
    TLS estimator solved by singular value decomposition.

    Usage:
        estimator = EstimatorFactory.create("tls_svd")
        report = estimator.estimate(samples)
    """

    method = EstimatorMethod.TLS_SVD

    def __init__(self, config: Optional[Dict[str, Any]] = None) -> None:
        self.config = config or {}

    def estimate(self, samples: PairSampleSet) -> EstimateReport:
        return tls_svd(samples)


class ClosedFormTlsEstimator(PleEstimator):
    """TLS estimator solved in closed form, linear in the number of samples."""

    method = EstimatorMethod.TLS_CLOSED

    def __init__(self, config: Optional[Dict[str, Any]] = None) -> None:
        self.config = config or {}

    def estimate(self, samples: PairSampleSet) -> EstimateReport:
        return tls_closed_form(samples)
