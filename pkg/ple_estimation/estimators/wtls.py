"""Weighted TLS with weights from the rank-mismatch error bound."""

from __future__ import annotations

import logging
from typing import Any, Dict, Optional

import numpy as np

from ..base import EstimateReport, EstimatorMethod, PairSampleSet, PleEstimator, WeightSet
from ..exceptions import InvalidArgumentError
from .tls import _require_samples, closed_form_solution

logger = logging.getLogger(__name__)


def build_weights(samples: PairSampleSet) -> WeightSet:
    """
    ω = 1 / max{(n̂/î + ĵ - 2)², (n̂/ĵ + î - 2)²} for every rank pair.

    The constant prefactor of the error bound is left out; the weighted
    estimate does not change under a uniform rescaling of the weights.
    """
    n = float(samples.n_hat)
    i_hat = samples.rank_pairs[:, 0].astype(float)
    j_hat = samples.rank_pairs[:, 1].astype(float)
    bound = np.maximum((n / i_hat + j_hat - 2.0) ** 2, (n / j_hat + i_hat - 2.0) ** 2)
    return WeightSet(weights=1.0 / bound)


def wtls(samples: PairSampleSet, weights: WeightSet) -> EstimateReport:
    """
    Weighted closed-form TLS estimate.

    Weights enter as per-sample multipliers of the three moment sums.

    Args:
        samples: Pair sample set
        weights: Positive weights aligned with ``samples``

    Returns:
        EstimateReport with η′ in ``eta`` and ``weighted`` set
    """
    _require_samples(samples)
    if len(weights) != samples.sample_count:
        raise InvalidArgumentError(
            f"{len(weights)} weights for {samples.sample_count} samples"
        )
    w = weights.weights
    dp, lh = samples.delta_p, samples.l_hat
    return closed_form_solution(
        EstimatorMethod.WTLS,
        a=float(np.sum(w * dp * dp)),
        b=float(np.sum(w * lh * dp)),
        c=float(np.sum(w * lh * lh)),
        sample_count=samples.sample_count,
        weighted=True,
    )


class WeightedTlsEstimator(PleEstimator):
    """WTLS estimator using :func:`build_weights`."""

    method = EstimatorMethod.WTLS

    def __init__(self, config: Optional[Dict[str, Any]] = None) -> None:
        self.config = config or {}

    def estimate(self, samples: PairSampleSet) -> EstimateReport:
        return wtls(samples, build_weights(samples))
