from __future__ import annotations

from .tls import (
    ClosedFormTlsEstimator,
    SvdTlsEstimator,
    closed_form_solution,
    tls_closed_form,
    tls_cost,
    tls_roots,
    tls_svd,
)
from .wtls import WeightedTlsEstimator, build_weights, wtls
from .cple import c_ple, c_ple_from_neighborhood

__all__ = [
    "SvdTlsEstimator",
    "ClosedFormTlsEstimator",
    "WeightedTlsEstimator",
    "tls_svd",
    "tls_closed_form",
    "tls_roots",
    "tls_cost",
    "closed_form_solution",
    "build_weights",
    "wtls",
    "c_ple",
    "c_ple_from_neighborhood",
]
