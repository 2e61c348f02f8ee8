from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import readonly_array
from .samples import PairSampleSet


class EstimatorMethod(str, Enum):
    """Path-loss exponent estimators."""

    TLS_SVD = "tls_svd"
    TLS_CLOSED = "tls"
    WTLS = "wtls"
    C_PLE = "c_ple"


class EstimateReport(BaseModel):
    """Outcome of a single estimate.

    A degenerate report carries the reason instead of a trustworthy value;
    ``gamma_hat`` may then be ``None`` or a flagged value.
    """

    model_config = ConfigDict(frozen=True)

    method: EstimatorMethod
    gamma_hat: Optional[float] = None
    sample_count: int = Field(ge=0)
    eta: Optional[float] = None
    weighted: bool = False
    degenerate: bool = False
    reason: Optional[str] = None

    @model_validator(mode="after")
    def validate_estimate(self):
        if self.degenerate and not self.reason:
            raise ValueError("A degenerate estimate must state its reason")
        if not self.degenerate:
            if self.gamma_hat is None:
                raise ValueError("A non-degenerate estimate must carry gamma_hat")
            if self.method != EstimatorMethod.C_PLE and self.gamma_hat <= 0:
                raise ValueError("TLS-family estimates must be positive")
        return self


class WeightSet(BaseModel):
    """Per-sample weights aligned with a :class:`PairSampleSet`."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: np.ndarray

    @field_validator("weights", mode="before")
    @classmethod
    def _freeze_weights(cls, value):
        return readonly_array(value, ndim=1)

    @model_validator(mode="after")
    def validate_weights(self):
        if not np.all(self.weights > 0):
            raise ValueError("Every weight must be positive")
        return self

    def __len__(self) -> int:
        return int(self.weights.size)


class PleEstimator(ABC):
    """Abstract base class for estimators that consume pair samples."""

    method: EstimatorMethod

    @abstractmethod
    def estimate(self, samples: PairSampleSet) -> EstimateReport:
        """
        Estimate the path-loss exponent from a pair sample set.

        Args:
            samples: Aligned power differences and rank-ratio estimates

        Returns:
            EstimateReport, flagged degenerate when the estimate is undefined
        """
        pass
