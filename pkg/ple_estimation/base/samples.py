from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arrays import readonly_array


class RankedRssSet(BaseModel):
    """Received powers sorted strongest first, with their 1-based ranks."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rss_db: np.ndarray
    ranks: np.ndarray
    source_indices: np.ndarray

    @field_validator("rss_db", mode="before")
    @classmethod
    def _freeze_rss(cls, value):
        return readonly_array(value, ndim=1)

    @field_validator("ranks", "source_indices", mode="before")
    @classmethod
    def _freeze_indices(cls, value):
        return readonly_array(value, dtype=np.int64, ndim=1)

    @model_validator(mode="after")
    def validate_ranking(self):
        n = self.rss_db.size
        if self.ranks.size != n or self.source_indices.size != n:
            raise ValueError("rss_db, ranks and source_indices must align")
        if np.any(np.diff(self.rss_db) > 0):
            raise ValueError("rss_db must be non-increasing")
        if not np.array_equal(self.ranks, np.arange(1, n + 1)):
            raise ValueError("ranks must be exactly 1..n_hat")
        return self

    @property
    def n_hat(self) -> int:
        return int(self.rss_db.size)


class PairSampleSet(BaseModel):
    """Aligned pairwise power differences and rank-ratio estimates.

    Entry ``k`` relates ranks ``rank_pairs[k] = (i_hat, j_hat)`` with
    ``i_hat < j_hat``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    delta_p: np.ndarray
    l_hat: np.ndarray
    rank_pairs: np.ndarray
    n_hat: int = Field(ge=2)
    dimension: int = Field(ge=1, le=3)

    @field_validator("delta_p", "l_hat", mode="before")
    @classmethod
    def _freeze_values(cls, value):
        return readonly_array(value, ndim=1)

    @field_validator("rank_pairs", mode="before")
    @classmethod
    def _freeze_pairs(cls, value):
        pairs = readonly_array(value, dtype=np.int64)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError("rank_pairs must have shape (N, 2)")
        return pairs

    @model_validator(mode="after")
    def validate_alignment(self):
        n = self.delta_p.size
        if self.l_hat.size != n or self.rank_pairs.shape[0] != n:
            raise ValueError("delta_p, l_hat and rank_pairs must have identical length")
        if n and np.any(self.rank_pairs[:, 0] >= self.rank_pairs[:, 1]):
            raise ValueError("every rank pair must satisfy i_hat < j_hat")
        return self

    @property
    def sample_count(self) -> int:
        return int(self.delta_p.size)
