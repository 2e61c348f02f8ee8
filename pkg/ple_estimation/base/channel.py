from __future__ import annotations

import math
import warnings
from collections.abc import Sequence
from typing import Any, Iterator, Optional, overload

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import readonly_array

SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_CARRIER_HZ = 2401e6


def friis_constant_db(frequency_hz: float, ref_distance: float = 1.0) -> float:
    """10*log10(C1) for free-space propagation with unit antenna gains.

    C1 is the received-to-transmitted power ratio at the reference distance.
    """
    wavelength = SPEED_OF_LIGHT / frequency_hz
    return 20.0 * math.log10(wavelength / (4.0 * math.pi * ref_distance))


class ChannelParams(BaseModel):
    """Log-distance path loss with lognormal shadowing and optional fading."""

    model_config = ConfigDict(frozen=True)

    ple: float = Field(gt=0, description="Path-loss exponent")
    shadow_sigma: float = Field(default=0.0, ge=0, description="Shadowing deviation in dB")
    ref_distance: float = Field(default=1.0, gt=0)
    carrier_frequency_hz: float = Field(default=DEFAULT_CARRIER_HZ, gt=0)
    prop_constant_db: Optional[float] = None
    tx_power_dbm: float = 0.0
    rx_sensitivity_dbm: float = float("-inf")
    tx_power_jitter_sigma: float = Field(default=0.0, ge=0)
    nakagami_m: Optional[float] = Field(default=None, gt=0)
    slots: int = Field(default=1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def fill_prop_constant(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("prop_constant_db") is None:
            data = dict(data)
            data["prop_constant_db"] = friis_constant_db(
                data.get("carrier_frequency_hz", DEFAULT_CARRIER_HZ),
                data.get("ref_distance", 1.0),
            )
        return data

    @model_validator(mode="after")
    def warn_unrealistic_ple(self):
        if not 2.0 <= self.ple <= 6.0:
            warnings.warn(
                f"Path-loss exponent {self.ple} is outside the realistic range [2, 6]",
                UserWarning,
                stacklevel=2,
            )
        return self


class RssObservation(BaseModel):
    """One received signal strength at the estimating node.

    ``true_distance`` is ground truth for evaluation; estimators never read it.
    """

    model_config = ConfigDict(frozen=True)

    node_index: int = Field(ge=0)
    rss_db: float = Field(allow_inf_nan=False)
    true_distance: float = Field(ge=0)


class Neighborhood(Sequence):
    """The reachable neighbours of a node, stored column-wise.

    Behaves as a read-only sequence of :class:`RssObservation`.
    """

    def __init__(self, node_index: Any, rss_db: Any, true_distance: Any) -> None:
        self._node_index = readonly_array(node_index, dtype=np.int64, ndim=1)
        self._rss_db = readonly_array(rss_db, ndim=1)
        self._true_distance = readonly_array(true_distance, ndim=1)
        if not (self._node_index.size == self._rss_db.size == self._true_distance.size):
            raise ValueError("Neighborhood columns must have equal length")

    @classmethod
    def from_observations(cls, observations: Sequence[RssObservation]) -> "Neighborhood":
        if isinstance(observations, Neighborhood):
            return observations
        return cls(
            [o.node_index for o in observations],
            [o.rss_db for o in observations],
            [o.true_distance for o in observations],
        )

    @overload
    def __getitem__(self, index: int) -> RssObservation: ...

    @overload
    def __getitem__(self, index: slice) -> "Neighborhood": ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Neighborhood(
                self._node_index[index], self._rss_db[index], self._true_distance[index]
            )
        return RssObservation(
            node_index=int(self._node_index[index]),
            rss_db=float(self._rss_db[index]),
            true_distance=float(self._true_distance[index]),
        )

    def __len__(self) -> int:
        return int(self._rss_db.size)

    def __iter__(self) -> Iterator[RssObservation]:
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"Neighborhood(n_hat={len(self)})"

    @property
    def node_index(self) -> np.ndarray:
        return self._node_index

    @property
    def rss_db(self) -> np.ndarray:
        return self._rss_db

    @property
    def true_distance(self) -> np.ndarray:
        return self._true_distance

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    def select(self, mask: np.ndarray) -> "Neighborhood":
        """Keep the observations where ``mask`` is true."""
        mask = np.asarray(mask, dtype=bool)
        return Neighborhood(
            self._node_index[mask], self._rss_db[mask], self._true_distance[mask]
        )

    def count_above(self, threshold_dbm: float) -> int:
        """Number of observations strictly above a receiver sensitivity."""
        return int(np.count_nonzero(self._rss_db > threshold_dbm))
