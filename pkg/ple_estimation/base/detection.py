from __future__ import annotations

from enum import Enum
from typing import ClassVar, List, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .experiment import CsvRow


class Decision(str, Enum):
    """Outcome of a range test."""

    TRUST = "trust"
    ATTACKER = "attacker"


class ConfirmationStatus(str, Enum):
    """Standing of a suspect in the announcement ledger."""

    UNANNOUNCED = "unannounced"
    ANNOUNCED = "announced"
    CONFIRMED = "confirmed"


class ReferenceIdentity(BaseModel):
    """A reference node: its location and its locally estimated channel."""

    model_config = ConfigDict(frozen=True)

    node_id: str
    own_location: Tuple[float, ...]
    self_gamma: float = Field(gt=0)
    shadow_sigma: float = Field(gt=0)


class TimedObservation(BaseModel):
    """Actual minus reference RSS at one instant, in dB."""

    model_config = ConfigDict(frozen=True)

    time: float
    value: float


class SuspectRecord(BaseModel):
    """Observations a detecting node keeps about one reporting node."""

    suspect_id: str
    reported_location: Tuple[float, ...]
    observations: List[TimedObservation] = Field(default_factory=list)
    announcements_received: int = Field(default=0, ge=0)

    def append(self, observation: TimedObservation) -> None:
        if self.observations and observation.time < self.observations[-1].time:
            raise ValueError("Observations must be appended in time order")
        self.observations.append(observation)

    def values(self) -> List[float]:
        return [o.value for o in self.observations]


class RangeTestOutcome(BaseModel):
    """A Neyman-Pearson range test decision with its statistic."""

    model_config = ConfigDict(frozen=True)

    decision: Decision
    rho: float
    threshold: float = Field(description="Critical value for rho squared")
    window: int = Field(ge=1)


class DetectionEvent(CsvRow):
    """One row of the detection event log."""

    columns: ClassVar[Tuple[str, ...]] = (
        "time",
        "detector_id",
        "suspect_id",
        "rho",
        "threshold",
        "decision",
    )

    time: float
    detector_id: str
    suspect_id: str
    rho: float
    threshold: float
    decision: Decision
