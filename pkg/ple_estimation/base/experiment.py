from __future__ import annotations

import math
from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Any, ClassVar, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import special, stats

from .channel import DEFAULT_CARRIER_HZ
from .estimate import EstimatorMethod
from .routing import RoutingMode

if TYPE_CHECKING:
    from ..harness.runner import TrialRunner


class ExperimentKind(str, Enum):
    """Experiments the harness can run."""

    SHADOW_SWEEP = "shadow_sweep"
    DENSITY_SWEEP = "density_sweep"
    ROUTING_ANALYTIC = "routing_analytic"
    ROUTING_MC = "routing_mc"
    DETECT_CALIBRATION = "detect_calibration"
    SINGLE_ESTIMATE = "single_estimate"


class DetectScenario(str, Enum):
    """Reporting behaviour of the suspect in the calibration study."""

    HONEST = "honest"
    ATTACKER = "attacker"
    EQUAL_RANGE = "equal_range"


# Sweep lists left unset fall back to the defaults of the chosen experiment.
_EXPERIMENT_DEFAULTS: Dict[ExperimentKind, Dict[str, List[float]]] = {
    ExperimentKind.SHADOW_SWEEP: {
        "gammas": [2.0, 3.0, 4.0, 5.0, 6.0],
        "sigmas": [2.0, 4.0, 6.0, 8.0, 10.0, 12.0],
        "densities": [0.005],
    },
    ExperimentKind.DENSITY_SWEEP: {
        "gammas": [2.0, 3.0, 4.0, 5.0, 6.0],
        "sigmas": [12.0],
        "densities": [0.002, 0.005, 0.01],
    },
    ExperimentKind.ROUTING_ANALYTIC: {
        "gammas": [2.0],
        "sigmas": [0.0],
        "densities": [0.001],
    },
    ExperimentKind.ROUTING_MC: {
        "gammas": [1.5, 2.0, 4.0],
        "sigmas": [0.0, 8.0],
        "densities": [0.001],
    },
    ExperimentKind.DETECT_CALIBRATION: {
        "gammas": [2.0],
        "sigmas": [6.0],
        "densities": [0.005],
    },
    ExperimentKind.SINGLE_ESTIMATE: {
        "gammas": [2.0],
        "sigmas": [0.0],
        "densities": [0.005],
    },
}


# The routing experiment kind follows the routing mode
ROUTING_EXPERIMENTS: Dict[RoutingMode, ExperimentKind] = {
    RoutingMode.ANALYTIC: ExperimentKind.ROUTING_ANALYTIC,
    RoutingMode.MONTE_CARLO: ExperimentKind.ROUTING_MC,
}


class ExperimentConfig(BaseModel):
    """Every knob of an experiment run, with the simulation-table defaults."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    experiment: ExperimentKind
    dimension: int = Field(default=2, ge=1, le=3)
    transmission_range: float = Field(default=200.0, gt=0)
    field_radius_factor: float = Field(default=2.0, ge=1.0)
    edge_hearing_probability: float = Field(default=1e-3, gt=0, lt=0.5)
    gammas: Optional[List[float]] = None
    sigmas: Optional[List[float]] = None
    densities: Optional[List[float]] = None
    trials: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0)
    output_path: Optional[Path] = None
    concurrency: int = Field(default=1, ge=1)

    # channel
    ref_distance: float = Field(default=1.0, gt=0)
    carrier_frequency_hz: float = Field(default=DEFAULT_CARRIER_HZ, gt=0)
    prop_constant_db: Optional[float] = None
    tx_power_dbm: float = 0.0
    tx_power_jitter_sigma: float = Field(default=0.0, ge=0)
    nakagami_m: Optional[float] = Field(default=None, gt=0)
    slots: int = Field(default=1, ge=1)

    # estimation
    methods: List[EstimatorMethod] = Field(
        default_factory=lambda: [
            EstimatorMethod.TLS_CLOSED,
            EstimatorMethod.WTLS,
            EstimatorMethod.C_PLE,
        ]
    )
    threshold_ratio: float = Field(default=2.0, gt=1.0)
    max_pairs: Optional[int] = Field(default=500_000, ge=1)

    # routing
    routing_mode: RoutingMode = RoutingMode.MONTE_CARLO
    routing_radius: float = Field(default=200.0, gt=0)
    k_max: int = Field(default=20, ge=1)
    alphas: List[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0])

    # detection
    levels: List[float] = Field(default_factory=lambda: [0.05])
    windows: List[int] = Field(default_factory=lambda: [25])
    reported_range: float = Field(default=100.0, gt=0)
    range_ratio: float = Field(default=2.0, gt=0)
    announce_threshold: int = Field(default=2, ge=1)
    n_references: int = Field(default=5, ge=1)
    events_path: Optional[Path] = None

    # single estimate
    rss_file: Optional[Path] = None
    method: EstimatorMethod = EstimatorMethod.WTLS

    @model_validator(mode="before")
    @classmethod
    def apply_experiment_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict) or "experiment" not in data:
            return data
        kind = ExperimentKind(data["experiment"])
        defaults = _EXPERIMENT_DEFAULTS[kind]
        data = dict(data)
        implied = {k: m for m, k in ROUTING_EXPERIMENTS.items()}.get(kind)
        if implied is not None:
            requested = data.get("routing_mode")
            if requested is None:
                data["routing_mode"] = implied
            elif RoutingMode(requested) != implied:
                raise ValueError(
                    f"routing_mode {RoutingMode(requested).value!r} conflicts with {kind.value!r}"
                )
        for key, value in defaults.items():
            if data.get(key) is None:
                data[key] = list(value)
        return data

    @model_validator(mode="after")
    def validate_sweeps(self):
        for name in ("gammas", "sigmas", "densities", "levels", "windows", "alphas"):
            values = getattr(self, name)
            if not values:
                raise ValueError(f"Sweep list '{name}' must not be empty")
        if any(g <= 0 for g in self.gammas):
            raise ValueError("gammas must be positive")
        if any(s < 0 for s in self.sigmas):
            raise ValueError("sigmas must be non-negative")
        if any(p <= 0 for p in self.densities):
            raise ValueError("densities must be positive")
        if any(not 0 < level < 1 for level in self.levels):
            raise ValueError("levels must lie in (0, 1)")
        if any(w < 1 for w in self.windows):
            raise ValueError("windows must be at least 1")
        if any(a <= 0 for a in self.alphas):
            raise ValueError("alphas must be positive")
        if self.experiment == ExperimentKind.SINGLE_ESTIMATE and self.rss_file is None:
            raise ValueError("single_estimate requires rss_file")
        return self

    def field_radius_for(self, gamma: float, sigma: float) -> float:
        """
        Deployment radius for one channel cell.

        The field spans at least `field_radius_factor` transmission ranges, and
        far enough that a node on its edge is heard with probability at most
        `edge_hearing_probability`: 10·γ·log10(R / range) ≥ z·σ_eff, where z is
        the upper Normal quantile of that probability. σ_eff combines shadowing,
        transmit power jitter and the spread of slot-averaged fading in dB.
        """
        if gamma <= 0 or sigma < 0:
            raise ValueError(f"gamma must be positive and sigma non-negative, got {gamma}, {sigma}")
        variance = sigma**2 + self.tx_power_jitter_sigma**2
        if self.nakagami_m is not None:
            variance += (10.0 / math.log(10.0)) ** 2 * float(
                special.polygamma(1, self.nakagami_m * self.slots)
            )
        z = float(stats.norm.isf(self.edge_hearing_probability))
        reach = 10.0 ** (z * math.sqrt(variance) / (10.0 * gamma))
        return self.transmission_range * max(self.field_radius_factor, reach)


class CsvRow(BaseModel):
    """A result row with a fixed column order."""

    model_config = ConfigDict(frozen=True)

    columns: ClassVar[Tuple[str, ...]] = ()

    def to_csv_row(self) -> List[str]:
        return [_format_cell(getattr(self, column)) for column in self.columns]


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


class RmseRow(CsvRow):
    """Normalized RMSE of one estimator in one sweep cell."""

    columns: ClassVar[Tuple[str, ...]] = (
        "method",
        "gamma",
        "sigma",
        "density",
        "normalized_rmse",
        "trials_used",
        "trials_degenerate",
    )

    method: EstimatorMethod
    gamma: float
    sigma: float
    density: float
    normalized_rmse: Optional[float] = Field(default=None, ge=0)
    trials_used: int = Field(ge=0)
    trials_degenerate: int = Field(ge=0)

    @property
    def trials(self) -> int:
        return self.trials_used + self.trials_degenerate


class RoutingRow(CsvRow):
    """One point of a routing curve."""

    columns: ClassVar[Tuple[str, ...]] = (
        "mode",
        "k",
        "alpha",
        "gamma",
        "sigma",
        "value",
        "stderr",
    )

    mode: RoutingMode
    k: int = Field(ge=1)
    alpha: Optional[float] = None
    gamma: Optional[float] = None
    sigma: Optional[float] = None
    value: float
    stderr: Optional[float] = None


class DetectRow(CsvRow):
    """Empirical rejection rates of the range test for one scenario."""

    columns: ClassVar[Tuple[str, ...]] = (
        "scenario",
        "level",
        "I",
        "sigma",
        "false_alarm_rate",
        "detection_rate",
        "windows",
    )

    scenario: DetectScenario
    level: float
    I: int = Field(ge=1)
    sigma: float
    false_alarm_rate: Optional[float] = None
    detection_rate: Optional[float] = None
    windows: int = Field(ge=1)


class Experiment(ABC):
    """Abstract base class for harness experiments."""

    kind: ClassVar[ExperimentKind]
    row_type: ClassVar[type[CsvRow]]

    @abstractmethod
    def run(self, config: ExperimentConfig, runner: "TrialRunner") -> Sequence[CsvRow]:
        """
        Run the experiment.

        Args:
            config: Validated experiment configuration
            runner: Trial runner that owns seeding and concurrency

        Returns:
            Result rows in a deterministic order
        """
        pass
