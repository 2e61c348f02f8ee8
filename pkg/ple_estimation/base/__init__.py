from __future__ import annotations

from .space import SpaceConfig, DeploymentField
from .channel import (
    ChannelParams,
    RssObservation,
    Neighborhood,
    friis_constant_db,
)
from .samples import RankedRssSet, PairSampleSet
from .estimate import EstimatorMethod, EstimateReport, WeightSet, PleEstimator
from .detection import (
    Decision,
    ConfirmationStatus,
    ReferenceIdentity,
    TimedObservation,
    SuspectRecord,
    RangeTestOutcome,
    DetectionEvent,
)
from .routing import RoutingMode, RoutingScenario
from .experiment import (
    ExperimentKind,
    DetectScenario,
    ExperimentConfig,
    CsvRow,
    RmseRow,
    RoutingRow,
    DetectRow,
    Experiment,
)


__all__ = [
    # Space
    "SpaceConfig",
    "DeploymentField",
    # Channel
    "ChannelParams",
    "RssObservation",
    "Neighborhood",
    "friis_constant_db",
    # Samples
    "RankedRssSet",
    "PairSampleSet",
    # Estimation
    "EstimatorMethod",
    "EstimateReport",
    "WeightSet",
    "PleEstimator",
    # Detection
    "Decision",
    "ConfirmationStatus",
    "ReferenceIdentity",
    "TimedObservation",
    "SuspectRecord",
    "RangeTestOutcome",
    "DetectionEvent",
    # Routing
    "RoutingMode",
    "RoutingScenario",
    # Experiments
    "ExperimentKind",
    "DetectScenario",
    "ExperimentConfig",
    "CsvRow",
    "RmseRow",
    "RoutingRow",
    "DetectRow",
    "Experiment",
]
