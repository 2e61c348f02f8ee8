"""
PLE Estimation Library

Self-estimation of the path-loss exponent from locally ranked received
signal strengths, with the Monte Carlo experiments that evaluate it.

Usage:
    from ple_estimation import (
        ChannelParams, SpaceConfig, EstimatorFactory,
        calibrate_sensitivity, deploy_uniform, observe_neighborhood,
        rank_rss, build_samples,
    )

    space = SpaceConfig(dimension=2, field_radius=1000.0, density=0.005)
    params = ChannelParams(ple=3.0, shadow_sigma=6.0)
    params = params.model_copy(
        update={"rx_sensitivity_dbm": calibrate_sensitivity(params, 200.0)}
    )

    field = deploy_uniform(space, seed=1)
    neighborhood = observe_neighborhood(field, params, gen=2)
    samples = build_samples(rank_rss(neighborhood), d=2)

    report = EstimatorFactory.create("wtls").estimate(samples)
    print(report.gamma_hat)
"""

from .base import (
    # Space
    SpaceConfig,
    DeploymentField,
    # Channel
    ChannelParams,
    RssObservation,
    Neighborhood,
    # Samples
    RankedRssSet,
    PairSampleSet,
    # Estimation
    EstimatorMethod,
    EstimateReport,
    WeightSet,
    PleEstimator,
    # Detection
    Decision,
    ConfirmationStatus,
    ReferenceIdentity,
    TimedObservation,
    SuspectRecord,
    RangeTestOutcome,
    DetectionEvent,
    # Routing
    RoutingMode,
    RoutingScenario,
    # Experiments
    ExperimentKind,
    DetectScenario,
    ExperimentConfig,
    RmseRow,
    RoutingRow,
    DetectRow,
)

from .geometry import (
    unit_ball_coeff,
    sector_coeff,
    node_count,
    deploy_uniform,
    nearest_distances,
    nearest_radii,
    kth_nearest_distance_pdf,
    kth_nearest_distance_cdf,
)
from .channel import (
    friis_constant_db,
    mean_path_loss_db,
    calibrate_sensitivity,
    sample_instantaneous_power,
    average_over_slots,
    sample_rss,
    observe_neighborhood,
)
from .regress import rank_rss, pair_delta_p, l_hat, build_samples, filter_angular
from .estimators import (
    tls_svd,
    tls_closed_form,
    tls_roots,
    tls_cost,
    build_weights,
    wtls,
    c_ple,
)
from .factory import EstimatorFactory
from .detect import (
    reference_rss_db,
    record_observation,
    np_range_test,
    announce_and_confirm,
    trust_region_radius_band,
    AnnouncementLedger,
    DetectingReference,
)
from .routing import expected_path_loss, k_efficiency, simulate_kth_routing

from .exceptions import (
    InvalidArgumentError,
    UnsupportedDimensionError,
    NearFieldError,
    ZeroDistanceError,
    EmptyFieldError,
    InsufficientSamplesError,
    InsufficientObservationsError,
    UndefinedEstimateError,
    ConfigurationError,
    InputFormatError,
    EstimatorNotSupportedError,
)


__all__ = [
    # Factory
    "EstimatorFactory",
    # Types
    "SpaceConfig",
    "DeploymentField",
    "ChannelParams",
    "RssObservation",
    "Neighborhood",
    "RankedRssSet",
    "PairSampleSet",
    "EstimatorMethod",
    "EstimateReport",
    "WeightSet",
    "PleEstimator",
    "Decision",
    "ConfirmationStatus",
    "ReferenceIdentity",
    "TimedObservation",
    "SuspectRecord",
    "RangeTestOutcome",
    "DetectionEvent",
    "RoutingMode",
    "RoutingScenario",
    "ExperimentKind",
    "DetectScenario",
    "ExperimentConfig",
    "RmseRow",
    "RoutingRow",
    "DetectRow",
    # Geometry
    "unit_ball_coeff",
    "sector_coeff",
    "node_count",
    "deploy_uniform",
    "nearest_distances",
    "nearest_radii",
    "kth_nearest_distance_pdf",
    "kth_nearest_distance_cdf",
    # Channel
    "friis_constant_db",
    "mean_path_loss_db",
    "calibrate_sensitivity",
    "sample_instantaneous_power",
    "average_over_slots",
    "sample_rss",
    "observe_neighborhood",
    # Regression
    "rank_rss",
    "pair_delta_p",
    "l_hat",
    "build_samples",
    "filter_angular",
    # Estimators
    "tls_svd",
    "tls_closed_form",
    "tls_roots",
    "tls_cost",
    "build_weights",
    "wtls",
    "c_ple",
    # Detection
    "reference_rss_db",
    "record_observation",
    "np_range_test",
    "announce_and_confirm",
    "trust_region_radius_band",
    "AnnouncementLedger",
    "DetectingReference",
    # Routing
    "expected_path_loss",
    "k_efficiency",
    "simulate_kth_routing",
    # Exceptions
    "InvalidArgumentError",
    "UnsupportedDimensionError",
    "NearFieldError",
    "ZeroDistanceError",
    "EmptyFieldError",
    "InsufficientSamplesError",
    "InsufficientObservationsError",
    "UndefinedEstimateError",
    "ConfigurationError",
    "InputFormatError",
    "EstimatorNotSupportedError",
]

__version__ = "0.1.0"
