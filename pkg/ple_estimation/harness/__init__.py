from __future__ import annotations

from .config import load_config, read_config_file, routing_experiment
from .runner import AsyncTrialRunner, TrialRunner, make_runner, trial_generator
from .output import write_csv, write_event_log
from .experiments import (
    EXPERIMENTS,
    DensitySweepExperiment,
    DetectCalibrationExperiment,
    RoutingAnalyticExperiment,
    RoutingMonteCarloExperiment,
    ShadowSweepExperiment,
    channel_for,
    estimate_trial,
    normalized_rmse,
    parse_rss_file,
    run_density_sweep,
    run_detect_calibration,
    run_detection_network,
    run_experiment,
    run_routing,
    run_shadow_sweep,
    single_estimate,
)

__all__ = [
    # Configuration
    "load_config",
    "read_config_file",
    "routing_experiment",
    # Runners
    "TrialRunner",
    "AsyncTrialRunner",
    "make_runner",
    "trial_generator",
    # Output
    "write_csv",
    "write_event_log",
    # Experiments
    "EXPERIMENTS",
    "ShadowSweepExperiment",
    "DensitySweepExperiment",
    "RoutingAnalyticExperiment",
    "RoutingMonteCarloExperiment",
    "DetectCalibrationExperiment",
    "channel_for",
    "estimate_trial",
    "normalized_rmse",
    "parse_rss_file",
    "run_shadow_sweep",
    "run_density_sweep",
    "run_detect_calibration",
    "run_detection_network",
    "run_routing",
    "run_experiment",
    "single_estimate",
]
