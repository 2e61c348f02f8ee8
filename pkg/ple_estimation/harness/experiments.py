"""
Monte Carlo experiments: estimator accuracy sweeps, range-test calibration
and the kth-neighbour routing study.

Each experiment is a pure function of its configuration; the trial runner
owns seeding, so output is identical for a given seed whatever the
concurrency.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Type, Union

import numpy as np

from ..base import (
    ChannelParams,
    CsvRow,
    Decision,
    DetectionEvent,
    DetectRow,
    DetectScenario,
    EstimateReport,
    EstimatorMethod,
    Experiment,
    ExperimentConfig,
    ExperimentKind,
    ReferenceIdentity,
    RmseRow,
    RoutingMode,
    RoutingRow,
    RoutingScenario,
    RssObservation,
    SpaceConfig,
    SuspectRecord,
)
from ..channel import calibrate_sensitivity, observe_neighborhood
from ..detect import (
    AnnouncementLedger,
    DetectingReference,
    c3_constant,
    estimate_shadow_sigma,
    np_range_test,
    record_observation,
    reference_rss_db,
)
from ..estimators import c_ple_from_neighborhood
from ..exceptions import (
    ConfigurationError,
    EmptyFieldError,
    InputFormatError,
    InsufficientSamplesError,
    InvalidArgumentError,
    UndefinedEstimateError,
)
from ..factory import EstimatorFactory
from ..geometry import deploy_uniform
from ..regress import build_samples, rank_rss
from ..routing import k_efficiency, simulate_kth_routing
from .output import write_event_log
from .runner import TrialRunner, make_runner, trial_generator

logger = logging.getLogger(__name__)

TrialEstimates = Dict[EstimatorMethod, Optional[float]]


def normalized_rmse(estimates: Sequence[float], true_gamma: float) -> float:
    """
    Root mean squared relative error √(mean(((γ̂ - γ)/γ)²)).

    Raises:
        InvalidArgumentError: for an empty estimate set or a non-positive γ
    """
    values = np.asarray(estimates, dtype=float)
    if values.size == 0:
        raise InvalidArgumentError("normalized_rmse needs at least one estimate")
    if true_gamma <= 0:
        raise InvalidArgumentError(f"true_gamma must be positive, got {true_gamma}")
    return float(np.sqrt(np.mean(((values - true_gamma) / true_gamma) ** 2)))


def channel_for(config: ExperimentConfig, gamma: float, sigma: float) -> ChannelParams:
    """Channel of one sweep cell, with the sensitivity set to reach the transmission range."""
    params = ChannelParams(
        ple=gamma,
        shadow_sigma=sigma,
        ref_distance=config.ref_distance,
        carrier_frequency_hz=config.carrier_frequency_hz,
        prop_constant_db=config.prop_constant_db,
        tx_power_dbm=config.tx_power_dbm,
        tx_power_jitter_sigma=config.tx_power_jitter_sigma,
        nakagami_m=config.nakagami_m,
        slots=config.slots,
    )
    sensitivity = calibrate_sensitivity(params, config.transmission_range)
    return params.model_copy(update={"rx_sensitivity_dbm": sensitivity})


def estimate_trial(
    config: ExperimentConfig,
    params: ChannelParams,
    space: SpaceConfig,
    gen: np.random.Generator,
) -> TrialEstimates:
    """
    One trial: deploy, observe at the centre node and run every configured
    estimator on the same snapshot. Degenerate or undefined estimates are None.
    """
    estimates: TrialEstimates = {method: None for method in config.methods}
    field = deploy_uniform(space, gen)
    neighborhood = observe_neighborhood(field, params, gen)

    samples = None
    if len(neighborhood) >= 2:
        samples = build_samples(rank_rss(neighborhood), space.dimension, config.max_pairs, gen)

    for method in config.methods:
        if method == EstimatorMethod.C_PLE:
            try:
                report = c_ple_from_neighborhood(
                    neighborhood,
                    params.rx_sensitivity_dbm,
                    config.threshold_ratio,
                    space.dimension,
                )
            except (InsufficientSamplesError, UndefinedEstimateError) as e:
                logger.debug("C-PLE skipped: %s", e)
                continue
        elif samples is None:
            continue
        else:
            report = EstimatorFactory.create(method).estimate(samples)
        if not report.degenerate:
            estimates[method] = report.gamma_hat
    return estimates


def _rmse_cell(
    config: ExperimentConfig,
    runner: TrialRunner,
    gamma: float,
    sigma: float,
    density: float,
    cell_key: Tuple[int, ...],
) -> List[RmseRow]:
    params = channel_for(config, gamma, sigma)
    space = SpaceConfig(
        dimension=config.dimension,
        field_radius=config.field_radius_for(gamma, sigma),
        density=density,
    )
    logger.debug("gamma=%g sigma=%g: field radius %.1f m", gamma, sigma, space.field_radius)

    def trial(gen: np.random.Generator, index: int) -> TrialEstimates:
        try:
            return estimate_trial(config, params, space, gen)
        except EmptyFieldError:
            return {method: None for method in config.methods}

    results = runner.run(trial, config.trials, cell_key)
    rows = []
    for method in config.methods:
        used = [r[method] for r in results if r[method] is not None]
        rows.append(
            RmseRow(
                method=method,
                gamma=gamma,
                sigma=sigma,
                density=density,
                normalized_rmse=normalized_rmse(used, gamma) if used else None,
                trials_used=len(used),
                trials_degenerate=len(results) - len(used),
            )
        )
    logger.info(
        "gamma=%g sigma=%g density=%g: %s",
        gamma,
        sigma,
        density,
        ", ".join(f"{r.method.value}={r.normalized_rmse}" for r in rows),
    )
    return rows


def run_shadow_sweep(
    config: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> List[RmseRow]:
    """
    Estimator accuracy against shadowing strength.

    Rows are ordered by density, γ, σ, then method.
    """
    runner = runner or make_runner(config.seed, config.concurrency)
    rows: List[RmseRow] = []
    for di, density in enumerate(config.densities):
        for gi, gamma in enumerate(config.gammas):
            for si, sigma in enumerate(config.sigmas):
                rows.extend(_rmse_cell(config, runner, gamma, sigma, density, (gi, si, di)))
    return rows


def run_density_sweep(
    config: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> List[RmseRow]:
    """
    Estimator accuracy against node density, same per-trial protocol as the
    shadowing sweep. Rows are ordered by σ, γ, density, then method.
    """
    runner = runner or make_runner(config.seed, config.concurrency)
    rows: List[RmseRow] = []
    for si, sigma in enumerate(config.sigmas):
        for gi, gamma in enumerate(config.gammas):
            for di, density in enumerate(config.densities):
                rows.extend(_rmse_cell(config, runner, gamma, sigma, density, (gi, si, di)))
    return rows


def _unit(dimension: int, index: int = 0) -> np.ndarray:
    axis = np.zeros(dimension)
    axis[index % dimension] = 1.0
    return axis


def suspect_true_location(
    scenario: DetectScenario, reported: np.ndarray, range_ratio: float
) -> np.ndarray:
    """Where the suspect really is, relative to a detector at the origin."""
    if scenario == DetectScenario.HONEST:
        return reported
    if scenario == DetectScenario.ATTACKER:
        return reported * range_ratio
    # same range, different place
    if reported.size == 1:
        return -reported
    rotated = np.zeros_like(reported)
    rotated[0], rotated[1] = -reported[1], reported[0]
    return rotated


def _rss_between(
    a: np.ndarray, b: np.ndarray, c3: float, gamma: float, ref_distance: float
) -> np.ndarray:
    distance = np.maximum(np.linalg.norm(a - b, axis=-1), ref_distance)
    return c3 - 10.0 * gamma * np.log10(distance)


def _calibration_cell(
    config: ExperimentConfig,
    runner: TrialRunner,
    scenario: DetectScenario,
    level: float,
    window: int,
    sigma: float,
    gamma: float,
    cell_key: Tuple[int, ...],
) -> DetectRow:
    params = channel_for(config, gamma, sigma)
    c3 = c3_constant(params.tx_power_dbm, params.prop_constant_db, gamma, params.ref_distance)
    identity = ReferenceIdentity(
        node_id="B",
        own_location=tuple(np.zeros(config.dimension)),
        self_gamma=gamma,
        shadow_sigma=sigma,
    )
    reported = config.reported_range * _unit(config.dimension)
    actual_location = suspect_true_location(scenario, reported, config.range_ratio)
    expected = reference_rss_db(identity, reported, c3)
    mean_actual = float(
        _rss_between(actual_location, np.zeros(config.dimension), c3, gamma, params.ref_distance)
    )

    def trial(gen: np.random.Generator, index: int) -> bool:
        record = SuspectRecord(suspect_id="C", reported_location=tuple(reported))
        for actual in mean_actual - gen.normal(0.0, sigma, size=window):
            record_observation(record, float(actual), expected)
        return np_range_test(record, sigma, window, level).decision == Decision.ATTACKER

    rejections = runner.run(trial, config.trials, cell_key)
    rate = float(np.mean(rejections))
    honest = scenario == DetectScenario.HONEST
    return DetectRow(
        scenario=scenario,
        level=level,
        I=window,
        sigma=sigma,
        false_alarm_rate=rate if honest else None,
        detection_rate=None if honest else rate,
        windows=config.trials,
    )


def reference_layout(config: ExperimentConfig) -> np.ndarray:
    """Reference positions around the origin, shape (n_references, d)."""
    m, d, radius = config.n_references, config.dimension, config.reported_range
    if d == 1:
        steps = np.arange(m)
        return (radius * (1 + steps // 2) * np.where(steps % 2 == 0, 1.0, -1.0)).reshape(m, 1)
    theta = 2.0 * math.pi * (np.arange(m) + 0.25) / m
    positions = np.zeros((m, d))
    positions[:, 0] = radius * np.cos(theta)
    positions[:, 1] = radius * np.sin(theta)
    return positions


def run_detection_network(
    config: ExperimentConfig, gen: np.random.Generator
) -> Tuple[List[DetectionEvent], AnnouncementLedger]:
    """
    A small network in which one node lies about its location.

    References sit around the origin; the cheating node "C" is at the origin
    and reports a location half a reference range away. Each reference first
    trains σ on a window of honest links, then observes every other node once
    per slot and re-tests it on every slot.

    Returns:
        The detection events in time order and the shared ledger
    """
    gamma, sigma = config.gammas[0], config.sigmas[0]
    if sigma <= 0:
        raise ConfigurationError("The detection network needs a positive sigma")
    window = config.windows[0]
    level = config.levels[0]
    params = channel_for(config, gamma, sigma)
    c3 = c3_constant(params.tx_power_dbm, params.prop_constant_db, gamma, params.ref_distance)

    d = config.dimension
    positions = reference_layout(config)
    ids = [f"R{i}" for i in range(len(positions))]
    cheater_true = np.zeros(d)
    cheater_reported = config.reported_range * (0.5 * _unit(d) + (0.25 * _unit(d, 1) if d > 1 else 0))

    ledger = AnnouncementLedger()
    detectors: List[DetectingReference] = []
    for i, node_id in enumerate(ids):
        peers = np.delete(positions, i, axis=0)
        mean_rss = _rss_between(peers, positions[i], c3, gamma, params.ref_distance)
        actual = mean_rss - gen.normal(0.0, sigma, size=(window, mean_rss.size))
        training = (actual - mean_rss).ravel()
        identity = ReferenceIdentity(
            node_id=node_id,
            own_location=tuple(positions[i]),
            self_gamma=gamma,
            shadow_sigma=estimate_shadow_sigma(training),
        )
        detectors.append(
            DetectingReference(
                identity,
                c3,
                ledger,
                window=window,
                level=level,
                announce_threshold=config.announce_threshold,
            )
        )

    slots = 2 * window
    for t in range(slots):
        for i, detector in enumerate(detectors):
            here = positions[i]
            suspects = [(ids[j], positions[j], positions[j]) for j in range(len(ids)) if j != i]
            suspects.append(("C", cheater_true, cheater_reported))
            for suspect_id, true_location, reported in suspects:
                mean_rss = float(_rss_between(true_location, here, c3, gamma, params.ref_distance))
                detector.observe(float(t), suspect_id, reported, mean_rss - gen.normal(0.0, sigma))

    events = sorted(
        (event for detector in detectors for event in detector.events),
        key=lambda e: (e.time, e.detector_id, e.suspect_id),
    )
    logger.info("Detection network confirmed %s", sorted(ledger.confirmed) or "nobody")
    return events, ledger


def run_detect_calibration(
    config: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> List[DetectRow]:
    """
    Empirical false-alarm and detection rates of the range test.

    One trial is one window of I observations. Honest suspects give the
    false-alarm rate; suspects at ``range_ratio`` times the reported range
    and suspects on the equal-range circle give detection rates. With
    ``events_path`` set, the cheating-node network is also simulated and its
    event log written there.
    """
    if any(s <= 0 for s in config.sigmas):
        raise ConfigurationError("Detection calibration needs positive sigmas")
    runner = runner or make_runner(config.seed, config.concurrency)
    gamma = config.gammas[0]
    rows: List[DetectRow] = []
    for ci, scenario in enumerate(DetectScenario):
        for li, level in enumerate(config.levels):
            for wi, window in enumerate(config.windows):
                for si, sigma in enumerate(config.sigmas):
                    rows.append(
                        _calibration_cell(
                            config, runner, scenario, level, window, sigma, gamma, (ci, li, wi, si)
                        )
                    )
    if config.events_path is not None:
        events, ledger = run_detection_network(
            config, trial_generator(config.seed, (len(DetectScenario),), 0)
        )
        write_event_log(events, config.events_path)
        logger.info("Wrote %d detection events to %s", len(events), config.events_path)
    return rows


def run_routing(
    config: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> List[RoutingRow]:
    """
    The kth-neighbour routing study.

    Analytic mode tabulates f(k) over the α grid. Monte Carlo mode
    simulates 𝔏̄_k for every (density, γ, σ) in a ball of ``routing_radius``.
    """
    if config.routing_mode == RoutingMode.ANALYTIC:
        return [
            RoutingRow(mode=RoutingMode.ANALYTIC, k=k, alpha=alpha, value=k_efficiency(k, alpha))
            for alpha in config.alphas
            for k in range(1, config.k_max + 1)
        ]

    rows: List[RoutingRow] = []
    for di, density in enumerate(config.densities):
        space = SpaceConfig(
            dimension=config.dimension, field_radius=config.routing_radius, density=density
        )
        for gi, gamma in enumerate(config.gammas):
            for si, sigma in enumerate(config.sigmas):
                try:
                    scenario = RoutingScenario(
                        space=space, gamma=gamma, shadow_sigma=sigma, k_max=config.k_max
                    )
                except ValueError as e:
                    raise ConfigurationError(str(e)) from e
                gen = trial_generator(config.seed, (gi, si, di), 0)
                rows.extend(simulate_kth_routing(scenario, config.trials, gen))
    return rows


def parse_rss_file(path: Union[str, Path]) -> List[float]:
    """
    Read received powers in dB, one per line.

    Blank lines and lines starting with '#' are skipped. A line may carry
    extra comma-separated fields; the first is the RSS.

    Raises:
        InputFormatError: naming the first line that is not a finite number
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InputFormatError(f"Cannot read {path}: {e}") from e
    values: List[float] = []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        token = text.split(",")[0].strip()
        try:
            value = float(token)
        except ValueError:
            raise InputFormatError(f"{path}:{number}: not a number: {token!r}", line_number=number)
        if not math.isfinite(value):
            raise InputFormatError(f"{path}:{number}: value is not finite", line_number=number)
        values.append(value)
    return values


def single_estimate(
    rss_file: Union[str, Path],
    d: int,
    method: Union[str, EstimatorMethod] = EstimatorMethod.WTLS,
    max_pairs: Optional[int] = None,
    seed: int = 0,
) -> EstimateReport:
    """
    Estimate the PLE from a file of measured RSS values.

    Args:
        rss_file: One RSS in dB per line
        d: Dimension of the deployment the measurements come from
        method: A pair-sample estimator ('tls_svd', 'tls' or 'wtls')
        max_pairs: Optional cap on the pair count
        seed: Seed for pair subsampling

    Raises:
        InputFormatError: on a malformed line
        InsufficientSamplesError: with fewer than two values
        EstimatorNotSupportedError: for methods that do not take pair samples
    """
    estimator = EstimatorFactory.create(method)
    values = parse_rss_file(rss_file)
    observations = [
        RssObservation(node_index=i, rss_db=v, true_distance=0.0) for i, v in enumerate(values)
    ]
    samples = build_samples(rank_rss(observations), d, max_pairs, seed)
    return estimator.estimate(samples)


class ShadowSweepExperiment(Experiment):
    kind = ExperimentKind.SHADOW_SWEEP
    row_type = RmseRow

    def run(self, config: ExperimentConfig, runner: TrialRunner) -> Sequence[CsvRow]:
        return run_shadow_sweep(config, runner)


class DensitySweepExperiment(Experiment):
    kind = ExperimentKind.DENSITY_SWEEP
    row_type = RmseRow

    def run(self, config: ExperimentConfig, runner: TrialRunner) -> Sequence[CsvRow]:
        return run_density_sweep(config, runner)


class RoutingAnalyticExperiment(Experiment):
    kind = ExperimentKind.ROUTING_ANALYTIC
    row_type = RoutingRow

    def run(self, config: ExperimentConfig, runner: TrialRunner) -> Sequence[CsvRow]:
        return run_routing(config, runner)


class RoutingMonteCarloExperiment(RoutingAnalyticExperiment):
    kind = ExperimentKind.ROUTING_MC


class DetectCalibrationExperiment(Experiment):
    kind = ExperimentKind.DETECT_CALIBRATION
    row_type = DetectRow

    def run(self, config: ExperimentConfig, runner: TrialRunner) -> Sequence[CsvRow]:
        return run_detect_calibration(config, runner)


EXPERIMENTS: Dict[ExperimentKind, Type[Experiment]] = {
    cls.kind: cls
    for cls in (
        ShadowSweepExperiment,
        DensitySweepExperiment,
        RoutingAnalyticExperiment,
        RoutingMonteCarloExperiment,
        DetectCalibrationExperiment,
    )
}


def run_experiment(
    config: ExperimentConfig, runner: Optional[TrialRunner] = None
) -> Sequence[CsvRow]:
    """Run the table-producing experiment named by ``config.experiment``."""
    experiment_cls = EXPERIMENTS.get(config.experiment)
    if experiment_cls is None:
        raise ConfigurationError(f"{config.experiment.value} does not produce a table")
    runner = runner or make_runner(config.seed, config.concurrency)
    return experiment_cls().run(config, runner)
