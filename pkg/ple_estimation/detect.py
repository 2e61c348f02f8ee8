"""
Detection of references that report a false location.

A detecting reference predicts the RSS it should see from a suspect's
reported location using its own self-estimated PLE, accumulates the
differences between actual and predicted RSS, and runs a Neyman-Pearson
range test on the most recent window. Suspects that fail the test are
announced; a suspect announced by more than T distinct references is a
confirmed attacker.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from scipy import stats

from .base import (
    ConfirmationStatus,
    Decision,
    DetectionEvent,
    RangeTestOutcome,
    ReferenceIdentity,
    SuspectRecord,
    TimedObservation,
)
from .exceptions import (
    InsufficientObservationsError,
    InsufficientSamplesError,
    InvalidArgumentError,
    ZeroDistanceError,
)

logger = logging.getLogger(__name__)

Location = Union[Sequence[float], np.ndarray]

DEFAULT_LEVEL = 0.05


def c3_constant(
    tx_power_dbm: float,
    prop_constant_db: float,
    gamma: float,
    ref_distance: float = 1.0,
) -> float:
    """C3 = 10log10(Pt) + 10log10(C1) + 10·γ·log10(r0), all terms in dB."""
    return tx_power_dbm + prop_constant_db + 10.0 * gamma * math.log10(ref_distance)


def _separation(a: Location, b: Location) -> float:
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if a_arr.shape != b_arr.shape:
        raise InvalidArgumentError(f"Locations differ in dimension: {a_arr.shape} vs {b_arr.shape}")
    return float(np.linalg.norm(a_arr - b_arr))


def reference_rss_db(identity: ReferenceIdentity, reported_location: Location, c3: float) -> float:
    """
    RSS the detecting reference expects from ``reported_location``.

    Raises:
        ZeroDistanceError: if the reported location is the reference's own
    """
    distance = _separation(reported_location, identity.own_location)
    if distance == 0.0:
        raise ZeroDistanceError(
            f"Reported location coincides with reference {identity.node_id}"
        )
    return c3 - 10.0 * identity.self_gamma * math.log10(distance)


def record_observation(
    record: SuspectRecord,
    actual_rss_db: float,
    reference_rss_db: float,
    time: Optional[float] = None,
) -> SuspectRecord:
    """Append actual minus reference RSS; ``time`` defaults to the next integer slot."""
    if time is None:
        time = float(record.observations[-1].time + 1) if record.observations else 0.0
    record.append(TimedObservation(time=time, value=actual_rss_db - reference_rss_db))
    return record


def _check_test_arguments(sigma: float, window: int, level: float) -> None:
    if sigma <= 0:
        raise InvalidArgumentError(f"sigma must be positive, got {sigma}")
    if window < 1:
        raise InvalidArgumentError(f"window must be at least 1, got {window}")
    if not 0.0 < level < 1.0:
        raise InvalidArgumentError(f"level must lie in (0, 1), got {level}")


def chi2_threshold(sigma: float, window: int, level: float = DEFAULT_LEVEL) -> float:
    """Critical value for ρ²: q·σ²/I with q the upper chi-square(1) quantile."""
    _check_test_arguments(sigma, window, level)
    return float(stats.chi2.ppf(1.0 - level, df=1)) * sigma**2 / window


def critical_region_normal(rho, sigma: float, window: int, level: float = DEFAULT_LEVEL):
    """Reject when |ρ| >= z·σ/√I, z the two-sided Normal quantile."""
    _check_test_arguments(sigma, window, level)
    z = stats.norm.ppf(1.0 - level / 2.0)
    return np.abs(rho) >= z * sigma / math.sqrt(window)


def critical_region_chi2(rho, sigma: float, window: int, level: float = DEFAULT_LEVEL):
    """Reject when ρ² >= q·σ²/I."""
    return np.square(rho) >= chi2_threshold(sigma, window, level)


def np_range_test(
    record: SuspectRecord,
    sigma: float,
    window: int,
    level: float = DEFAULT_LEVEL,
) -> RangeTestOutcome:
    """
    Neyman-Pearson range test on the most recent ``window`` observations.

    ρ is the window mean; the suspect is declared an attacker when
    ρ² >= q·σ²/I.

    Args:
        record: Observations about one suspect
        sigma: Shadowing standard deviation in dB
        window: Number of recent observations I
        level: Significance level of the test

    Returns:
        RangeTestOutcome with the decision, ρ and the ρ² critical value

    Raises:
        InsufficientObservationsError: with fewer than ``window`` observations
    """
    threshold = chi2_threshold(sigma, window, level)
    available = len(record.observations)
    if available < window:
        raise InsufficientObservationsError(
            f"Range test needs {window} observations, {available} recorded",
            required=window,
            actual=available,
        )
    recent = [o.value for o in record.observations[-window:]]
    rho = float(np.mean(recent))
    decision = Decision.ATTACKER if rho**2 >= threshold else Decision.TRUST
    return RangeTestOutcome(decision=decision, rho=rho, threshold=threshold, window=window)


def trust_region_radius_band(
    identity: ReferenceIdentity,
    reported_location: Location,
    sigma: float,
    window: int,
    level: float = DEFAULT_LEVEL,
) -> Tuple[float, float]:
    """
    True ranges whose mean observation would pass the range test.

    Returns:
        (inner, outer) radii in metres around the detecting reference
    """
    _check_test_arguments(sigma, window, level)
    reported = _separation(reported_location, identity.own_location)
    if reported == 0.0:
        raise ZeroDistanceError(
            f"Reported location coincides with reference {identity.node_id}"
        )
    z = stats.norm.ppf(1.0 - level / 2.0)
    exponent = z * sigma / (math.sqrt(window) * 10.0 * identity.self_gamma)
    return reported * 10.0 ** (-exponent), reported * 10.0**exponent


def estimate_shadow_sigma(residuals: Iterable[float]) -> float:
    """
    Train σ from actual-minus-predicted RSS of links known to be honest.

    The residuals are zero mean under honest reporting, so σ is their root
    mean square.
    """
    values = np.asarray(list(residuals), dtype=float)
    if values.size < 2:
        raise InsufficientSamplesError(
            f"Need at least 2 residuals to train sigma, got {values.size}",
            required=2,
            actual=int(values.size),
        )
    return float(np.sqrt(np.mean(values**2)))


class AnnouncementLedger:
    """
    Shared tally of which references announced which suspects.

    Announcements are counted once per announcer. Confirmation is sticky.
    """

    def __init__(self) -> None:
        self._announcers: Dict[str, Set[str]] = {}
        self._confirmed: Set[str] = set()

    def record(self, announcer_id: str, suspect_id: str) -> int:
        """Record an announcement and return the distinct-announcer tally."""
        announcers = self._announcers.setdefault(suspect_id, set())
        announcers.add(announcer_id)
        return len(announcers)

    def announcers(self, suspect_id: str) -> FrozenSet[str]:
        return frozenset(self._announcers.get(suspect_id, ()))

    def tally(self, suspect_id: str) -> int:
        return len(self._announcers.get(suspect_id, ()))

    def is_confirmed(self, suspect_id: str) -> bool:
        return suspect_id in self._confirmed

    @property
    def confirmed(self) -> FrozenSet[str]:
        return frozenset(self._confirmed)

    def evaluate(self, suspect_id: str, threshold: int) -> ConfirmationStatus:
        if suspect_id in self._confirmed:
            return ConfirmationStatus.CONFIRMED
        tally = self.tally(suspect_id)
        if tally > threshold:
            self._confirmed.add(suspect_id)
            logger.info("Suspect %s confirmed by %d references", suspect_id, tally)
            return ConfirmationStatus.CONFIRMED
        return ConfirmationStatus.ANNOUNCED if tally else ConfirmationStatus.UNANNOUNCED


def announce_and_confirm(
    ledger: AnnouncementLedger, suspect_id: str, threshold: int
) -> ConfirmationStatus:
    """A suspect is confirmed once more than ``threshold`` distinct references announced it."""
    if threshold < 1:
        raise InvalidArgumentError(f"threshold must be at least 1, got {threshold}")
    return ledger.evaluate(suspect_id, threshold)


class DetectingReference:
    """
    A reference node that tests every neighbour on each new observation.

    Once a suspect has ``window`` observations, each further observation
    re-tests the most recent window. Failed tests are announced to the
    ledger.

    Usage:
        detector = DetectingReference(identity, c3, ledger, window=25)
        event = detector.observe(t, "C", reported_location, actual_rss_db)
    """

    def __init__(
        self,
        identity: ReferenceIdentity,
        c3: float,
        ledger: AnnouncementLedger,
        window: int,
        level: float = DEFAULT_LEVEL,
        announce_threshold: int = 2,
        sigma: Optional[float] = None,
    ) -> None:
        self.identity = identity
        self.c3 = c3
        self.ledger = ledger
        self.window = window
        self.level = level
        self.announce_threshold = announce_threshold
        self.sigma = identity.shadow_sigma if sigma is None else sigma
        _check_test_arguments(self.sigma, window, level)
        self._records: Dict[str, SuspectRecord] = {}
        self._events: List[DetectionEvent] = []

    @property
    def node_id(self) -> str:
        return self.identity.node_id

    @property
    def events(self) -> List[DetectionEvent]:
        return list(self._events)

    def record_for(self, suspect_id: str) -> Optional[SuspectRecord]:
        return self._records.get(suspect_id)

    def observe(
        self,
        time: float,
        suspect_id: str,
        reported_location: Location,
        actual_rss_db: float,
    ) -> Optional[DetectionEvent]:
        """Record one RSS from a suspect and re-test it when the window is full."""
        record = self._records.get(suspect_id)
        if record is None:
            record = SuspectRecord(
                suspect_id=suspect_id,
                reported_location=tuple(float(x) for x in reported_location),
            )
            self._records[suspect_id] = record
        expected = reference_rss_db(self.identity, reported_location, self.c3)
        record_observation(record, actual_rss_db, expected, time=time)
        if len(record.observations) < self.window:
            return None

        outcome = np_range_test(record, self.sigma, self.window, self.level)
        event = DetectionEvent(
            time=time,
            detector_id=self.node_id,
            suspect_id=suspect_id,
            rho=outcome.rho,
            threshold=outcome.threshold,
            decision=outcome.decision,
        )
        self._events.append(event)
        if outcome.decision == Decision.ATTACKER:
            self.ledger.record(self.node_id, suspect_id)
            record.announcements_received = self.ledger.tally(suspect_id)
            announce_and_confirm(self.ledger, suspect_id, self.announce_threshold)
        return event
