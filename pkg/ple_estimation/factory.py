"""
Registry of estimators that fit γ from a PairSampleSet.

Built-in methods are keyed by :class:`EstimatorMethod`; custom estimators may
register under any other name.
"""

from __future__ import annotations

from typing import Any, Dict, List, Type, Union

from .base import EstimatorMethod, PleEstimator
from .estimators import ClosedFormTlsEstimator, SvdTlsEstimator, WeightedTlsEstimator
from .exceptions import EstimatorNotSupportedError

MethodKey = Union[EstimatorMethod, str]

BUILTIN_ESTIMATORS: Dict[EstimatorMethod, Type[PleEstimator]] = {
    EstimatorMethod.TLS_SVD: SvdTlsEstimator,
    EstimatorMethod.TLS_CLOSED: ClosedFormTlsEstimator,
    EstimatorMethod.WTLS: WeightedTlsEstimator,
}


def method_key(method: MethodKey) -> MethodKey:
    """A known method name becomes its EstimatorMethod; other names are lower-cased."""
    if isinstance(method, EstimatorMethod):
        return method
    name = method.strip().lower()
    try:
        return EstimatorMethod(name)
    except ValueError:
        return name


def _label(key: MethodKey) -> str:
    return key.value if isinstance(key, EstimatorMethod) else key


class EstimatorFactory:
    """Factory for creating pair-sample PLE estimators."""

    _registry: Dict[MethodKey, Type[PleEstimator]] = dict(BUILTIN_ESTIMATORS)

    @classmethod
    def register(cls, method: MethodKey, estimator_cls: Type[PleEstimator]) -> None:
        """
        Register an estimator class, replacing any previous one for the method.

        Args:
            method: EstimatorMethod or a custom name (e.g., 'robust_tls')
            estimator_cls: Class inheriting from PleEstimator
        """
        if not isinstance(estimator_cls, type) or not issubclass(estimator_cls, PleEstimator):
            raise TypeError(f"{estimator_cls!r} must inherit from PleEstimator")
        key = method_key(method)
        if key == EstimatorMethod.C_PLE:
            raise EstimatorNotSupportedError("c_ple works on neighbourhood counts, not pair samples")
        cls._registry[key] = estimator_cls

    @classmethod
    def create(cls, method: MethodKey, *, config: Dict[str, Any] | None = None) -> PleEstimator:
        """
        Create an estimator instance for the given method.

        Raises:
            EstimatorNotSupportedError: for C-PLE and unregistered names
        """
        key = method_key(method)
        if key == EstimatorMethod.C_PLE:
            raise EstimatorNotSupportedError(
                "c_ple needs two neighbourhood counts; use c_ple_from_neighborhood"
            )
        estimator_cls = cls._registry.get(key)
        if estimator_cls is None:
            raise EstimatorNotSupportedError(
                f"Estimator '{_label(key)}' is not registered. "
                f"Available estimators: {cls.supported_methods()}"
            )
        return estimator_cls(config=config)

    @classmethod
    def supported_methods(cls) -> List[str]:
        """Registered method names, built-ins first."""
        return [_label(key) for key in cls._registry]

    @classmethod
    def unregister(cls, method: MethodKey) -> None:
        """Remove a custom method; built-in methods are restored to their default class."""
        key = method_key(method)
        if isinstance(key, EstimatorMethod) and key in BUILTIN_ESTIMATORS:
            cls._registry[key] = BUILTIN_ESTIMATORS[key]
        else:
            cls._registry.pop(key, None)
