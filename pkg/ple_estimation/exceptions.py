class InvalidArgumentError(ValueError):
    """Raised when an argument is outside an operation's domain."""

    pass


class UnsupportedDimensionError(InvalidArgumentError):
    """Raised when a dimension other than 1, 2 or 3 is requested."""

    def __init__(self, message: str = "Unsupported dimension", dimension: int | None = None):
        super().__init__(message)
        self.dimension = dimension


class NearFieldError(InvalidArgumentError):
    """Raised when a distance falls inside the reference distance."""

    def __init__(
        self,
        message: str = "Distance is inside the reference distance",
        distance: float | None = None,
        ref_distance: float | None = None,
    ):
        super().__init__(message)
        self.distance = distance
        self.ref_distance = ref_distance


class ZeroDistanceError(InvalidArgumentError):
    """Raised when a reported location coincides with the detecting node."""

    pass


class EmptyFieldError(Exception):
    """Raised when a deployment would contain no nodes."""

    pass


class InsufficientSamplesError(ValueError):
    """Raised when fewer samples are available than an operation needs."""

    def __init__(
        self,
        message: str = "Insufficient samples",
        required: int | None = None,
        actual: int | None = None,
    ):
        super().__init__(message)
        self.required = required
        self.actual = actual


class InsufficientObservationsError(InsufficientSamplesError):
    """Raised when a range test window is longer than the observation record."""

    pass


class UndefinedEstimateError(ArithmeticError):
    """Raised when an estimator formula has no value for its inputs."""

    pass


class ConfigurationError(ValueError):
    """Raised when an experiment configuration is invalid."""

    pass


class InputFormatError(ValueError):
    """Raised when an RSS input file cannot be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number


class EstimatorNotSupportedError(ValueError):
    """Raised when an unregistered estimator method is requested."""

    pass
