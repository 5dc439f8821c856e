"""Exception hierarchy."""


class GroundtrackError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateOrbitError(GroundtrackError, ValueError):
    pass


class RegimeError(GroundtrackError, ValueError):
    """Input lies outside the validated regime of an approximate theory."""


class StepTooLargeError(GroundtrackError, ValueError):
    """An angle jumped by more than the allowed step between two samples."""


class IntegrationError(GroundtrackError, RuntimeError):
    pass


class InfeasibleGainError(GroundtrackError, ValueError):
    """The disturbance is not strictly between zero and the control gain."""


class InfeasibleBandError(GroundtrackError, ValueError):
    """The adapted dead-band does not fit inside the error tolerance."""


class NoSwitchError(GroundtrackError, ValueError):
    pass


class TimeRegressionError(GroundtrackError, ValueError):
    pass


class ConfigError(GroundtrackError, ValueError):
    pass


class InsufficientDataError(GroundtrackError, ValueError):
    pass
