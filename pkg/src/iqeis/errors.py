"""Exception types raised by the simulator."""


class IQEISError(Exception):
    """Base class for all simulator errors."""


class BandError(IQEISError, ValueError):
    """Requested frequency lies outside the realizable band."""


class PlanError(IQEISError, ValueError):
    """A sampling plan cannot be built or fails its overflow budget."""


class RangeError(IQEISError, ValueError):
    """A digital code is outside its register width."""


class SaturationError(IQEISError):
    """Every sample of a stream clipped; the channel gain setting is unusable."""


class LengthError(IQEISError, ValueError):
    """A sample stream is too short for the requested reduction."""


class DegenerateError(IQEISError, ZeroDivisionError):
    """A complex response has zero magnitude and cannot be used in a ratio."""


class ParseError(IQEISError, ValueError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class ValidationError(IQEISError, ValueError):
    """A configuration value violates a documented invariant."""


class MissingGroundTruth(IQEISError):
    """Verification requested for a channel without an analytic model."""
