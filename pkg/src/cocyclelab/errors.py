"""Exception hierarchy shared by every cocyclelab module."""


class CocycleLabError(Exception):
    """Base class for library errors."""


class VariantMismatch(CocycleLabError, TypeError):
    """A point or observable was used with a system of the other kind."""


class PeriodicAtHorizon(CocycleLabError):
    """The system returns to the base point within the requested horizon.

    Raised wherever an instability witness is requested on a system whose
    period is too short for it; periodic systems admit no such witness.
    """

    def __init__(self, message, period=None, horizon=None):
        super().__init__(message)
        self.period = period
        self.horizon = horizon


class InvalidRadius(CocycleLabError, ValueError):
    """Bump supports overlap for the requested radius."""


class UnsupportedSystem(CocycleLabError, ValueError):
    """The operation has no implementation for this system variant."""


class ParseError(CocycleLabError, ValueError):
    """Malformed serialized input (rational, permutation, record)."""
