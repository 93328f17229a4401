"""Exception types shared across the package."""


class SinglingError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SinglingError):
    """Invalid configuration file, field value, or CLI argument."""


class SingularityError(SinglingError):
    """Two interacting agents are (numerically) coincident.

    The interaction forces scale with inverse powers of the pair distance,
    so distances below ``COINCIDENCE_TOLERANCE`` are treated as a
    configuration bug rather than silently clamped.
    """


class IsolatedPinningError(SinglingError):
    """The pinning sheep has no sensing-disc neighbours, so no shepherd
    placement can influence it this tick."""


class AlreadySeparatedError(SinglingError):
    """A pinning sheep was requested but the target has no neighbours."""


class UnreachableGoalError(SinglingError):
    """The grid planner found no free path from start to goal."""


COINCIDENCE_TOLERANCE = 1e-9
