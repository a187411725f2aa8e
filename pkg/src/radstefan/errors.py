"""Exception and warning types shared across the solver suite."""


class RadStefanError(Exception):
    """Base class for all radstefan errors."""


class ConfigError(RadStefanError):
    """Invalid or inconsistent run configuration."""


class SingularityError(RadStefanError):
    """Pointwise kernel evaluation requested at the logarithmic singularity."""


class NonConvergenceError(RadStefanError):
    """An iterative solve failed to reach its tolerance.

    Carries the last iterate (``profile``) and, when available, the solve
    report accumulated so far (``report``).
    """

    def __init__(self, message, profile=None, report=None):
        super().__init__(message)
        self.profile = profile
        self.report = report


class ContractionFailureError(NonConvergenceError):
    """Measured contraction ratio stayed >= 1 for several consecutive steps."""


class SpaceViolationError(RadStefanError):
    """A fixed-point iterate left the weighted function space (epsilon too large)."""


class SupercriticalSpeedError(RadStefanError):
    """Interface matching failed because the requested speed exceeds c_max."""

    def __init__(self, message, liquid_slope=None):
        super().__init__(message)
        self.liquid_slope = liquid_slope


class ScanRangeError(RadStefanError):
    """The c_max scan found no sign change; carries the scanned table."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table


class InsufficientDecayDataError(RadStefanError):
    """Too few usable nodes to fit a decay rate."""


class TangentialRayError(RadStefanError):
    """Intensity reconstruction requested along a tangential ray (mu = 0)."""


class NonPlateauWarning(UserWarning):
    """Far-field limit estimated over a window that has not flattened out."""


class OvershootWarning(UserWarning):
    """Self-similar profile left the interval spanned by its boundary states."""


class ExperimentalEpsilonWarning(UserWarning):
    """Small-T_M run above the proven contraction threshold."""
