"""Exception types shared across the package."""


class RydsimError(Exception):
    """Base class for all package errors."""


class ConfigError(RydsimError):
    """Invalid configuration: bad value, missing key, or unknown key.

    Carries the full list of violations so callers can report all of
    them at once.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class GridError(RydsimError):
    """A grid fails a resolution or extent precondition."""


class ResonanceError(RydsimError):
    """Kernel parameters place the blockade denominator near a zero."""


class NumericError(RydsimError):
    """A solver produced non-finite values or violated a step-size bound."""
