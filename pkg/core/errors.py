"""Error types raised by the geoflow engine.

The CLI maps these onto exit codes: ConfigError -> 2, BlowupError -> 3.
Everything else that escapes a command is a bug and is re-raised.
"""
from __future__ import annotations

from typing import Any, Optional


class GeoflowError(Exception):
    """Base class for all engine errors."""


class GridSpecError(GeoflowError, ValueError):
    pass


class GridMismatchError(GeoflowError, ValueError):
    pass


class AxisError(GeoflowError, ValueError):
    pass


class DimensionError(GeoflowError, ValueError):
    """A 2-form operation was requested on a grid that is not T²."""


class BandLimitError(GeoflowError, ValueError):
    pass


class NonzeroMeanError(GeoflowError, ValueError):
    pass


class DegeneratePlaneError(GeoflowError, ValueError):
    pass


class ConfigError(GeoflowError, ValueError):
    """Usage, parse or schema problem. Raised before any computation starts."""


class BlowupError(GeoflowError, RuntimeError):
    """A time integration left the finite / below-threshold regime.

    `t` is the time of the last valid state and `last_state` that state
    (whatever the integrator uses as its state object). `failed_t` is the
    end of the step that failed, when the integrator knows it.
    """

    def __init__(
        self, message: str, t: float, last_state: Optional[Any] = None, failed_t: Optional[float] = None
    ):
        super().__init__(message)
        self.t = t
        self.last_state = last_state
        self.failed_t = failed_t
