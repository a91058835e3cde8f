"""Typed exceptions raised by the ionospec model and CLI layers."""

from __future__ import annotations


class IonospecError(Exception):
    """Base class for all package-specific errors."""


class DomainError(IonospecError):
    """A parameter lies outside its physical domain (e.g. negative rate)."""


class InvalidNormalizationError(IonospecError):
    """Normalized pump parameters do not define a field amplitude."""


class DegenerateSpectrumError(IonospecError):
    """A closed-form expression degenerates (delta_xi = 0 or D = 0)."""


class ExceptionalPointError(IonospecError):
    """The effective matrix is defective; eigenvectors do not span C^2."""


class NoLongTimeLimitError(IonospecError):
    """A populated decay mode has Im(Lambda) = 0, so no stationary spectrum."""


class PoleError(IonospecError):
    """An evaluation energy hits a real pole of the amplitude formula."""


class GridTooNarrowError(IonospecError):
    """Energy grid too narrow for the requested tail bound.

    Carries ``suggested_width``, the half-width estimated to meet the bound.
    """

    def __init__(self, message, suggested_width=None):
        super().__init__(message)
        self.suggested_width = suggested_width


class WindowTooNarrowError(IonospecError):
    """Discretization window fails the level-density precondition.

    Carries ``suggested_window``, the smallest acceptable half-width.
    """

    def __init__(self, message, suggested_window=None):
        super().__init__(message)
        self.suggested_window = suggested_window


class RevivalTimeError(IonospecError):
    """Requested evolution time reaches the discrete-spectrum revival."""


class NormDriftError(IonospecError):
    """The integrator lost more norm than the conservation contract allows."""


class UnknownPresetError(IonospecError):
    """Figure preset name is not recognized."""


class ConfigError(IonospecError):
    """Malformed run configuration (unknown key, bad value, missing file)."""
