"""Argument-principle zero finder for entire functions."""
from resonance.zeros.contour import (
    Rectangle,
    argument_principle,
    count_zeros,
    count_zeros_on,
    disk_count,
    phase_winding_count,
)
from resonance.zeros.functions import EntireFunction
from resonance.zeros.locate import (
    SpectralKind,
    SpectralPoint,
    SpectrumWindow,
    auto_window,
    axis_bisection_zeros,
    classify,
    counting_function,
    covers_upper_half_plane,
    eigenvalue_height,
    locate_zeros,
    newton_refine,
)

__all__ = [
    "Rectangle",
    "argument_principle",
    "count_zeros",
    "count_zeros_on",
    "disk_count",
    "phase_winding_count",
    "EntireFunction",
    "SpectralKind",
    "SpectralPoint",
    "SpectrumWindow",
    "auto_window",
    "axis_bisection_zeros",
    "classify",
    "counting_function",
    "covers_upper_half_plane",
    "eigenvalue_height",
    "locate_zeros",
    "newton_refine",
]
