"""Jost solutions, Wronskian and scattering data."""
from resonance.jost.kernels import cs_kernels, cs_kernels_with_derivative
from resonance.jost.neumann import (
    NeumannSeriesResult,
    neumann_series,
    neumann_w_star,
    neumann_wronskian,
)
from resonance.jost.oracle import ode_wronskian
from resonance.jost.transfer import (
    EntirePieceMatrix,
    JostEvaluation,
    JostGrid,
    evaluate,
    evaluate_many,
    jost_a,
    scattering_matrix,
    v_minus,
    w_star,
    wronskian_grid,
)

__all__ = [
    "cs_kernels",
    "cs_kernels_with_derivative",
    "EntirePieceMatrix",
    "JostEvaluation",
    "JostGrid",
    "evaluate",
    "evaluate_many",
    "jost_a",
    "scattering_matrix",
    "v_minus",
    "w_star",
    "wronskian_grid",
    "NeumannSeriesResult",
    "neumann_series",
    "neumann_w_star",
    "neumann_wronskian",
    "ode_wronskian",
]
