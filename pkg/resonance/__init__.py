"""Resonances of 1D Schrödinger operators with compactly supported piecewise-constant potentials."""
from resonance.bounds import (
    BoundCertificate,
    EgammaWitness,
    asymptotic_slope,
    carleson_box_check,
    counting_bound_rhs,
    egamma_witness,
    factorization_check,
    forbidden_domain_check,
    jensen_check,
    lt_sum_certificate,
    rouche_predicate,
    y_p,
)
from resonance.errors import (
    EngineOverflow,
    IncompleteCoverage,
    PotentialError,
    ResonanceError,
    ZeroOnContour,
)
from resonance.jost import (
    EntirePieceMatrix,
    JostEvaluation,
    NeumannSeriesResult,
    evaluate,
    neumann_series,
    scattering_matrix,
    w_star,
)
from resonance.potential import (
    Case,
    PiecewisePotential,
    PotentialConstants,
    canonicalize,
    constants,
    even_extension,
    load_potential,
)
from resonance.zeros import (
    EntireFunction,
    Rectangle,
    SpectralKind,
    SpectralPoint,
    SpectrumWindow,
    count_zeros,
    counting_function,
    locate_zeros,
)

__all__ = [
    "BoundCertificate",
    "EgammaWitness",
    "asymptotic_slope",
    "carleson_box_check",
    "counting_bound_rhs",
    "egamma_witness",
    "factorization_check",
    "forbidden_domain_check",
    "jensen_check",
    "lt_sum_certificate",
    "rouche_predicate",
    "y_p",
    "EngineOverflow",
    "IncompleteCoverage",
    "PotentialError",
    "ResonanceError",
    "ZeroOnContour",
    "EntirePieceMatrix",
    "JostEvaluation",
    "NeumannSeriesResult",
    "evaluate",
    "neumann_series",
    "scattering_matrix",
    "w_star",
    "Case",
    "PiecewisePotential",
    "PotentialConstants",
    "canonicalize",
    "constants",
    "even_extension",
    "load_potential",
    "EntireFunction",
    "Rectangle",
    "SpectralKind",
    "SpectralPoint",
    "SpectrumWindow",
    "count_zeros",
    "counting_function",
    "locate_zeros",
]
