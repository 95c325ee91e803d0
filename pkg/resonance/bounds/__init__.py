"""Closed-form bounds certified against computed spectra."""
from resonance.bounds.certificate import BoundCertificate, EgammaWitness, report_table, report_text
from resonance.bounds.counting import (
    SlopeReport,
    asymptotic_slope,
    counting_bound_rhs,
    counting_certificate,
    counting_egamma_certificate,
    egamma_counting_bound_rhs,
    half_line_counting_certificate,
    staircase,
)
from resonance.bounds.criteria import (
    ScalingCheck,
    even_extension_envelope,
    factorization_check,
    factorization_spectra,
    forbidden_curve,
    forbidden_domain_check,
    rouche_predicate,
    rouche_threshold,
    rouche_zero_check,
    spectra_union_deviation,
    verify_scaling,
)
from resonance.bounds.entire_class import carleson_box_check, egamma_witness, jensen_check, omega_count
from resonance.bounds.lieb_thirring import (
    carleson_constant,
    lt_sum_certificate,
    lt_sum_egamma_certificate,
    q_calligraphic,
    resonance_sum,
    y_p,
    y_p_asymptotics,
    y_p_quadrature,
)

__all__ = [
    "BoundCertificate",
    "EgammaWitness",
    "report_table",
    "report_text",
    "SlopeReport",
    "asymptotic_slope",
    "counting_bound_rhs",
    "counting_certificate",
    "counting_egamma_certificate",
    "egamma_counting_bound_rhs",
    "half_line_counting_certificate",
    "staircase",
    "ScalingCheck",
    "even_extension_envelope",
    "factorization_check",
    "factorization_spectra",
    "forbidden_curve",
    "forbidden_domain_check",
    "rouche_predicate",
    "rouche_threshold",
    "rouche_zero_check",
    "spectra_union_deviation",
    "verify_scaling",
    "carleson_box_check",
    "egamma_witness",
    "jensen_check",
    "omega_count",
    "carleson_constant",
    "lt_sum_certificate",
    "lt_sum_egamma_certificate",
    "q_calligraphic",
    "resonance_sum",
    "y_p",
    "y_p_asymptotics",
    "y_p_quadrature",
]
