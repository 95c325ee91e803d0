"""Counting-function bounds and the large-r slope."""
import logging
import math
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from resonance.bounds.certificate import CONSTANT_PROVENANCE, BoundCertificate, constant_inputs
from resonance.potential import Case, PotentialConstants
from resonance.zeros.locate import SpectrumWindow, counting_function

logger = logging.getLogger(__name__)


def _jensen_rhs(gamma: float, r: float, remainder: float) -> float:
    r1 = r + 0.5
    return (4.0 * r1 * gamma / math.pi + math.log(1.0 + 4.0 * r1)
            + remainder / (1.0 + 4.0 * r1)) / math.log(2.0)


def counting_bound_rhs(case: Case, consts: PotentialConstants, r: float) -> float:
    """Upper bound on N(r, w) (line) or on the mean of the two half-line counts."""
    if r <= 0:
        raise ValueError("r must be positive")
    if case.is_half_line:
        return _jensen_rhs(consts.gamma, r, 9.0 * consts.norm_l1 * max(1.0, consts.gamma))
    return _jensen_rhs(consts.gamma, r, 9.0 * consts.Q)


def egamma_counting_bound_rhs(gamma: float, f0: float, Q: float, r: float) -> float:
    """The class form of the counting bound, with (|f0| + 8Q) in place of 9Q."""
    if r <= 0:
        raise ValueError("r must be positive")
    return _jensen_rhs(gamma, r, abs(f0) + 8.0 * Q)


def counting_certificate(points: SpectrumWindow, consts: PotentialConstants, r: float) -> BoundCertificate:
    """N(r, w) <= RHS for the line."""
    n = counting_function(points, r)
    return BoundCertificate(
        id="counting_q2",
        lhs=float(n),
        rhs=counting_bound_rhs(Case.LINE, consts, r),
        inputs=constant_inputs(consts, Case.LINE, r=r, r1=r + 0.5),
        provenance=CONSTANT_PROVENANCE,
    )


def counting_egamma_certificate(points: SpectrumWindow, consts: PotentialConstants,
                                r: float) -> BoundCertificate:
    n = counting_function(points, r)
    return BoundCertificate(
        id="counting_egamma",
        lhs=float(n),
        rhs=egamma_counting_bound_rhs(consts.gamma, consts.q0, consts.Q, r),
        inputs=constant_inputs(consts, Case.LINE, r=r, r1=r + 0.5, f0=consts.q0),
        provenance={**CONSTANT_PROVENANCE, "f0": "q0 (w = 2ik - q0 + w_*)"},
    )


def half_line_counting_certificate(dirichlet: SpectrumWindow, neumann: SpectrumWindow,
                                   consts: PotentialConstants, r: float) -> BoundCertificate:
    """(N(r, psi_+(0,.)) + N(r, psi_+'(0,.))) / 2 <= RHS; the mean is bounded, not each count."""
    n_d = counting_function(dirichlet, r)
    n_n = counting_function(neumann, r)
    return BoundCertificate(
        id="counting_q3",
        lhs=(n_d + n_n) / 2.0,
        rhs=counting_bound_rhs(Case.DIRICHLET, consts, r),
        inputs=constant_inputs(consts, None, r=r, r1=r + 0.5, n_dirichlet=n_d, n_neumann=n_n),
        provenance={**CONSTANT_PROVENANCE, "remainder": "9 norm_l1 max(1, gamma)"},
        notes=["bounds the mean of the Dirichlet and Neumann counts"],
    )


class SlopeReport(BaseModel):
    """Least-squares slope of N(r, w) against r next to 2 gamma / pi."""
    model_config = ConfigDict(frozen=True)

    radii: List[float]
    counts: List[int]
    slope: float
    intercept: float
    expected: float
    relative_deviation: float
    degenerate: bool


def staircase(points: SpectrumWindow, radii: Sequence[float]) -> List[int]:
    return [counting_function(points, r) for r in radii]


def asymptotic_slope(points: SpectrumWindow, radii: Sequence[float], gamma: float) -> SlopeReport:
    """Fit N(r) = slope * r + c over the radii and compare the slope with 2 gamma / pi."""
    radii = [float(r) for r in radii]
    if len(radii) < 5:
        raise ValueError("asymptotic_slope needs at least 5 radii")
    counts = staircase(points, radii)
    slope, intercept = np.polyfit(radii, counts, 1)
    expected = 2.0 * gamma / math.pi
    degenerate = expected == 0.0
    deviation = abs(slope) if degenerate else abs(slope - expected) / expected
    logger.info("slope %.4f vs 2 gamma / pi = %.4f", slope, expected)
    return SlopeReport(radii=radii, counts=counts, slope=float(slope), intercept=float(intercept),
                       expected=expected, relative_deviation=float(deviation), degenerate=degenerate)
