"""Y_p and the resonance-sum certificates."""
import logging
import math
from typing import Dict, List, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from config import CARLESON_CONSTANT
from resonance.bounds.certificate import CONSTANT_PROVENANCE, BoundCertificate, constant_inputs
from resonance.errors import EnvelopeViolation
from resonance.potential import Case, PotentialConstants
from resonance.zeros.locate import SpectrumWindow

logger = logging.getLogger(__name__)

# the algebraic-weight quadrature check is reliable up to here
QUAD_CHECK_MAX_P = 60.0


def _check_p(p: float):
    if not p > 1:
        raise ValueError(f"p must exceed 1 (Y_p diverges), got {p}")


def y_p_quadrature(p: float) -> float:
    """int (1 + x^2)^(-p/2) dx after x = tan u, as 2 int_0^(pi/2) sin(u)^(p-2) du.

    The endpoint factor u^(p-2) goes into the algebraic weight so p near 1
    stays accurate.
    """
    _check_p(p)
    value, _ = quad(lambda u: np.sinc(u / np.pi) ** (p - 2.0), 0.0, np.pi / 2,
                    weight="alg", wvar=(p - 2.0, 0.0), epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * value


def y_p(p: float, verify: bool = True) -> float:
    """Y_p = sqrt(pi) Gamma((p-1)/2) / Gamma(p/2) for p > 1.

    Args:
        p: Exponent, must exceed 1.
        verify: Cross-check against quadrature to 1e-8 relative (p <= 60).
    """
    _check_p(p)
    value = math.sqrt(math.pi) * math.exp(gammaln((p - 1.0) / 2.0) - gammaln(p / 2.0))
    if verify and p <= QUAD_CHECK_MAX_P:
        check = y_p_quadrature(p)
        if abs(check - value) > 1e-8 * value:
            raise EnvelopeViolation(f"Y_{p}: gamma identity {value!r} vs quadrature {check!r}")
    return value


def y_p_asymptotics(p: float) -> Dict[str, float]:
    """Y_p next to its large-p form sqrt(2 pi / p) and small-p form 2 / (p - 1)."""
    value = y_p(p, verify=False)
    large = math.sqrt(2.0 * math.pi / p)
    small = 2.0 / (p - 1.0)
    return {"p": p, "y_p": value, "large_p": large, "large_p_ratio": value / large,
            "small_p": small, "small_p_ratio": value / small}


def q_calligraphic(consts: PotentialConstants, case: Case) -> float:
    """max(||q||, ||tq||) for the line, 2 ||q|| max(1, gamma) on the half-line."""
    if case.is_half_line:
        return 2.0 * consts.norm_l1 * max(1.0, consts.gamma)
    return consts.Q


def carleson_constant(consts: PotentialConstants) -> float:
    """C(f) = (12 / log 4)(gamma/pi + 1 + (|f0| + 3Q)/4) with f0 = q0."""
    return 12.0 / math.log(4.0) * (consts.gamma / math.pi + 1.0 + (abs(consts.q0) + 3.0 * consts.Q) / 4.0)


def resonance_sum(points: SpectrumWindow, p: float, radius: Optional[float] = None) -> float:
    """Sum of |k - 2i|^-p over zeros in the closed lower half-plane and |k + 2i|^-p above.

    Only zeros with |k| <= radius are used when a radius is given; k = 0
    is counted once.
    """
    total = 0.0
    for pt in points.points:
        if radius is not None and pt.modulus > radius:
            continue
        shift = -2j if pt.k_im <= 0 else 2j
        total += pt.multiplicity * abs(pt.k + shift) ** (-p)
    return total


def _sum_notes(points: SpectrumWindow, radius: float, lhs: float, rhs: float) -> List[str]:
    notes = [
        f"LHS is a partial sum over zeros with |k| <= {radius:.6g} (all terms positive: necessary test only)",
        f"unverified remainder must be <= {rhs - lhs:.6g}",
    ]
    if any(abs(pt.k) < 1e-8 for pt in points.points):
        notes.append("zero at k = 0 counted once")
    return notes


def _covered_radius(points: SpectrumWindow, radius: Optional[float]) -> float:
    if radius is None:
        radius = points.max_covered_radius()
    points.require_disk(0j, radius)
    return radius


def lt_sum_certificate(points: SpectrumWindow, p: float, consts: PotentialConstants,
                       case: Case, radius: Optional[float] = None) -> BoundCertificate:
    """Resonance sum <= 2^5 Y_p (1 + gamma/pi + Q_case) over a covered disk."""
    _check_p(p)
    radius = _covered_radius(points, radius)
    lhs = resonance_sum(points, p, radius)
    yp = y_p(p)
    q_cal = q_calligraphic(consts, case)
    rhs = CARLESON_CONSTANT * yp * (1.0 + consts.gamma / math.pi + q_cal)
    return BoundCertificate(
        id="lt_sum",
        lhs=lhs,
        rhs=rhs,
        inputs=constant_inputs(consts, case, p=p, radius=radius, Y_p=yp, Q_case=q_cal,
                               C=CARLESON_CONSTANT),
        provenance={**CONSTANT_PROVENANCE,
                    "Q_case": "Q (line) or 2 norm_l1 max(1, gamma) (half-line)",
                    "C": "absolute constant fixed at its upper bound 2^5"},
        notes=_sum_notes(points, radius, lhs, rhs),
    )


def lt_sum_egamma_certificate(points: SpectrumWindow, p: float, consts: PotentialConstants,
                              radius: Optional[float] = None) -> BoundCertificate:
    """Resonance sum <= 2^5 Y_p C(f), the class form with the Carleson constant (line only)."""
    _check_p(p)
    radius = _covered_radius(points, radius)
    lhs = resonance_sum(points, p, radius)
    yp = y_p(p)
    c_f = carleson_constant(consts)
    rhs = CARLESON_CONSTANT * yp * c_f
    return BoundCertificate(
        id="lt_sum_egamma",
        lhs=lhs,
        rhs=rhs,
        inputs=constant_inputs(consts, Case.LINE, p=p, radius=radius, Y_p=yp, C_f=c_f,
                               C=CARLESON_CONSTANT),
        provenance={**CONSTANT_PROVENANCE, "C_f": "(12/log 4)(gamma/pi + 1 + (|q0| + 3Q)/4)",
                    "C": "absolute constant fixed at its upper bound 2^5"},
        notes=_sum_notes(points, radius, lhs, rhs),
    )
