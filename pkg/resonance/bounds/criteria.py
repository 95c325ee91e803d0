"""Resonance-free regions and small-potential criteria."""
import logging
import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import brentq

from config import DEFAULT_TOL
from resonance.bounds.certificate import CONSTANT_PROVENANCE, BoundCertificate, constant_inputs
from resonance.errors import EnvelopeViolation, PotentialError
from resonance.jost.transfer import evaluate_many, v_minus
from resonance.potential import (
    Case,
    PiecewisePotential,
    PotentialConstants,
    canonicalize,
    constants,
    even_extension,
    rescale_to_unit,
)
from resonance.zeros.contour import Rectangle, disk_count
from resonance.zeros.functions import EntireFunction
from resonance.zeros.locate import SpectrumWindow, locate_zeros

logger = logging.getLogger(__name__)


class ScalingCheck(BaseModel):
    """Located zeros of the rescaled Dirichlet problem against gamma * k_n."""
    model_config = ConfigDict(frozen=True)

    gamma: float
    compared: int
    max_deviation: float
    agrees: bool


def verify_scaling(p: PiecewisePotential, points: SpectrumWindow, tol: float = 1e-8) -> ScalingCheck:
    """Relocate the Dirichlet zeros of (x/gamma, gamma^2 q) and compare with gamma * k_n."""
    scaled, gamma = rescale_to_unit(p)
    rect = points.rectangle
    window = Rectangle(u_min=gamma * rect.u_min, u_max=gamma * rect.u_max,
                       v_min=gamma * rect.v_min, v_max=gamma * rect.v_max)
    relocated = locate_zeros(EntireFunction.psi0(scaled), window, points.tol)
    expected = [gamma * pt.k for pt in points.points for _ in range(pt.multiplicity)]
    got = [pt.k for pt in relocated.points for _ in range(pt.multiplicity)]
    if len(expected) != len(got):
        return ScalingCheck(gamma=gamma, compared=0, max_deviation=math.inf, agrees=False)
    dev = 0.0
    for a in expected:
        i = int(np.argmin([abs(a - b) for b in got]))
        dev = max(dev, abs(a - got.pop(i)) / max(1.0, abs(a)))
    return ScalingCheck(gamma=gamma, compared=len(expected), max_deviation=dev, agrees=dev <= tol)


def forbidden_domain_check(points: SpectrumWindow, p: PiecewisePotential,
                           verify: bool = False) -> List[BoundCertificate]:
    """|k_n| exp(-2|Im k_n|) <= ||q|| exp(||q||) for every lower half-plane Dirichlet zero.

    The bound is stated for support diameter 1; other diameters are first
    mapped by (x, k, q) -> (x/gamma, gamma k, gamma^2 q). With ``verify`` the
    rescaled spectrum is recomputed and compared before certifying.
    """
    if p.case is not Case.DIRICHLET:
        raise PotentialError("the forbidden domain is certified for the Dirichlet case", "case")
    scaled, gamma = rescale_to_unit(p)
    norm = constants(scaled).norm_l1
    rhs = norm * math.exp(norm)
    notes = []
    if gamma != 1.0:
        notes.append(f"rescaled from gamma = {gamma:.17g}")
        if verify:
            check = verify_scaling(p, points)
            if not check.agrees:
                raise EnvelopeViolation(f"scaling law failed: max deviation {check.max_deviation:.3e}")
            notes.append(f"scaling verified on {check.compared} zeros, deviation {check.max_deviation:.2e}")

    lower = [pt for pt in points.points if pt.k_im <= 0]
    consts = constants(scaled)
    if not lower:
        return [BoundCertificate(id="forbidden_domain", lhs=0.0, rhs=rhs,
                                 inputs=constant_inputs(consts, Case.DIRICHLET, scale=gamma),
                                 provenance=CONSTANT_PROVENANCE,
                                 notes=notes + ["no resonances in the window: vacuous"])]
    certs = []
    for pt in lower:
        k = gamma * pt.k
        certs.append(BoundCertificate(
            id="forbidden_domain",
            lhs=abs(k) * math.exp(-2.0 * abs(k.imag)),
            rhs=rhs,
            inputs=constant_inputs(consts, Case.DIRICHLET, scale=gamma,
                                   k_re=pt.k_re, k_im=pt.k_im),
            provenance=CONSTANT_PROVENANCE,
            notes=notes,
        ))
    return certs


def forbidden_curve(norm: float, im_values) -> np.ndarray:
    """Boundary |k| = ||q|| e^{||q||} e^{2|Im k|} of the resonance-free region (unit diameter)."""
    return norm * math.exp(norm) * np.exp(2.0 * np.abs(np.asarray(im_values, float)))


def rouche_lhs(consts: PotentialConstants, r: float) -> float:
    h = consts.Q / max(1.0, r)
    return consts.norm_l1 * (1.0 + h * math.exp(2.0 * consts.gamma * r + h))


def rouche_predicate(consts: PotentialConstants, r: float) -> Tuple[bool, BoundCertificate]:
    """||q||(1 + h e^{2 gamma r + h}) < 2r, or the simpler sufficient condition
    1 <= r <= 1/(2 gamma) with 2||q|| <= r; either gives exactly one simple zero of w in |k| < r.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    lhs = rouche_lhs(consts, r)
    holds = lhs < 2.0 * r
    part_ii = (1.0 <= r and (consts.gamma == 0 or r <= 1.0 / (2.0 * consts.gamma))
               and 2.0 * consts.norm_l1 <= r)
    notes = []
    if part_ii:
        notes.append("simplified condition 1 <= r <= 1/(2 gamma), 2||q|| <= r holds")
        if not holds:
            logger.warning("simplified Rouche condition holds but the full one does not (r=%g)", r)
    cert = BoundCertificate(
        id="rouche",
        lhs=lhs,
        rhs=2.0 * r,
        inputs=constant_inputs(consts, Case.LINE, r=r, h=consts.Q / max(1.0, r), part_ii=part_ii),
        provenance=CONSTANT_PROVENANCE,
        notes=notes,
    )
    return holds or part_ii, cert


def rouche_zero_check(p: PiecewisePotential, r: float) -> BoundCertificate:
    """Count zeros of w in |k| < r directly; passes iff there is exactly one."""
    c = canonicalize(p.with_case(Case.LINE))
    count = disk_count(EntireFunction.wronskian(c), 0j, r)
    return BoundCertificate(id="rouche_single_zero", lhs=float(abs(count - 1)), rhs=0.0,
                            inputs={"r": r, "count": count},
                            notes=["lhs = |count - 1|"])


def rouche_threshold(shape: PiecewisePotential, r: float) -> float:
    """Largest scale lam such that lam * shape satisfies the Rouche condition at radius r."""
    base = constants(canonicalize(shape))
    if base.norm_l1 == 0:
        return math.inf

    def excess(lam: float) -> float:
        scaled = PotentialConstants(gamma=base.gamma, norm_l1=lam * base.norm_l1,
                                    norm_weighted=lam * base.norm_weighted,
                                    q0=lam * base.q0, Q=lam * base.Q)
        return rouche_lhs(scaled, r) - 2.0 * r

    hi = 1.0
    while excess(hi) < 0:
        hi *= 2.0
    return brentq(excess, 0.0, hi, xtol=1e-14)


def factorization_check(p: PiecewisePotential, grid) -> float:
    """max |w~(k) - 2 psi_+(0,k) psi_+'(0,k)| / max(|w~|, 1) over the grid.

    w~ is the Wronskian of q(|x|) on [-gamma, gamma], evaluated centered.
    """
    if not p.case.is_half_line:
        raise PotentialError("factorization needs a half-line potential", "case")
    ks = np.asarray(grid, dtype=complex).ravel()
    ext = even_extension(p).potential
    w_tilde = evaluate_many(ext, ks).w
    half = evaluate_many(canonicalize(p), ks)
    product = 2.0 * half.psi0 * half.dpsi0
    scale = np.maximum(np.maximum(np.abs(w_tilde), np.abs(product)), 1.0)
    return float(np.max(np.abs(w_tilde - product) / scale))


def even_extension_envelope(p: PiecewisePotential, grid) -> float:
    """max over the grid of |w~ - 2ik + 2 q0| over its envelope for the doubled potential.

    The envelope is min(||q1|| Q~/|k|_1, Q~^2/|k|_1) exp(4 gamma v_- + Q~/|k|_1)
    with ||q1|| = 2||q|| and Q~ = 2||q|| max(1, gamma).
    """
    ext = even_extension(p)
    consts = constants(canonicalize(p))
    ks = np.asarray(grid, dtype=complex).ravel()
    w_tilde = evaluate_many(ext.potential, ks).w
    excess = np.abs(w_tilde - 2j * ks + 2.0 * consts.q0)
    k_1 = np.maximum(1.0, np.abs(ks))
    q_tilde = ext.q_tilde
    norm1 = 2.0 * consts.norm_l1
    prefactor = np.minimum(norm1 * q_tilde, q_tilde ** 2) / k_1
    envelope = prefactor * np.exp(4.0 * consts.gamma * v_minus(ks) + q_tilde / k_1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(envelope > 0, excess / envelope, np.where(excess > 0, np.inf, 0.0))
    return float(np.max(ratio))


def factorization_spectra(p: PiecewisePotential, window: Rectangle,
                          tol: float = DEFAULT_TOL) -> Tuple[SpectrumWindow, SpectrumWindow, SpectrumWindow]:
    """Line spectrum of q(|x|) next to the Dirichlet and Neumann spectra of q in one window."""
    c = canonicalize(p)
    ext = even_extension(p).potential
    return (locate_zeros(EntireFunction.wronskian(ext), window, tol),
            locate_zeros(EntireFunction.psi0(c), window, tol),
            locate_zeros(EntireFunction.dpsi0(c), window, tol))


def spectra_union_deviation(line: SpectrumWindow, dirichlet: SpectrumWindow,
                            neumann: SpectrumWindow) -> float:
    """Largest relative distance from a line zero to its matched Dirichlet/Neumann zero.

    Zeros are matched one by one with multiplicity; inf when the totals differ.
    """
    half = [pt.k for pt in dirichlet.points + neumann.points for _ in range(pt.multiplicity)]
    full = [pt.k for pt in line.points for _ in range(pt.multiplicity)]
    if len(half) != len(full):
        return math.inf
    dev = 0.0
    for k in full:
        i = int(np.argmin([abs(k - z) for z in half]))
        dev = max(dev, abs(k - half.pop(i)) / max(1.0, abs(k)))
    return dev
