"""Class-membership witnesses for w, Jensen's formula and Carleson disk counts."""
import logging
import math
from typing import Optional

import numpy as np

from config import DEFAULT_TOL, IMAG_CAP_NUMERATOR
from resonance.bounds.certificate import CONSTANT_PROVENANCE, BoundCertificate, EgammaWitness, constant_inputs
from resonance.bounds.lieb_thirring import carleson_constant
from resonance.errors import CenterIsZero, EnvelopeViolation, QuadratureNotConverged, ZeroOnCircle
from resonance.jost.transfer import evaluate_many, v_minus
from resonance.potential import Case, PiecewisePotential, PotentialConstants, canonicalize, constants
from resonance.zeros.contour import Rectangle
from resonance.zeros.functions import EntireFunction
from resonance.zeros.locate import SpectrumWindow, locate_zeros

logger = logging.getLogger(__name__)

MAX_CIRCLE_POINTS = 2 ** 16


def default_complex_grid(consts: PotentialConstants, n_re: int = 41, n_im: int = 21) -> np.ndarray:
    depth = 5.0 if consts.gamma == 0 else min(5.0, IMAG_CAP_NUMERATOR / consts.gamma)
    re, im = np.meshgrid(np.linspace(-20.0, 20.0, n_re), np.linspace(-depth, depth, n_im))
    return (re + 1j * im).ravel()


def egamma_witness(p: PiecewisePotential, real_grid=None, complex_grid=None) -> EgammaWitness:
    """Check |w| >= 2|k| on a real grid and the exponential envelope of w - 2ik + q0 on a complex grid.

    Args:
        p: Line potential.
        real_grid: Real k values (default 1000 points in [-1000, 1000], zero excluded).
        complex_grid: Complex k values (default 41 x 21 over [-20, 20] x [-5, 5]).
    """
    if p.case.is_half_line:
        raise ValueError("the class witness is defined for the line Wronskian")
    c = canonicalize(p)
    consts = constants(c)

    ks = np.linspace(-1000.0, 1000.0, 1000) if real_grid is None else np.asarray(real_grid, float)
    ks = ks[ks != 0.0]
    w_real = evaluate_many(c, ks.astype(complex)).w
    d1 = np.abs(w_real) / (2.0 * np.abs(ks))
    i1 = int(np.argmin(d1))

    kc = default_complex_grid(consts) if complex_grid is None else np.asarray(complex_grid, complex).ravel()
    w_c = evaluate_many(c, kc).w
    excess = np.abs(w_c - 2j * kc + consts.q0)
    k_1 = np.maximum(1.0, np.abs(kc))
    envelope = consts.Q ** 2 / k_1 * np.exp(2.0 * consts.gamma * v_minus(kc) + consts.Q / k_1)
    with np.errstate(divide="ignore", invalid="ignore"):
        d2 = np.where(envelope > 0, excess / envelope, np.where(excess > 0, np.inf, 0.0))
    i2 = int(np.argmax(d2))

    return EgammaWitness(f0=consts.q0, Q=consts.Q, gamma=consts.gamma,
                         d1_min_ratio=float(d1[i1]), d1_argmin=float(ks[i1]),
                         d2_max_ratio=float(d2[i2]), d2_argmax_re=float(kc[i2].real),
                         d2_argmax_im=float(kc[i2].imag), n_real=len(ks), n_complex=len(kc))


def _circle_mean_log(f: EntireFunction, center: complex, r: float, tol: float = 1e-12) -> float:
    n = 256
    prev = None
    while n <= MAX_CIRCLE_POINTS:
        z = center + r * np.exp(2j * np.pi * np.arange(n) / n)
        cur = float(np.mean(np.log(np.abs(f(z)))))
        if prev is not None and abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
        n *= 2
    raise QuadratureNotConverged(
        f"circle mean of log|f| on |k - {center}| = {r} not settled at {n // 2} points")


def jensen_check(f: EntireFunction, center: complex, r: float,
                 points: Optional[SpectrumWindow] = None, tol: float = DEFAULT_TOL) -> float:
    """|log|f(c)| + sum log(r/|z_j - c|) - mean of log|f| on the circle|.

    Zeros inside the circle come from ``points`` when given (coverage is
    required) or are located in the bounding square.
    """
    center = complex(center)
    if r <= 0:
        raise ValueError("radius must be positive")
    if points is None:
        box = Rectangle(u_min=center.real - r, u_max=center.real + r,
                        v_min=center.imag - r, v_max=center.imag + r)
        points = locate_zeros(f, box, tol)
        if not points.complete:
            raise EnvelopeViolation("zero location in the Jensen box is incomplete")
    else:
        points.require_disk(center, r)

    f_c = complex(f(np.array([center]))[0])
    if f_c == 0:
        raise CenterIsZero(f"f({center}) = 0")
    zero_sum = 0.0
    for pt in points.points:
        d = abs(pt.k - center)
        if abs(d - r) <= 1e-8 * r:
            raise ZeroOnCircle(f"zero {pt.k} on the circle |k - {center}| = {r}")
        if d < r:
            if d <= 1e-12 * max(1.0, r):
                raise CenterIsZero(f"zero {pt.k} at the center")
            zero_sum += pt.multiplicity * math.log(r / d)

    lhs = math.log(abs(f_c)) + zero_sum
    rhs = _circle_mean_log(f, center, r)
    residual = abs(lhs - rhs)
    logger.debug("jensen %s c=%s r=%g residual=%.3e", f.name, center, r, residual)
    return residual


def omega_count(points: SpectrumWindow, t: float, r: float) -> int:
    """Mass of the shifted zero measure in D_-(t, r): zeros with Im k <= 0 and |k - i - t| < r."""
    return sum(pt.multiplicity for pt in points.points
               if pt.k_im <= 0 and abs(pt.k - 1j - t) < r)


def carleson_box_check(points: SpectrumWindow, t: float, r: float,
                       consts: PotentialConstants) -> BoundCertificate:
    """Omega(D_-(t, r)) <= N(r, f(t + .)) <= C(f) r."""
    if r <= 0:
        raise ValueError("r must be positive")
    points.require_disk(complex(t), r)
    omega = omega_count(points, t, r)
    middle = sum(pt.multiplicity for pt in points.points_in_disk(complex(t), r, closed=False))
    if omega > middle:
        raise EnvelopeViolation(f"Omega = {omega} exceeds N(r, f(t+.)) = {middle} at t={t}, r={r}")
    c_f = carleson_constant(consts)
    notes = []
    if r <= 1:
        notes.append("r <= 1: the shifted measure has no mass in the disk")
    return BoundCertificate(
        id="carleson",
        lhs=float(omega),
        rhs=c_f * r,
        inputs=constant_inputs(consts, Case.LINE, t=t, r=r, C_f=c_f, middle_count=middle),
        provenance={**CONSTANT_PROVENANCE, "C_f": "(12/log 4)(gamma/pi + 1 + (|q0| + 3Q)/4)"},
        notes=notes,
    )
