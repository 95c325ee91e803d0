"""Neumann series for y(x,k) = exp(-ikx) psi_+(x,k), an oracle independent of the transfer matrices.

The iterations are

    y_0 = 1,   y_n(x) = int_x^gamma G(t - x, k) q(t) y_{n-1}(t) dt,
    G(t, k) = sin(kt)/k * exp(ikt).

sin(k(t-x))/k splits as sigma(t) cos(kx) - cos(kt) sigma(x) with
sigma(t) = sin(kt)/k, so each level only needs two running integrals.
Every level is held as a piecewise Chebyshev series (one per constant
piece of q) whose degree is doubled until the trailing coefficients drop
below tol / 2^n; the next level integrates those series exactly.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from numpy.polynomial import Chebyshev

from config import NEUMANN_MAX_TERMS
from resonance.errors import EnvelopeViolation, NeumannNotConverged, PotentialError
from resonance.jost.kernels import cs_kernels
from resonance.jost.transfer import v_minus
from resonance.potential import PiecewisePotential, constants

logger = logging.getLogger(__name__)

MIN_DEGREE = 16
MAX_DEGREE = 1024


@dataclass(frozen=True)
class NeumannSeriesResult:
    """y(x,k), its terms y_0..y_N at x, and the certified truncation error."""
    x: float
    k: complex
    value: complex
    terms: np.ndarray
    truncation_bound: float
    h: float

    @property
    def n_terms(self) -> int:
        return len(self.terms)


def _interpolate(func: Callable, a: float, b: float, atol: float) -> Chebyshev:
    deg = MIN_DEGREE
    while True:
        series = Chebyshev.interpolate(func, deg, domain=[a, b])
        coef = np.abs(series.coef)
        scale = coef.max(initial=0.0)
        if coef[-2:].max() <= max(atol, 64 * np.finfo(float).eps * scale):
            return series
        if deg >= MAX_DEGREE:
            raise NeumannNotConverged(f"Chebyshev degree {deg} not enough on [{a}, {b}]")
        deg *= 2


@dataclass
class _Level:
    # antiderivatives from the right end of each piece, plus the integral
    # over every piece strictly to the right
    anti_f: List[Chebyshev]
    anti_g: List[Chebyshev]
    tail_f: np.ndarray
    tail_g: np.ndarray
    total_f: complex
    total_g: complex


class _SeriesBuilder:
    """Builds y_1, y_2, ... lazily for one (potential, k)."""

    def __init__(self, p: PiecewisePotential, k: complex, tol: float):
        self.k = complex(k)
        self.pieces = list(p.pieces())
        self.tol = tol
        self.levels: List[_Level] = []

    def _cos_sigma(self, t):
        c, s = cs_kernels(self.k * self.k * t * t)
        return c, t * s

    def _combine(self, t, i_f, i_g):
        c, sigma = self._cos_sigma(t)
        return np.exp(-1j * self.k * t) * (c * i_f - sigma * i_g)

    def term_on_piece(self, n: int, j: int, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if n == 0:
            return np.ones_like(t, dtype=complex)
        lvl = self.levels[n - 1]
        i_f = lvl.tail_f[j] - lvl.anti_f[j](t)
        i_g = lvl.tail_g[j] - lvl.anti_g[j](t)
        return self._combine(t, i_f, i_g)

    def term(self, n: int, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if n == 0:
            return np.ones_like(x, dtype=complex)
        lvl = self.levels[n - 1]
        out = np.empty_like(x, dtype=complex)
        # left of the support both running integrals are complete
        left = x < self.pieces[0].left
        out[left] = self._combine(x[left], lvl.total_f, lvl.total_g)
        done = left
        for j, piece in enumerate(self.pieces):
            mask = ~done & (x <= piece.right)
            if np.any(mask):
                out[mask] = self.term_on_piece(n, j, x[mask])
            done = done | mask
        if not np.all(done):
            raise ValueError("x beyond the right end of the support")
        return out

    def extend(self) -> int:
        """Build the next level; returns its index n."""
        n = len(self.levels) + 1
        atol = self.tol / 2 ** n
        k = self.k
        anti_f, anti_g, tot_f, tot_g = [], [], [], []
        for j, (a, b, v) in enumerate(self.pieces):
            if v == 0.0:
                zero = Chebyshev([0j], domain=[a, b])
                anti_f.append(zero)
                anti_g.append(zero)
                tot_f.append(0j)
                tot_g.append(0j)
                continue

            def weighted(t, j=j, v=v):
                return v * np.exp(1j * k * t) * self.term_on_piece(n - 1, j, t)

            def integrand_f(t, weighted=weighted):
                return self._cos_sigma(t)[1] * weighted(t)

            def integrand_g(t, weighted=weighted):
                return self._cos_sigma(t)[0] * weighted(t)

            af = _interpolate(integrand_f, a, b, atol).integ(lbnd=b)
            ag = _interpolate(integrand_g, a, b, atol).integ(lbnd=b)
            anti_f.append(af)
            anti_g.append(ag)
            tot_f.append(-complex(af(a)))
            tot_g.append(-complex(ag(a)))

        tot_f, tot_g = np.asarray(tot_f), np.asarray(tot_g)
        tail_f = np.concatenate([np.cumsum(tot_f[::-1])[::-1][1:], [0j]])
        tail_g = np.concatenate([np.cumsum(tot_g[::-1])[::-1][1:], [0j]])
        self.levels.append(_Level(anti_f, anti_g, tail_f, tail_g,
                                  complex(tot_f.sum()), complex(tot_g.sum())))
        return n

    def weighted_integral(self, n: int) -> complex:
        """int q(t) y_n(t) dt over the support."""
        total = 0j
        atol = self.tol / 2 ** max(n, 1)
        for j, (a, b, v) in enumerate(self.pieces):
            if v == 0.0:
                continue
            series = _interpolate(lambda t, j=j, v=v: v * self.term_on_piece(n, j, t), a, b, atol)
            total += complex(series.integ(lbnd=a)(b))
        return total


def _require_canonical(p: PiecewisePotential):
    if not p.is_canonical:
        raise PotentialError("the Neumann series needs a canonical potential", "potential")


def _scale(p: PiecewisePotential, k: complex):
    consts = constants(p)
    h = consts.Q / max(1.0, abs(k))
    return consts, h


def _check_term(n: int, value: complex, envelope: float, atol: float):
    if abs(value) > envelope * (1 + 1e-8) + atol:
        raise EnvelopeViolation(f"|y_{n}| = {abs(value):.6e} exceeds h^n/n! envelope {envelope:.6e}")


def neumann_series(p: PiecewisePotential, x: float, k: complex,
                   tol: float = 1e-12) -> NeumannSeriesResult:
    """Sum the Neumann series at one point until the envelope tail drops below tol.

    Args:
        p: Canonical potential, support inside [0, gamma].
        x: Evaluation point in [0, gamma].
        k: Any complex wavenumber.
        tol: Bound on the truncation error.
    """
    _require_canonical(p)
    k = complex(k)
    if not p.values:
        return NeumannSeriesResult(float(x), k, 1 + 0j, np.ones(1, dtype=complex), 0.0, 0.0)

    consts, h = _scale(p, k)
    if not 0.0 <= x <= consts.gamma:
        raise ValueError(f"x = {x} outside [0, {consts.gamma}]")

    growth = 2.0 * (consts.gamma - x) * float(v_minus(k))
    builder = _SeriesBuilder(p, k, tol)
    terms = [1 + 0j]
    bound = h * math.exp(h + growth)
    n = 0
    while bound >= tol:
        if n >= NEUMANN_MAX_TERMS:
            raise NeumannNotConverged(
                f"tail {bound:.3e} above tol {tol:.1e} after {n} terms (h = {h:.3g})")
        n = builder.extend()
        y_n = complex(builder.term(n, x)[0])
        _check_term(n, y_n, h ** n / math.factorial(n) * math.exp(growth), tol)
        terms.append(y_n)
        bound = h ** (n + 1) / math.factorial(n + 1) * math.exp(h + growth)

    terms = np.asarray(terms)
    value = complex(terms.sum())
    slack = bound + 1e-9 * abs(value)
    env = math.exp(growth + h)
    if abs(value) > env + slack:
        raise EnvelopeViolation(f"|y| = {abs(value):.6e} exceeds {env:.6e}")
    if abs(value - 1) > h * env + slack:
        raise EnvelopeViolation(f"|y - 1| = {abs(value - 1):.6e} exceeds {h * env:.6e}")
    if len(terms) > 1 and abs(value - 1 - terms[1]) > h * h / 2 * env + slack:
        raise EnvelopeViolation("|y - 1 - y_1| exceeds h^2/2 envelope")

    logger.debug("neumann_series x=%g k=%s terms=%d tail=%.2e", x, k, len(terms), bound)
    return NeumannSeriesResult(float(x), k, value, terms, bound, h)


def neumann_w_star(p: PiecewisePotential, k: complex, tol: float = 1e-12) -> complex:
    """w_*(k) = -int q(t) (y(t,k) - 1) dt summed level by level."""
    _require_canonical(p)
    k = complex(k)
    if not p.values:
        return 0j

    consts, h = _scale(p, k)
    growth = 2.0 * consts.gamma * float(v_minus(k))
    builder = _SeriesBuilder(p, k, tol)
    total = 0j
    bound = consts.norm_l1 * h * math.exp(h + growth)
    n = 0
    while bound >= tol:
        if n >= NEUMANN_MAX_TERMS:
            raise NeumannNotConverged(f"w_* tail {bound:.3e} above tol after {n} terms")
        n = builder.extend()
        total += builder.weighted_integral(n)
        bound = consts.norm_l1 * h ** (n + 1) / math.factorial(n + 1) * math.exp(h + growth)
    return -total


def neumann_wronskian(p: PiecewisePotential, k: complex, tol: float = 1e-12) -> complex:
    """w(k) = 2ik - q0 + w_*(k) from the series."""
    q0 = constants(p).q0 if p.values else 0.0
    return 2j * complex(k) - q0 + neumann_w_star(p, k, tol)
