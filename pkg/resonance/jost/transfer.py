"""Jost solutions, Wronskian and scattering data by exact transfer matrices.

On a constant piece q = v the equation -f'' + v f = k^2 f is solved exactly
by the entire kernels C, S of z = (k^2 - v) * length^2, so every quantity
here is an entire function of k with no branch cut.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import pandas as pd

from config import OVERFLOW_LIMIT
from resonance.errors import EngineOverflow, EnvelopeViolation
from resonance.jost.kernels import cs_kernels_with_derivative
from resonance.potential import PiecewisePotential, canonicalize, constants

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntirePieceMatrix:
    """Backward propagator of (f, f') across one constant piece, and its k-derivative."""
    value: float
    length: float
    k: complex
    matrix: np.ndarray
    derivative: np.ndarray

    @classmethod
    def build(cls, value: float, length: float, k: complex) -> "EntirePieceMatrix":
        m, dm = _backward_entries(value, length, np.asarray([k], dtype=complex))
        return cls(value, length, complex(k), _as_matrix(m, 0), _as_matrix(dm, 0))

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))


@dataclass(frozen=True)
class JostEvaluation:
    """psi_+(0,k), psi_+'(0,k), w(k), s(k) and k-derivatives at one k."""
    k: complex
    psi0: complex
    dpsi0: complex
    w: complex
    s: complex
    dw: complex
    d_psi0: complex
    d_dpsi0: complex


@dataclass(frozen=True)
class JostGrid:
    """Same fields as JostEvaluation over an array of k."""
    k: np.ndarray
    psi0: np.ndarray
    dpsi0: np.ndarray
    w: np.ndarray
    s: np.ndarray
    dw: np.ndarray
    d_psi0: np.ndarray
    d_dpsi0: np.ndarray

    def at(self, i: int) -> JostEvaluation:
        return JostEvaluation(*(complex(np.ravel(getattr(self, f))[i]) for f in
                                ("k", "psi0", "dpsi0", "w", "s", "dw", "d_psi0", "d_dpsi0")))


def _backward_entries(value: float, length: float, k: np.ndarray):
    """Entries (m11, m12, m21, m22) and their k-derivatives for a piece of given length."""
    lam = k * k - value
    z = lam * length * length
    c, sk, dc_dz, ds_dz = cs_kernels_with_derivative(z)
    dz = 2.0 * k * length * length
    dc = dc_dz * dz
    ds = ds_dz * dz
    m = (c, -length * sk, lam * length * sk, c)
    dm = (dc, -length * ds, 2.0 * k * length * sk + lam * length * ds, dc)
    return m, dm


def _as_matrix(entries, i: int) -> np.ndarray:
    m11, m12, m21, m22 = (np.ravel(e)[i] for e in entries)
    return np.array([[m11, m12], [m21, m22]], dtype=complex)


def _segments(p: PiecewisePotential) -> Tuple[List[Tuple[float, float, float]], float, float]:
    """Pieces to sweep right-to-left, the start point, and the left end a = min(x0, 0).

    Pieces straddling 0 are split there and a zero piece is inserted on
    [0, x0] when the support starts right of the origin, so the state at
    x = 0 is always captured.
    """
    if not p.values:
        return [], 0.0, 0.0
    segs = []
    for a, b, v in p.pieces():
        if a < 0.0 < b:
            segs.append((a, 0.0, v))
            segs.append((0.0, b, v))
        else:
            segs.append((a, b, v))
    x0, x_right = p.breakpoints[0], p.breakpoints[-1]
    if x0 > 0.0:
        segs.insert(0, (0.0, x0, 0.0))
    if x_right < 0.0:
        segs.append((x_right, 0.0, 0.0))
        x_right = 0.0
    return segs[::-1], x_right, min(x0, 0.0)


def _check_overflow(k: np.ndarray, *arrays):
    for arr in arrays:
        mag = np.abs(arr)
        bad = ~(mag <= OVERFLOW_LIMIT)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise EngineOverflow(complex(np.ravel(k)[i]), float(np.ravel(mag)[i]))


def evaluate_many(p: PiecewisePotential, ks) -> JostGrid:
    """Vectorized evaluation over an array of complex k."""
    k = np.asarray(ks, dtype=complex)
    shape = k.shape
    k = k.ravel()

    segs, x_start, a = _segments(p)
    e = np.exp(1j * k * x_start)
    f = e.copy()
    df = 1j * k * e
    f_k = 1j * x_start * e
    df_k = (1j - k * x_start) * e

    psi0 = f if x_start == 0.0 else None
    at_zero = (f, df, f_k, df_k) if x_start == 0.0 else None
    for left, right, value in segs:
        m, dm = _backward_entries(value, right - left, k)
        f_new = m[0] * f + m[1] * df
        df_new = m[2] * f + m[3] * df
        f_k_new = dm[0] * f + dm[1] * df + m[0] * f_k + m[1] * df_k
        df_k_new = dm[2] * f + dm[3] * df + m[2] * f_k + m[3] * df_k
        f, df, f_k, df_k = f_new, df_new, f_k_new, df_k_new
        _check_overflow(k, f, df, f_k, df_k)
        if left == 0.0:
            at_zero = (f, df, f_k, df_k)
    if at_zero is None:
        raise RuntimeError("propagation never reached x = 0")
    psi0, dpsi0, d_psi0, d_dpsi0 = at_zero

    # Wronskian with psi_-(x) = exp(-ikx) evaluated at the left end a
    ea = np.exp(-1j * k * a)
    inner = df + 1j * k * f
    w = ea * inner
    dw = ea * (-1j * a * inner + df_k + 1j * f + 1j * k * f_k)
    s = np.exp(1j * k * a) * (1j * k * f - df)
    _check_overflow(k, w, dw, s)

    return JostGrid(*(arr.reshape(shape) for arr in (k, psi0, dpsi0, w, s, dw, d_psi0, d_dpsi0)))


def evaluate(p: PiecewisePotential, k: complex) -> JostEvaluation:
    """Jost data at a single complex k (k = 0 allowed)."""
    return evaluate_many(p, np.asarray([k], dtype=complex)).at(0)


def v_minus(k) -> np.ndarray:
    """(|Im k| - Im k) / 2: |Im k| in the lower half-plane, 0 above."""
    im = np.imag(k)
    return (np.abs(im) - im) / 2.0


def w_star(p: PiecewisePotential, k: complex) -> complex:
    """w(k) - 2ik + q0 for the canonical potential, checked against both envelopes."""
    c = canonicalize(p)
    consts = constants(c)
    ev = evaluate(c, k)
    value = ev.w - 2j * k + consts.q0

    k_1 = max(1.0, abs(k))
    h = consts.Q / k_1
    growth = 2.0 * consts.gamma * float(v_minus(k))
    env_w2 = consts.norm_l1 * h * np.exp(h + growth)
    env_w1x = consts.Q ** 2 / k_1 * np.exp(consts.Q / k_1 + growth)
    slack = 1e-9 * max(env_w2, 1.0) + 1e-12 * (abs(ev.w) + abs(consts.q0))
    if abs(value) > env_w2 + slack or abs(value) > env_w1x + slack:
        raise EnvelopeViolation(
            f"|w_*({k})| = {abs(value):.6e} exceeds envelope "
            f"{min(env_w2, env_w1x):.6e}")
    return complex(value)


def jost_a(p: PiecewisePotential, k: complex) -> complex:
    """a(k) = w(k)/(2ik); 1/a is the transmission coefficient."""
    if k == 0:
        raise ValueError("a(k) is not defined at k = 0")
    return complex(evaluate(p, k).w / (2j * k))


def scattering_matrix(p: PiecewisePotential, k: float) -> np.ndarray:
    """S(k) = [[1/a, r_-], [r_+, 1/a]] with r_(+/-) = s(-/+k)/w(k), for real k != 0."""
    if p.case.is_half_line:
        raise ValueError("the scattering matrix is defined for the line case")
    if np.iscomplexobj(k) and np.imag(k) != 0:
        raise ValueError("the scattering matrix needs real k")
    k = float(np.real(k))
    if k == 0.0:
        raise ValueError("the scattering matrix is not defined at k = 0")

    grid = evaluate_many(p, np.array([k, -k], dtype=complex))
    w, s_plus, s_minus = grid.w[0], grid.s[0], grid.s[1]
    transmission = 2j * k / w
    S = np.array([[transmission, s_plus / w],
                  [s_minus / w, transmission]], dtype=complex)

    defect = np.linalg.norm(S @ S.conj().T - np.eye(2))
    if defect > 1e-10:
        raise EnvelopeViolation(f"S({k}) not unitary: ||SS* - I|| = {defect:.3e}")
    return S


def wronskian_grid(p: PiecewisePotential, re_values, im_values) -> pd.DataFrame:
    """w on the tensor grid re_values x im_values, one row per point."""
    re_grid, im_grid = np.meshgrid(np.asarray(re_values, float), np.asarray(im_values, float))
    grid = evaluate_many(p, re_grid + 1j * im_grid)
    return pd.DataFrame({
        "k_re": re_grid.ravel(),
        "k_im": im_grid.ravel(),
        "w_re": grid.w.real.ravel(),
        "w_im": grid.w.imag.ravel(),
    })
