"""Entire kernels C(z) = cos(sqrt z) and S(z) = sin(sqrt z)/sqrt z.

Both are even in sqrt(z), so any square-root branch gives the same value
and the functions are entire in z. Small |z| uses the Maclaurin series to
avoid the 0/0 in S and the cancellation in S'.
"""
import numpy as np

SERIES_RADIUS = 0.25

# 14 terms reach double precision for |z| < 1/4
_N_TERMS = 14
_FACT = np.array([float(np.prod(np.arange(1, n + 1, dtype=float))) for n in range(2 * _N_TERMS + 3)])
_C_COEF = np.array([(-1.0) ** n / _FACT[2 * n] for n in range(_N_TERMS)])
_S_COEF = np.array([(-1.0) ** n / _FACT[2 * n + 1] for n in range(_N_TERMS)])
# S'(z) = sum_{n>=1} n (-1)^n z^(n-1) / (2n+1)!
_DS_COEF = np.array([(n + 1) * (-1.0) ** (n + 1) / _FACT[2 * n + 3] for n in range(_N_TERMS)])


def _horner(coef: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coef[::-1]:
        acc = acc * z + c
    return acc


def cs_kernels(z):
    """Return (C(z), S(z)) elementwise for complex array z."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < SERIES_RADIUS
    s = np.sqrt(np.where(small, 1.0, z))
    c_trig = np.cos(s)
    s_trig = np.sin(s) / s
    c = np.where(small, _horner(_C_COEF, z), c_trig)
    sk = np.where(small, _horner(_S_COEF, z), s_trig)
    return c, sk


def cs_kernels_with_derivative(z):
    """Return (C, S, dC/dz, dS/dz) elementwise.

    dC/dz = -S/2 and dS/dz = (C - S) / (2z), the latter from its series
    near the origin.
    """
    z = np.asarray(z, dtype=complex)
    c, sk = cs_kernels(z)
    small = np.abs(z) < SERIES_RADIUS
    dc = -0.5 * sk
    z_safe = np.where(small, 1.0, z)
    ds = np.where(small, _horner(_DS_COEF, z), (c - sk) / (2.0 * z_safe))
    return c, sk, dc, ds
