"""Dense Runge-Kutta integration of -f'' + q f = k^2 f, used only to cross-check the engine."""
import logging

import numpy as np
from scipy.integrate import solve_ivp

from resonance.jost.transfer import _segments
from resonance.potential import PiecewisePotential

logger = logging.getLogger(__name__)


def _integrate(p: PiecewisePotential, k: complex, max_step: float, rtol: float):
    segs, x_start, a = _segments(p)
    e = np.exp(1j * k * x_start)
    state = np.array([e, 1j * k * e], dtype=complex)
    for left, right, value in segs:
        lam = k * k - value

        def rhs(_, y, lam=lam):
            return [y[1], -lam * y[0]]

        sol = solve_ivp(rhs, (right, left), state, method="DOP853",
                        rtol=rtol, atol=rtol * 1e-3, max_step=max_step)
        if not sol.success:
            raise RuntimeError(f"ODE oracle failed on [{left}, {right}]: {sol.message}")
        state = sol.y[:, -1]
    f, df = state
    return np.exp(-1j * k * a) * (df + 1j * k * f)


def ode_wronskian(p: PiecewisePotential, k: complex, rtol: float = 1e-12,
                  target: float = 1e-10, max_halvings: int = 8) -> complex:
    """w(k) by integrating the ODE from the right end with Jost data, halving the step until stable."""
    k = complex(k)
    if not p.values:
        return 2j * k
    length = p.breakpoints[-1] - min(p.breakpoints[0], 0.0)
    step = length / 8
    prev = _integrate(p, k, step, rtol)
    for _ in range(max_halvings):
        step /= 2
        cur = _integrate(p, k, step, rtol)
        if abs(cur - prev) <= target * max(abs(cur), 1.0):
            return complex(cur)
        prev = cur
    logger.warning("ODE oracle not stable at k=%s after %d halvings", k, max_halvings)
    return complex(prev)
