"""Randomized potential battery for the bound certificates."""
from typing import List

from config import get_rng
from resonance.potential import Case, PiecewisePotential

BATTERY_SIZE = 50
BATTERY_STREAM = 7
CASES = [Case.LINE, Case.DIRICHLET, Case.NEUMANN]


def random_potential(index: int, case: Case = None) -> PiecewisePotential:
    """One reproducible potential: 1-5 pieces, values in [-30, 30], support diameter in [0.2, 3]."""
    rng = get_rng(BATTERY_STREAM, index)
    case = case or CASES[index % len(CASES)]
    n_pieces = int(rng.integers(1, 6))
    diameter = float(rng.uniform(0.2, 3.0))
    left = 0.0 if case.is_half_line else float(rng.uniform(-1.0, 1.0))
    cuts = sorted(float(c) for c in rng.uniform(0.0, diameter, n_pieces - 1))
    breakpoints = [left] + [left + c for c in cuts] + [left + diameter]
    values = [float(v) for v in rng.uniform(-30.0, 30.0, n_pieces)]
    return PiecewisePotential(case=case, breakpoints=breakpoints, values=values)


def get_battery(size: int = BATTERY_SIZE) -> List[PiecewisePotential]:
    """The fixed battery; cases cycle line, Dirichlet, Neumann."""
    return [random_potential(i) for i in range(size)]


def small_norm_battery(size: int = 20) -> List[PiecewisePotential]:
    """Line potentials with ||q|| <= 0.1 on [0, 1], for the single-zero criterion."""
    out = []
    for i in range(size):
        rng = get_rng(BATTERY_STREAM, 1000 + i)
        n_pieces = int(rng.integers(1, 4))
        cuts = sorted(float(c) for c in rng.uniform(0.0, 1.0, n_pieces - 1))
        values = rng.uniform(-0.1, 0.1, n_pieces)
        out.append(PiecewisePotential(case=Case.LINE, breakpoints=[0.0] + cuts + [1.0],
                                      values=[float(v) for v in values]))
    return out
