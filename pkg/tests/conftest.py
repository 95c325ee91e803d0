"""Shared potentials and session-cached spectra."""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from resonance.potential import Case, PiecewisePotential  # noqa: E402
from resonance.zeros import EntireFunction, Rectangle, locate_zeros  # noqa: E402

POTENTIAL_DIR = Path(__file__).resolve().parent.parent / "data" / "potentials"


@pytest.fixture
def free_line():
    return PiecewisePotential.zero(Case.LINE)


@pytest.fixture
def barrier():
    """q = 5 on [0, 1]."""
    return PiecewisePotential.constant(5.0, 0.0, 1.0)


@pytest.fixture
def three_steps():
    return PiecewisePotential(case=Case.LINE, breakpoints=[-1.0, -0.2, 0.3, 1.0],
                              values=[-4.0, 6.0, -1.5])


@pytest.fixture
def dirichlet_well():
    """q = -10 on [0, 1] with a Dirichlet condition at 0."""
    return PiecewisePotential.constant(-10.0, 0.0, 1.0, Case.DIRICHLET)


@pytest.fixture
def neumann_steps():
    return PiecewisePotential(case=Case.NEUMANN, breakpoints=[0.0, 0.4, 1.5], values=[3.0, -2.0])


@pytest.fixture(scope="session")
def barrier_spectrum():
    """Zeros of w for q = 5 on [0, 1] in [-20, 20] x [-6, 1]."""
    p = PiecewisePotential.constant(5.0, 0.0, 1.0)
    window = Rectangle(u_min=-20.0, u_max=20.0, v_min=-6.0, v_max=1.0)
    return locate_zeros(EntireFunction.wronskian(p), window, upper_half_plane_complete=True)


@pytest.fixture
def potential_dir():
    return POTENTIAL_DIR
