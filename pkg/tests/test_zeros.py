import numpy as np
import pytest

from resonance.errors import IncompleteCoverage, QuadratureNotConverged, ZeroOnContour
from resonance.potential import Case, PiecewisePotential
from resonance.zeros import (
    EntireFunction,
    Rectangle,
    SpectralKind,
    auto_window,
    axis_bisection_zeros,
    count_zeros,
    count_zeros_on,
    counting_function,
    covers_upper_half_plane,
    locate_zeros,
)
from resonance.zeros.contour import argument_principle, disk_count, phase_winding_count
from resonance.zeros.locate import classify, eigenvalue_height, newton_refine

ROOTS = [1.0, 2.0 + 0.5j, -1.0 - 1.0j, -1.0 - 1.0j]


def _poly(roots):
    coef = np.poly(roots)
    dcoef = np.polyder(coef)
    return EntireFunction.from_callables("poly", lambda k: np.polyval(coef, k),
                                         lambda k: np.polyval(dcoef, k))


POLY = _poly(ROOTS)
BOX = Rectangle(u_min=-3.0, u_max=3.0, v_min=-2.0, v_max=1.0)


def test_rectangle_parse_and_geometry():
    rect = Rectangle.parse("-3,3,-2,1")
    assert rect == BOX
    assert rect.width == 6.0 and rect.height == 3.0
    assert rect.center == complex(0.0, -0.5)
    assert rect.contains_disk(0j, 1.0)
    assert not rect.contains_disk(0j, 1.5)
    assert rect.contains_disk(0j, 1.5, open_top=True)
    with pytest.raises(ValueError):
        Rectangle.parse("1,2,3")
    with pytest.raises(ValueError):
        Rectangle(u_min=1.0, u_max=1.0, v_min=0.0, v_max=1.0)


def test_polynomial_counts():
    assert argument_principle(POLY, BOX) == 4
    assert argument_principle(POLY, Rectangle(u_min=0.5, u_max=3.0, v_min=-2.0, v_max=1.0)) == 2
    assert disk_count(POLY, -1.0 - 1.0j, 0.5) == 2
    assert phase_winding_count(POLY, BOX) == 4


@pytest.mark.parametrize("at", [0.3 - 0.2j, -0.7 + 0.1j, 1.5 - 1.5j])
def test_partition_additivity(at):
    children = BOX.split(at)
    assert sum(argument_principle(POLY, child) for child in children) == 4
    left = Rectangle(u_min=-3.0, u_max=-1.3, v_min=-2.0, v_max=1.0)
    middle = Rectangle(u_min=-1.3, u_max=0.4, v_min=-2.0, v_max=1.0)
    right = Rectangle(u_min=0.4, u_max=3.0, v_min=-2.0, v_max=1.0)
    assert sum(argument_principle(POLY, r) for r in (left, middle, right)) == 4


def test_zero_on_edge_strict_and_retried():
    edge = Rectangle(u_min=-3.0, u_max=1.0, v_min=-2.0, v_max=1.0)
    with pytest.raises((ZeroOnContour, QuadratureNotConverged)):
        argument_principle(POLY, edge)
    # the dilated contour takes the zero at 1 inside
    assert count_zeros(POLY, edge) == 3


def test_locate_polynomial_zeros_with_multiplicity():
    window = locate_zeros(POLY, BOX)
    assert window.complete
    assert window.count == 4
    found = {(round(pt.k_re, 6), round(pt.k_im, 6)): pt.multiplicity for pt in window.points}
    assert found == {(1.0, 0.0): 1, (2.0, 0.5): 1, (-1.0, -1.0): 2}


def test_locate_is_ordered_by_modulus():
    window = locate_zeros(POLY, BOX)
    moduli = [pt.modulus for pt in window.points]
    assert moduli == sorted(moduli)


def test_newton_refine_simple_root():
    root = newton_refine(POLY, 1.1 + 0.05j)
    assert root == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("k, kind", [
    (0j, SpectralKind.REAL_RESONANCE),
    (2.0 + 0j, SpectralKind.REAL_RESONANCE),
    (1.5j, SpectralKind.EIGENVALUE),
    (-0.7j, SpectralKind.ANTIBOUND),
    (3.0 - 1.0j, SpectralKind.RESONANCE),
])
def test_classify(k, kind):
    assert classify(k) is kind


def test_free_line_spectrum_is_origin(free_line):
    window = locate_zeros(EntireFunction.wronskian(free_line), auto_window(free_line))
    assert window.complete
    assert len(window.points) == 1
    pt = window.points[0]
    assert pt.k == pytest.approx(0.0, abs=1e-10)
    assert pt.multiplicity == 1 and pt.kind is SpectralKind.REAL_RESONANCE


def test_free_half_line_spectra():
    p = PiecewisePotential.zero(Case.DIRICHLET)
    rect = Rectangle(u_min=-5.0, u_max=5.0, v_min=-5.0, v_max=1.0)
    assert locate_zeros(EntireFunction.psi0(p), rect).points == []
    neumann = locate_zeros(EntireFunction.dpsi0(p.with_case(Case.NEUMANN)), rect)
    assert [pt.k for pt in neumann.points] == [pytest.approx(0.0, abs=1e-10)]


def test_barrier_resonances_symmetric(barrier_spectrum):
    assert barrier_spectrum.complete
    assert barrier_spectrum.total_multiplicity > 0
    ks = [pt.k for pt in barrier_spectrum.points]
    for k in ks:
        assert min(abs(-np.conj(k) - other) for other in ks) < 1e-7
        assert k.imag < 1e-8


def test_barrier_zeros_are_zeros(barrier, barrier_spectrum):
    f = EntireFunction.wronskian(barrier)
    for pt in barrier_spectrum.points:
        val, dval = f.with_derivative(np.array([pt.k]))
        assert abs(val[0]) <= 1e-7 * max(1.0, abs(dval[0]))


def test_parallel_matches_serial(barrier):
    rect = Rectangle(u_min=-12.0, u_max=12.0, v_min=-4.0, v_max=1.0)
    f = EntireFunction.wronskian(barrier)
    serial = locate_zeros(f, rect, jobs=1)
    parallel = locate_zeros(f, rect, jobs=4)
    assert serial.points == parallel.points


def test_dirichlet_eigenvalues_match_axis_bisection(dirichlet_well):
    top = eigenvalue_height(dirichlet_well)
    rect = Rectangle(u_min=-10.0, u_max=10.0, v_min=-3.0, v_max=top)
    f = EntireFunction.psi0(dirichlet_well)
    window = locate_zeros(f, rect)
    eigen = sorted(pt.k_im for pt in window.by_kind(SpectralKind.EIGENVALUE))
    oracle = axis_bisection_zeros(f, 1e-6, top)
    assert len(eigen) == len(oracle) == 1
    assert eigen[0] == pytest.approx(oracle[0], abs=1e-8)


def test_counting_function_and_coverage(barrier_spectrum):
    assert counting_function(barrier_spectrum, 0.0) == 0
    n5 = counting_function(barrier_spectrum, 5.0)
    assert n5 <= counting_function(barrier_spectrum, 6.0)
    with pytest.raises(IncompleteCoverage):
        counting_function(barrier_spectrum, 50.0)


def test_auto_window(barrier, free_line):
    rect = auto_window(barrier)
    assert rect.u_max == pytest.approx(25.0 * np.pi)
    assert rect.v_min == pytest.approx(-40.0)
    assert rect.v_max == pytest.approx(6.0)
    assert covers_upper_half_plane(barrier, rect)
    assert auto_window(free_line).as_tuple() == (-10.0, 10.0, -10.0, 1.0)


def test_well_count_matches_phase_winding():
    f = EntireFunction.wronskian(PiecewisePotential.constant(-10.0, 0.0, 1.0))
    count, contour = count_zeros_on(f, Rectangle(u_min=-8.0, u_max=8.0, v_min=-6.0, v_max=0.0))
    assert count > 0
    assert count == phase_winding_count(f, contour)


def test_halving_tol_keeps_simple_roots(barrier):
    rect = Rectangle(u_min=-10.0, u_max=10.0, v_min=-4.0, v_max=1.0)
    f = EntireFunction.wronskian(barrier)
    coarse = locate_zeros(f, rect, tol=1e-6)
    fine = locate_zeros(f, rect, tol=5e-7)
    assert coarse.total_multiplicity == fine.total_multiplicity > 0
    for pt in coarse.points:
        if pt.multiplicity == 1:
            assert min(abs(pt.k - other.k) for other in fine.points) < 1e-6
