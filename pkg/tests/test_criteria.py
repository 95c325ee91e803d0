import math

import numpy as np
import pytest

from resonance.bounds import (
    even_extension_envelope,
    factorization_check,
    factorization_spectra,
    forbidden_curve,
    forbidden_domain_check,
    rouche_predicate,
    rouche_threshold,
    rouche_zero_check,
    spectra_union_deviation,
    verify_scaling,
)
from resonance.errors import PotentialError
from resonance.potential import Case, PiecewisePotential, constants
from resonance.zeros import EntireFunction, Rectangle, SpectralPoint, SpectrumWindow, locate_zeros

GRID = (np.linspace(-10.0, 10.0, 21)[None, :] + 1j * np.linspace(-3.0, 0.0, 7)[:, None]).ravel()


def _dirichlet_zeros(p, rect):
    return locate_zeros(EntireFunction.psi0(p), rect, upper_half_plane_complete=True)


class TestForbiddenDomain:
    def test_unit_well(self, dirichlet_well):
        points = _dirichlet_zeros(dirichlet_well, Rectangle(u_min=-20.0, u_max=20.0, v_min=-5.0, v_max=12.0))
        certs = forbidden_domain_check(points, dirichlet_well)
        lower = [pt for pt in points.points if pt.k_im <= 0]
        assert len(certs) == len(lower) > 0
        assert all(c.passed for c in certs)
        assert certs[0].rhs == pytest.approx(10.0 * math.exp(10.0))

    def test_rescaled_with_verification(self):
        p = PiecewisePotential.constant(-1.0, 0.0, 2.0, Case.DIRICHLET)
        points = _dirichlet_zeros(p, Rectangle(u_min=-10.0, u_max=10.0, v_min=-3.0, v_max=3.5))
        certs = forbidden_domain_check(points, p, verify=True)
        assert all(c.passed for c in certs)
        assert certs[0].inputs["scale"] == 2.0
        assert any("scaling verified" in note for note in certs[0].notes)
        # the bound is stated for the rescaled q = -4 on [0, 1]
        assert certs[0].rhs == pytest.approx(4.0 * math.exp(4.0))

    def test_scaling_law(self):
        p = PiecewisePotential.constant(3.0, 0.0, 0.5, Case.DIRICHLET)
        points = _dirichlet_zeros(p, Rectangle(u_min=-15.0, u_max=15.0, v_min=-4.0, v_max=2.5))
        check = verify_scaling(p, points)
        assert check.agrees
        assert check.gamma == 0.5
        assert check.compared == points.total_multiplicity

    def test_vacuous_window(self, dirichlet_well):
        points = _dirichlet_zeros(dirichlet_well, Rectangle(u_min=-0.5, u_max=0.5, v_min=0.37, v_max=12.0))
        certs = forbidden_domain_check(points, dirichlet_well)
        assert len(certs) == 1
        assert certs[0].lhs == 0.0 and "vacuous" in certs[0].notes[-1]

    def test_dirichlet_only(self, barrier, neumann_steps):
        points = _dirichlet_zeros(neumann_steps, Rectangle(u_min=-2.0, u_max=2.0, v_min=-1.0, v_max=5.0))
        with pytest.raises(PotentialError):
            forbidden_domain_check(points, neumann_steps)
        with pytest.raises(PotentialError):
            forbidden_domain_check(points, barrier)

    def test_curve(self):
        curve = forbidden_curve(1.0, [0.0, -1.0, 1.0])
        assert curve[0] == pytest.approx(math.e)
        assert curve[1] == curve[2] == pytest.approx(math.e ** 3)


class TestRouche:
    def test_small_potential_single_zero(self):
        p = PiecewisePotential.constant(0.05, 0.0, 1.0)
        holds, cert = rouche_predicate(constants(p), 1.0)
        assert holds and cert.passed
        zero = rouche_zero_check(p, 1.0)
        assert zero.inputs["count"] == 1
        assert zero.passed

    def test_large_potential_fails(self, barrier):
        holds, cert = rouche_predicate(constants(barrier), 1.0)
        assert not holds
        assert not cert.passed
        assert cert.inputs["part_ii"] is False

    def test_simplified_condition(self):
        consts = constants(PiecewisePotential.constant(0.1, 0.0, 0.5))
        holds, cert = rouche_predicate(consts, 1.0)
        assert holds
        assert cert.inputs["part_ii"] is True
        assert "simplified condition" in cert.notes[0]

    def test_radius_must_be_positive(self, barrier):
        with pytest.raises(ValueError):
            rouche_predicate(constants(barrier), 0.0)

    def test_threshold_is_sharp(self):
        shape = PiecewisePotential.constant(1.0, 0.0, 1.0)
        lam = rouche_threshold(shape, 1.0)
        assert 0.0 < lam < 1.0
        below, _ = rouche_predicate(constants(PiecewisePotential.constant(0.99 * lam, 0.0, 1.0)), 1.0)
        above, _ = rouche_predicate(constants(PiecewisePotential.constant(1.01 * lam, 0.0, 1.0)), 1.0)
        assert below and not above

    def test_threshold_of_zero_shape(self):
        assert rouche_threshold(PiecewisePotential.zero(), 1.0) == math.inf


class TestFactorization:
    @pytest.mark.parametrize("fixture", ["neumann_steps", "dirichlet_well"])
    def test_even_wronskian_factorizes(self, fixture, request):
        p = request.getfixturevalue(fixture)
        assert factorization_check(p, GRID) < 1e-10

    def test_offset_support(self):
        p = PiecewisePotential(case=Case.DIRICHLET, breakpoints=[0.3, 0.8, 1.2], values=[2.0, -5.0])
        assert factorization_check(p, GRID) < 1e-10

    def test_line_rejected(self, barrier):
        with pytest.raises(PotentialError):
            factorization_check(barrier, GRID)

    def test_envelope(self, neumann_steps):
        assert even_extension_envelope(neumann_steps, GRID) <= 1.0

    @pytest.mark.slow
    def test_spectra_split(self, neumann_steps):
        window = Rectangle(u_min=-7.3, u_max=7.1, v_min=-2.9, v_max=4.7)
        line, dirichlet, neumann = factorization_spectra(neumann_steps, window)
        assert line.complete and dirichlet.complete and neumann.complete
        assert line.total_multiplicity == dirichlet.total_multiplicity + neumann.total_multiplicity > 0
        assert spectra_union_deviation(line, dirichlet, neumann) <= 1e-8

    def test_union_deviation_matches_with_multiplicity(self):
        rect = Rectangle(u_min=-5.0, u_max=5.0, v_min=-5.0, v_max=1.0)

        def window(*roots):
            points = [SpectralPoint.from_root(complex(k), m) for k, m in roots]
            return SpectrumWindow(function="f", rectangle=rect, points=points,
                                  count=sum(m for _, m in roots), complete=True)

        line = window((1.0 - 1.0j, 1), (-1.0 - 1.0j, 2), (0.5j, 1))
        dirichlet = window((-1.0 - 1.0j, 1), (0.5j + 1e-9, 1))
        neumann = window((1.0 - 1.0j, 1), (-1.0 - 1.0j, 1))
        assert spectra_union_deviation(line, dirichlet, neumann) == pytest.approx(1e-9)
        assert spectra_union_deviation(line, dirichlet, window((1.0 - 1.0j, 1))) == math.inf
