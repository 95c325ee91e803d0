import math

import numpy as np
import pytest

from resonance.bounds import (
    BoundCertificate,
    asymptotic_slope,
    carleson_box_check,
    carleson_constant,
    counting_bound_rhs,
    counting_certificate,
    counting_egamma_certificate,
    egamma_counting_bound_rhs,
    egamma_witness,
    half_line_counting_certificate,
    jensen_check,
    lt_sum_certificate,
    lt_sum_egamma_certificate,
    omega_count,
    q_calligraphic,
    report_text,
    resonance_sum,
    y_p,
    y_p_asymptotics,
    y_p_quadrature,
)
from resonance.errors import CenterIsZero, IncompleteCoverage, QuadratureNotConverged
from resonance.potential import Case, PiecewisePotential, PotentialConstants, constants
from resonance.zeros import EntireFunction, Rectangle, SpectralPoint, SpectrumWindow, auto_window, locate_zeros


def _window(roots, rect=Rectangle(u_min=-10.0, u_max=10.0, v_min=-10.0, v_max=5.0)):
    points = [SpectralPoint.from_root(complex(k), 1) for k in roots]
    return SpectrumWindow(function="w", rectangle=rect, points=points, count=len(points),
                          complete=True, upper_half_plane_complete=True)


@pytest.fixture(scope="module")
def free_spectrum():
    p = PiecewisePotential.zero()
    return locate_zeros(EntireFunction.wronskian(p), auto_window(p), upper_half_plane_complete=True)


class TestYp:
    def test_y2_is_pi(self):
        assert y_p(2.0) == pytest.approx(math.pi, rel=1e-12)

    @pytest.mark.parametrize("p", [1.05, 1.1, 1.5, 2.5, 3.0, 7.0, 20.0, 49.0])
    def test_gamma_identity_matches_quadrature(self, p):
        assert y_p_quadrature(p) == pytest.approx(y_p(p, verify=False), rel=1e-8)

    def test_monotone_and_convex(self):
        ps = np.linspace(1.05, 50.0, 200)
        ys = np.array([y_p(p, verify=False) for p in ps])
        assert np.all(np.diff(ys) < 0)
        assert np.all(np.diff(ys, 2) > 0)

    @pytest.mark.parametrize("p", [1e2, 1e3, 1e4])
    def test_large_p_trend(self, p):
        assert y_p_asymptotics(p)["large_p_ratio"] == pytest.approx(1.0, rel=0.05)

    @pytest.mark.parametrize("p", [1.0, 0.9, -2.0])
    def test_p_must_exceed_one(self, p):
        with pytest.raises(ValueError, match="p must exceed 1"):
            y_p(p)


class TestCertificate:
    def test_margin_and_pass_derived(self):
        cert = BoundCertificate(id="x", lhs=1.0, rhs=3.0, margin=-100.0, passed=False)
        assert cert.margin == 2.0
        assert cert.passed
        assert not BoundCertificate(id="x", lhs=3.0, rhs=1.0).passed

    def test_dump_uses_pass_alias(self):
        record = BoundCertificate(id="x", lhs=0.0, rhs=1.0).model_dump(by_alias=True)
        assert record["pass"] is True
        assert list(record) == ["id", "lhs", "rhs", "margin", "pass", "inputs", "provenance", "notes"]

    def test_report_text_flags_failures(self):
        text = report_text([BoundCertificate(id="ok", lhs=0.0, rhs=1.0),
                            BoundCertificate(id="bad", lhs=2.0, rhs=1.0)])
        assert "ok" in text and text.strip().endswith("NO")


class TestLiebThirring:
    def test_free_line_sum(self, free_spectrum):
        consts = constants(PiecewisePotential.zero())
        cert = lt_sum_certificate(free_spectrum, 2.0, consts, Case.LINE)
        assert cert.lhs == pytest.approx(0.25, rel=1e-12)
        assert cert.rhs == pytest.approx(32.0 * math.pi, rel=1e-12)
        assert cert.passed
        assert any("k = 0 counted once" in note for note in cert.notes)

    def test_sum_uses_half_plane_shift(self):
        window = _window([1.5j, 3.0 - 1.0j])
        expected = abs(3.5j) ** -2.0 + abs(3.0 - 3.0j) ** -2.0
        assert resonance_sum(window, 2.0) == pytest.approx(expected)
        assert resonance_sum(window, 2.0, radius=2.0) == pytest.approx(abs(3.5j) ** -2.0)

    def test_barrier_sums_pass(self, barrier, barrier_spectrum):
        consts = constants(barrier)
        for p in [1.1, 1.5, 2.0, 3.0, 10.0]:
            assert lt_sum_certificate(barrier_spectrum, p, consts, Case.LINE).passed
            assert lt_sum_egamma_certificate(barrier_spectrum, p, consts).passed

    def test_small_p_tiny_window_large_margin(self, barrier):
        rect = Rectangle(u_min=-1.0, u_max=1.0, v_min=-1.0, v_max=6.0)
        window = locate_zeros(EntireFunction.wronskian(barrier), rect, upper_half_plane_complete=True)
        cert = lt_sum_certificate(window, 1.01, constants(barrier), Case.LINE)
        assert cert.passed
        assert cert.margin > 100.0

    def test_sums_grow_with_radius(self, barrier, barrier_spectrum):
        consts = constants(barrier)
        radii = [1.0, 2.0, 3.0, 4.0, 5.0]
        for p in [1.1, 2.0, 10.0]:
            sums = [resonance_sum(barrier_spectrum, p, r) for r in radii]
            assert sums == sorted(sums)
            certs = [lt_sum_certificate(barrier_spectrum, p, consts, Case.LINE, radius=r) for r in radii]
            assert all(c.passed for c in certs)
            assert [c.lhs for c in certs] == sums

    def test_constants(self, barrier):
        consts = constants(barrier)
        assert q_calligraphic(consts, Case.LINE) == 5.0
        assert q_calligraphic(consts, Case.DIRICHLET) == 10.0
        expected = 12.0 / math.log(4.0) * (1.0 / math.pi + 1.0 + (5.0 + 15.0) / 4.0)
        assert carleson_constant(consts) == pytest.approx(expected)

    def test_uncovered_radius_rejected(self, free_spectrum):
        consts = constants(PiecewisePotential.zero())
        with pytest.raises(IncompleteCoverage):
            lt_sum_certificate(free_spectrum, 2.0, consts, Case.LINE, radius=50.0)


class TestCounting:
    def test_rhs_formula(self, barrier):
        consts = constants(barrier)
        r1 = 5.5
        expected = (4 * r1 / math.pi + math.log(1 + 4 * r1) + 45.0 / (1 + 4 * r1)) / math.log(2)
        assert counting_bound_rhs(Case.LINE, consts, 5.0) == pytest.approx(expected)
        assert egamma_counting_bound_rhs(1.0, 5.0, 5.0, 5.0) == pytest.approx(expected)

    @pytest.mark.parametrize("r", [1.0, 5.0])
    def test_barrier_counts_pass(self, barrier, barrier_spectrum, r):
        consts = constants(barrier)
        assert counting_certificate(barrier_spectrum, consts, r).passed
        assert counting_egamma_certificate(barrier_spectrum, consts, r).passed

    def test_free_counts(self, free_spectrum):
        consts = constants(PiecewisePotential.zero())
        cert = counting_certificate(free_spectrum, consts, 5.0)
        assert cert.lhs == 1.0 and cert.passed

    def test_half_line_mean(self, neumann_steps):
        rect = Rectangle(u_min=-8.0, u_max=8.0, v_min=-6.0, v_max=6.0)
        d = locate_zeros(EntireFunction.psi0(neumann_steps), rect, upper_half_plane_complete=True)
        n = locate_zeros(EntireFunction.dpsi0(neumann_steps), rect, upper_half_plane_complete=True)
        cert = half_line_counting_certificate(d, n, constants(neumann_steps), 5.0)
        assert cert.id == "counting_q3"
        assert cert.lhs == (cert.inputs["n_dirichlet"] + cert.inputs["n_neumann"]) / 2
        assert cert.passed

    def test_slope_needs_five_radii(self, barrier_spectrum):
        with pytest.raises(ValueError):
            asymptotic_slope(barrier_spectrum, [1.0, 2.0, 3.0], 1.0)

    def test_free_slope_is_degenerate(self, free_spectrum):
        report = asymptotic_slope(free_spectrum, [1.0, 2.0, 4.0, 6.0, 8.0], 0.0)
        assert report.degenerate
        assert report.counts == [1, 1, 1, 1, 1]
        assert report.slope == pytest.approx(0.0, abs=1e-12)


class TestEntireClass:
    def test_barrier_witness(self, barrier):
        witness = egamma_witness(barrier)
        assert witness.d1_holds and witness.d2_holds
        assert all(c.passed for c in witness.certificates())

    def test_witness_line_only(self, dirichlet_well):
        with pytest.raises(ValueError):
            egamma_witness(dirichlet_well)

    def test_jensen_polynomial(self):
        coef = np.poly([0.2 + 0.1j, -1.0 - 0.5j, 3.0])
        f = EntireFunction.from_callables("poly", lambda k: np.polyval(coef, k),
                                          lambda k: np.polyval(np.polyder(coef), k))
        assert jensen_check(f, 0.5, 2.0) < 1e-10
        with pytest.raises(CenterIsZero):
            jensen_check(f, 0.2 + 0.1j, 1.0)

    @pytest.mark.parametrize("r", [1.0, 3.0, 5.0])
    def test_jensen_barrier(self, barrier, barrier_spectrum, r):
        residual = jensen_check(EntireFunction.wronskian(barrier), 0.5, r, barrier_spectrum)
        assert residual < 1e-6

    def test_omega_and_carleson(self, barrier):
        window = _window([0.0, -0.5j, 2.0 - 0.3j, -2.0 - 0.3j, 4.0 - 3.0j])
        # shifted disk |k - i - t| < r in the closed lower half-plane
        assert omega_count(window, 0.0, 1.0) == 0
        assert omega_count(window, 0.0, 1.6) == 2
        cert = carleson_box_check(window, 2.0, 1.0, constants(barrier))
        assert cert.lhs == 0.0 and cert.passed
        assert "r <= 1" in cert.notes[0]

    def test_carleson_sweep_on_spectrum(self, barrier, barrier_spectrum):
        consts = constants(barrier)
        for t in [-5.0, 0.0, 5.0]:
            for r in [0.5, 2.0, 5.0]:
                assert carleson_box_check(barrier_spectrum, t, r, consts).passed

    def test_jensen_dirichlet_well(self, dirichlet_well):
        assert jensen_check(EntireFunction.psi0(dirichlet_well), 0.5, 8.0) < 1e-6

    def test_unsettled_circle_mean_raises(self, monkeypatch):
        monkeypatch.setattr("resonance.bounds.entire_class.MAX_CIRCLE_POINTS", 512)
        # a zero just outside the unit circle slows the trapezoid rule down
        f = EntireFunction.from_callables("near", lambda k: k - 1.001, lambda k: np.ones_like(k))
        with pytest.raises(QuadratureNotConverged):
            jensen_check(f, 0.0, 1.0, _window([]))
