import numpy as np
import pytest

from resonance.errors import PotentialError
from resonance.jost import evaluate, neumann_series, neumann_w_star, neumann_wronskian
from resonance.potential import PiecewisePotential, canonicalize

STEPS = canonicalize(PiecewisePotential(breakpoints=[0.0, 0.4, 1.0], values=[3.0, -2.0]))


def test_free_series_is_one(free_line):
    result = neumann_series(free_line, 0.0, 2.0 - 1.0j)
    assert result.value == 1
    assert result.n_terms == 1
    assert neumann_wronskian(free_line, 1.5) == pytest.approx(3j)


@pytest.mark.parametrize("k", [0.5, 2.0 - 0.5j, -3.0 - 1.0j, 6.0 + 0.5j])
def test_series_at_origin_matches_psi0(k):
    result = neumann_series(STEPS, 0.0, k)
    assert result.value == pytest.approx(evaluate(STEPS, k).psi0, rel=1e-9, abs=1e-10)
    assert result.truncation_bound < 1e-12


def test_terms_decay_like_factorial():
    result = neumann_series(STEPS, 0.2, 4.0 - 0.5j)
    mags = np.abs(result.terms)
    assert mags[0] == 1.0
    assert mags[-1] < mags[1]


def test_series_at_right_end_is_one():
    assert neumann_series(STEPS, 1.0, 2.0).value == pytest.approx(1.0)


@pytest.mark.slow
def test_wronskian_oracle_on_grid():
    re = np.linspace(-10.0, 10.0, 20)
    im = np.linspace(-3.0, 0.0, 20)
    for kr in re:
        for ki in im:
            k = complex(kr, ki)
            w = evaluate(STEPS, k).w
            assert abs(neumann_wronskian(STEPS, k) - w) <= 1e-6 * max(1.0, abs(w))


def test_wronskian_oracle_near_origin():
    for k in [0.3 - 0.2j, 1.0, -2.0 - 1.0j, 4.0 + 0.5j]:
        w = evaluate(STEPS, k).w
        assert abs(neumann_wronskian(STEPS, k) - w) <= 1e-6 * max(1.0, abs(w))


def test_w_star_is_small_for_large_k():
    assert abs(neumann_w_star(STEPS, 200.0)) < 0.1


def test_needs_canonical_potential():
    p = PiecewisePotential.constant(1.0, 0.5, 1.0)
    with pytest.raises(PotentialError):
        neumann_series(p, 0.7, 1.0)


def test_x_outside_support_rejected():
    with pytest.raises(ValueError):
        neumann_series(STEPS, 1.5, 1.0)
