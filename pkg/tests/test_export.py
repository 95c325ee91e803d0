import json

import numpy as np
import pytest

from resonance.bounds import BoundCertificate
from resonance.export import (
    certificate_records,
    dumps,
    forbidden_frame,
    format_float,
    grid_frame,
    scatter_frame,
    spectrum_document,
    staircase_frame,
    write_csv,
    write_json,
)
from resonance.potential import Case, PiecewisePotential, constants
from resonance.zeros import Rectangle, SpectralPoint, SpectrumWindow

RECT = Rectangle(u_min=-4.0, u_max=4.0, v_min=-3.0, v_max=2.0)


@pytest.fixture
def window():
    points = [SpectralPoint.from_root(k, m) for k, m in [(0j, 1), (1.2j, 1), (-1.5 - 0.5j, 2), (1.5 - 0.5j, 2)]]
    return SpectrumWindow(function="w", rectangle=RECT, points=points, count=6, complete=True)


@pytest.mark.parametrize("x, text", [
    (0.0, "0.0"),
    (1.0, "1.0"),
    (-2.5, "-2.5"),
    (0.1, "0.10000000000000001"),
    (1e20, "1e+20"),
    (float("inf"), "Infinity"),
])
def test_format_float(x, text):
    assert format_float(x) == text


def test_floats_round_trip_exactly():
    for x in np.random.default_rng(3).normal(size=50) * 1e3:
        assert float(format_float(x)) == x


def test_dumps_is_valid_and_ordered():
    text = dumps({"b": 1, "a": [0.5, True, None, "s"], "c": {}})
    assert json.loads(text) == {"b": 1, "a": [0.5, True, None, "s"], "c": {}}
    assert text.index('"b"') < text.index('"a"')
    assert dumps({"case": Case.DIRICHLET}) == '{\n  "case": "dirichlet"\n}'


def test_dumps_rejects_objects():
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_spectrum_document(window, tmp_path):
    doc = spectrum_document(window, case="line")
    assert list(doc)[:2] == ["case", "function"]
    assert [p["multiplicity"] for p in doc["points"]] == [1, 1, 2, 2]
    assert doc["points"][0]["kind"] == "RealResonance"
    path = write_json(doc, tmp_path / "nested" / "spectrum.json")
    first = path.read_text()
    write_json(doc, path)
    assert path.read_text() == first
    assert json.loads(first)["window"]["v_min"] == -3.0


def test_certificate_records_use_pass():
    records = certificate_records([BoundCertificate(id="x", lhs=2.0, rhs=1.0)])
    assert records[0]["pass"] is False
    assert records[0]["margin"] == -1.0


def test_scatter_and_staircase(window, barrier):
    scatter = scatter_frame(window)
    assert list(scatter.columns) == ["k_re", "k_im", "kind"]
    assert len(scatter) == 4

    stairs = staircase_frame(window, constants(barrier), Case.LINE, n_radii=20)
    assert list(stairs.columns) == ["r", "N", "bound_rhs"]
    # covered radius is 2: the top edge limits the disk
    assert stairs["r"].iloc[-1] == pytest.approx(2.0)
    assert stairs["N"].is_monotonic_increasing
    assert stairs["N"].iloc[-1] == 6
    assert (stairs["N"] <= stairs["bound_rhs"]).all()


def test_staircase_without_coverage(barrier):
    empty = SpectrumWindow(function="w", rectangle=RECT, complete=False)
    assert staircase_frame(empty, constants(barrier), Case.LINE).empty


def test_forbidden_frame_rescales(window):
    p = PiecewisePotential.constant(1.0, 0.0, 2.0, Case.DIRICHLET)
    frame = forbidden_frame(window, p)
    assert len(frame) == 3
    assert frame["k_abs"].max() == pytest.approx(2.0 * abs(1.5 - 0.5j))
    assert frame["below"].all()


def test_grid_frame_and_csv(barrier, tmp_path):
    frame = grid_frame(barrier, RECT, n_re=5, n_im=3)
    assert len(frame) == 15
    assert list(frame.columns) == ["k_re", "k_im", "w_re", "w_im", "w_abs"]
    path = write_csv(frame, tmp_path / "wgrid.csv")
    header = path.read_text().splitlines()[0]
    assert header == "k_re,k_im,w_re,w_im,w_abs"
