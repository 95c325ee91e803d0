"""Deterministic JSON and CSV writers (17 significant digits, fixed ordering)."""
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from config import FLOAT_DIGITS
from resonance.bounds.certificate import BoundCertificate
from resonance.bounds.counting import counting_bound_rhs, staircase
from resonance.bounds.criteria import forbidden_curve
from resonance.jost.transfer import wronskian_grid
from resonance.potential import Case, PiecewisePotential, PotentialConstants, constants, rescale_to_unit
from resonance.zeros.contour import Rectangle
from resonance.zeros.locate import SpectrumWindow

FLOAT_FORMAT = f"%.{FLOAT_DIGITS}g"


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0.0:
        return "0.0"
    text = format(x, f".{FLOAT_DIGITS}g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """json.dumps with every float written at FLOAT_DIGITS significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "value"):
        return dumps(obj.value, indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj: Any, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj) + "\n", encoding="utf-8")
    return path


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def spectrum_records(window: SpectrumWindow) -> List[Dict[str, Any]]:
    """Points ordered by (|k|, Re k, Im k)."""
    return [{"k_re": pt.k_re, "k_im": pt.k_im, "multiplicity": pt.multiplicity, "kind": pt.kind.value}
            for pt in window.points]


def spectrum_document(window: SpectrumWindow, **meta: Any) -> Dict[str, Any]:
    rect = window.rectangle
    return {
        **meta,
        "function": window.function,
        "window": {"u_min": rect.u_min, "u_max": rect.u_max, "v_min": rect.v_min, "v_max": rect.v_max},
        "count": window.count,
        "complete": window.complete,
        "upper_half_plane_complete": window.upper_half_plane_complete,
        "tol": window.tol,
        "notes": list(window.notes),
        "points": spectrum_records(window),
    }


def certificate_records(certs: Sequence[BoundCertificate]) -> List[Dict[str, Any]]:
    return [cert.model_dump(by_alias=True) for cert in certs]


def scatter_frame(window: SpectrumWindow) -> pd.DataFrame:
    return pd.DataFrame({
        "k_re": [pt.k_re for pt in window.points],
        "k_im": [pt.k_im for pt in window.points],
        "kind": [pt.kind.value for pt in window.points],
    }, columns=["k_re", "k_im", "kind"])


def staircase_frame(points: SpectrumWindow, consts: PotentialConstants, case: Case,
                    n_radii: int = 200) -> pd.DataFrame:
    """N(r) next to the counting bound on (0, largest covered radius]."""
    r_max = points.max_covered_radius()
    if r_max <= 0:
        return pd.DataFrame(columns=["r", "N", "bound_rhs"])
    radii = np.linspace(r_max / n_radii, r_max, n_radii)
    return pd.DataFrame({
        "r": radii,
        "N": staircase(points, radii),
        "bound_rhs": [counting_bound_rhs(case, consts, r) for r in radii],
    }, columns=["r", "N", "bound_rhs"])


def forbidden_frame(points: SpectrumWindow, p: PiecewisePotential) -> pd.DataFrame:
    """|k_n| against |Im k_n| for lower half-plane zeros, in unit-diameter coordinates."""
    scaled, gamma = rescale_to_unit(p)
    norm = constants(scaled).norm_l1
    lower = [gamma * pt.k for pt in points.points if pt.k_im <= 0]
    k_abs = np.array([abs(k) for k in lower], dtype=float)
    k_im_abs = np.array([abs(k.imag) for k in lower], dtype=float)
    curve = forbidden_curve(norm, k_im_abs)
    return pd.DataFrame({"k_abs": k_abs, "k_im_abs": k_im_abs, "curve": curve, "below": k_abs <= curve},
                        columns=["k_abs", "k_im_abs", "curve", "below"])


def grid_frame(p: PiecewisePotential, window: Rectangle, n_re: int = 101, n_im: int = 51) -> pd.DataFrame:
    """|w| heat-map grid over the window."""
    frame = wronskian_grid(p.with_case(Case.LINE), np.linspace(window.u_min, window.u_max, n_re),
                           np.linspace(window.v_min, window.v_max, n_im))
    frame["w_abs"] = np.hypot(frame["w_re"], frame["w_im"])
    return frame
