"""Compactly supported piecewise-constant potentials and their norms."""
import json
import math
from enum import Enum
from pathlib import Path
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from resonance.errors import PotentialError


class Case(str, Enum):
    """Operator setting: whole line, or half-line with a boundary condition at 0."""
    LINE = "line"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @property
    def is_half_line(self) -> bool:
        return self is not Case.LINE


class Piece(NamedTuple):
    left: float
    right: float
    value: float


class PiecewisePotential(BaseModel):
    """Real potential q = values[j] on [breakpoints[j], breakpoints[j+1]), zero elsewhere.

    ``shift`` records the translation applied by :func:`canonicalize`; the
    original support is ``[x0 - shift, xM - shift]``.
    """
    model_config = ConfigDict(frozen=True)

    case: Case = Case.LINE
    breakpoints: List[float] = []
    values: List[float] = []
    shift: float = 0.0

    @field_validator("breakpoints", "values")
    @classmethod
    def _finite(cls, v: List[float]) -> List[float]:
        for x in v:
            if not math.isfinite(x):
                raise ValueError("entries must be finite")
        return v

    @model_validator(mode="after")
    def _check_shape(self):
        n_bp, n_val = len(self.breakpoints), len(self.values)
        if n_val == 0:
            if n_bp > 1:
                raise ValueError("breakpoints given without values")
        elif n_bp != n_val + 1:
            raise ValueError(f"expected {n_val + 1} breakpoints for {n_val} values, got {n_bp}")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        if self.case.is_half_line and self.breakpoints and self.breakpoints[0] < 0:
            raise ValueError("half-line potentials need breakpoints >= 0")
        return self

    @classmethod
    def zero(cls, case: Case = Case.LINE) -> "PiecewisePotential":
        return cls(case=case)

    @classmethod
    def constant(cls, value: float, left: float, right: float,
                 case: Case = Case.LINE) -> "PiecewisePotential":
        """Single square barrier (value > 0) or well (value < 0)."""
        return cls(case=case, breakpoints=[left, right], values=[value])

    @classmethod
    def from_pieces(cls, pieces: List[Tuple[float, float, float]],
                    case: Case = Case.LINE) -> "PiecewisePotential":
        """Build from contiguous (left, right, value) triples."""
        if not pieces:
            return cls(case=case)
        breakpoints = [pieces[0][0]]
        for left, right, _ in pieces:
            if left != breakpoints[-1]:
                raise PotentialError(f"piece starting at {left} is not contiguous", "breakpoints")
            breakpoints.append(right)
        return cls(case=case, breakpoints=breakpoints, values=[v for _, _, v in pieces])

    @property
    def n_pieces(self) -> int:
        return len(self.values)

    @property
    def support(self) -> Optional[Tuple[float, float]]:
        if not self.values:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def is_canonical(self) -> bool:
        if not self.values:
            return not self.breakpoints
        if self.values[0] == 0.0 or self.values[-1] == 0.0:
            return False
        return self.case.is_half_line or self.breakpoints[0] == 0.0

    def pieces(self) -> Iterator[Piece]:
        for j, value in enumerate(self.values):
            yield Piece(self.breakpoints[j], self.breakpoints[j + 1], value)

    def __call__(self, x):
        """Evaluate q at real points (vectorized)."""
        x = np.asarray(x, dtype=float)
        if not self.values:
            return np.zeros_like(x)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.n_pieces)
        vals = np.asarray(self.values)
        return np.where(inside, vals[np.clip(idx, 0, self.n_pieces - 1)], 0.0)

    def with_case(self, case: Case) -> "PiecewisePotential":
        return PiecewisePotential(case=case, breakpoints=self.breakpoints,
                                  values=self.values, shift=self.shift)


class PotentialConstants(BaseModel):
    """Norms and derived constants of a canonical potential."""
    model_config = ConfigDict(frozen=True)

    gamma: float
    norm_l1: float
    norm_weighted: float
    q0: float
    Q: float

    @model_validator(mode="after")
    def _check(self):
        if self.norm_l1 < 0 or self.norm_weighted < 0:
            raise ValueError("norms must be non-negative")
        if self.Q != max(self.norm_l1, self.norm_weighted):
            raise ValueError("Q must equal max(norm_l1, norm_weighted)")
        if abs(self.q0) > self.norm_l1 * (1 + 1e-15):
            raise ValueError("|q0| cannot exceed norm_l1")
        return self


class EvenExtension(NamedTuple):
    potential: PiecewisePotential
    q_tilde: float


def canonicalize(p: PiecewisePotential) -> PiecewisePotential:
    """Strip zero edge pieces and translate line potentials to start at 0.

    Half-line potentials keep their position (the boundary at 0 is part of
    the operator); only the edge stripping applies and the shift stays 0.
    """
    values = list(p.values)
    breakpoints = list(p.breakpoints)
    while values and values[0] == 0.0:
        values.pop(0)
        breakpoints.pop(0)
    while values and values[-1] == 0.0:
        values.pop()
        breakpoints.pop()
    if not values:
        return PiecewisePotential(case=p.case, shift=p.shift if p.case.is_half_line else 0.0)

    shift = 0.0
    if not p.case.is_half_line:
        shift = -breakpoints[0]
        breakpoints = [x + shift for x in breakpoints]
        breakpoints[0] = 0.0
    return PiecewisePotential(case=p.case, breakpoints=breakpoints, values=values,
                              shift=p.shift + shift)


def constants(p: PiecewisePotential) -> PotentialConstants:
    """Closed-form piecewise integrals of the canonical potential."""
    c = canonicalize(p)
    if not c.values:
        return PotentialConstants(gamma=0.0, norm_l1=0.0, norm_weighted=0.0, q0=0.0, Q=0.0)

    x0, xM = c.support
    gamma = xM if c.case.is_half_line else xM - x0
    norm_l1 = math.fsum(abs(v) * (b - a) for a, b, v in c.pieces())
    # support lies in [0, gamma] here, so |t q(t)| = t |q(t)|
    norm_weighted = math.fsum(abs(v) * (b * b - a * a) / 2.0 for a, b, v in c.pieces())
    q0 = math.fsum(v * (b - a) for a, b, v in c.pieces())
    return PotentialConstants(gamma=gamma, norm_l1=norm_l1, norm_weighted=norm_weighted,
                              q0=q0, Q=max(norm_l1, norm_weighted))


def even_extension(p: PiecewisePotential) -> EvenExtension:
    """q~(x) = q(|x|) on [-gamma, gamma] plus Q~ = 2 ||q|| max{1, gamma}."""
    if not p.case.is_half_line:
        raise PotentialError("even extension needs a half-line potential", "case")
    c = canonicalize(p)
    if not c.values:
        return EvenExtension(PiecewisePotential.zero(Case.LINE), 0.0)

    mirrored = [(-b, -a, v) for a, b, v in reversed(list(c.pieces()))]
    x0 = c.breakpoints[0]
    middle = [(-x0, x0, 0.0)] if x0 > 0 else []
    ext = PiecewisePotential.from_pieces(mirrored + middle + list(c.pieces()), Case.LINE)

    consts = constants(c)
    q_tilde = 2.0 * consts.norm_l1 * max(1.0, consts.gamma)
    return EvenExtension(ext, q_tilde)


def rescale_to_unit(p: PiecewisePotential) -> Tuple[PiecewisePotential, float]:
    """Map (x, k, q) -> (x/gamma, gamma k, gamma^2 q) so the support diameter is 1.

    Returns the rescaled potential and gamma; zeros k_n of the original map
    to gamma * k_n.
    """
    c = canonicalize(p)
    gamma = constants(c).gamma
    if gamma == 0.0:
        return c, 1.0
    scaled = PiecewisePotential(
        case=c.case,
        breakpoints=[x / gamma for x in c.breakpoints],
        values=[v * gamma * gamma for v in c.values],
    )
    return scaled, gamma


def load_potential(path: str) -> PiecewisePotential:
    """Read a potential file: {"case", "breakpoints", "values"}."""
    file_path = Path(path)
    if not file_path.exists():
        raise PotentialError(f"file not found: {path}", "potential")
    text = file_path.read_text(encoding="utf-8")
    return parse_potential(text)


def parse_potential(text: str) -> PiecewisePotential:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PotentialError(f"malformed JSON ({e.msg} at line {e.lineno})", "potential")
    if not isinstance(raw, dict):
        raise PotentialError("top level must be an object", "potential")
    unknown = set(raw) - {"case", "breakpoints", "values"}
    if unknown:
        raise PotentialError(f"unknown keys {sorted(unknown)}", sorted(unknown)[0])
    try:
        return PiecewisePotential.model_validate(raw)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(part) for part in err["loc"]) or "potential"
        raise PotentialError(err["msg"], field)


def dump_potential(p: PiecewisePotential) -> str:
    """JSON text that reads back to the same floats (shortest repr)."""
    return json.dumps({
        "case": p.case.value,
        "breakpoints": list(p.breakpoints),
        "values": list(p.values),
    })
