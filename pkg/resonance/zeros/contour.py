"""Argument-principle zero counts on rectangles and circles."""
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from config import DILATION_RANGE, EDGE_EPSILON, INTEGER_DEVIATION, MAX_CONTOUR_RETRIES, get_rng
from resonance.errors import QuadratureNotConverged, ZeroOnContour
from resonance.zeros.functions import EntireFunction

logger = logging.getLogger(__name__)

GL_ORDER = 16
MIN_PANELS = 4
MAX_PANELS = 4096
MIN_CIRCLE_POINTS = 64
MAX_CIRCLE_POINTS = 2 ** 17
# successive quadrature estimates must agree this well before rounding
SETTLE_TOL = 0.05
RESOLVED_TOL = 1e-6

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


class Rectangle(BaseModel):
    """Closed box [u_min, u_max] x [v_min, v_max] in the k-plane."""
    model_config = ConfigDict(frozen=True)

    u_min: float
    u_max: float
    v_min: float
    v_max: float

    @model_validator(mode="after")
    def _ordered(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError(f"empty rectangle {self.as_tuple()}")
        return self

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        """From 'u0,u1,v0,v1'."""
        parts = [float(s) for s in text.split(",")]
        if len(parts) != 4:
            raise ValueError("window needs four numbers u0,u1,v0,v1")
        return cls(u_min=parts[0], u_max=parts[1], v_min=parts[2], v_max=parts[3])

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.u_min, self.u_max, self.v_min, self.v_max

    @property
    def width(self) -> float:
        return self.u_max - self.u_min

    @property
    def height(self) -> float:
        return self.v_max - self.v_min

    @property
    def center(self) -> complex:
        return complex((self.u_min + self.u_max) / 2, (self.v_min + self.v_max) / 2)

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.width, self.height))

    def vertices(self) -> List[complex]:
        """Counter-clockwise, starting bottom-left."""
        return [complex(self.u_min, self.v_min), complex(self.u_max, self.v_min),
                complex(self.u_max, self.v_max), complex(self.u_min, self.v_max)]

    def contains(self, k: complex, pad: float = 0.0) -> bool:
        return (self.u_min - pad <= k.real <= self.u_max + pad
                and self.v_min - pad <= k.imag <= self.v_max + pad)

    def contains_disk(self, center: complex, r: float, open_top: bool = False) -> bool:
        """Disk |k - center| <= r inside the box; ``open_top`` drops the upper edge test."""
        return (self.u_min <= center.real - r and center.real + r <= self.u_max
                and self.v_min <= center.imag - r
                and (open_top or center.imag + r <= self.v_max))

    def dilate(self, factor: float) -> "Rectangle":
        c, hw, hh = self.center, self.width / 2 * factor, self.height / 2 * factor
        return Rectangle(u_min=c.real - hw, u_max=c.real + hw, v_min=c.imag - hh, v_max=c.imag + hh)

    def split(self, at: complex) -> List["Rectangle"]:
        """Four children meeting at ``at`` (must be interior)."""
        u, v = at.real, at.imag
        return [
            Rectangle(u_min=self.u_min, u_max=u, v_min=self.v_min, v_max=v),
            Rectangle(u_min=u, u_max=self.u_max, v_min=self.v_min, v_max=v),
            Rectangle(u_min=u, u_max=self.u_max, v_min=v, v_max=self.v_max),
            Rectangle(u_min=self.u_min, u_max=u, v_min=v, v_max=self.v_max),
        ]


def _edge_eps(scale: float) -> float:
    return min(EDGE_EPSILON, 1e-3 * scale)


def _check_clearance(z: np.ndarray, val: np.ndarray, dval: np.ndarray, eps: float):
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = np.abs(val) / np.abs(dval)
    close = (val == 0) | (dist < eps)
    if np.any(close):
        i = int(np.argmax(close))
        raise ZeroOnContour(f"zero within {eps:.1e} of the contour near k={z[i]:.6g}")


def _settle(integrate: Callable[[int], complex], start: int, stop: int, what: str) -> int:
    prev = integrate(start)
    n = start * 2
    while n <= stop:
        cur = integrate(n)
        nearest = round(cur.real)
        integral = abs(cur.real - nearest) <= INTEGER_DEVIATION and abs(cur.imag) <= INTEGER_DEVIATION
        if abs(cur - prev) < SETTLE_TOL and integral:
            return int(nearest)
        # a settled non-integer value means the contour passes through a zero
        if abs(cur - prev) < RESOLVED_TOL and not integral:
            raise ZeroOnContour(f"{what}: settled on non-integer {cur:.4f}")
        prev = cur
        n *= 2
    raise QuadratureNotConverged(f"{what}: last estimate {prev:.4f} is not an integer")


def _polygon_integral(f: EntireFunction, vertices: List[complex], panels: int, eps: float) -> complex:
    """(1/2 pi i) of f'/f around the closed polygon, composite Gauss-Legendre per edge."""
    edges = list(zip(vertices, vertices[1:] + vertices[:1]))
    t = (np.arange(panels)[:, None] + (_GL_NODES[None, :] + 1) / 2).ravel() / panels
    wt = np.tile(_GL_WEIGHTS / 2, panels) / panels
    z = np.concatenate([z0 + (z1 - z0) * t for z0, z1 in edges])
    dz = np.concatenate([(z1 - z0) * wt for z0, z1 in edges])
    val, dval = f.with_derivative(z)
    _check_clearance(z, val, dval, eps)
    return complex(np.sum(dval / val * dz) / (2j * np.pi))


def argument_principle(f: EntireFunction, rect: Rectangle) -> int:
    """Zero count inside ``rect`` with no retry; ZeroOnContour if a zero sits on an edge."""
    eps = _edge_eps(min(rect.width, rect.height))
    return _settle(lambda n: _polygon_integral(f, rect.vertices(), n, eps),
                   MIN_PANELS, MAX_PANELS, f"count on {rect.as_tuple()}")


def count_zeros_on(f: EntireFunction, rect: Rectangle,
                   rng: Optional[np.random.Generator] = None) -> Tuple[int, Rectangle]:
    """Count with the random-dilation retry; returns the count and the contour actually used."""
    rng = rng if rng is not None else get_rng()
    contour = rect
    for attempt in range(MAX_CONTOUR_RETRIES + 1):
        try:
            return argument_principle(f, contour), contour
        except (ZeroOnContour, QuadratureNotConverged) as e:
            if attempt == MAX_CONTOUR_RETRIES:
                raise
            factor = 1.0 + rng.uniform(*DILATION_RANGE)
            logger.info("%s; dilating contour by %.6f", e, factor)
            contour = rect.dilate(factor)
    raise AssertionError("unreachable")


def count_zeros(f: EntireFunction, contour: Rectangle,
                rng: Optional[np.random.Generator] = None) -> int:
    """Number of zeros of f inside the rectangle, with multiplicity."""
    return count_zeros_on(f, contour, rng)[0]


def disk_count(f: EntireFunction, center: complex, r: float) -> int:
    """Zeros in |k - center| < r by the trapezoid rule on the circle."""
    if r <= 0:
        raise ValueError("radius must be positive")
    center = complex(center)
    eps = _edge_eps(r)

    def integrate(n: int) -> complex:
        e = np.exp(2j * np.pi * np.arange(n) / n)
        z = center + r * e
        val, dval = f.with_derivative(z)
        _check_clearance(z, val, dval, eps)
        return complex(r * np.mean(dval / val * e))

    return _settle(integrate, MIN_CIRCLE_POINTS, MAX_CIRCLE_POINTS, f"disk count at {center}, r={r}")


def phase_winding_count(f: EntireFunction, rect: Rectangle, n_points: int = 10_000) -> int:
    """Independent count from the unwrapped phase of f on a dense perimeter sampling."""
    verts = rect.vertices()
    lengths = np.abs(np.diff(verts + verts[:1]))
    per_edge = np.maximum(2, np.round(n_points * lengths / lengths.sum()).astype(int))
    z = np.concatenate([
        z0 + (z1 - z0) * np.arange(m) / m
        for (z0, z1), m in zip(zip(verts, verts[1:] + verts[:1]), per_edge)
    ])
    z = np.append(z, z[0])
    phase = np.unwrap(np.angle(f(z)))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))
