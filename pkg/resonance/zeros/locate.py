"""Locate, refine and classify every zero of an entire function in a window."""
import logging
import math
from enum import Enum
from multiprocessing.pool import ThreadPool
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq

from config import (
    AUTO_EXPECTED_COUNT,
    DEFAULT_TOL,
    IMAG_CAP_NUMERATOR,
    MAX_CONTOUR_RETRIES,
    get_rng,
)
from resonance.errors import (
    IncompleteCoverage,
    NonConvergedNewton,
    QuadratureNotConverged,
    ResonanceError,
    ZeroOnContour,
)
from resonance.potential import PiecewisePotential, constants
from resonance.zeros.contour import Rectangle, argument_principle, count_zeros_on, disk_count
from resonance.zeros.functions import EntireFunction

logger = logging.getLogger(__name__)

NEWTON_MAX_ITER = 60
# split points are drawn this far (relative) from the box center
SPLIT_JITTER = 0.1
# n zeros this close (relative) to a Newton root are one point of multiplicity n
CLUSTER_RADIUS = 1e-6
MULTIPLE_NEWTON_TOL = 1e-7


class SpectralKind(str, Enum):
    EIGENVALUE = "Eigenvalue"
    RESONANCE = "Resonance"
    REAL_RESONANCE = "RealResonance"
    ANTIBOUND = "Antibound"


class SpectralPoint(BaseModel):
    """One zero k_n with its multiplicity and classification."""
    model_config = ConfigDict(frozen=True)

    k_re: float
    k_im: float
    multiplicity: int = Field(ge=1)
    kind: SpectralKind

    @property
    def k(self) -> complex:
        return complex(self.k_re, self.k_im)

    @property
    def modulus(self) -> float:
        return abs(self.k)

    @classmethod
    def from_root(cls, k: complex, multiplicity: int, tol: float = DEFAULT_TOL) -> "SpectralPoint":
        return cls(k_re=k.real, k_im=k.imag, multiplicity=multiplicity, kind=classify(k, tol))


class SpectrumWindow(BaseModel):
    """A rectangle with every zero located inside it.

    ``complete`` is set iff the multiplicities add up to the contour count.
    ``upper_half_plane_complete`` records that no zero of the function lies
    in the upper half-plane outside the rectangle, so disks may poke out of
    the top edge.
    """
    model_config = ConfigDict(frozen=True)

    function: str
    rectangle: Rectangle
    points: List[SpectralPoint] = []
    count: int = 0
    complete: bool = False
    upper_half_plane_complete: bool = False
    tol: float = DEFAULT_TOL
    notes: List[str] = []

    @property
    def total_multiplicity(self) -> int:
        return sum(pt.multiplicity for pt in self.points)

    def covers_disk(self, center: complex, r: float) -> bool:
        open_top = self.upper_half_plane_complete and self.rectangle.v_max > 0
        return self.complete and self.rectangle.contains_disk(complex(center), r, open_top)

    def require_disk(self, center: complex, r: float):
        if not self.covers_disk(center, r):
            raise IncompleteCoverage(
                f"disk |k - {complex(center)}| <= {r} not covered by {self.rectangle.as_tuple()}"
                f" (complete={self.complete})")

    def max_covered_radius(self, center: complex = 0j) -> float:
        """Largest r with covers_disk(center, r) (0 if none)."""
        if not self.complete:
            return 0.0
        c, rect = complex(center), self.rectangle
        limits = [c.real - rect.u_min, rect.u_max - c.real, c.imag - rect.v_min]
        if not (self.upper_half_plane_complete and rect.v_max > 0):
            limits.append(rect.v_max - c.imag)
        return max(0.0, min(limits))

    def points_in_disk(self, center: complex, r: float, closed: bool = True) -> List[SpectralPoint]:
        c = complex(center)
        if closed:
            return [pt for pt in self.points if abs(pt.k - c) <= r]
        return [pt for pt in self.points if abs(pt.k - c) < r]

    def by_kind(self, kind: SpectralKind) -> List[SpectralPoint]:
        return [pt for pt in self.points if pt.kind is kind]


def classify(k: complex, tol: float = DEFAULT_TOL) -> SpectralKind:
    axis_tol = max(1e3 * tol, 1e-8 * max(1.0, abs(k)))
    if abs(k.imag) <= axis_tol:
        return SpectralKind.REAL_RESONANCE
    if k.imag > 0:
        if abs(k.real) > axis_tol:
            logger.warning("upper half-plane zero off the imaginary axis: %s", k)
        return SpectralKind.EIGENVALUE
    if abs(k.real) <= axis_tol:
        return SpectralKind.ANTIBOUND
    return SpectralKind.RESONANCE


def sort_key(pt: SpectralPoint) -> Tuple[float, float, float]:
    return pt.modulus, pt.k_re, pt.k_im


def newton_refine(f: EntireFunction, k0: complex, tol: float = DEFAULT_TOL,
                  multiplicity: int = 1, box: Optional[Rectangle] = None) -> complex:
    """Newton (modified for a known multiplicity) until |dk| < tol.

    Leaving ``box`` (padded by its diameter) counts as non-convergence.
    """
    k = complex(k0)
    for _ in range(NEWTON_MAX_ITER):
        val, dval = f.with_derivative(np.array([k]))
        val, dval = complex(val[0]), complex(dval[0])
        if val == 0:
            return k
        if dval == 0 or not (math.isfinite(abs(val)) and math.isfinite(abs(dval))):
            raise NonConvergedNewton(f"flat or non-finite derivative at {k}")
        step = multiplicity * val / dval
        k -= step
        if box is not None and not box.contains(k, pad=box.diameter):
            raise NonConvergedNewton(f"Newton left the box around {box.center}")
        if abs(step) < tol:
            return k
    raise NonConvergedNewton(f"no convergence from {k0} after {NEWTON_MAX_ITER} steps")


class _Locator:
    """Quadtree subdivision of one window."""

    def __init__(self, f: EntireFunction, tol: float):
        self.f = f
        self.tol = tol
        self.notes: List[str] = []

    def split(self, box: Rectangle, n: int, path: Tuple[int, ...]) -> List[Tuple[Rectangle, int]]:
        rng = get_rng(len(path), *path)
        for attempt in range(MAX_CONTOUR_RETRIES + 1):
            at = box.center + complex(rng.uniform(-SPLIT_JITTER, SPLIT_JITTER) * box.width,
                                      rng.uniform(-SPLIT_JITTER, SPLIT_JITTER) * box.height)
            children = box.split(at)
            try:
                counts = [argument_principle(self.f, child) for child in children]
            except (ZeroOnContour, QuadratureNotConverged) as e:
                logger.debug("split %s retry %d: %s", path, attempt, e)
                continue
            if sum(counts) == n:
                return list(zip(children, counts))
            logger.warning("box %s: children count %s != parent %d, redrawing split", path, counts, n)
        raise QuadratureNotConverged(f"no consistent split for box {box.as_tuple()}")

    def multiplicity(self, root: complex, expected: int) -> int:
        try:
            m = disk_count(self.f, root, 8 * self.tol)
        except ResonanceError as e:
            logger.info("multiplicity disk at %s failed (%s); using box count", root, e)
            return expected
        if m != expected:
            self.notes.append(f"disk count {m} at {root} disagrees with box count {expected}")
            logger.warning("disk count %d at %s disagrees with box count %d", m, root, expected)
            return max(expected, 1)
        return m

    def cluster_radius(self, root: complex) -> float:
        return max(8 * self.tol, CLUSTER_RADIUS * max(1.0, abs(root)))

    def resolve(self, box: Rectangle, n: int, path: Tuple[int, ...]) -> List[Tuple[complex, int]]:
        if n == 0:
            return []
        tiny = box.diameter < 64 * self.tol
        # multiple zeros are only conditioned to about sqrt(eps)
        newton_tol = self.tol if n == 1 else max(self.tol, MULTIPLE_NEWTON_TOL * max(1.0, abs(box.center)))
        try:
            root = newton_refine(self.f, box.center, newton_tol, multiplicity=n, box=box)
        except NonConvergedNewton as e:
            logger.debug("box %s: %s", path, e)
            root = None
        if root is not None and box.contains(root, pad=2 * self.tol):
            if n == 1 or tiny:
                return [(root, self.multiplicity(root, n))]
            # n zeros inside a small disk around the root form one multiple zero
            rho = self.cluster_radius(root)
            try:
                if rho < box.diameter and disk_count(self.f, root, rho) == n:
                    self.notes.append(f"{n} zeros within {rho:.1e} of {root} reported as one point")
                    return [(root, n)]
            except ResonanceError as e:
                logger.debug("box %s: cluster check failed (%s)", path, e)
        if tiny:
            # certified by the box count alone
            self.notes.append(f"zero of multiplicity {n} fixed by bisection at {box.center}")
            return [(box.center, n)]
        return self.resolve_children(self.split(box, n, path), path)

    def resolve_children(self, children, path, jobs: int = 1) -> List[Tuple[complex, int]]:
        tasks = [(child, c, path + (i,)) for i, (child, c) in enumerate(children)]
        if jobs > 1:
            with ThreadPool(jobs) as pool:
                parts = pool.starmap(self.resolve, tasks)
        else:
            parts = [self.resolve(*t) for t in tasks]
        return [root for part in parts for root in part]


def locate_zeros(f: EntireFunction, window: Rectangle, tol: float = DEFAULT_TOL,
                 jobs: int = 1, upper_half_plane_complete: bool = False) -> SpectrumWindow:
    """Find every zero of f in the window with multiplicities.

    Args:
        f: Entire function with analytic derivative.
        window: Search rectangle; may be dilated slightly if a zero sits on its edge.
        tol: Newton tolerance; boxes below 64*tol stop subdividing.
        jobs: Threads for the first level of box subdivision.
        upper_half_plane_complete: Caller guarantees no zeros above the window in C+.
    """
    count, contour = count_zeros_on(f, window, get_rng(0))
    locator = _Locator(f, tol)
    if contour != window:
        locator.notes.append(f"window dilated to {contour.as_tuple()}")

    if count == 0:
        roots = []
    elif count == 1:
        roots = locator.resolve(contour, count, ())
    else:
        roots = locator.resolve_children(locator.split(contour, count, ()), (), jobs)

    points = sorted((SpectralPoint.from_root(k, m, tol) for k, m in roots), key=sort_key)
    total = sum(pt.multiplicity for pt in points)
    complete = total == count
    if not complete:
        logger.warning("located multiplicity %d != contour count %d", total, count)
    logger.info("%s: %d zeros in %s", f.name, total, contour.as_tuple())
    return SpectrumWindow(function=f.name, rectangle=contour, points=points, count=count,
                          complete=complete, upper_half_plane_complete=upper_half_plane_complete,
                          tol=tol, notes=locator.notes)


def counting_function(points: SpectrumWindow, r: float) -> int:
    """N(r, f): zeros with |k| <= r, with multiplicity."""
    if r < 0:
        raise ValueError("r must be non-negative")
    points.require_disk(0j, r)
    return sum(pt.multiplicity for pt in points.points_in_disk(0j, r))


def eigenvalue_height(p: PiecewisePotential) -> float:
    """Upper end of the imaginary-axis scan: max(||q||, sqrt(max(-q_j))) + 1."""
    consts = constants(p)
    depth = max([0.0] + [-v for v in p.values])
    return max(consts.norm_l1, math.sqrt(depth)) + 1.0


def auto_window(p: PiecewisePotential) -> Rectangle:
    """[-R, R] x [-min(R, 40/gamma), v_top] with 2 R gamma / pi about AUTO_EXPECTED_COUNT."""
    gamma = constants(p).gamma
    if gamma == 0.0:
        radius, depth = 10.0, 10.0
    else:
        radius = AUTO_EXPECTED_COUNT * math.pi / (2.0 * gamma)
        depth = min(radius, IMAG_CAP_NUMERATOR / gamma)
    return Rectangle(u_min=-radius, u_max=radius, v_min=-depth, v_max=eigenvalue_height(p))


def covers_upper_half_plane(p: PiecewisePotential, rect: Rectangle) -> bool:
    """True when every upper half-plane zero (all on i[0, v_top)) lies in rect."""
    return rect.u_min < 0 < rect.u_max and rect.v_max >= eigenvalue_height(p) and rect.v_min < 0


def axis_bisection_zeros(f: EntireFunction, t_min: float, t_max: float,
                         n_grid: int = 4000, xtol: float = 1e-13) -> List[float]:
    """Zeros of t -> f(it) on [t_min, t_max] by sign changes and brentq.

    Only valid for functions real on the imaginary axis (real potentials).
    """
    if not f.real_on_imaginary_axis:
        raise ValueError(f"{f.name} is not real on the imaginary axis")

    def g(t):
        return float(np.real(f(np.array([1j * t]))[0]))

    ts = np.linspace(t_min, t_max, n_grid)
    vals = np.real(f(1j * ts))
    roots = []
    for a, b, fa, fb in zip(ts, ts[1:], vals, vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            roots.append(brentq(g, a, b, xtol=xtol))
    return roots
