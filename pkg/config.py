"""Configuration for numerical tolerances, seeding and logging."""
import logging
import os

import numpy as np
from rich.logging import RichHandler

# Root-refinement tolerance (double-precision Newton floor with margin)
DEFAULT_TOL = 1e-10

# Engine overflow flag threshold
OVERFLOW_LIMIT = 1e280

# Search windows are capped at |Im k| <= IMAG_CAP_NUMERATOR / gamma
IMAG_CAP_NUMERATOR = 40.0

# Argument-principle contour policy
EDGE_EPSILON = 1e-6
MAX_CONTOUR_RETRIES = 5
DILATION_RANGE = (1e-4, 1e-3)
INTEGER_DEVIATION = 0.1

# Neumann series
NEUMANN_MAX_TERMS = 60

# Absolute constant of the Carleson embedding, fixed at its upper bound
CARLESON_CONSTANT = 2 ** 5

# Auto window targets about this many zeros (2*R*gamma/pi)
AUTO_EXPECTED_COUNT = 50

# Output float formatting (significant digits)
FLOAT_DIGITS = 17

TRACE_DIR = "traces"
METRICS_DIR = "metrics"

SEED_ENV = "RESONANCE_SEED"

_logging_ready = False


def get_seed() -> int:
    """Seed for the contour-dilation RNG, from RESONANCE_SEED (default 0)."""
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}")


def get_rng(*stream: int) -> np.random.Generator:
    """Deterministic generator for one named stream.

    Box-subdivision tasks pass their path in the quadtree as ``stream`` so
    every task draws the same numbers regardless of scheduling order.
    """
    return np.random.default_rng([get_seed(), *[int(s) for s in stream]])


def setup_logging(level: str = "WARNING", use_rich: bool = True):
    """Install a single handler on the ``resonance`` logger tree.

    Args:
        level: Logging level name for the package loggers.
        use_rich: Use rich's handler (default) or a plain stream handler.
    """
    global _logging_ready
    logger = logging.getLogger("resonance")
    logger.setLevel(level.upper())
    if _logging_ready:
        return logger

    if use_rich:
        handler = RichHandler(show_path=False, markup=False)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    else:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.propagate = False
    _logging_ready = True
    return logger


if __name__ == "__main__":
    from resonance import PiecewisePotential, evaluate, y_p

    print(f"Seed ({SEED_ENV}): {get_seed()}")

    print("\nTesting free-case Jost evaluation...")
    try:
        ev = evaluate(PiecewisePotential.zero(), 1.5 - 0.5j)
        print(f"w(1.5-0.5i) = {ev.w}  (expected {2j * (1.5 - 0.5j)})")
        print("✅ Engine ready.")
    except Exception as e:
        print(f"❌ Engine error: {e}")

    print("\nTesting special functions...")
    try:
        print(f"Y_2 = {y_p(2.0)!r}")
        print("✅ Gamma identity ready.")
    except Exception as e:
        print(f"❌ Special function error: {e}")

    print("\n✅ Environment is GO.")
