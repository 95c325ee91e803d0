"""
Battery runs of the bound certificates over randomized potentials.

Usage:
    python benchmark.py                      # Run all configurations
    python benchmark.py --config counting    # Only the counting bounds
    python benchmark.py --size 10            # Smaller battery

Exits with status 1 when any check fails.
"""
import argparse
import json
import math
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from config import DEFAULT_TOL, METRICS_DIR
from data.battery import get_battery, small_norm_battery
from resonance.bounds import (
    asymptotic_slope,
    counting_certificate,
    factorization_check,
    factorization_spectra,
    half_line_counting_certificate,
    jensen_check,
    lt_sum_certificate,
    rouche_predicate,
    rouche_zero_check,
    spectra_union_deviation,
)
from resonance.errors import ResonanceError
from resonance.jost import evaluate_many, ode_wronskian
from resonance.potential import Case, PiecewisePotential, canonicalize, constants
from resonance.zeros import (
    EntireFunction,
    Rectangle,
    SpectrumWindow,
    auto_window,
    covers_upper_half_plane,
    eigenvalue_height,
    locate_zeros,
)

RADII = [1.0, 5.0, 10.0, 20.0]
P_VALUES = [1.1, 1.5, 2.0, 3.0, 10.0]
ROUCHE_RADII = [0.5, 1.0, 2.0]
# the window reaches this far past the largest requested radius
WINDOW_MARGIN = 0.5
SLOPE_RADII = np.linspace(10.0, 40.0, 7)
SLOPE_TOLERANCE = 0.15
UNITARITY_TOL = 1e-10
ODE_TOL = 1e-8
JENSEN_TOL = 1e-6
FACTORIZATION_TOL = 1e-10
SPLIT_TOL = 1e-8


def battery_window(p: PiecewisePotential, reach: float = max(RADII) + WINDOW_MARGIN) -> Rectangle:
    """The auto window widened so the disk |k| <= reach - WINDOW_MARGIN is inside it."""
    auto = auto_window(p)
    return Rectangle(u_min=min(auto.u_min, -reach), u_max=max(auto.u_max, reach),
                     v_min=min(auto.v_min, -reach), v_max=auto.v_max)


def split_window(p: PiecewisePotential) -> Rectangle:
    """Box for comparing the even-extension spectrum with the half-line spectra.

    Eigenvalues sit below i sqrt(max(-q_j)); the odd offsets keep zeros off the edges.
    """
    depth = max([0.0] + [-v for v in p.values])
    return Rectangle(u_min=-10.3, u_max=10.1, v_min=-3.1, v_max=math.sqrt(depth) + 1.37)


def slope_potentials() -> List[PiecewisePotential]:
    """q = 20 on [0, 1] and on [0, 2]: expected slopes 2/pi and 4/pi."""
    return [PiecewisePotential.constant(20.0, 0.0, 1.0), PiecewisePotential.constant(20.0, 0.0, 2.0)]


class BatteryRunner:
    """Run certificate sweeps across the potential battery."""

    def __init__(self, size: int = 50, results_dir: str = METRICS_DIR, jobs: int = 1):
        self.results_dir = Path(results_dir)
        self.results_dir.mkdir(parents=True, exist_ok=True)
        self.jobs = jobs
        self.battery = get_battery(size)
        self._spectra: Dict[tuple, SpectrumWindow] = {}

    def _spectrum(self, index: int, case: Optional[Case] = None) -> SpectrumWindow:
        p = canonicalize(self.battery[index])
        case = case or p.case
        key = (index, case)
        if key not in self._spectra:
            window = battery_window(p)
            self._spectra[key] = locate_zeros(EntireFunction.for_case(p, case), window, DEFAULT_TOL,
                                              self.jobs, covers_upper_half_plane(p, window))
        return self._spectra[key]

    def _new_results(self, name: str) -> dict:
        return {
            "config": name,
            "timestamp": datetime.now().isoformat(),
            "instances": [],
            "metrics": {"total": 0, "passed": 0, "failed": 0, "errors": 0, "min_margin": None,
                        "total_time": 0.0},
        }

    def _record(self, results: dict, entry: dict):
        m = results["metrics"]
        m["total"] += 1
        if entry["pass"]:
            m["passed"] += 1
        else:
            m["failed"] += 1
        if "error" in entry:
            m["errors"] += 1
        margin = entry.get("margin")
        if margin is not None and (m["min_margin"] is None or margin < m["min_margin"]):
            m["min_margin"] = margin
        results["instances"].append(entry)

    def _record_error(self, results: dict, entry: dict, error: str):
        self._record(results, {**entry, "error": error, "pass": False})

    def _record_check(self, results: dict, entry: dict, value: float, limit: float, strict: bool = False):
        passed = value < limit if strict else value <= limit
        self._record(results, {**entry, "lhs": value, "rhs": limit, "margin": limit - value, "pass": passed})

    def run_counting(self) -> dict:
        """N(r) against the counting bound for every potential and radius."""
        print("\n" + "=" * 60)
        print("COUNTING BOUNDS")
        print("=" * 60)
        results = self._new_results("counting")
        for i, p in enumerate(self.battery):
            start = time.time()
            consts = constants(canonicalize(p))
            try:
                points = self._spectrum(i)
                partner = None
                if p.case.is_half_line:
                    other = Case.NEUMANN if p.case is Case.DIRICHLET else Case.DIRICHLET
                    partner = self._spectrum(i, other)
            except ResonanceError as e:
                self._record_error(results, {"index": i, "case": p.case.value}, str(e))
                continue
            for r in RADII:
                entry = {"index": i, "case": p.case.value, "r": r}
                if not points.covers_disk(0j, r) or (partner and not partner.covers_disk(0j, r)):
                    self._record_error(results, entry, f"radius {r} not covered")
                    continue
                if partner is None:
                    cert = counting_certificate(points, consts, r)
                else:
                    d, n = (points, partner) if p.case is Case.DIRICHLET else (partner, points)
                    cert = half_line_counting_certificate(d, n, consts, r)
                self._record(results, {**entry, "lhs": cert.lhs, "rhs": cert.rhs, "margin": cert.margin,
                                       "pass": cert.passed})
            results["metrics"]["total_time"] += time.time() - start
            print(f"  {i:>2} {p.case.value:<10} N={points.total_multiplicity}")
        self._print_summary(results["metrics"])
        return results

    def run_lt_sum(self) -> dict:
        """Resonance sums against the Lieb-Thirring-type bound for each p."""
        print("\n" + "=" * 60)
        print("RESONANCE SUMS")
        print("=" * 60)
        results = self._new_results("lt_sum")
        for i, p in enumerate(self.battery):
            start = time.time()
            entry = {"index": i, "case": p.case.value}
            try:
                points = self._spectrum(i)
            except ResonanceError as e:
                self._record_error(results, entry, str(e))
                continue
            if points.max_covered_radius() < max(RADII):
                self._record_error(results, entry, f"covered radius {points.max_covered_radius():.4g}"
                                                   f" below {max(RADII)}")
                continue
            consts = constants(canonicalize(p))
            for exponent in P_VALUES:
                cert = lt_sum_certificate(points, exponent, consts, p.case)
                self._record(results, {**entry, "p": exponent, "radius": cert.inputs["radius"],
                                       "lhs": cert.lhs, "rhs": cert.rhs, "margin": cert.margin,
                                       "pass": cert.passed})
            results["metrics"]["total_time"] += time.time() - start
        self._print_summary(results["metrics"])
        return results

    def run_identities(self, n_potentials: int = 20, n_real: int = 100) -> dict:
        """Unitarity, ODE agreement and the Jensen identity on the first potentials."""
        print("\n" + "=" * 60)
        print("IDENTITIES")
        print("=" * 60)
        results = self._new_results("identities")
        ks = np.linspace(-20.0, 20.0, n_real)
        ks = ks[ks != 0].astype(complex)
        for i, p in enumerate(self.battery[:n_potentials]):
            start = time.time()
            line = canonicalize(p.with_case(Case.LINE))
            try:
                grid = evaluate_many(line, ks)
                w2 = np.abs(grid.w) ** 2
                defect = float(np.max(np.abs(w2 - 4.0 * ks.real ** 2 - np.abs(grid.s) ** 2) / w2))
                self._record_check(results, {"index": i, "check": "unitarity"}, defect, UNITARITY_TOL)

                k = 3.0 - 1.0j
                w = EntireFunction.wronskian(line)(np.array([k]))[0]
                rel = abs(w - ode_wronskian(line, k)) / max(1.0, abs(w))
                self._record_check(results, {"index": i, "check": "ode"}, rel, ODE_TOL)

                if i < 10:
                    residual = jensen_check(EntireFunction.wronskian(line), 0.5 + 0.25j, 3.0)
                    self._record_check(results, {"index": i, "check": "jensen"}, residual, JENSEN_TOL,
                                       strict=True)
            except ResonanceError as e:
                self._record_error(results, {"index": i, "check": "identities"}, str(e))
            results["metrics"]["total_time"] += time.time() - start
        self._print_summary(results["metrics"])
        return results

    def run_rouche(self) -> dict:
        """Single-zero criterion on small-norm potentials wherever the predicate holds."""
        print("\n" + "=" * 60)
        print("ROUCHE CRITERION")
        print("=" * 60)
        results = self._new_results("rouche")
        for i, p in enumerate(small_norm_battery()):
            start = time.time()
            consts = constants(canonicalize(p))
            for r in ROUCHE_RADII:
                holds, _ = rouche_predicate(consts, r)
                if not holds:
                    continue
                entry = {"index": i, "r": r}
                try:
                    cert = rouche_zero_check(p, r)
                except ResonanceError as e:
                    self._record_error(results, entry, str(e))
                    continue
                self._record(results, {**entry, "count": cert.inputs["count"], "pass": cert.passed})
            results["metrics"]["total_time"] += time.time() - start
        self._print_summary(results["metrics"])
        return results

    def run_factorization(self, n_potentials: int = 10) -> dict:
        """Even-extension factorization residual and spectrum split on half-line potentials."""
        print("\n" + "=" * 60)
        print("FACTORIZATION")
        print("=" * 60)
        results = self._new_results("factorization")
        re, im = np.meshgrid(np.linspace(-10.0, 10.0, 21), np.linspace(-3.0, 0.0, 7))
        grid = (re + 1j * im).ravel()
        half: List[PiecewisePotential] = [p for p in self.battery if p.case.is_half_line][:n_potentials]
        for i, p in enumerate(half):
            start = time.time()
            entry = {"index": i, "case": p.case.value}
            try:
                residual = factorization_check(p, grid)
                self._record_check(results, {**entry, "check": "residual"}, residual, FACTORIZATION_TOL,
                                   strict=True)
                line, dirichlet, neumann = factorization_spectra(p, split_window(p))
                if not (line.complete and dirichlet.complete and neumann.complete):
                    self._record_error(results, {**entry, "check": "split"}, "incomplete zero location")
                else:
                    deviation = spectra_union_deviation(line, dirichlet, neumann)
                    self._record_check(results, {**entry, "check": "split", "count": line.total_multiplicity},
                                       deviation, SPLIT_TOL)
            except ResonanceError as e:
                self._record_error(results, entry, str(e))
            results["metrics"]["total_time"] += time.time() - start
        self._print_summary(results["metrics"])
        return results

    def run_slope(self) -> dict:
        """Fitted N(r)/r slope over r in [10, 40] against 2 gamma / pi."""
        print("\n" + "=" * 60)
        print("ASYMPTOTIC SLOPE")
        print("=" * 60)
        results = self._new_results("slope")
        for p in slope_potentials():
            start = time.time()
            gamma = constants(p).gamma
            entry = {"gamma": gamma}
            reach = float(SLOPE_RADII[-1]) + WINDOW_MARGIN
            window = Rectangle(u_min=-reach, u_max=reach, v_min=-reach, v_max=eigenvalue_height(p))
            try:
                points = locate_zeros(EntireFunction.wronskian(p), window, DEFAULT_TOL, self.jobs,
                                      covers_upper_half_plane(p, window))
                report = asymptotic_slope(points, SLOPE_RADII, gamma)
            except ResonanceError as e:
                self._record_error(results, entry, str(e))
                continue
            self._record_check(results, {**entry, "slope": report.slope, "expected": report.expected},
                               report.relative_deviation, SLOPE_TOLERANCE)
            results["metrics"]["total_time"] += time.time() - start
        self._print_summary(results["metrics"])
        return results

    def _print_summary(self, metrics: dict):
        print("\n--- Summary ---")
        print(f"  Passed:     {metrics['passed']}/{metrics['total']}")
        print(f"  Failed:     {metrics['failed']} ({metrics['errors']} errors)")
        if metrics["min_margin"] is not None:
            print(f"  Min margin: {metrics['min_margin']:.4g}")
        print(f"  Total Time: {metrics['total_time']:.1f}s")

    def save_results(self, results: dict, suffix: str = ""):
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        filename = f"battery_{results['config']}_{timestamp}{suffix}.json"
        filepath = self.results_dir / filename

        with open(filepath, "w") as f:
            json.dump(results, f, indent=2, default=float)

        print(f"\nResults saved: {filepath}")
        return filepath

    def run_all(self) -> Dict[str, dict]:
        """Run all configurations."""
        all_results = {}
        for name, run in [("counting", self.run_counting), ("lt_sum", self.run_lt_sum),
                          ("identities", self.run_identities), ("rouche", self.run_rouche),
                          ("factorization", self.run_factorization), ("slope", self.run_slope)]:
            all_results[name] = run()
            self.save_results(all_results[name])
        self._print_comparison(all_results)
        return all_results

    def _print_comparison(self, all_results: Dict[str, dict]):
        print("\n" + "=" * 60)
        print("COMPARISON SUMMARY")
        print("=" * 60)
        print(f"{'Configuration':<15} {'Passed':<12} {'Failed':<10} {'Time':<10}")
        print("-" * 60)

        for name, results in all_results.items():
            m = results["metrics"]
            passed = f"{m['passed']}/{m['total']}"
            print(f"{name:<15} {passed:<12} {m['failed']:<10} {m['total_time']:.1f}s")


def failed_checks(all_results: Dict[str, dict]) -> int:
    return sum(results["metrics"]["failed"] for results in all_results.values())


def main():
    parser = argparse.ArgumentParser(description="Certificate battery over randomized potentials")
    parser.add_argument(
        "--config",
        choices=["all", "counting", "lt_sum", "identities", "rouche", "factorization", "slope"],
        default="all",
        help="Configuration to run"
    )
    parser.add_argument("--size", type=int, default=50, help="Battery size")
    parser.add_argument("--jobs", type=int, default=1, help="Worker threads for zero location")
    args = parser.parse_args()

    runner = BatteryRunner(size=args.size, jobs=args.jobs)

    if args.config == "all":
        all_results = runner.run_all()
    else:
        results = getattr(runner, f"run_{args.config}")()
        runner.save_results(results)
        all_results = {args.config: results}

    failed = failed_checks(all_results)
    if failed:
        print(f"\n{failed} check(s) failed")
        sys.exit(1)


if __name__ == "__main__":
    main()
