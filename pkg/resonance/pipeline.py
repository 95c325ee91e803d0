"""LangGraph workflow: load a potential, locate its spectrum, certify the bounds."""
import logging
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, TypedDict

import numpy as np
from langgraph.graph import END, StateGraph
from pydantic import BaseModel, ConfigDict, field_validator

from config import DEFAULT_TOL, TRACE_DIR, get_rng
from resonance.bounds import (
    BoundCertificate,
    asymptotic_slope,
    carleson_box_check,
    counting_certificate,
    counting_egamma_certificate,
    egamma_witness,
    even_extension_envelope,
    factorization_check,
    forbidden_domain_check,
    half_line_counting_certificate,
    jensen_check,
    lt_sum_certificate,
    lt_sum_egamma_certificate,
    rouche_predicate,
    rouche_zero_check,
)
from resonance.errors import (
    CenterIsZero,
    EngineOverflow,
    IncompleteCoverage,
    PotentialError,
    QuadratureNotConverged,
    ResonanceError,
    ZeroOnCircle,
    ZeroOnContour,
)
from resonance.potential import Case, PiecewisePotential, PotentialConstants, canonicalize, constants, load_potential
from resonance.zeros import (
    EntireFunction,
    Rectangle,
    SpectrumWindow,
    auto_window,
    covers_upper_half_plane,
    locate_zeros,
)

logger = logging.getLogger(__name__)

CERTIFICATE_NAMES = ["counting", "lt_sum", "forbidden", "rouche", "jensen", "egamma",
                     "carleson", "factorization", "slope"]
# the slope is an asymptotic property, not an inequality; only on request
DEFAULT_CERTIFICATES = [name for name in CERTIFICATE_NAMES if name != "slope"]

MAX_REPAIRS = 2
JENSEN_CENTER = 0.5
JENSEN_TOLERANCE = 1e-6
FACTORIZATION_TOLERANCE = 1e-10
SLOPE_TOLERANCE = 0.15
CARLESON_SWEEP_T = [-10.0, -5.0, 0.0, 5.0, 10.0]
CARLESON_SWEEP_R = [0.5, 2.0, 5.0, 10.0]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_COVERAGE = 3
EXIT_OVERFLOW = 4
EXIT_CERTIFICATE = 5


class RunConfig(BaseModel):
    """Every option of a run."""
    model_config = ConfigDict(frozen=True, validate_default=True)

    potential: str
    case: Optional[Case] = None
    window: Optional[Rectangle] = None
    tol: float = DEFAULT_TOL
    certify: List[str] = ["all"]
    p_values: List[float] = [1.1, 1.5, 2.0, 3.0, 10.0]
    radii: List[float] = [1.0, 5.0, 10.0, 20.0]
    out: str = "out"
    jobs: int = 1
    run_id: str = "run"

    @field_validator("tol")
    @classmethod
    def _positive_tol(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tol must be positive")
        return v

    @field_validator("jobs")
    @classmethod
    def _jobs(cls, v: int) -> int:
        if v < 1:
            raise ValueError("jobs must be at least 1")
        return v

    @field_validator("p_values")
    @classmethod
    def _p_above_one(cls, v: List[float]) -> List[float]:
        for p in v:
            if not p > 1:
                raise ValueError(f"p must exceed 1 (got {p})")
        return v

    @field_validator("radii")
    @classmethod
    def _positive_radii(cls, v: List[float]) -> List[float]:
        if any(not r > 0 for r in v):
            raise ValueError("radii must be positive")
        return sorted(v)

    @field_validator("certify")
    @classmethod
    def _known_certificates(cls, v: List[str]) -> List[str]:
        if v == ["all"]:
            return list(DEFAULT_CERTIFICATES)
        unknown = [name for name in v if name not in CERTIFICATE_NAMES]
        if unknown:
            raise ValueError(f"unknown certificates {unknown}; choose from {CERTIFICATE_NAMES}")
        return v


class PipelineState(TypedDict):
    """State for the certification workflow."""
    config: RunConfig
    potential: Optional[PiecewisePotential]
    consts: Optional[PotentialConstants]
    window: Optional[Rectangle]
    upper_complete: bool
    spectrum: Optional[SpectrumWindow]
    partner: Optional[SpectrumWindow]
    certificates: List[BoundCertificate]
    error: Optional[str]
    error_kind: Optional[str]
    exit_code: int
    repair_count: int
    trace: List[str]


class CertificationPipeline:
    """Spectrum plus certificates for one potential file, with a window-repair loop."""

    def __init__(self, trace_log_dir: str = TRACE_DIR, echo: bool = False):
        self.trace_log_dir = Path(trace_log_dir)
        self.trace_log_dir.mkdir(parents=True, exist_ok=True)
        self.echo = echo
        self.graph = self._build_graph()
        self._certifiers: Dict[str, Callable[[PipelineState], List[BoundCertificate]]] = {
            "counting": self._certify_counting,
            "lt_sum": self._certify_lt_sum,
            "forbidden": self._certify_forbidden,
            "rouche": self._certify_rouche,
            "jensen": self._certify_jensen,
            "egamma": self._certify_egamma,
            "carleson": self._certify_carleson,
            "factorization": self._certify_factorization,
            "slope": self._certify_slope,
        }

    def _build_graph(self) -> StateGraph:
        workflow = StateGraph(PipelineState)

        workflow.add_node("loader", self._loader_node)
        workflow.add_node("windowing", self._windowing_node)
        workflow.add_node("spectrum", self._spectrum_node)
        workflow.add_node("repair", self._repair_node)
        workflow.add_node("certifier", self._certifier_node)
        workflow.add_node("reporter", self._reporter_node)

        workflow.set_entry_point("loader")
        workflow.add_conditional_edges(
            "loader",
            self._route_after_loader,
            {"ok": "windowing", "fail": "reporter"}
        )
        workflow.add_edge("windowing", "spectrum")
        workflow.add_conditional_edges(
            "spectrum",
            self._route_after_spectrum,
            {"repair": "repair", "certify": "certifier", "report": "reporter"}
        )
        workflow.add_conditional_edges(
            "repair",
            self._route_after_repair,
            {"spectrum": "spectrum", "report": "reporter"}
        )
        workflow.add_edge("certifier", "reporter")
        workflow.add_edge("reporter", END)

        return workflow.compile()

    def _log_trace(self, state: PipelineState, message: str):
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f")[:-3]
        log_entry = f"[{timestamp}] {message}"
        state["trace"].append(log_entry)
        logger.debug(message)
        if self.echo:
            print(log_entry)

    def _fail(self, state: PipelineState, kind: str, message: str, exit_code: int):
        state["error"] = message
        state["error_kind"] = kind
        state["exit_code"] = exit_code
        self._log_trace(state, f"Error ({kind}): {message}")

    # nodes

    def _loader_node(self, state: PipelineState) -> PipelineState:
        cfg = state["config"]
        self._log_trace(state, f"Loader: Reading {cfg.potential}")
        try:
            p = load_potential(cfg.potential)
        except PotentialError as e:
            self._fail(state, "parse", str(e), EXIT_PARSE)
            return state
        if cfg.case is not None and cfg.case is not p.case:
            try:
                p = p.with_case(cfg.case)
            except ValueError as e:
                self._fail(state, "parse", f"case: {e}", EXIT_PARSE)
                return state
        p = canonicalize(p)
        state["potential"] = p
        state["consts"] = constants(p)
        c = state["consts"]
        self._log_trace(state, f"Loader: {p.case.value}, {p.n_pieces} pieces, gamma={c.gamma:.6g}, "
                               f"||q||={c.norm_l1:.6g}, Q={c.Q:.6g}")
        return state

    def _route_after_loader(self, state: PipelineState) -> str:
        return "fail" if state.get("error") else "ok"

    def _windowing_node(self, state: PipelineState) -> PipelineState:
        cfg, p = state["config"], state["potential"]
        if cfg.window is None:
            window = auto_window(p)
            self._log_trace(state, f"Windowing: auto window {window.as_tuple()}")
        else:
            window = cfg.window
            self._log_trace(state, f"Windowing: explicit window {window.as_tuple()}")
        state["window"] = window
        state["upper_complete"] = covers_upper_half_plane(p, window)
        return state

    def _locate(self, state: PipelineState, case: Case) -> SpectrumWindow:
        cfg, p = state["config"], state["potential"]
        return locate_zeros(EntireFunction.for_case(p, case), state["window"], cfg.tol, cfg.jobs,
                            upper_half_plane_complete=state["upper_complete"])

    def _spectrum_node(self, state: PipelineState) -> PipelineState:
        cfg, p = state["config"], state["potential"]
        state["error"], state["error_kind"] = None, None
        self._log_trace(state, f"Spectrum: Locating zeros in {state['window'].as_tuple()}")
        try:
            spectrum = self._locate(state, p.case)
            partner = None
            if p.case.is_half_line and "counting" in cfg.certify:
                other = Case.NEUMANN if p.case is Case.DIRICHLET else Case.DIRICHLET
                partner = self._locate(state, other)
        except EngineOverflow as e:
            state["error"], state["error_kind"] = str(e), "overflow"
            self._log_trace(state, f"Spectrum: Overflow - {e}")
            return state
        except (ZeroOnContour, QuadratureNotConverged) as e:
            state["error"], state["error_kind"] = str(e), "contour"
            self._log_trace(state, f"Spectrum: Contour failure - {e}")
            return state

        state["spectrum"], state["partner"] = spectrum, partner
        kinds = {}
        for pt in spectrum.points:
            kinds[pt.kind.value] = kinds.get(pt.kind.value, 0) + pt.multiplicity
        self._log_trace(state, f"Spectrum: {spectrum.total_multiplicity}/{spectrum.count} zeros, "
                               f"complete={spectrum.complete}, kinds={kinds}")
        if not spectrum.complete or (partner is not None and not partner.complete):
            self._fail(state, "coverage", "zero location incomplete", EXIT_COVERAGE)
        return state

    def _route_after_spectrum(self, state: PipelineState) -> str:
        if state.get("error_kind") in ("overflow", "contour"):
            return "repair"
        if state.get("error"):
            return "report"
        return "certify" if state["config"].certify else "report"

    def _repair_node(self, state: PipelineState) -> PipelineState:
        repair_count = state.get("repair_count", 0) + 1
        state["repair_count"] = repair_count
        self._log_trace(state, f"Repair: Attempt {repair_count}/{MAX_REPAIRS}")
        window = state["window"]

        if repair_count > MAX_REPAIRS:
            self._log_trace(state, "Max repairs reached, ending")
            code = EXIT_OVERFLOW if state["error_kind"] == "overflow" else EXIT_COVERAGE
            self._fail(state, state["error_kind"], state["error"], code)
            return state
        if state["error_kind"] == "overflow":
            if state["config"].window is not None:
                self._fail(state, "overflow", f"explicit window overflows: {state['error']}", EXIT_OVERFLOW)
                return state
            state["window"] = Rectangle(u_min=window.u_min, u_max=window.u_max,
                                        v_min=window.v_min / 2, v_max=window.v_max)
            state["upper_complete"] = covers_upper_half_plane(state["potential"], state["window"])
            self._log_trace(state, f"Repair: Shrunk window toward the real axis to {state['window'].as_tuple()}")
        else:
            factor = 1.0 + get_rng(99, repair_count).uniform(1e-3, 1e-2)
            state["window"] = window.dilate(factor)
            state["upper_complete"] = covers_upper_half_plane(state["potential"], state["window"])
            self._log_trace(state, f"Repair: Perturbed window by {factor:.6f}")
        return state

    def _route_after_repair(self, state: PipelineState) -> str:
        return "report" if state.get("exit_code") else "spectrum"

    def _certifier_node(self, state: PipelineState) -> PipelineState:
        cfg = state["config"]
        for name in cfg.certify:
            self._log_trace(state, f"Certifier: {name}")
            try:
                certs = self._certifiers[name](state)
            except IncompleteCoverage as e:
                self._fail(state, "coverage", f"{name}: {e}", EXIT_COVERAGE)
                continue
            except (ResonanceError, ValueError) as e:
                self._log_trace(state, f"Certifier: {name} raised {type(e).__name__}: {e}")
                certs = [BoundCertificate(id=f"{name}_error", lhs=1.0, rhs=0.0,
                                          notes=[f"{type(e).__name__}: {e}"])]
            failed = [c.id for c in certs if not c.passed]
            self._log_trace(state, f"Certifier: {name} -> {len(certs)} certificates, {len(failed)} failed")
            state["certificates"].extend(certs)
        return state

    def _reporter_node(self, state: PipelineState) -> PipelineState:
        if not state.get("exit_code"):
            failed = [c for c in state["certificates"] if not c.passed]
            state["exit_code"] = EXIT_CERTIFICATE if failed else EXIT_OK
        self._log_trace(state, f"Reporter: exit code {state['exit_code']}, "
                               f"{len(state['certificates'])} certificates")
        return state

    # certificates

    def _covered_radii(self, state: PipelineState, center: complex = 0j) -> List[float]:
        limit = state["spectrum"].max_covered_radius(center)
        if state["partner"] is not None:
            limit = min(limit, state["partner"].max_covered_radius(center))
        radii = [r for r in state["config"].radii if r <= limit]
        skipped = [r for r in state["config"].radii if r > limit]
        if skipped:
            self._log_trace(state, f"Certifier: radii {skipped} outside coverage ({limit:.6g}), skipped")
        return radii

    def _certify_counting(self, state: PipelineState) -> List[BoundCertificate]:
        spectrum, consts = state["spectrum"], state["consts"]
        certs = []
        for r in self._covered_radii(state):
            if state["potential"].case.is_half_line:
                dirichlet, neumann = spectrum, state["partner"]
                if spectrum.function == "dpsi0":
                    dirichlet, neumann = neumann, spectrum
                certs.append(half_line_counting_certificate(dirichlet, neumann, consts, r))
            else:
                certs.append(counting_certificate(spectrum, consts, r))
                certs.append(counting_egamma_certificate(spectrum, consts, r))
        return certs

    def _certify_lt_sum(self, state: PipelineState) -> List[BoundCertificate]:
        spectrum, consts, case = state["spectrum"], state["consts"], state["potential"].case
        certs = []
        for p in state["config"].p_values:
            certs.append(lt_sum_certificate(spectrum, p, consts, case))
            if case is Case.LINE:
                certs.append(lt_sum_egamma_certificate(spectrum, p, consts))
        return certs

    def _certify_forbidden(self, state: PipelineState) -> List[BoundCertificate]:
        p = state["potential"]
        if p.case is not Case.DIRICHLET:
            self._log_trace(state, "Certifier: forbidden domain applies to the Dirichlet case, skipped")
            return []
        return forbidden_domain_check(state["spectrum"], p, verify=constants(p).gamma != 1.0)

    def _certify_rouche(self, state: PipelineState) -> List[BoundCertificate]:
        if state["potential"].case.is_half_line:
            self._log_trace(state, "Certifier: Rouche criterion is stated for the line, skipped")
            return []
        certs = []
        for r in state["config"].radii:
            holds, cert = rouche_predicate(state["consts"], r)
            if not holds:
                self._log_trace(state, f"Certifier: Rouche condition fails at r={r} (no claim)")
                continue
            certs.append(cert)
            certs.append(rouche_zero_check(state["potential"], r))
        return certs

    def _certify_jensen(self, state: PipelineState) -> List[BoundCertificate]:
        spectrum = state["spectrum"]
        f = EntireFunction.for_case(state["potential"])
        certs = []
        for r in self._covered_radii(state, JENSEN_CENTER):
            try:
                residual = jensen_check(f, JENSEN_CENTER, r, spectrum)
            except (CenterIsZero, ZeroOnCircle) as e:
                self._log_trace(state, f"Certifier: Jensen at r={r} skipped - {e}")
                continue
            certs.append(BoundCertificate(id="jensen", lhs=residual, rhs=JENSEN_TOLERANCE,
                                          inputs={"center": JENSEN_CENTER, "r": r, "function": f.name},
                                          notes=["lhs is |Jensen residual|"]))
        return certs

    def _certify_egamma(self, state: PipelineState) -> List[BoundCertificate]:
        if state["potential"].case.is_half_line:
            return []
        return egamma_witness(state["potential"]).certificates()

    def _certify_carleson(self, state: PipelineState) -> List[BoundCertificate]:
        if state["potential"].case.is_half_line:
            return []
        spectrum, consts = state["spectrum"], state["consts"]
        return [carleson_box_check(spectrum, t, r, consts)
                for t in CARLESON_SWEEP_T for r in CARLESON_SWEEP_R
                if spectrum.covers_disk(complex(t), r)]

    def _certify_factorization(self, state: PipelineState) -> List[BoundCertificate]:
        p = state["potential"]
        if not p.case.is_half_line:
            return []
        re, im = np.meshgrid(np.linspace(-10.0, 10.0, 21), np.linspace(-3.0, 0.0, 7))
        grid = (re + 1j * im).ravel()
        residual = factorization_check(p, grid)
        ratio = even_extension_envelope(p, grid)
        return [
            BoundCertificate(id="factorization", lhs=residual, rhs=FACTORIZATION_TOLERANCE,
                             inputs={"grid": "[-10,10]x[-3,0], 21x7"},
                             notes=["lhs is max relative |w~ - 2 psi_+(0) psi_+'(0)|"]),
            BoundCertificate(id="even_envelope", lhs=ratio, rhs=1.0,
                             inputs={"grid": "[-10,10]x[-3,0], 21x7"}),
        ]

    def _certify_slope(self, state: PipelineState) -> List[BoundCertificate]:
        spectrum, consts = state["spectrum"], state["consts"]
        if state["potential"].case.is_half_line:
            return []
        r_max = min(40.0, spectrum.max_covered_radius())
        if r_max < 15.0:
            self._log_trace(state, f"Certifier: coverage {r_max:.3g} too small for a slope fit, skipped")
            return []
        report = asymptotic_slope(spectrum, np.linspace(10.0, r_max, 7), consts.gamma)
        return [BoundCertificate(id="slope", lhs=report.relative_deviation, rhs=SLOPE_TOLERANCE,
                                 inputs={"slope": report.slope, "expected": report.expected,
                                         "degenerate": report.degenerate},
                                 notes=["asymptotic property; tolerance fixed empirically"])]

    # entry point

    def run(self, config: RunConfig) -> dict:
        initial_state: PipelineState = {
            "config": config,
            "potential": None,
            "consts": None,
            "window": None,
            "upper_complete": False,
            "spectrum": None,
            "partner": None,
            "certificates": [],
            "error": None,
            "error_kind": None,
            "exit_code": 0,
            "repair_count": 0,
            "trace": [],
        }
        self._log_trace(initial_state, f"=== Run {config.run_id}: {config.potential} ===")

        final_state = self.graph.invoke(initial_state)

        self._log_trace(final_state, f"=== Completed {config.run_id} ===")
        trace_file = self.trace_log_dir / f"{config.run_id}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
        with open(trace_file, "w") as f:
            f.write("\n".join(final_state["trace"]))

        return {
            "success": final_state["exit_code"] == EXIT_OK,
            "error": final_state["error"],
            "exit_code": final_state["exit_code"],
            "potential": final_state["potential"],
            "consts": final_state["consts"],
            "window": final_state["window"],
            "spectrum": final_state["spectrum"],
            "partner": final_state["partner"],
            "certificates": final_state["certificates"],
            "trace": final_state["trace"],
        }
