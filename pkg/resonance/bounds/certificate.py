"""Certificate records and the human-readable report."""
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from rich.table import Table

from resonance.potential import Case, PotentialConstants

InputValue = Union[float, int, str, bool]

# |w| on the real axis is computed to about 1e-13 relative
D1_ROUNDOFF = 1e-10


class BoundCertificate(BaseModel):
    """One inequality instance lhs <= rhs with the inputs that produced it."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: str
    lhs: float
    rhs: float
    margin: float = 0.0
    passed: bool = Field(default=False, alias="pass")
    inputs: Dict[str, InputValue] = {}
    provenance: Dict[str, str] = {}
    notes: List[str] = []

    @model_validator(mode="before")
    @classmethod
    def _derived(cls, data):
        # margin and pass always follow from lhs/rhs, never from the caller
        if isinstance(data, dict) and "lhs" in data and "rhs" in data:
            data = {k: v for k, v in data.items() if k not in ("margin", "pass", "passed")}
            lhs, rhs = float(data["lhs"]), float(data["rhs"])
            data["margin"] = rhs - lhs
            data["passed"] = bool(lhs <= rhs)
        return data


class EgammaWitness(BaseModel):
    """Grid evidence that w satisfies the two class conditions.

    D1 is the minimum of |f(k)| / 2|k| over a real grid, D2 the maximum of
    |f(k) - 2ik + f0| over its exponential envelope on a complex grid.
    """
    model_config = ConfigDict(frozen=True)

    f0: float
    Q: float
    gamma: float
    d1_min_ratio: float
    d1_argmin: float
    d2_max_ratio: float
    d2_argmax_re: float
    d2_argmax_im: float
    n_real: int
    n_complex: int

    @property
    def d1_holds(self) -> bool:
        return self.d1_min_ratio >= 1.0 - D1_ROUNDOFF

    @property
    def d2_holds(self) -> bool:
        return self.d2_max_ratio <= 1.0

    def certificates(self) -> List[BoundCertificate]:
        inputs = {"gamma": self.gamma, "Q": self.Q, "f0": self.f0}
        return [
            BoundCertificate(id="egamma_d1", lhs=1.0 - D1_ROUNDOFF, rhs=self.d1_min_ratio,
                             inputs={**inputs, "argmin": self.d1_argmin, "n": self.n_real},
                             notes=["min |w(k)|/2|k| over the real grid must be >= 1 up to roundoff"]),
            BoundCertificate(id="egamma_d2", lhs=self.d2_max_ratio, rhs=1.0,
                             inputs={**inputs, "argmax_re": self.d2_argmax_re,
                                     "argmax_im": self.d2_argmax_im, "n": self.n_complex}),
        ]


def constant_inputs(consts: PotentialConstants, case: Optional[Case] = None,
                    **extra: InputValue) -> Dict[str, InputValue]:
    inputs: Dict[str, InputValue] = {
        "gamma": consts.gamma,
        "norm_l1": consts.norm_l1,
        "norm_weighted": consts.norm_weighted,
        "q0": consts.q0,
        "Q": consts.Q,
    }
    if case is not None:
        inputs["case"] = case.value
    inputs.update(extra)
    return inputs


CONSTANT_PROVENANCE = {
    "gamma": "support diameter of the canonical potential (sup supp q on the half-line)",
    "norm_l1": "sum |q_j| (x_{j+1} - x_j)",
    "norm_weighted": "sum |q_j| (x_{j+1}^2 - x_j^2) / 2",
    "Q": "max(norm_l1, norm_weighted)",
    "q0": "sum q_j (x_{j+1} - x_j)",
}


def report_table(certs: List[BoundCertificate], title: str = "Certificates") -> Table:
    table = Table(title=title)
    table.add_column("id", style="cyan")
    table.add_column("LHS", justify="right")
    table.add_column("RHS", justify="right")
    table.add_column("margin", justify="right")
    table.add_column("pass", justify="center")
    for cert in certs:
        mark = "[green]✓[/green]" if cert.passed else "[red]✗[/red]"
        table.add_row(cert.id, f"{cert.lhs:.6g}", f"{cert.rhs:.6g}", f"{cert.margin:.6g}", mark)
    return table


def report_text(certs: List[BoundCertificate]) -> str:
    """Plain fixed-width version of the table for the text report file."""
    lines = [f"{'id':<28} {'LHS':>16} {'RHS':>16} {'margin':>16}  pass"]
    for cert in certs:
        lines.append(f"{cert.id:<28} {cert.lhs:>16.9g} {cert.rhs:>16.9g} {cert.margin:>16.9g}  "
                     f"{'yes' if cert.passed else 'NO'}")
    return "\n".join(lines) + "\n"
