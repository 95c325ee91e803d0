"""Entire-function handles the zero finder works on."""
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from resonance.jost.transfer import evaluate_many
from resonance.potential import Case, PiecewisePotential

ValueAndDerivative = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class EntireFunction:
    """A vectorized entire function f together with its analytic derivative f'.

    ``real_on_imaginary_axis`` marks functions with f(-conj k) = conj f(k),
    which are real on iR and admit the axis-bisection oracle.
    """
    name: str
    evaluator: ValueAndDerivative
    real_on_imaginary_axis: bool = False

    def with_derivative(self, k) -> Tuple[np.ndarray, np.ndarray]:
        k = np.asarray(k, dtype=complex)
        return self.evaluator(k)

    def __call__(self, k) -> np.ndarray:
        return self.with_derivative(k)[0]

    @classmethod
    def wronskian(cls, p: PiecewisePotential) -> "EntireFunction":
        def fn(k):
            g = evaluate_many(p, k)
            return g.w, g.dw
        return cls("w", fn, True)

    @classmethod
    def psi0(cls, p: PiecewisePotential) -> "EntireFunction":
        def fn(k):
            g = evaluate_many(p, k)
            return g.psi0, g.d_psi0
        return cls("psi0", fn, True)

    @classmethod
    def dpsi0(cls, p: PiecewisePotential) -> "EntireFunction":
        def fn(k):
            g = evaluate_many(p, k)
            return g.dpsi0, g.d_dpsi0
        return cls("dpsi0", fn, True)

    @classmethod
    def for_case(cls, p: PiecewisePotential, case: Case = None) -> "EntireFunction":
        """w for the line, psi_+(0,.) for Dirichlet, psi_+'(0,.) for Neumann."""
        case = case or p.case
        if case is Case.DIRICHLET:
            return cls.psi0(p)
        if case is Case.NEUMANN:
            return cls.dpsi0(p)
        return cls.wronskian(p)

    @classmethod
    def from_callables(cls, name: str, f: Callable, df: Callable,
                       real_on_imaginary_axis: bool = False) -> "EntireFunction":
        return cls(name, lambda k: (np.asarray(f(k), dtype=complex),
                                    np.asarray(df(k), dtype=complex)),
                   real_on_imaginary_axis)
