"""Validated system files and the objects built from them."""
import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .autonomous import DiagonalLinearPart
from .core import PerturbedSystem
from .linear import MatrixFourierSeries
from .qp import FrequencyBasis, GaussianRational, QPPoly, QPVector, ScalarMode
from .slow_manifold import CriticalManifoldChart, OscillatorSystem, symbolic_chart, symbolic_oscillator


class SystemMode(enum.Enum):
    PERIODIC = "periodic"
    AUTONOMOUS = "autonomous"
    LINEAR = "linear"
    CRITICAL_MANIFOLD = "critical_manifold"
    PHASE = "phase"


def _coefficient(term, mode: "ScalarMode"):
    real, imag = term.get("coeff_re", 0), term.get("coeff_im", 0)
    if mode is ScalarMode.EXACT:
        return GaussianRational(real, imag)
    return complex(float(real), float(imag))


@dataclass
class SystemFile:
    mode: "SystemMode"
    n: int
    scalar_mode: "ScalarMode"
    data: "Dict[str, Any]" = field(repr=False)

    @classmethod
    def build(cls, validated_data) -> "SystemFile":
        return cls(
            mode=SystemMode(validated_data["mode"]),
            n=validated_data["n"],
            scalar_mode=ScalarMode(validated_data.get("scalar_mode", "exact")),
            data=dict(validated_data),
        )

    @property
    def parameters(self) -> "List[str]":
        return list(self.data.get("parameters", []))

    @property
    def basis(self) -> "FrequencyBasis":
        basis = FrequencyBasis(tuple(self.data.get("base_frequencies", [])))
        return basis if self.scalar_mode is ScalarMode.EXACT else basis.to_float()

    def system(self) -> "PerturbedSystem":
        """g_p from the ``orders`` block; parameters follow the state variables."""
        size = self.n + len(self.parameters)
        basis = self.basis
        orders: "Dict[int, QPVector]" = {}
        for order, terms in self.data.get("orders", {}).items():
            components: "List[list]" = [[] for _ in range(size)]
            for term in terms:
                key = (tuple(term.get("k", [])), tuple(term["alpha"]))
                components[term["component"]].append((key, _coefficient(term, self.scalar_mode)))
            orders[order] = QPVector(QPPoly(size, basis, c) for c in components)
        names = tuple(self.data["names"]) + tuple(self.parameters) if "names" in self.data else ()
        return PerturbedSystem(
            n=size,
            basis=basis,
            orders=orders,
            mode=self.scalar_mode,
            names=names,
            parameter_names=tuple(self.parameters),
        )

    @property
    def linear_part(self) -> "Optional[DiagonalLinearPart]":
        if "F" not in self.data:
            return None
        return DiagonalLinearPart(tuple(self.data["F"]["nu"]))

    @property
    def coordinates(self):
        """P with x = P z, or None when the file is already diagonal."""
        return self.data.get("coordinates")

    def matrix_series(self) -> "MatrixFourierSeries":
        basis = self.basis
        orders = {}
        for order, matrix in self.data.get("A", {}).items():
            orders[int(order)] = tuple(
                tuple(
                    QPPoly(
                        0,
                        basis,
                        [((tuple(t.get("k", [])), ()), _coefficient(t, self.scalar_mode)) for t in entry],
                    )
                    for entry in row
                )
                for row in matrix
            )
        return MatrixFourierSeries(n=self.n, basis=basis, orders=orders, mode=self.scalar_mode)

    @property
    def chart_block(self) -> "Dict[str, Any]":
        return self.data.get("chart", {})

    def chart(self) -> "CriticalManifoldChart":
        block = self.chart_block
        return symbolic_chart(
            variables=block["variables"],
            f=block["f"],
            g1=block["g1"],
            chart_variables=block["chart_variables"],
            U=block["U"],
            parameters=block.get("parameters"),
            g2=block.get("g2"),
            delta=block.get("delta", 0.0),
        )

    @property
    def oscillator_block(self) -> "Dict[str, Any]":
        return self.data.get("oscillator", {})

    def oscillator(self) -> "OscillatorSystem":
        block = self.oscillator_block
        return symbolic_oscillator(
            variables=block["variables"],
            f=block["f"],
            g1=block["g1"],
            parameters=block.get("parameters"),
        )
