from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

from ..exceptions import BasisMismatch, DimensionMismatch
from ..qp import FrequencyBasis, QPVector, ScalarMode


def default_names(n: int) -> "Tuple[str, ...]":
    return tuple(f"y{j + 1}" for j in range(n))


@dataclass(frozen=True)
class PerturbedSystem:
    """dx/dt = sum_p eps^p g_p(t, x).

    The trailing ``len(parameter_names)`` variables are parameters: their
    components of every g_p vanish, so they stay constant along solutions
    and can appear symbolically in the derived coefficients.
    """

    n: int
    basis: "FrequencyBasis"
    orders: "Mapping[int, QPVector]"
    mode: "ScalarMode" = ScalarMode.EXACT
    names: "Tuple[str, ...]" = ()
    parameter_names: "Tuple[str, ...]" = field(default_factory=tuple)

    def __post_init__(self):
        orders: "Dict[int, QPVector]" = {}
        for p in sorted(self.orders):
            vec = self.orders[p]
            if p < 1:
                raise DimensionMismatch(f"Order {p} is not a positive integer")
            if len(vec) != self.n or vec.n != self.n:
                raise DimensionMismatch(f"g_{p} does not have {self.n} components")
            if vec.basis != self.basis:
                raise BasisMismatch(f"g_{p} uses another frequency basis")
            for j in range(self.n_state, self.n):
                if not vec[j].is_zero():
                    raise DimensionMismatch(
                        f"g_{p} has a nonzero component for parameter "
                        f"{self.names[j] if self.names else j}"
                    )
            orders[p] = vec
        object.__setattr__(self, "orders", orders)
        if not self.names:
            names = default_names(self.n - len(self.parameter_names)) + tuple(
                self.parameter_names
            )
            object.__setattr__(self, "names", names)
        if len(self.names) != self.n:
            raise DimensionMismatch("One name per variable is required")

    @property
    def n_state(self) -> int:
        return self.n - len(self.parameter_names)

    @property
    def max_order(self) -> int:
        return max(self.orders, default=0)

    def g(self, p: int) -> "QPVector":
        if p in self.orders:
            return self.orders[p]
        return QPVector.zero(self.n, self.basis)

    def zero_vector(self) -> "QPVector":
        return QPVector.zero(self.n, self.basis)

    def identity(self) -> "QPVector":
        return QPVector.identity(self.n, self.basis)

    def with_orders(self, orders: "Mapping[int, QPVector]", basis: "Optional[FrequencyBasis]" = None):
        return PerturbedSystem(
            n=self.n,
            basis=basis or self.basis,
            orders=orders,
            mode=self.mode,
            names=self.names,
            parameter_names=self.parameter_names,
        )

    def to_float(self) -> "PerturbedSystem":
        return PerturbedSystem(
            n=self.n,
            basis=self.basis.to_float(),
            orders={p: v.to_float() for p, v in self.orders.items()},
            mode=ScalarMode.FLOAT,
            names=self.names,
            parameter_names=self.parameter_names,
        )

    def parameter_vector(self, values: "Mapping[str, complex]") -> "Sequence[complex]":
        return [values[name] for name in self.parameter_names]
