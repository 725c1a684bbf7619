from typing import Iterable, Sequence, Tuple

import numpy as np

from ..exceptions import BasisMismatch, DimensionMismatch
from .basis import FrequencyBasis
from .poly import QPPoly


class QPVector:
    """A tuple of QPPoly components sharing one state dimension and basis.

    Systems have at least one state variable, so an empty vector is an error.
    """

    __slots__ = ("components", "n", "basis")

    def __init__(self, components: "Iterable[QPPoly]"):
        components = tuple(components)
        if not components:
            raise DimensionMismatch("A QPVector needs at least one component")
        first = components[0]
        for c in components[1:]:
            if c.n != first.n or c.basis != first.basis:
                raise BasisMismatch("QPVector components must share n and basis")
        self.components: "Tuple[QPPoly, ...]" = components
        self.n = first.n
        self.basis: "FrequencyBasis" = first.basis

    @classmethod
    def zero(cls, n, basis, size=None) -> "QPVector":
        size = n if size is None else size
        return cls(QPPoly.zero(n, basis) for _ in range(size))

    @classmethod
    def identity(cls, n, basis) -> "QPVector":
        return cls(QPPoly.variable(n, basis, j) for j in range(n))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, index) -> "QPPoly":
        return self.components[index]

    def __eq__(self, other):
        if not isinstance(other, QPVector):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "QPVector(" + ", ".join(repr(c) for c in self.components) + ")"

    def _check(self, other: "QPVector"):
        if len(self) != len(other):
            raise DimensionMismatch("QPVector sizes differ")

    def __add__(self, other: "QPVector") -> "QPVector":
        self._check(other)
        return QPVector(a + b for a, b in zip(self, other))

    def __sub__(self, other: "QPVector") -> "QPVector":
        self._check(other)
        return QPVector(a - b for a, b in zip(self, other))

    def __neg__(self) -> "QPVector":
        return QPVector(-a for a in self)

    def scale(self, factor) -> "QPVector":
        return QPVector(a.scale(factor) for a in self)

    def __mul__(self, factor) -> "QPVector":
        return QPVector(a * factor for a in self)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def is_t_independent(self) -> bool:
        return all(c.is_t_independent() for c in self)

    def average_t(self) -> "QPVector":
        return QPVector(c.average_t() for c in self)

    def oscillating_part(self) -> "QPVector":
        return QPVector(c.oscillating_part() for c in self)

    def antiderivative_t(self) -> "QPVector":
        return QPVector(c.antiderivative_t() for c in self)

    def diff_t(self) -> "QPVector":
        return QPVector(c.diff_t() for c in self)

    def diff_y(self, j: int) -> "QPVector":
        return QPVector(c.diff_y(j) for c in self)

    def directional_derivative(self, direction: "QPVector") -> "QPVector":
        """(dV/dy) . W, the Jacobian of this field applied to ``direction``."""
        if len(direction) != self.n:
            raise DimensionMismatch("Direction must have one entry per state variable")
        result = [QPPoly.zero(self.n, self.basis) for _ in self]
        for j in range(self.n):
            if direction[j].is_zero():
                continue
            for i, component in enumerate(self):
                partial = component.diff_y(j)
                if partial:
                    result[i] = result[i] + partial * direction[j]
        return QPVector(result)

    def bracket(self, other: "QPVector") -> "QPVector":
        """[B, R] = (dB/dy) R - (dR/dy) B."""
        return self.directional_derivative(other) - other.directional_derivative(self)

    def substitute(self, subs: "Sequence[QPPoly]", n: int = None) -> "QPVector":
        return QPVector(c.substitute(subs, n=n) for c in self)

    def embed(self, n: int, offset: int = 0) -> "QPVector":
        return QPVector(c.embed(n, offset) for c in self)

    def eval(self, t: float, y) -> "np.ndarray":
        return np.array([c.eval(t, y) for c in self], dtype=complex)

    def to_float(self) -> "QPVector":
        return QPVector(c.to_float() for c in self)
