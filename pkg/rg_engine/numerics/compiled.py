"""Vectorized numpy evaluators of QPVector fields."""
from typing import Mapping, Sequence

import numpy as np

from ..exceptions import DimensionMismatch
from ..qp import QPVector


class CompiledVector:
    """Evaluates ``sum c * y^alpha * exp(i lambda t)`` per component on arrays.

    Accepts a scalar ``t`` with a state of shape (n,), or arrays of shape (N,)
    and (N, n); the result has shape (size,) or (N, size).
    """

    def __init__(self, vec: "QPVector"):
        self.size = len(vec)
        self.n = vec.n
        basis = vec.basis
        coeffs, alphas, lams, rows = [], [], [], []
        for i, component in enumerate(vec):
            for (k, alpha), coeff in component.items():
                coeffs.append(complex(coeff))
                alphas.append(alpha)
                lams.append(float(basis.frequency(k)) if any(k) else 0.0)
                rows.append(i)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.alphas = np.asarray(alphas, dtype=int).reshape(len(coeffs), self.n)
        self.lams = np.asarray(lams, dtype=float)
        self.selector = np.zeros((len(coeffs), self.size))
        self.selector[np.arange(len(coeffs)), rows] = 1.0
        self.oscillating = bool(np.any(self.lams))

    def __call__(self, t, y) -> "np.ndarray":
        single = np.ndim(t) == 0 and np.ndim(y) == 1
        states = np.atleast_2d(np.asarray(y, dtype=complex))
        times = np.broadcast_to(np.asarray(t, dtype=float), (states.shape[0],))
        if not len(self.coeffs):
            result = np.zeros((states.shape[0], self.size), dtype=complex)
            return result[0] if single else result
        monomials = np.prod(states[:, None, :] ** self.alphas[None, :, :], axis=-1)
        values = monomials * self.coeffs[None, :]
        if self.oscillating:
            values = values * np.exp(1j * np.outer(times, self.lams))
        result = values @ self.selector
        return result[0] if single else result


class CompiledJacobian:
    """d field / dy as an array of shape (size, n) or (N, size, n)."""

    def __init__(self, vec: "QPVector"):
        self.columns: "Sequence[CompiledVector]" = [
            CompiledVector(vec.diff_y(j)) for j in range(vec.n)
        ]

    def __call__(self, t, y) -> "np.ndarray":
        return np.stack([column(t, y) for column in self.columns], axis=-1)


class GradedField:
    """(t, x) -> sum_p eps^p V_p(t, x) at a fixed numeric eps."""

    def __init__(self, orders: "Mapping[int, QPVector]", eps: float):
        if not orders:
            raise DimensionMismatch("A graded field needs at least one order")
        first = next(iter(orders.values()))
        self.size = len(first)
        self.n = first.n
        self.eps = eps
        self.orders = [
            (eps**p, vec)
            for p, vec in sorted(orders.items())
            if eps**p != 0 and not vec.is_zero()
        ]
        self._values = [(w, CompiledVector(v)) for w, v in self.orders]
        self._jacobians = None

    def __call__(self, t, x) -> "np.ndarray":
        x = np.asarray(x)
        shape = (self.size,) if x.ndim == 1 else (x.shape[0], self.size)
        total = np.zeros(shape, dtype=complex)
        for weight, evaluator in self._values:
            total = total + weight * evaluator(t, x)
        return total

    def jacobian(self, t, x) -> "np.ndarray":
        if self._jacobians is None:
            self._jacobians = [(w, CompiledJacobian(v)) for w, v in self.orders]
        x = np.asarray(x)
        shape = (self.size, self.n) if x.ndim == 1 else (x.shape[0], self.size, self.n)
        total = np.zeros(shape, dtype=complex)
        for weight, evaluator in self._jacobians:
            total = total + weight * evaluator(t, x)
        return total


def compile_vector(vec: "QPVector") -> "CompiledVector":
    return CompiledVector(vec)


def compile_jacobian(vec: "QPVector") -> "CompiledJacobian":
    return CompiledJacobian(vec)
