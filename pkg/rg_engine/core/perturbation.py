"""Secular coefficients of the regular perturbation series.

The k-th term of the naive expansion x = y + eps x_1 + eps^2 x_2 + ... reads

    x_k(t, y) = u^(k)_t(y) + p^(k)_1(t, y) t + ... + p^(k)_k(t, y) t^k

with p^(1)_1 = R_1, p^(i)_1 = R_i + sum_k (du^(k)/dy) R_{i-k} and, for j >= 2,
p^(i)_j = (1/j) sum_k (dp^(k)_{j-1}/dy) R_{i-k}.
"""
from fractions import Fraction
from typing import Callable, Dict, Tuple

import numpy as np

from ..exceptions import DimensionMismatch
from ..qp import QPVector, ScalarMode
from .derive import RGResult

PTable = Dict[Tuple[int, int], QPVector]


def regular_perturbation_coeffs(res: "RGResult", K: int) -> "PTable":
    """The table ``{(i, j): p^(i)_j}`` for 1 <= j <= i <= K; absent keys are zero."""
    if K < 1 or K > res.m:
        raise DimensionMismatch(f"The table order must lie in 1..{res.m}, got {K}")
    exact = res.system.mode is ScalarMode.EXACT
    table: "PTable" = {}
    zero = res.system.zero_vector()
    for i in range(1, K + 1):
        first = res.R_at(i)
        for k in range(1, i):
            first = first + res.U_at(k).directional_derivative(res.R_at(i - k))
        table[(i, 1)] = first
        for j in range(2, i + 1):
            total = zero
            for k in range(j - 1, i):
                lower = table.get((k, j - 1))
                if lower is not None and not lower.is_zero():
                    total = total + lower.directional_derivative(res.R_at(i - k))
            table[(i, j)] = total.scale(Fraction(1, j) if exact else 1.0 / j)
    return table


def regular_perturbation_solution(
    res: "RGResult", K: int
) -> "Dict[int, Callable[[float, np.ndarray], np.ndarray]]":
    """Evaluators x_k(t, y) for k = 1..K built from the secular table."""
    from ..numerics.compiled import compile_vector

    table = regular_perturbation_coeffs(res, K)
    solutions = {}
    for k in range(1, K + 1):
        u_k = compile_vector(res.U_at(k))
        secular = [(j, compile_vector(table[(k, j)])) for j in range(1, k + 1)]

        def x_k(t, y, u_k=u_k, secular=secular):
            times = np.asarray(t, dtype=float)
            if times.ndim:
                times = times[:, None]
            value = u_k(t, y)
            for j, p in secular:
                value = value + times**j * p(t, y)
            return value

        solutions[k] = x_k
    return solutions
