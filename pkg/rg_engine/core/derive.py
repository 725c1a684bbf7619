"""The m-th order RG recursion, the RG transformation and its conjugacy residual."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DimensionMismatch, InconsistentDerivation
from ..qp import QPVector
from .collect import collect_G
from .system import PerturbedSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RGResult:
    """R_1..R_m (t-independent) and u^(1)..u^(m) of one derivation.

    ``gauge`` holds the integral constants B_i that were added to the
    u^(i); it is empty for the zero-constant derivation.
    """

    system: "PerturbedSystem"
    m: int
    R: "Tuple[QPVector, ...]"
    U: "Tuple[QPVector, ...]"
    gauge: "Tuple[QPVector, ...]" = field(default_factory=tuple)

    def R_at(self, i: int) -> "QPVector":
        """R_i with R_i = 0 outside 1..m."""
        if 1 <= i <= self.m:
            return self.R[i - 1]
        return self.system.zero_vector()

    def U_at(self, i: int) -> "QPVector":
        if 1 <= i <= self.m:
            return self.U[i - 1]
        return self.system.zero_vector()

    @property
    def gauged(self) -> bool:
        return any(not b.is_zero() for b in self.gauge)

    def first_nonzero_order(self) -> "Optional[int]":
        for i, r in enumerate(self.R, start=1):
            if not r.is_zero():
                return i
        return None


def _secular_correction(U: "Sequence[QPVector]", R: "Sequence[QPVector]", i: int, zero):
    """sum_{k=1}^{i-1} (du^(k)/dy) R_{i-k}."""
    total = zero
    for k in range(1, i):
        total = total + U[k - 1].directional_derivative(R[i - k - 1])
    return total


def rg_derive(
    system: "PerturbedSystem",
    m: int,
    gauge: "Optional[Sequence[QPVector]]" = None,
) -> "RGResult":
    """Runs the recursion

        T_i = G_i(u^(1), ..., u^(i-1)) - sum_k (du^(k)/dy) R_{i-k}
        R_i = <T_i>,  u^(i) = B_i + integral of (T_i - R_i) dt

    with B_i = 0 unless a gauge is given.
    """
    if m < 1:
        raise DimensionMismatch("The RG order m must be at least 1")
    gauge = tuple(gauge or ())
    if len(gauge) > m:
        raise DimensionMismatch(f"Got {len(gauge)} gauge fields for order {m}")
    zero = system.zero_vector()
    gauge = gauge + (zero,) * (m - len(gauge))
    gauged = any(not b.is_zero() for b in gauge)

    R: "List[QPVector]" = []
    U: "List[QPVector]" = []
    for i in range(1, m + 1):
        G = collect_G(system, U, i)
        correction = _secular_correction(U, R, i, zero)
        if not gauged and not correction.average_t().is_zero():
            raise InconsistentDerivation(
                f"The secular correction at order {i} has a nonzero average"
            )
        T = G - correction
        R_i = T.average_t()
        u_i = (T - R_i).antiderivative_t() + gauge[i - 1]
        R.append(R_i)
        U.append(u_i)
        logger.debug(
            "Order %d: R has %d terms, u has %d terms",
            i,
            sum(len(c) for c in R_i),
            sum(len(c) for c in u_i),
        )
    return RGResult(
        system=system,
        m=m,
        R=tuple(R),
        U=tuple(U),
        gauge=gauge if gauged else (),
    )


class RGTransform:
    """alpha_t(y) = y + sum_k eps^k u^(k)_t(y) as an eps-graded list."""

    def __init__(self, grades: "Sequence[QPVector]"):
        self.grades: "Tuple[QPVector, ...]" = tuple(grades)
        self._compiled = None
        self._jacobians = None

    @property
    def order(self) -> int:
        return len(self.grades) - 1

    def _compile(self):
        if self._compiled is None:
            from ..numerics.compiled import compile_vector

            self._compiled = [compile_vector(g) for g in self.grades]
            self._jacobians = [
                [compile_vector(g.diff_y(j)) for j in range(g.n)] for g in self.grades
            ]
        return self._compiled

    def evaluate(self, t, y, eps: float) -> "np.ndarray":
        """alpha_t(y; eps) for scalar t and a single state, or arrays (N,), (N, n)."""
        compiled = self._compile()
        total = compiled[0](t, y)
        for k, grade in enumerate(compiled[1:], start=1):
            if eps != 0:
                total = total + eps**k * grade(t, y)
        return total

    def jacobian(self, t: float, y, eps: float) -> "np.ndarray":
        self._compile()
        n = self.grades[0].n
        result = np.zeros((len(self.grades[0]), n), dtype=complex)
        for k, columns in enumerate(self._jacobians):
            weight = eps**k
            if weight == 0:
                continue
            for j, column in enumerate(columns):
                result[:, j] += weight * column(t, y)
        return result


def rg_transform_symbolic(res: "RGResult") -> "RGTransform":
    return RGTransform([res.system.identity(), *res.U])


def conjugacy_residual(
    system: "PerturbedSystem", res: "RGResult", M: "Optional[int]" = None
) -> "List[QPVector]":
    """eps-expansion of the pulled-back vector field minus sum eps^k R_k, orders 1..M.

    With x = alpha_t(y), dy/dt = (D alpha)^{-1} (g(t, alpha) - d_t alpha). Writing
    W_l for the eps^l coefficient of the bracket, the graded inverse gives
    V_l = W_l - sum_{k<l} (du^(k)/dy) V_{l-k}.
    """
    M = res.m + 1 if M is None else M
    if M < 1:
        raise DimensionMismatch("The residual order M must be at least 1")
    U = [res.U_at(k) for k in range(1, M + 1)]
    V: "List[QPVector]" = []
    residual: "List[QPVector]" = []
    for l in range(1, M + 1):
        W = collect_G(system, U[: l - 1], l) - U[l - 1].diff_t()
        for k in range(1, l):
            if not U[k - 1].is_zero():
                W = W - U[k - 1].directional_derivative(V[l - k - 1])
        V.append(W)
        residual.append(W - res.R_at(l))
    return residual


def residual_sup(residual: "QPVector", t_grid, y_samples) -> float:
    """sup of |residual(t, y)| over a time grid times a set of states."""
    from ..numerics.compiled import compile_vector

    evaluator = compile_vector(residual)
    t_grid = np.asarray(t_grid, dtype=float)
    y_samples = np.atleast_2d(np.asarray(y_samples, dtype=complex))
    sup = 0.0
    for y in y_samples:
        values = evaluator(t_grid, np.broadcast_to(y, (len(t_grid), len(y))))
        sup = max(sup, float(np.max(np.linalg.norm(values, axis=-1))))
    return sup
