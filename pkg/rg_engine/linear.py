"""RG series of linear periodic systems dx/dt = eps A(t, eps) x.

The recursion yields constant matrices R_i and zero-mean periodic U_i with
X(t) = alpha_t exp(R(eps) t) C, alpha_t = I + sum eps^k U_k(t). The
eigenvalues of R(eps) are the (truncated) Floquet exponents.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .conf import engine_settings
from .core import PerturbedSystem, RGResult
from .exceptions import DimensionMismatch, InputError
from .numerics import IntegratorConfig, fit_slope, integrate
from .numerics.compiled import CompiledVector
from .qp import FrequencyBasis, QPPoly, QPVector, ScalarMode

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[QPPoly, ...], ...]


def _zero_matrix(n: int, basis: "FrequencyBasis") -> "Matrix":
    zero = QPPoly.zero(0, basis)
    return tuple(tuple(zero for _ in range(n)) for _ in range(n))


def _matmul(a: "Matrix", b: "Matrix") -> "Matrix":
    n = len(a)
    zero = QPPoly.zero(0, a[0][0].basis)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            total = zero
            for k in range(n):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    total = total + a[i][k] * b[k][j]
            row.append(total)
        rows.append(tuple(row))
    return tuple(rows)


def _combine(a: "Matrix", b: "Matrix", sign: int = 1) -> "Matrix":
    return tuple(
        tuple(x + y if sign > 0 else x - y for x, y in zip(row_a, row_b))
        for row_a, row_b in zip(a, b)
    )


def _entrywise(a: "Matrix", operation) -> "Matrix":
    return tuple(tuple(operation(x) for x in row) for row in a)


def _is_zero(a: "Matrix") -> bool:
    return all(x.is_zero() for row in a for x in row)


@dataclass(frozen=True)
class MatrixFourierSeries:
    """A(t, eps) with eps A = sum_p eps^p A_p(t); entries are Fourier series in t."""

    n: int
    basis: "FrequencyBasis"
    orders: "Mapping[int, Matrix]"
    mode: "ScalarMode" = ScalarMode.EXACT

    def __post_init__(self):
        if self.basis.dim > 1:
            raise InputError("Linear systems need a single base frequency")
        orders = {}
        for p in sorted(self.orders):
            matrix = tuple(tuple(row) for row in self.orders[p])
            if p < 1:
                raise DimensionMismatch(f"Order {p} is not a positive integer")
            if len(matrix) != self.n or any(len(row) != self.n for row in matrix):
                raise DimensionMismatch(f"A_{p} is not a {self.n}x{self.n} matrix")
            for entry in itertools.chain.from_iterable(matrix):
                if entry.n != 0 or entry.basis != self.basis:
                    raise DimensionMismatch(f"A_{p} has an entry outside the Fourier ring")
            orders[p] = matrix
        object.__setattr__(self, "orders", orders)

    @property
    def period(self) -> "Optional[float]":
        return self.basis.period()

    def A(self, p: int) -> "Matrix":
        return self.orders.get(p) or _zero_matrix(self.n, self.basis)

    def evaluator(self, eps: float):
        """t -> eps A(t, eps) as an (n, n) complex array."""
        compiled = [
            (eps**p, CompiledVector(QPVector(itertools.chain.from_iterable(matrix))))
            for p, matrix in self.orders.items()
        ]
        empty = np.zeros((0,))

        def evaluate(t):
            total = np.zeros((self.n, self.n), dtype=complex)
            for weight, values in compiled:
                total += weight * values(float(t), empty).reshape(self.n, self.n)
            return total

        return evaluate


@dataclass(frozen=True)
class LinearRGResult:
    A: "MatrixFourierSeries"
    m: int
    R: "Tuple[Matrix, ...]"
    U: "Tuple[Matrix, ...]"

    def R_matrix(self, eps: float) -> "np.ndarray":
        """R(eps) = sum_{k <= m} eps^k R_k."""
        total = np.zeros((self.A.n, self.A.n), dtype=complex)
        for k, matrix in enumerate(self.R, start=1):
            total += eps**k * _numeric(matrix, 0.0)
        return total

    def alpha0(self, eps: float) -> "np.ndarray":
        return alpha_t(self, 0.0, eps)


def _numeric(matrix: "Matrix", t: float) -> "np.ndarray":
    return np.array([[entry.eval(t, ()) for entry in row] for row in matrix], dtype=complex)


def linear_rg(A: "MatrixFourierSeries", m: int) -> "LinearRGResult":
    """T_i = A_i + sum_k A_{i-k} U_k - sum_k U_k R_{i-k}; R_i = <T_i>; U_i = integral (T_i - R_i)."""
    if m < 1:
        raise DimensionMismatch("The RG order m must be at least 1")
    R: "List[Matrix]" = []
    U: "List[Matrix]" = []
    for i in range(1, m + 1):
        T = A.A(i)
        for k in range(1, i):
            T = _combine(T, _matmul(A.A(i - k), U[k - 1]))
            T = _combine(T, _matmul(U[k - 1], R[i - k - 1]), sign=-1)
        R_i = _entrywise(T, QPPoly.average_t)
        U_i = _entrywise(_combine(T, R_i, sign=-1), QPPoly.antiderivative_t)
        R.append(R_i)
        U.append(U_i)
        logger.debug("Linear order %d derived", i)
    return LinearRGResult(A=A, m=m, R=tuple(R), U=tuple(U))


def floquet_exponents(res: "LinearRGResult", eps: float) -> "np.ndarray":
    return np.linalg.eigvals(res.R_matrix(eps))


def alpha_t(res: "LinearRGResult", t: float, eps: float) -> "np.ndarray":
    """I + sum eps^k U_k(t)."""
    total = np.eye(res.A.n, dtype=complex)
    for k, matrix in enumerate(res.U, start=1):
        total += eps**k * _numeric(matrix, t)
    return total


def alpha_periodicity(res: "LinearRGResult", eps: float, times: "Sequence[float]") -> float:
    """max over the grid of |alpha_{t+T} - alpha_t|."""
    T = res.A.period
    if T is None:
        return 0.0
    return max(
        float(np.linalg.norm(alpha_t(res, t + T, eps) - alpha_t(res, t, eps))) for t in times
    )


def monodromy_numeric(
    A: "MatrixFourierSeries",
    eps: float,
    T: "Optional[float]" = None,
    config: "Optional[IntegratorConfig]" = None,
) -> "np.ndarray":
    """X(0)^{-1} X(T) for the fundamental matrix started at the identity."""
    T = A.period if T is None else T
    if T is None:
        raise InputError("A period is required for a constant coefficient system")
    n = A.n
    evaluate = A.evaluator(eps)

    def field(t, x):
        return (evaluate(t) @ x.reshape(n, n)).ravel()

    trajectory = integrate(field, np.eye(n, dtype=complex).ravel(), (0.0, T), config)
    return trajectory.final.reshape(n, n)


def monodromy_defect(
    A: "MatrixFourierSeries",
    res: "LinearRGResult",
    eps: float,
    T: "Optional[float]" = None,
    config: "Optional[IntegratorConfig]" = None,
) -> float:
    """|alpha_0 exp(R(eps) T) alpha_0^{-1} - X(T)| with X(0) = I."""
    T = A.period if T is None else T
    alpha0 = res.alpha0(eps)
    predicted = alpha0 @ expm(res.R_matrix(eps) * T) @ np.linalg.inv(alpha0)
    return float(np.linalg.norm(predicted - monodromy_numeric(A, eps, T, config)))


@dataclass
class FloquetScanReport:
    eps: "List[float]" = field(default_factory=list)
    defects: "List[float]" = field(default_factory=list)
    exponents: "List[np.ndarray]" = field(default_factory=list)
    slope: "Optional[float]" = None

    def rows(self):
        for eps, defect, exponents in zip(self.eps, self.defects, self.exponents):
            row = [eps, defect]
            for value in exponents:
                row.extend([value.real, value.imag])
            yield row


def monodromy_defect_scan(
    A: "MatrixFourierSeries",
    res: "LinearRGResult",
    eps_grid: "Optional[Sequence[float]]" = None,
    T: "Optional[float]" = None,
    config: "Optional[IntegratorConfig]" = None,
) -> "FloquetScanReport":
    eps_grid = list(engine_settings.EPS_GRID if eps_grid is None else eps_grid)
    report = FloquetScanReport()
    for eps in eps_grid:
        logger.info("Monodromy defect at eps=%g", eps)
        report.eps.append(float(eps))
        report.defects.append(monodromy_defect(A, res, eps, T, config))
        report.exponents.append(np.sort_complex(floquet_exponents(res, eps)))
    report.slope = fit_slope(report.eps, report.defects)
    return report


@dataclass(frozen=True)
class Collision:
    eps: float
    first: int
    second: int
    distance: float


def exponent_collisions(
    res: "LinearRGResult", eps_grid: "Sequence[float]", tol: "Optional[float]" = None
) -> "List[Collision]":
    """Pairs of exponents of R(eps) closer than ``tol`` along a real eps sweep."""
    tol = engine_settings.COLLISION_TOL if tol is None else tol
    collisions = []
    for eps in eps_grid:
        exponents = floquet_exponents(res, eps)
        for i, j in itertools.combinations(range(len(exponents)), 2):
            distance = abs(exponents[i] - exponents[j])
            if distance < tol:
                collisions.append(Collision(float(eps), i, j, float(distance)))
    if collisions:
        logger.warning("%d exponent collisions along the eps sweep", len(collisions))
    return collisions


def linear_embedding(A: "MatrixFourierSeries") -> "PerturbedSystem":
    """The nonlinear-form system dx/dt = sum eps^p A_p(t) x."""
    n, basis = A.n, A.basis
    orders: "Dict[int, QPVector]" = {}
    for p, matrix in A.orders.items():
        components = []
        for row in matrix:
            terms = []
            for j, entry in enumerate(row):
                alpha = tuple(1 if l == j else 0 for l in range(n))
                terms.extend(((k, alpha), c) for (k, _), c in entry.items())
            components.append(QPPoly(n, basis, terms))
        orders[p] = QPVector(components)
    return PerturbedSystem(n=n, basis=basis, orders=orders, mode=A.mode)


def _slice(vec: "QPVector", basis: "FrequencyBasis") -> "Matrix":
    n = vec.n
    rows = []
    for component in vec:
        row = [[] for _ in range(n)]
        for (k, alpha), c in component.items():
            if sum(alpha) != 1:
                raise DimensionMismatch("The field is not linear in the state")
            row[alpha.index(1)].append(((k, ()), c))
        rows.append(tuple(QPPoly(0, basis, terms) for terms in row))
    return tuple(rows)


def linear_slice(res: "RGResult") -> "Tuple[Tuple[Matrix, ...], Tuple[Matrix, ...]]":
    """(R_i, U_i) matrices of an RG result on a linear embedding."""
    basis = res.system.basis
    return (
        tuple(_slice(r, basis) for r in res.R),
        tuple(_slice(u, basis) for u in res.U),
    )
