"""Autonomous systems dx/dt = Fx + eps g(x) with diagonal F = diag(i nu).

Moving to the rotating frame x = exp(Ft) X gives a periodic system in the
form handled by :func:`rg_engine.core.rg_derive`; its RG equation is the
normal form of the original system. Linear coordinate changes let systems
written in real coordinates x = P z be diagonalized first and reported back
in the real coordinates afterwards.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import sympy
from numpy.polynomial import Polynomial

from .core import PerturbedSystem, RGResult, rg_derive
from .exceptions import DimensionMismatch, EquivarianceViolation, InputError
from .qp import FrequencyBasis, GaussianRational, QPPoly, QPVector, ScalarMode, rational_gcd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagonalLinearPart:
    """F = diag(i nu_1, ..., i nu_n) acting on the state variables."""

    nu: "Tuple[Fraction, ...]"

    def __post_init__(self):
        values = []
        for v in self.nu:
            if isinstance(v, float):
                raise InputError("Eigenvalues of F must be exact rationals")
            values.append(Fraction(v))
        object.__setattr__(self, "nu", tuple(values))

    @property
    def n(self) -> int:
        return len(self.nu)

    def matrix(self) -> "np.ndarray":
        return np.diag([1j * float(v) for v in self.nu])

    def flow(self, t: float) -> "np.ndarray":
        """exp(Ft) as a numeric diagonal matrix."""
        return np.diag(np.exp(1j * np.asarray([float(v) for v in self.nu]) * t))

    def merged_basis(self, basis: "FrequencyBasis"):
        """A basis containing every nu_j on its lattice plus the old-k map.

        Returns ``(new_basis, rebase)`` where ``rebase(k)`` re-expresses a
        lattice vector of ``basis`` in ``new_basis``.
        """
        nonzero = [v for v in self.nu if v != 0]
        if not nonzero:
            return basis, tuple
        if basis.dim == 0:
            return FrequencyBasis((rational_gcd(nonzero),)), tuple
        if basis.exact and basis.dim == 1:
            generator = rational_gcd(list(basis.values) + nonzero)
            factor = basis.values[0] / generator
            if factor.denominator != 1:
                raise InputError("Merged generator does not divide the base frequency")
            scale = int(factor)
            return FrequencyBasis((generator,)), lambda k: (k[0] * scale,)
        try:
            for v in nonzero:
                basis.lattice_point(v)
            return basis, tuple
        except InputError:
            generator = rational_gcd(nonzero)
            extended = FrequencyBasis(tuple(basis.values) + (generator,))
            return extended, lambda k: tuple(k) + (0,)

    def lattice(self, basis: "FrequencyBasis") -> "List[Tuple[int, ...]]":
        return [basis.lattice_point(v) for v in self.nu]


def autonomize(F: "DiagonalLinearPart", system: "PerturbedSystem") -> "PerturbedSystem":
    """exp(-Ft) g(t, exp(Ft) X): a term c y^alpha in component i gains exp(i(alpha.nu - nu_i)t).

    Parameters rotate with frequency 0.
    """
    if F.n != system.n_state:
        raise DimensionMismatch(
            f"F has {F.n} eigenvalues for {system.n_state} state variables"
        )
    basis, rebase = F.merged_basis(system.basis)
    zero = basis.zero()
    shifts = F.lattice(basis) + [zero] * len(system.parameter_names)
    orders: "Dict[int, QPVector]" = {}
    for p, vec in system.orders.items():
        components = []
        for i, component in enumerate(vec):
            terms = []
            for (k, alpha), coeff in component.items():
                shifted = list(rebase(k))
                for j, e in enumerate(alpha):
                    if e:
                        shifted = [a + e * b for a, b in zip(shifted, shifts[j])]
                shifted = [a - b for a, b in zip(shifted, shifts[i])]
                terms.append(((tuple(shifted), alpha), coeff))
            components.append(QPPoly(system.n, basis, terms))
        orders[p] = QPVector(components)
    logger.debug("Autonomized with nu=%s on basis %s", F.nu, basis)
    return PerturbedSystem(
        n=system.n,
        basis=basis,
        orders=orders,
        mode=system.mode,
        names=system.names,
        parameter_names=system.parameter_names,
    )


@dataclass(frozen=True)
class NormalForm:
    F: "DiagonalLinearPart"
    periodic: "PerturbedSystem"
    result: "RGResult"
    time_independent: bool


def _composed_time_independent(F: "DiagonalLinearPart", res: "RGResult") -> bool:
    """True when z -> exp(Ft) alpha_t(exp(-Ft) z) carries no t-dependence.

    A term c y^alpha exp(i lambda(k) t) in component i contributes
    exp(i(nu_i - alpha.nu + lambda(k))t), so lambda(k) = alpha.nu - nu_i is required.
    """
    basis = res.system.basis
    nu = list(F.nu) + [Fraction(0)] * len(res.system.parameter_names)
    for vec in res.U:
        for i, component in enumerate(vec):
            for (k, alpha), _ in component.items():
                rotation = sum((e * v for e, v in zip(alpha, nu)), Fraction(0)) - nu[i]
                if basis.frequency(k) != rotation:
                    return False
    return True


def normal_form(
    F: "DiagonalLinearPart", system: "PerturbedSystem", m: int
) -> "NormalForm":
    """dz/dt = Fz + sum eps^k R_k(z) with R_k from the rotating-frame derivation."""
    periodic = autonomize(F, system)
    res = rg_derive(periodic, m)
    return NormalForm(
        F=F,
        periodic=periodic,
        result=res,
        time_independent=_composed_time_independent(F, res),
    )


class Violation(NamedTuple):
    order: int
    component: int
    alpha: "Tuple[int, ...]"
    k: "Tuple[int, ...]"
    coeff: object


def equivariance_check(F: "DiagonalLinearPart", res: "RGResult") -> "List[Violation]":
    """Terms of R_1..R_m that break R(exp(F tau) y) = exp(F tau) R(y).

    A term c y^alpha in component j commutes with the rotation iff it is
    t-independent and alpha.nu = nu_j.
    """
    if F.n != res.system.n_state:
        raise DimensionMismatch("F does not match the state dimension")
    nu = list(F.nu) + [Fraction(0)] * len(res.system.parameter_names)
    violations = []
    for order, vec in enumerate(res.R, start=1):
        for j, component in enumerate(vec):
            for (k, alpha), coeff in component.items():
                rotation = sum((e * v for e, v in zip(alpha, nu)), Fraction(0))
                if any(k) or rotation != nu[j]:
                    violations.append(Violation(order, j, alpha, k, coeff))
    return violations


def _as_sympy(value):
    if isinstance(value, GaussianRational):
        return sympy.Rational(value.real.numerator, value.real.denominator) + sympy.I * sympy.Rational(
            value.imag.numerator, value.imag.denominator
        )
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.Integer(value)


def _as_gaussian(expr) -> "GaussianRational":
    expr = sympy.nsimplify(sympy.expand(expr))
    re, im = sympy.re(expr), sympy.im(expr)
    if not (re.is_Rational and im.is_Rational):
        raise InputError(f"Matrix entry {expr} is not a Gaussian rational")
    return GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def _exact(matrix) -> bool:
    return all(
        isinstance(x, (int, Fraction, GaussianRational)) for row in matrix for x in row
    )


def invert(matrix):
    """Exact inverse for Gaussian-rational entries, numpy inverse otherwise."""
    if _exact(matrix):
        inverse = sympy.Matrix([[_as_sympy(x) for x in row] for row in matrix])
        if sympy.expand(inverse.det()) == 0:
            raise InputError("The coordinate matrix is singular")
        inverse = inverse.inv()
        return [
            [_as_gaussian(inverse[i, j]) for j in range(inverse.cols)]
            for i in range(inverse.rows)
        ]
    array = np.asarray(matrix, dtype=complex)
    try:
        return np.linalg.inv(array).tolist()
    except np.linalg.LinAlgError:
        raise InputError("The coordinate matrix is singular")


def _block(matrix, n: int):
    """``matrix`` on the first variables, identity on the trailing parameters."""
    size = len(matrix)
    full = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i < size and j < size:
                full[i][j] = matrix[i][j]
            elif i == j:
                full[i][j] = 1
    return full


def change_coordinates(vec: "QPVector", M, M_inverse=None) -> "QPVector":
    """M V(M^{-1} y) for a constant square matrix M on the state variables."""
    n = vec.n
    size = len(M)
    if len(vec) != n or size > n:
        raise DimensionMismatch("The coordinate matrix does not fit the vector field")
    M_inverse = invert(M) if M_inverse is None else M_inverse
    full, full_inverse = _block(M, n), _block(M_inverse, n)
    basis = vec.basis
    variables = []
    for row in full_inverse:
        variable = QPPoly.zero(n, basis)
        for l, entry in enumerate(row):
            if entry != 0:
                variable = variable + QPPoly.variable(n, basis, l, entry)
        variables.append(variable)
    pulled = vec.substitute(variables)
    components = []
    for i in range(n):
        total = QPPoly.zero(n, basis)
        for j in range(n):
            if full[i][j] != 0 and not pulled[j].is_zero():
                total = total + pulled[j].scale(full[i][j])
        components.append(total)
    return QPVector(components)


def change_system(
    system: "PerturbedSystem", M, names: "Optional[Sequence[str]]" = None
) -> "PerturbedSystem":
    """The system written in the coordinates w = M x."""
    M_inverse = invert(M)
    orders = {p: change_coordinates(v, M, M_inverse) for p, v in system.orders.items()}
    return PerturbedSystem(
        n=system.n,
        basis=system.basis,
        orders=orders,
        mode=system.mode,
        names=tuple(names) if names else system.names,
        parameter_names=system.parameter_names,
    )


def transform_result(
    res: "RGResult", M, names: "Optional[Sequence[str]]" = None
) -> "RGResult":
    """Carries R, u^(i) and the gauge through the linear change w = M y."""
    M_inverse = invert(M)

    def carry(vectors):
        return tuple(change_coordinates(v, M, M_inverse) for v in vectors)

    return RGResult(
        system=change_system(res.system, M, names),
        m=res.m,
        R=carry(res.R),
        U=carry(res.U),
        gauge=carry(res.gauge),
    )


def diagonalize(system: "PerturbedSystem", P, names: "Optional[Sequence[str]]" = None):
    """The system in coordinates z with x = P z."""
    return change_system(system, invert(P), names)


@dataclass(frozen=True)
class PolarForm:
    """dr/dt = sum eps^k rho_k(r), dtheta/dt = sum eps^k theta_k(r); coefficients by power of r."""

    radial: "Mapping[int, Tuple[object, ...]]"
    angular: "Mapping[int, Tuple[object, ...]]"

    def _combined(self, table, eps: float) -> "Polynomial":
        degree = max((len(c) for c in table.values()), default=1)
        coefficients = np.zeros(max(degree, 1))
        for order, row in table.items():
            for power, c in enumerate(row):
                coefficients[power] += eps**order * float(c)
        return Polynomial(coefficients)

    def radial_polynomial(self, eps: float) -> "Polynomial":
        return self._combined(self.radial, eps)

    def angular_polynomial(self, eps: float) -> "Polynomial":
        return self._combined(self.angular, eps)

    def reembed(self, r: float, theta: float, eps: float) -> complex:
        """dy_1/dt at y_1 = r exp(i theta) as predicted by the polar equations."""
        dr = self.radial_polynomial(eps)(r)
        dtheta = self.angular_polynomial(eps)(r)
        return (dr + 1j * r * dtheta) * np.exp(1j * theta)


def _conjugate_match(actual, expected, exact: bool) -> bool:
    if exact:
        return actual == expected
    if set(actual) != set(expected):
        return False
    return all(
        abs(complex(actual[key]) - complex(expected[key]))
        <= 1e-12 * max(1.0, abs(complex(expected[key])))
        for key in actual
    )


def polar_reduce(res: "RGResult") -> "PolarForm":
    """Polar form of an equivariant RG equation in conjugate coordinates (y_1, y_2 = conj y_1).

    A term c y_1^a y_2^b of component 0 with a - b = 1 adds Re(c) r^(a+b) to
    dr/dt and Im(c) r^(a+b-1) to dtheta/dt.
    """
    system = res.system
    if system.n_state != 2:
        raise DimensionMismatch("Polar reduction needs exactly two conjugate coordinates")
    exact = system.mode is ScalarMode.EXACT
    radial: "Dict[int, Tuple[object, ...]]" = {}
    angular: "Dict[int, Tuple[object, ...]]" = {}
    for order, vec in enumerate(res.R, start=1):
        first, second = vec[0], vec[1]
        expected = {}
        r_row: "Dict[int, object]" = {}
        theta_row: "Dict[int, object]" = {}
        for (k, alpha), coeff in first.items():
            a, b = alpha[0], alpha[1]
            if any(k) or any(alpha[2:]) or a - b != 1:
                raise EquivarianceViolation(
                    f"R_{order} term y^{alpha} is not rotation equivariant"
                )
            expected[(k, (b, a) + alpha[2:])] = coeff.conjugate()
            re, im = (coeff.real, coeff.imag) if exact else (complex(coeff).real, complex(coeff).imag)
            r_row[a + b] = r_row.get(a + b, 0) + re
            theta_row[a + b - 1] = theta_row.get(a + b - 1, 0) + im
        if not _conjugate_match(dict(second.items()), expected, exact):
            raise EquivarianceViolation(
                f"R_{order} second component is not the conjugate of the first"
            )
        if r_row:
            radial[order] = tuple(r_row.get(p, 0) for p in range(max(r_row) + 1))
        if theta_row:
            angular[order] = tuple(theta_row.get(p, 0) for p in range(max(theta_row) + 1))
    return PolarForm(radial=radial, angular=angular)
