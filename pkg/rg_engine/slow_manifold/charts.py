"""Charts of critical manifolds made of fixed points of the fast field."""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Sequence

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from ..conf import engine_settings
from ..exceptions import InputError, SplitError

logger = logging.getLogger(__name__)

VectorMap = Callable[[np.ndarray], np.ndarray]


def central_difference(function: "VectorMap", point, step: "Optional[float]" = None) -> "np.ndarray":
    """Jacobian of ``function`` at ``point`` by central differences, one column per coordinate.

    The step along coordinate j is FD_STEP * max(1, |point_j|).
    """
    step = engine_settings.FD_STEP if step is None else step
    point = np.asarray(point, dtype=float)
    columns = []
    for j in range(len(point)):
        h = step * max(1.0, abs(point[j]))
        forward, backward = point.copy(), point.copy()
        forward[j] += h
        backward[j] -= h
        column = (np.asarray(function(forward)) - np.asarray(function(backward))) / (2 * h)
        if not np.all(np.isfinite(column)):
            raise SplitError(f"Finite differences broke down at {point}")
        columns.append(column)
    return np.stack(columns, axis=-1)


@dataclass
class CriticalManifoldChart:
    """x = U(alpha) parametrizes fixed points of f; g_1, g_2 are the slow orders.

    Missing derivatives are replaced by central finite differences.
    """

    n: int
    k: int
    U: "VectorMap"
    f: "VectorMap"
    g1: "VectorMap"
    Df: "VectorMap"
    DU: "Optional[VectorMap]" = None
    Dg1: "Optional[VectorMap]" = None
    g2: "Optional[VectorMap]" = None
    D2f: "Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]]" = None
    delta: float = 0.0

    def tangent(self, alpha) -> "np.ndarray":
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        if self.DU is not None:
            return np.asarray(self.DU(alpha), dtype=float).reshape(self.n, self.k)
        return central_difference(self.U, alpha)

    def point(self, alpha) -> "np.ndarray":
        return np.asarray(self.U(np.atleast_1d(np.asarray(alpha, dtype=float))), dtype=float)

    def slow_jacobian(self, x) -> "np.ndarray":
        if self.Dg1 is not None:
            return np.asarray(self.Dg1(x), dtype=float)
        return central_difference(self.g1, x)

    def curvature(self, x, h) -> "np.ndarray":
        """D^2 f(x)[h, h]."""
        if self.D2f is not None:
            return np.asarray(self.D2f(x, h), dtype=float)
        size = engine_settings.FD_STEP * max(1.0, float(np.linalg.norm(x)))
        forward = np.asarray(self.Df(x + size * h)) @ h
        backward = np.asarray(self.Df(x - size * h)) @ h
        return (forward - backward) / (2 * size)

    def second_order(self, x) -> "np.ndarray":
        if self.g2 is None:
            return np.zeros(self.n)
        return np.asarray(self.g2(x), dtype=float)

    def validate(self, samples: "Sequence") -> None:
        """Checks the fixed-point and attracting normal hyperbolicity conditions at samples."""
        tol = engine_settings.CHART_TOL
        zero_tol = engine_settings.STABILITY_TOL
        for alpha in samples:
            x = self.point(alpha)
            defect = float(np.linalg.norm(self.f(x)))
            if defect > tol * max(1.0, float(np.linalg.norm(x))):
                raise SplitError(f"f(U({alpha})) = {defect:.3g}, U is not a manifold of fixed points")
            eigenvalues = np.linalg.eigvals(np.asarray(self.Df(x), dtype=float))
            center = np.abs(eigenvalues) <= zero_tol
            if center.sum() != self.k:
                raise SplitError(
                    f"Df(U({alpha})) has {int(center.sum())} zero eigenvalues, expected {self.k}"
                )
            if np.any(eigenvalues[~center].real >= -self.delta):
                raise SplitError(
                    f"Df(U({alpha})) violates the spectral gap delta={self.delta}"
                )


def _parse(expressions: "Sequence[str]", symbols: "Mapping[str, sympy.Symbol]", where: str):
    parsed = []
    for index, text in enumerate(expressions):
        try:
            parsed.append(
                parse_expr(str(text), local_dict=dict(symbols), transformations=standard_transformations)
            )
        except (SyntaxError, TypeError, sympy.SympifyError) as exc:
            raise InputError(f"{where}[{index}]: cannot parse {text!r}: {exc}")
        unknown = parsed[-1].free_symbols - set(symbols.values())
        if unknown:
            names = ", ".join(sorted(str(s) for s in unknown))
            raise InputError(f"{where}[{index}]: unknown symbols {names}")
    return sympy.Matrix(parsed)


def _vector_function(matrix: "sympy.Matrix", arguments) -> "VectorMap":
    compiled = sympy.lambdify(arguments, matrix, modules="numpy")

    def evaluate(point):
        return np.asarray(compiled(*np.asarray(point, dtype=float)), dtype=float).reshape(-1)

    return evaluate


def _matrix_function(matrix: "sympy.Matrix", arguments) -> "VectorMap":
    compiled = sympy.lambdify(arguments, matrix, modules="numpy")
    shape = matrix.shape

    def evaluate(point):
        return np.asarray(compiled(*np.asarray(point, dtype=float)), dtype=float).reshape(shape)

    return evaluate


def symbolic_chart(
    variables: "Sequence[str]",
    f: "Sequence[str]",
    g1: "Sequence[str]",
    chart_variables: "Sequence[str]",
    U: "Sequence[str]",
    parameters: "Optional[Mapping[str, float]]" = None,
    g2: "Optional[Sequence[str]]" = None,
    delta: float = 0.0,
) -> "CriticalManifoldChart":
    """A chart from expression strings; every derivative is exact (sympy, then lambdify)."""
    parameters = dict(parameters or {})
    if len(f) != len(variables) or len(g1) != len(variables) or len(U) != len(variables):
        raise InputError("f, g1 and U need one expression per variable")
    if g2 is not None and len(g2) != len(variables):
        raise InputError("g2 needs one expression per variable")
    x = sympy.symbols(list(variables), real=True)
    alpha = sympy.symbols(list(chart_variables), real=True)
    x, alpha = list(np.atleast_1d(x)), list(np.atleast_1d(alpha))
    names: "Dict[str, sympy.Symbol]" = {str(s): s for s in x}
    substitutions = {sympy.Symbol(name, real=True): sympy.nsimplify(value) for name, value in parameters.items()}
    names.update({str(s): s for s in substitutions})

    def field(expressions, where):
        return _parse(expressions, names, where).subs(substitutions)

    chart_names = dict(names)
    chart_names.update({str(s): s for s in alpha})
    f_matrix = field(f, "f")
    g1_matrix = field(g1, "g1")
    U_matrix = _parse(U, chart_names, "chart.U").subs(substitutions)
    Df = f_matrix.jacobian(x)
    h = sympy.symbols([f"h{i}" for i in range(len(x))], real=True)
    curvature = sympy.Matrix(
        [sum(sympy.diff(fi, a, b) * h[i] * h[j] for i, a in enumerate(x) for j, b in enumerate(x)) for fi in f_matrix]
    )
    curvature_function = sympy.lambdify(list(x) + list(h), curvature, modules="numpy")

    def D2f(point, direction):
        arguments = list(np.asarray(point, dtype=float)) + list(np.asarray(direction, dtype=float))
        return np.asarray(curvature_function(*arguments), dtype=float).reshape(-1)

    g2_function = None
    if g2 is not None:
        g2_function = _vector_function(field(g2, "g2"), x)
    return CriticalManifoldChart(
        n=len(x),
        k=len(alpha),
        U=_vector_function(U_matrix, alpha),
        DU=_matrix_function(U_matrix.jacobian(alpha), alpha),
        f=_vector_function(f_matrix, x),
        Df=_matrix_function(Df, x),
        g1=_vector_function(g1_matrix, x),
        Dg1=_matrix_function(g1_matrix.jacobian(x), x),
        g2=g2_function,
        D2f=D2f,
        delta=delta,
    )
