"""Restricted RG equations on critical manifolds of fixed points.

For dx/dt = f(x) + eps g_1(x) + eps^2 g_2(x) with f = 0 on x = U(alpha),
the invariant manifold x = U + eps h_1 + eps^2 h_2 carries the flow
dalpha/dt = eps R_1 + eps^2 R_2. Each order solves one split

    q = DU(alpha) R_i - A h_i,    A = Df(U(alpha)),

with h_i taken in range(A).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from ..conf import engine_settings
from ..exceptions import InputError, SplitError
from ..numerics import FixedPoint, NumericField, find_fixed_points
from .charts import CriticalManifoldChart, central_difference

logger = logging.getLogger(__name__)

# Chart points kept per reduction.
CACHE_SIZE = 256


@dataclass(frozen=True)
class TangentStableSplit:
    """g = DU a + A w with w in range(A)."""

    A: "np.ndarray"
    DU: "np.ndarray"
    range_basis: "np.ndarray"
    _system: "np.ndarray"

    @property
    def k(self) -> int:
        return self.DU.shape[1]

    def _solve(self, g) -> "np.ndarray":
        return np.linalg.solve(self._system, np.asarray(g, dtype=float))

    def chart_component(self, g) -> "np.ndarray":
        return self._solve(g)[: self.k]

    def stable_component(self, g) -> "np.ndarray":
        """w, so that A w is the part of g along range(A)."""
        return self.range_basis @ self._solve(g)[self.k :]

    def tangent_projection(self, g) -> "np.ndarray":
        return self.DU @ self.chart_component(g)

    def stable_projection(self, g) -> "np.ndarray":
        return self.A @ self.stable_component(g)


def tangent_stable_split(A, DU, tol: "Optional[float]" = None) -> "TangentStableSplit":
    """Splits R^n into the chart tangent directions and range(A).

    Raises SplitError when range(A) does not have dimension n - k or does not
    complement the columns of DU.
    """
    tol = engine_settings.STABILITY_TOL if tol is None else tol
    A = np.asarray(A, dtype=float)
    DU = np.asarray(DU, dtype=float)
    if DU.ndim == 1:
        DU = DU[:, None]
    n, k = DU.shape
    if A.shape != (n, n):
        raise InputError(f"A has shape {A.shape}, expected {(n, n)}")
    left, singular, _ = np.linalg.svd(A)
    scale = max(1.0, float(singular[0])) if len(singular) else 1.0
    rank = int(np.sum(singular > tol * scale))
    if rank != n - k:
        raise SplitError(f"range(A) has dimension {rank}, expected {n - k}")
    range_basis = left[:, :rank]
    system = np.hstack([DU, A @ range_basis])
    if np.linalg.matrix_rank(system, tol=tol * scale) < n:
        raise SplitError("The chart tangent directions are not complementary to range(A)")
    return TangentStableSplit(A=A, DU=DU, range_basis=range_basis, _system=system)


class SlowReduction:
    """Reduced field and graph corrections of a chart, evaluated pointwise in alpha."""

    def __init__(self, chart: "CriticalManifoldChart", order: int):
        if order not in (1, 2):
            raise InputError("Slow manifold reductions support orders 1 and 2")
        self.chart = chart
        self.order = order
        self._terms = lru_cache(maxsize=CACHE_SIZE)(self._first_order_terms)

    def _split(self, alpha) -> "TangentStableSplit":
        x = self.chart.point(alpha)
        return tangent_stable_split(self.chart.Df(x), self.chart.tangent(alpha))

    def _first_order_terms(self, key: bytes) -> "Dict[str, np.ndarray]":
        alpha = np.frombuffer(key, dtype=float).copy()
        split = self._split(alpha)
        g = self.chart.g1(self.chart.point(alpha))
        return {"R1": split.chart_component(g), "h1": -split.stable_component(g)}

    def _first(self, alpha) -> "Dict[str, np.ndarray]":
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        return self._terms(alpha.tobytes())

    def R1(self, alpha) -> "np.ndarray":
        return self._first(alpha)["R1"]

    def h1(self, alpha) -> "np.ndarray":
        return self._first(alpha)["h1"]

    def _second(self, alpha) -> "Dict[str, np.ndarray]":
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        cached = self._first(alpha)
        if "R2" not in cached:
            chart = self.chart
            x = chart.point(alpha)
            h1 = cached["h1"]
            Dh1 = central_difference(self.h1, alpha)
            q = (
                0.5 * chart.curvature(x, h1)
                + chart.slow_jacobian(x) @ h1
                + chart.second_order(x)
                - Dh1 @ cached["R1"]
            )
            split = self._split(alpha)
            cached["R2"] = split.chart_component(q)
            cached["h2"] = -split.stable_component(q)
        return cached

    def R2(self, alpha) -> "np.ndarray":
        if self.order < 2:
            raise InputError("R2 needs an order 2 reduction")
        return self._second(alpha)["R2"]

    def h2(self, alpha) -> "np.ndarray":
        if self.order < 2:
            raise InputError("h2 needs an order 2 reduction")
        return self._second(alpha)["h2"]

    def field(self, alpha, eps: float) -> "np.ndarray":
        """dalpha/dt = eps R_1 (+ eps^2 R_2)."""
        value = eps * self.R1(alpha)
        if self.order == 2:
            value = value + eps**2 * self.R2(alpha)
        return value

    def rows(self, alphas: "Sequence"):
        """(alpha..., R1..., h1...) per sampled chart point."""
        for alpha in alphas:
            alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
            row = list(alpha) + list(self.R1(alpha)) + list(self.h1(alpha))
            if self.order == 2:
                row += list(self.R2(alpha)) + list(self.h2(alpha))
            yield row


def gsp_reduce(chart: "CriticalManifoldChart", order: int = 1) -> "SlowReduction":
    logger.debug("Slow manifold reduction of order %d on a %d-dimensional chart", order, chart.k)
    return SlowReduction(chart, order)


def manifold_graph(
    chart: "CriticalManifoldChart", reduction: "SlowReduction", eps: float
) -> "Callable[[np.ndarray], np.ndarray]":
    """alpha -> U(alpha) + eps h_1(alpha) (+ eps^2 h_2(alpha))."""

    def graph(alpha):
        x = chart.point(alpha)
        if eps == 0:
            return x
        x = x + eps * reduction.h1(alpha)
        if reduction.order == 2:
            x = x + eps**2 * reduction.h2(alpha)
        return x

    return graph


def invariance_residual(
    chart: "CriticalManifoldChart", reduction: "SlowReduction", alpha, eps: float
) -> float:
    """|f(x) + eps g_1(x) + eps^2 g_2(x) - Dx(alpha) dalpha/dt| on the graph x(alpha)."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    graph = manifold_graph(chart, reduction, eps)
    x = graph(alpha)
    full = chart.f(x) + eps * chart.g1(x) + eps**2 * chart.second_order(x)
    # the graph derivative is built from the exact DU plus differenced corrections
    Dx = chart.tangent(alpha) + eps * central_difference(reduction.h1, alpha)
    if reduction.order == 2:
        Dx = Dx + eps**2 * central_difference(reduction.h2, alpha)
    return float(np.linalg.norm(full - Dx @ reduction.field(alpha, eps)))


def reduced_field(reduction: "SlowReduction", eps: float) -> "NumericField":
    """The chart field as a NumericField with a differenced Jacobian."""
    k = reduction.chart.k

    def value(alpha):
        return reduction.field(alpha, eps)

    def jacobian(alpha):
        return central_difference(value, alpha)

    return NumericField(n=k, value=value, jacobian=jacobian, real=True)


def stability_on_manifold(
    reduction: "SlowReduction", seeds, eps: float
) -> "Sequence[FixedPoint]":
    """Fixed points of the reduced chart field with their stability."""
    return find_fixed_points(reduced_field(reduction, eps), seeds)
