"""Numerical checks of the approximation order of an RG equation."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..conf import engine_settings
from ..core import RGResult, collect_G_polynomial, rg_transform_symbolic
from ..core.derive import RGTransform
from ..core.system import PerturbedSystem
from ..exceptions import InputError, NumericalError
from .compiled import GradedField, compile_vector
from .integrate import IntegratorConfig, Trajectory, integrate

logger = logging.getLogger(__name__)


@dataclass
class ErrorScanReport:
    order: int
    horizon: float
    eps: "List[float]" = field(default_factory=list)
    errors: "List[float]" = field(default_factory=list)
    slope: "Optional[float]" = None
    dropped: "List[Tuple[float, str]]" = field(default_factory=list)

    def rows(self):
        return list(zip(self.eps, self.errors))


@dataclass
class LongIntervalReport:
    eps: float
    horizon: float
    transform_order: int
    sup_error: float

    @property
    def ratio(self) -> float:
        """sup error / eps, the constant of an O(eps) bound."""
        return self.sup_error / self.eps


@dataclass
class OrbitTrackingReport:
    eps: float
    horizon: float
    max_distance: float
    distances: "np.ndarray"


def system_field(system: "PerturbedSystem", eps: float) -> "GradedField":
    return GradedField(system.orders, eps)


def rg_field(res: "RGResult", eps: float) -> "GradedField":
    return GradedField({i: r for i, r in enumerate(res.R, start=1)}, eps)


def fit_slope(eps: "Sequence[float]", errors: "Sequence[float]") -> "Optional[float]":
    """Least-squares slope of log(error) against log(eps) on the positive points."""
    points = [(e, err) for e, err in zip(eps, errors) if e > 0 and err > 0]
    if len(points) < 2:
        return None
    x = np.log([p[0] for p in points])
    y = np.log([p[1] for p in points])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _sample_times(t_end: float, samples_per_unit_time: int) -> "np.ndarray":
    count = max(2, int(np.ceil(samples_per_unit_time * t_end)) + 1)
    return np.linspace(0.0, t_end, count)


def _approximation_error(
    system, res, transform: "RGTransform", y0, eps, t_end, config, samples
) -> "Tuple[float, Trajectory, Trajectory]":
    escape = engine_settings.ESCAPE_RADIUS
    x0 = transform.evaluate(0.0, y0, eps)
    if not np.iscomplexobj(y0):
        x0 = x0.real
    exact = integrate(system_field(system, eps), x0, (0.0, t_end), config, escape)
    reduced = integrate(rg_field(res, eps), y0, (0.0, t_end), config, escape)
    times = _sample_times(t_end, samples)
    approximation = transform.evaluate(times, reduced(times), eps)
    errors = np.linalg.norm(exact(times) - approximation, axis=-1)
    return float(np.max(errors)), exact, reduced


def error_scan(
    system: "PerturbedSystem",
    res: "RGResult",
    y0,
    T: "Optional[float]" = None,
    eps_grid: "Optional[Sequence[float]]" = None,
    config: "Optional[IntegratorConfig]" = None,
) -> "ErrorScanReport":
    """sup over 0 <= t <= T/eps of |x(t) - alpha_t(y(t))| for each eps.

    The exact solution starts at x(0) = alpha_0(y0). Points whose trajectory
    escapes or fails are dropped and listed in the report.
    """
    T = engine_settings.HORIZON if T is None else T
    eps_grid = list(engine_settings.EPS_GRID if eps_grid is None else eps_grid)
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise InputError("The eps grid must be strictly decreasing")
    if any(e < 0 for e in eps_grid):
        raise InputError("The eps grid must not contain negative values")
    config = config or IntegratorConfig.from_settings()
    samples = engine_settings.SAMPLES_PER_UNIT_TIME
    y0 = np.asarray(y0)
    transform = rg_transform_symbolic(res)
    report = ErrorScanReport(order=res.m, horizon=T)
    for eps in eps_grid:
        if eps == 0:
            report.eps.append(0.0)
            report.errors.append(0.0)
            continue
        logger.info("Error scan at eps=%g over t <= %g", eps, T / eps)
        try:
            error, _, _ = _approximation_error(
                system, res, transform, y0, eps, T / eps, config, samples
            )
        except NumericalError as exc:
            logger.warning("Dropping eps=%g: %s", eps, exc)
            report.dropped.append((eps, str(exc)))
            continue
        report.eps.append(float(eps))
        report.errors.append(error)
    report.slope = fit_slope(report.eps, report.errors)
    return report


def long_interval_check(
    system: "PerturbedSystem",
    res: "RGResult",
    y0,
    eps: float,
    T: "Optional[float]" = None,
    transform_order: int = 1,
    config: "Optional[IntegratorConfig]" = None,
) -> "LongIntervalReport":
    """Error of the order ``transform_order`` transformation over 0 <= t <= T/eps^2.

    The reduced flow uses every order of ``res``; with R_1 = 0 the first
    nonzero drift acts on the eps^2 time scale and the error stays O(eps).
    """
    if transform_order > res.m:
        raise InputError("The transformation order exceeds the derived order")
    T = engine_settings.HORIZON if T is None else T
    config = config or IntegratorConfig.from_settings()
    transform = RGTransform([system.identity(), *res.U[:transform_order]])
    t_end = T / eps**2
    logger.info("Long interval check at eps=%g over t <= %g", eps, t_end)
    error, _, _ = _approximation_error(
        system,
        res,
        transform,
        np.asarray(y0),
        eps,
        t_end,
        config,
        engine_settings.SAMPLES_PER_UNIT_TIME,
    )
    return LongIntervalReport(
        eps=eps, horizon=t_end, transform_order=transform_order, sup_error=error
    )


def orbit_tracking(
    system: "PerturbedSystem",
    res: "RGResult",
    eps: float,
    orbit_points,
    T: "Optional[float]" = None,
    samples_per_unit_time: float = 1.0,
    config: "Optional[IntegratorConfig]" = None,
) -> "OrbitTrackingReport":
    """Distance of the exact solution to alpha_t(invariant set of the RG equation).

    ``orbit_points`` samples the invariant set in RG coordinates; the exact
    solution starts at alpha_0 of its first point.
    """
    T = engine_settings.HORIZON if T is None else T
    config = config or IntegratorConfig.from_settings()
    orbit_points = np.atleast_2d(np.asarray(orbit_points))
    transform = rg_transform_symbolic(res)
    x0 = transform.evaluate(0.0, orbit_points[0], eps)
    if not np.iscomplexobj(orbit_points):
        x0 = x0.real
    t_end = T / eps
    exact = integrate(
        system_field(system, eps), x0, (0.0, t_end), config, engine_settings.ESCAPE_RADIUS
    )
    times = _sample_times(t_end, samples_per_unit_time)
    states = exact(times)
    distances = np.empty(len(times))
    for index, t in enumerate(times):
        image = transform.evaluate(np.full(len(orbit_points), t), orbit_points, eps)
        distances[index] = np.min(np.linalg.norm(image - states[index], axis=-1))
    return OrbitTrackingReport(
        eps=eps, horizon=t_end, max_distance=float(distances.max()), distances=distances
    )


def regular_chain(
    system: "PerturbedSystem",
    res: "RGResult",
    y0,
    K: int,
    t_end: float,
    config: "Optional[IntegratorConfig]" = None,
) -> "Trajectory":
    """Integrates dx_0/dt = 0, dx_k/dt = G_k(t, x_0, ..., x_{k-1}) for k <= K.

    Starts at x_0 = y0 and x_k(0) = u^(k)_0(y0), the values that match the
    secular table. The state is the concatenation (x_0, ..., x_K).
    """
    n = system.n
    if K > res.m:
        raise InputError("The chain length exceeds the derived order")
    evaluators = [compile_vector(collect_G_polynomial(system, k)) for k in range(1, K + 1)]
    y0 = np.asarray(y0, dtype=complex)
    start = [y0] + [compile_vector(res.U_at(k))(0.0, y0) for k in range(1, K + 1)]

    def chain(t, x):
        derivative = np.zeros_like(x)
        for k, evaluator in enumerate(evaluators, start=1):
            derivative[k * n : (k + 1) * n] = evaluator(t, x[: k * n])
        return derivative

    return integrate(chain, np.concatenate(start), (0.0, t_end), config)

