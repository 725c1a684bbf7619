from typing import Callable, Optional, Protocol, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from ..exceptions import IntegrationFailure, TrajectoryEscape

RealField = Callable[[float, np.ndarray], np.ndarray]
Dense = Callable[[np.ndarray], np.ndarray]


class IntegrationStrategy(Protocol):
    def __call__(
        self,
        field: "RealField",
        x0: "np.ndarray",
        t_span: "Tuple[float, float]",
        config,
        escape_radius: "Optional[float]",
    ) -> "Tuple[np.ndarray, np.ndarray, Dense]":
        ...


def rk4_strategy(field, x0, t_span, config, escape_radius):
    """Classical RK4 with a constant step and cubic Hermite dense output."""
    t0, t1 = map(float, t_span)
    steps = max(1, int(np.ceil(abs(t1 - t0) / config.step)))
    if steps > config.max_steps:
        raise IntegrationFailure(
            f"RK4 needs {steps} steps on {t_span}, more than MAX_STEPS={config.max_steps}"
        )
    times = np.linspace(t0, t1, steps + 1)
    states = np.empty((steps + 1, len(x0)))
    slopes = np.empty_like(states)
    states[0] = x0
    x = np.asarray(x0, dtype=float)
    for index in range(steps):
        t, h = times[index], times[index + 1] - times[index]
        k1 = field(t, x)
        k2 = field(t + h / 2, x + h / 2 * k1)
        k3 = field(t + h / 2, x + h / 2 * k2)
        k4 = field(t + h, x + h * k3)
        slopes[index] = k1
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise IntegrationFailure(f"Non-finite state at t={times[index + 1]}")
        if escape_radius is not None and np.linalg.norm(x) > escape_radius:
            raise TrajectoryEscape(
                f"State left the ball of radius {escape_radius} at t={times[index + 1]}"
            )
        states[index + 1] = x
    slopes[-1] = field(times[-1], states[-1])
    if t1 < t0:
        spline = CubicHermiteSpline(times[::-1], states[::-1], slopes[::-1], axis=0)
    else:
        spline = CubicHermiteSpline(times, states, slopes, axis=0)
    return times, states, spline


class _Budget:
    def __init__(self, field, limit):
        self.field = field
        self.limit = limit
        self.calls = 0

    def __call__(self, t, x):
        self.calls += 1
        if self.calls > self.limit:
            raise IntegrationFailure(f"More than {self.limit} field evaluations")
        return self.field(t, x)


def _solve_ivp_strategy(method: str) -> "IntegrationStrategy":
    def strategy(field, x0, t_span, config, escape_radius):
        budgeted = _Budget(field, 6 * config.max_steps)
        events = None
        if escape_radius is not None:

            def escape(t, x):
                return escape_radius - np.linalg.norm(x)

            escape.terminal = True
            events = [escape]
        solution = solve_ivp(
            budgeted,
            t_span,
            np.asarray(x0, dtype=float),
            method=method,
            rtol=config.rtol,
            atol=config.atol,
            dense_output=True,
            events=events,
        )
        if solution.status == 1:
            raise TrajectoryEscape(
                f"State left the ball of radius {escape_radius} at t={solution.t[-1]}"
            )
        if solution.status != 0:
            raise IntegrationFailure(solution.message)
        dense = solution.sol

        def evaluate(t):
            values = dense(t)
            return values.T if np.ndim(t) else values

        return solution.t, solution.y.T, evaluate

    strategy.__doc__ = f"Adaptive {method} through scipy with its dense output."
    return strategy


rk45_strategy = _solve_ivp_strategy("RK45")
dop853_strategy = _solve_ivp_strategy("DOP853")
