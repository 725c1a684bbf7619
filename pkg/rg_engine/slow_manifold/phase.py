"""Phase reduction near a stable limit cycle of dx/dt = f(x) + eps g_1(x).

The phase alpha shifts along the cycle U(t), so dU/dalpha = dU/dt and

    dalpha/dt = eps / T * integral_0^T Q(s) . g_1(U(s)) ds

where Q is the periodic solution of dQ/dt = -Df(U)^T Q with Q . f(U) = 1.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.integrate import solve_ivp

from ..conf import engine_settings
from ..exceptions import AdjointDegeneracy, CycleNotFound, InputError
from ..numerics import IntegratorConfig, scipy_method
from .charts import VectorMap, _matrix_function, _parse, _vector_function

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OscillatorSystem:
    n: int
    f: "VectorMap"
    Df: "VectorMap"
    g1: "VectorMap"


def symbolic_oscillator(
    variables: "Sequence[str]",
    f: "Sequence[str]",
    g1: "Sequence[str]",
    parameters: "Optional[Mapping[str, float]]" = None,
) -> "OscillatorSystem":
    if len(f) != len(variables) or len(g1) != len(variables):
        raise InputError("f and g1 need one expression per variable")
    x = list(np.atleast_1d(sympy.symbols(list(variables), real=True)))
    names = {str(s): s for s in x}
    substitutions = {
        sympy.Symbol(name, real=True): sympy.nsimplify(value)
        for name, value in (parameters or {}).items()
    }
    names.update({str(s): s for s in substitutions})
    f_matrix = _parse(f, names, "f").subs(substitutions)
    g1_matrix = _parse(g1, names, "g1").subs(substitutions)
    return OscillatorSystem(
        n=len(x),
        f=_vector_function(f_matrix, x),
        Df=_matrix_function(f_matrix.jacobian(x), x),
        g1=_vector_function(g1_matrix, x),
    )


@dataclass
class PhaseModel:
    period: float
    times: "np.ndarray"
    orbit: "np.ndarray"
    adjoint: "np.ndarray"
    multipliers: "np.ndarray"
    normalization_residual: float
    coupling: float

    def drift(self, eps: float) -> float:
        """dalpha/dt at the given eps."""
        return eps * self.coupling

    def rows(self):
        for t, u, q in zip(self.times, self.orbit, self.adjoint):
            yield [t, *u, *q]


def _config(config: "Optional[IntegratorConfig]") -> "IntegratorConfig":
    return config or IntegratorConfig.from_settings(method=engine_settings.PHASE_METHOD)


def _solve(rhs, y0, t_span, config: "IntegratorConfig", **kwargs):
    method = scipy_method(config.method)
    solution = solve_ivp(rhs, t_span, y0, method=method, rtol=config.rtol, atol=config.atol, **kwargs)
    if not solution.success or not np.all(np.isfinite(solution.y)):
        raise CycleNotFound(f"Integration over {t_span} failed: {solution.message}")
    return solution


def _variational(system: "OscillatorSystem"):
    n = system.n

    def rhs(t, state):
        x = state[:n]
        phi = state[n:].reshape(n, n)
        return np.concatenate([system.f(x), (system.Df(x) @ phi).ravel()])

    return rhs


def _return_map(system, x0, period, config) -> "Tuple[np.ndarray, np.ndarray]":
    n = system.n
    start = np.concatenate([x0, np.eye(n).ravel()])
    final = _solve(_variational(system), start, (0.0, period), config).y[:, -1]
    return final[:n], final[n:].reshape(n, n)


def find_cycle(
    system: "OscillatorSystem",
    seed,
    period_guess: float,
    relax_periods: int = 20,
    config: "Optional[IntegratorConfig]" = None,
) -> "Tuple[np.ndarray, float, np.ndarray]":
    """Newton shooting on (x0, T) with the phase condition f(x_ref) . (x0 - x_ref) = 0.

    Returns the cycle point, the period and the monodromy matrix.
    """
    config = _config(config)
    n = system.n
    if period_guess <= 0:
        raise InputError("The period guess must be positive")
    relaxed = _solve(
        lambda t, x: system.f(x), np.asarray(seed, dtype=float), (0.0, relax_periods * period_guess), config
    )
    reference = relaxed.y[:, -1]
    normal = system.f(reference)
    if np.linalg.norm(normal) <= engine_settings.STABILITY_TOL:
        raise CycleNotFound(f"The seed relaxed onto an equilibrium near {reference}")
    x0, period = reference.copy(), float(period_guess)
    tol = 10 * config.rtol * max(1.0, float(np.linalg.norm(x0)))
    for iteration in range(1, engine_settings.NEWTON_MAX_ITER + 1):
        end, monodromy = _return_map(system, x0, period, config)
        residual = np.concatenate([end - x0, [normal @ (x0 - reference)]])
        jacobian = np.zeros((n + 1, n + 1))
        jacobian[:n, :n] = monodromy - np.eye(n)
        jacobian[:n, n] = system.f(end)
        jacobian[n, :n] = normal
        try:
            step = np.linalg.solve(jacobian, residual)
        except np.linalg.LinAlgError:
            raise CycleNotFound("Singular shooting Jacobian")
        x0, period = x0 - step[:n], period - step[n]
        logger.debug("Shooting iteration %d: residual %.3g, period %.12g", iteration, np.linalg.norm(residual), period)
        if period <= 0:
            raise CycleNotFound("Shooting drove the period to a non-positive value")
        if np.linalg.norm(step) <= tol:
            _, monodromy = _return_map(system, x0, period, config)
            return x0, period, monodromy
    raise CycleNotFound(f"Shooting did not converge within {engine_settings.NEWTON_MAX_ITER} iterations")


def _periodic_adjoint_start(monodromy, f0, tol) -> "np.ndarray":
    multipliers, left = np.linalg.eig(monodromy.T)
    distance = np.abs(multipliers - 1.0)
    order = np.argsort(distance)
    if len(order) > 1 and distance[order[1]] <= np.sqrt(tol):
        raise AdjointDegeneracy(f"Several Floquet multipliers near 1: {multipliers}")
    others = multipliers[order[1:]]
    if np.any(np.abs(others) >= 1.0):
        raise CycleNotFound(f"The cycle is not attracting, multipliers {multipliers}")
    q0 = np.real(left[:, order[0]])
    scale = q0 @ f0
    if abs(scale) <= tol:
        raise AdjointDegeneracy("The periodic adjoint is orthogonal to the flow direction")
    return q0 / scale


def phase_reduce(
    system: "OscillatorSystem",
    seed,
    period_guess: float,
    samples: int = 512,
    relax_periods: int = 20,
    config: "Optional[IntegratorConfig]" = None,
) -> "PhaseModel":
    config = _config(config)
    n = system.n
    x0, period, monodromy = find_cycle(system, seed, period_guess, relax_periods, config)
    logger.info("Limit cycle of period %.12g through %s", period, x0)
    times = np.linspace(0.0, period, samples, endpoint=False)
    forward = _solve(lambda t, x: system.f(x), x0, (0.0, period), config, dense_output=True)
    orbit = forward.sol(times).T

    q0 = _periodic_adjoint_start(monodromy, system.f(x0), engine_settings.STABILITY_TOL)

    def adjoint_rhs(t, q):
        return -system.Df(forward.sol(t)).T @ q

    backward = _solve(adjoint_rhs, q0, (period, 0.0), config, dense_output=True)
    adjoint = backward.sol(times).T

    flow = np.array([system.f(u) for u in orbit])
    normalization = np.einsum("ij,ij->i", adjoint, flow)
    residual = float(np.max(np.abs(normalization - 1.0)))
    if residual > 1e-6:
        logger.warning("Adjoint normalization drifts by %.3g over the period", residual)
    forcing = np.array([system.g1(u) for u in orbit])
    coupling = float(np.mean(np.einsum("ij,ij->i", adjoint, forcing)))
    return PhaseModel(
        period=period,
        times=times,
        orbit=orbit,
        adjoint=adjoint,
        multipliers=np.linalg.eigvals(monodromy),
        normalization_residual=residual,
        coupling=coupling,
    )


@dataclass(frozen=True)
class PhaseDrift:
    eps: float
    unperturbed_period: float
    perturbed_period: float

    @property
    def coupling_estimate(self) -> float:
        """(T / T_eps - 1) / eps, the measured dalpha/dt over eps."""
        return (self.unperturbed_period / self.perturbed_period - 1.0) / self.eps


def _mean_return_time(rhs, start, section, horizon, config) -> float:
    reference, normal = section

    def crossing(t, x):
        return normal @ (x - reference)

    crossing.direction = 1.0
    solution = _solve(rhs, start, (0.0, horizon), config, events=crossing)
    hits = solution.t_events[0]
    if len(hits) < 3:
        raise CycleNotFound("Fewer than three section crossings, no oscillation detected")
    return float((hits[-1] - hits[1]) / (len(hits) - 2))


def phase_drift(
    system: "OscillatorSystem",
    seed,
    eps: float,
    period_guess: float,
    periods: int = 50,
    relax_periods: int = 20,
    config: "Optional[IntegratorConfig]" = None,
) -> "PhaseDrift":
    """Mean return times to a Poincare section with and without the perturbation."""
    if eps <= 0:
        raise InputError("The phase drift oracle needs eps > 0")
    config = _config(config)
    f: "Callable" = lambda t, x: system.f(x)
    relaxed = _solve(f, np.asarray(seed, dtype=float), (0.0, relax_periods * period_guess), config)
    reference = relaxed.y[:, -1]
    section = (reference, system.f(reference))
    horizon = periods * period_guess
    unperturbed = _mean_return_time(f, reference, section, horizon, config)
    perturbed_rhs = lambda t, x: system.f(x) + eps * system.g1(x)
    settled = _solve(perturbed_rhs, reference, (0.0, relax_periods * period_guess), config).y[:, -1]
    perturbed = _mean_return_time(perturbed_rhs, settled, section, horizon, config)
    logger.info("Mean return times %.12g (eps=0) and %.12g (eps=%g)", unperturbed, perturbed, eps)
    return PhaseDrift(eps=eps, unperturbed_period=unperturbed, perturbed_period=perturbed)
