"""Fixed points and invariant circles of reduced (RG) equations."""
import enum
import logging
from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Sequence

import numpy as np

from ..conf import engine_settings
from ..core import RGResult
from ..exceptions import InputError, NewtonDivergence
from .compiled import GradedField

logger = logging.getLogger(__name__)


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NON_HYPERBOLIC = "non_hyperbolic"


@dataclass
class NumericField:
    """An autonomous field on R^n (or C^n) with its Jacobian."""

    n: int
    value: "Callable[[np.ndarray], np.ndarray]"
    jacobian: "Callable[[np.ndarray], np.ndarray]"
    real: bool = True


@dataclass
class FixedPoint:
    point: "np.ndarray"
    eigenvalues: "np.ndarray"
    stability: "Stability"
    residual: float
    iterations: int


@dataclass
class RadialOrbit:
    radius: float
    slope: float
    stability: "Stability"


def classify(eigenvalues: "Sequence[complex]", tol: "Optional[float]" = None) -> "Stability":
    """Stable when every real part is below -tol, unstable when one exceeds tol."""
    tol = engine_settings.STABILITY_TOL if tol is None else tol
    real_parts = np.real(np.asarray(eigenvalues))
    if np.any(real_parts > tol):
        return Stability.UNSTABLE
    if np.all(real_parts < -tol):
        return Stability.STABLE
    return Stability.NON_HYPERBOLIC


class RGField(NumericField):
    """sum_k eps^k R_k restricted to the state variables at fixed parameter values."""

    def __init__(
        self,
        res: "RGResult",
        eps: float,
        parameters: "Optional[Mapping[str, float]]" = None,
        real: bool = True,
    ):
        system = res.system
        parameters = dict(parameters or {})
        missing = set(system.parameter_names) - set(parameters)
        if missing:
            raise InputError(f"Missing parameter values: {', '.join(sorted(missing))}")
        extra = set(parameters) - set(system.parameter_names)
        if extra:
            raise InputError(f"Unknown parameters: {', '.join(sorted(extra))}")
        self.res = res
        self.eps = eps
        self.parameter_values = np.asarray(system.parameter_vector(parameters), dtype=complex)
        n_state = system.n_state
        graded = GradedField({i: r for i, r in enumerate(res.R, start=1)}, eps)

        def extend(y):
            return np.concatenate([np.asarray(y, dtype=complex), self.parameter_values])

        def value(y):
            return graded(0.0, extend(y))[:n_state]

        def jacobian(y):
            return graded.jacobian(0.0, extend(y))[:n_state, :n_state]

        super().__init__(n=n_state, value=value, jacobian=jacobian, real=real)


def newton(field: "NumericField", seed, tol=None, max_iter=None):
    """Newton iteration for field.value(x) = 0; returns (point, residual, iterations)."""
    tol = engine_settings.NEWTON_TOL if tol is None else tol
    max_iter = engine_settings.NEWTON_MAX_ITER if max_iter is None else max_iter
    dtype = float if field.real else complex
    x = np.asarray(seed, dtype=dtype)

    def evaluate(point):
        value = np.asarray(field.value(point))
        return value.real if field.real else value

    def jacobian(point):
        value = np.asarray(field.jacobian(point))
        return value.real if field.real else value

    F = evaluate(x)
    if float(np.linalg.norm(F)) <= tol:
        return x, float(np.linalg.norm(F)), 0
    for iteration in range(1, max_iter + 1):
        try:
            step = np.linalg.solve(jacobian(x), F)
        except np.linalg.LinAlgError:
            raise NewtonDivergence(f"Singular Jacobian at {x}")
        x = x - step
        F = evaluate(x)
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(F)):
            raise NewtonDivergence(f"Newton iterate became non-finite from seed {seed}")
        residual = float(np.linalg.norm(F))
        if residual <= tol or np.linalg.norm(step) <= tol * max(1.0, np.linalg.norm(x)):
            return x, residual, iteration
    raise NewtonDivergence(f"No convergence within {max_iter} iterations from seed {seed}")


def find_fixed_points(
    field: "NumericField", seeds, tol=None, max_iter=None
) -> "List[FixedPoint]":
    """Newton from every seed; failing seeds are logged and skipped, duplicates merged."""
    found: "List[FixedPoint]" = []
    for seed in np.atleast_2d(np.asarray(seeds)):
        try:
            point, residual, iterations = newton(field, seed, tol=tol, max_iter=max_iter)
        except NewtonDivergence as exc:
            logger.warning("Seed %s: %s", seed, exc)
            continue
        if any(
            np.linalg.norm(point - other.point) <= 1e-8 * max(1.0, np.linalg.norm(point))
            for other in found
        ):
            continue
        jacobian = np.asarray(field.jacobian(point))
        if field.real:
            jacobian = jacobian.real
        eigenvalues = np.linalg.eigvals(jacobian)
        found.append(
            FixedPoint(
                point=point,
                eigenvalues=eigenvalues,
                stability=classify(eigenvalues),
                residual=residual,
                iterations=iterations,
            )
        )
    return found


def find_rg_fixed_points(
    res: "RGResult", eps: float, seeds, parameters=None, real: bool = True
) -> "List[FixedPoint]":
    return find_fixed_points(RGField(res, eps, parameters, real=real), seeds)


def seed_grid(lower: "Sequence[float]", upper: "Sequence[float]", count: int) -> "np.ndarray":
    """Cartesian grid of ``count`` points per axis on the box [lower, upper]."""
    axes = [np.linspace(a, b, count) for a, b in zip(lower, upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def radial_orbits(polar, eps: float, tol=None) -> "List[RadialOrbit]":
    """Positive roots r* of dr/dt = sum_k eps^k rho_k(r) with their stability."""
    tol = engine_settings.STABILITY_TOL if tol is None else tol
    radial = polar.radial_polynomial(eps)
    if not np.any(radial.coef):
        raise InputError("The radial equation vanishes identically")
    derivative = radial.deriv()
    orbits = []
    for root in radial.roots():
        if abs(root.imag) > 1e-9 * max(1.0, abs(root)):
            continue
        r = float(root.real)
        if r <= 1e-12:
            continue
        # polish
        slope = float(derivative(r))
        if slope != 0:
            r = r - float(radial(r)) / slope
            slope = float(derivative(r))
        if any(abs(r - other.radius) <= 1e-9 * max(1.0, r) for other in orbits):
            continue
        orbits.append(RadialOrbit(radius=r, slope=slope, stability=classify([slope], tol)))
    orbits.sort(key=lambda orbit: orbit.radius)
    return orbits

