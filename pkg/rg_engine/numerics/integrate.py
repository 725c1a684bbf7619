import enum
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ..conf import engine_settings
from ..exceptions import InputError
from .strategies import IntegrationStrategy, dop853_strategy, rk4_strategy, rk45_strategy

logger = logging.getLogger(__name__)

Field = Callable[[float, np.ndarray], np.ndarray]


class IntegratorMethod(enum.Enum):
    """Time stepping scheme used by :func:`integrate`."""

    RK4 = "rk4"
    RK45 = "rk45"
    DOP853 = "dop853"


@dataclass(frozen=True)
class IntegratorConfig:
    method: "IntegratorMethod" = IntegratorMethod.RK45
    atol: float = 1e-10
    rtol: float = 1e-9
    step: float = 1e-2
    max_steps: int = 10**6

    def __post_init__(self):
        object.__setattr__(self, "method", IntegratorMethod(self.method))
        for name in ("atol", "rtol", "step"):
            if not getattr(self, name) > 0:
                raise InputError(f"Integrator {name} must be positive")
        if self.max_steps < 1:
            raise InputError("Integrator max_steps must be at least 1")

    @classmethod
    def from_settings(cls, **overrides) -> "IntegratorConfig":
        values = {key.lower(): value for key, value in engine_settings.INTEGRATOR.items()}
        values.update(overrides)
        return cls(**values)


class Trajectory:
    """Integrated states with dense output on the integration span."""

    def __init__(self, t: "np.ndarray", states: "np.ndarray", dense, complex_state: bool):
        self.t = t
        self._states = states
        self._dense = dense
        self.complex_state = complex_state

    @property
    def t_span(self) -> "Tuple[float, float]":
        return float(self.t[0]), float(self.t[-1])

    def _restore(self, values):
        if not self.complex_state:
            return values
        half = values.shape[-1] // 2
        return values[..., :half] + 1j * values[..., half:]

    @property
    def states(self) -> "np.ndarray":
        return self._restore(self._states)

    @property
    def final(self) -> "np.ndarray":
        return self._restore(self._states[-1])

    def __call__(self, t) -> "np.ndarray":
        return self._restore(np.asarray(self._dense(t)))


def _get_strategy(method: "IntegratorMethod") -> "IntegrationStrategy":
    strategies_map = {
        IntegratorMethod.RK4: rk4_strategy,
        IntegratorMethod.RK45: rk45_strategy,
        IntegratorMethod.DOP853: dop853_strategy,
    }
    strategy = strategies_map.get(method)
    if strategy is None:
        raise InputError(f"Invalid integrator method: {method}")
    return strategy


def scipy_method(method: "IntegratorMethod") -> str:
    """The solve_ivp name of an adaptive method; fixed-step RK4 has none."""
    methods_map = {
        IntegratorMethod.RK45: "RK45",
        IntegratorMethod.DOP853: "DOP853",
    }
    try:
        return methods_map[method]
    except KeyError:
        raise InputError(f"The {method.value} integrator cannot locate events or adapt its step")


def integrate(
    field: "Field",
    x0,
    t_span: "Tuple[float, float]",
    config: "Optional[IntegratorConfig]" = None,
    escape_radius: "Optional[float]" = None,
) -> "Trajectory":
    """Integrates dx/dt = field(t, x) from x0 over ``t_span``.

    Complex states are integrated as real vectors of twice the length; the
    returned trajectory gives them back as complex arrays.
    """
    config = config or IntegratorConfig.from_settings()
    x0 = np.asarray(x0)
    complex_state = np.iscomplexobj(x0)
    if complex_state:
        n = len(x0)

        def real_field(t, x):
            value = np.asarray(field(t, x[:n] + 1j * x[n:]), dtype=complex)
            return np.concatenate([value.real, value.imag])

        start = np.concatenate([x0.real, x0.imag])
    else:

        def real_field(t, x):
            return np.real(np.asarray(field(t, x)))

        start = x0.astype(float)

    strategy = _get_strategy(config.method)
    t, states, dense = strategy(real_field, start, t_span, config, escape_radius)
    logger.debug("Integrated %s with %s in %d steps", t_span, config.method.value, len(t))
    return Trajectory(t, states, dense, complex_state)
