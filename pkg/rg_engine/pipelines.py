"""Mode dispatch from a system file to its derivation."""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Sequence, Union

import numpy as np

from .autonomous import NormalForm, diagonalize, normal_form, polar_reduce, transform_result
from .core import RGResult, rg_derive
from .exceptions import DimensionMismatch, EquivarianceViolation, InputError
from .files import SystemFile, SystemMode
from .linear import LinearRGResult, linear_rg
from .render import render_linear_result, render_polar, render_result

logger = logging.getLogger(__name__)


@dataclass
class Derivation:
    file: "SystemFile"
    result: "Union[RGResult, LinearRGResult]"
    diagonal_result: "Optional[RGResult]" = None
    normal_form: "Optional[NormalForm]" = None

    @property
    def linear(self) -> bool:
        return isinstance(self.result, LinearRGResult)

    @property
    def conjugate_result(self) -> "RGResult":
        """The result in complex conjugate coordinates, where the polar form lives."""
        return self.diagonal_result or self.result

    @property
    def rendering(self) -> str:
        if self.linear:
            return render_linear_result(self.result)
        text = render_result(self.result)
        if self.diagonal_result is not None:
            text += "# diagonal coordinates\n" + render_result(self.diagonal_result)
        if self.file.mode is SystemMode.AUTONOMOUS:
            try:
                text += "# real form\n" + render_polar(polar_reduce(self.conjugate_result))
            except (EquivarianceViolation, DimensionMismatch):
                logger.debug("No polar form for this system")
        return text


def _derive_periodic(system_file: "SystemFile", m: int) -> "Derivation":
    return Derivation(file=system_file, result=rg_derive(system_file.system(), m))


def _derive_autonomous(system_file: "SystemFile", m: int) -> "Derivation":
    system = system_file.system()
    P = system_file.coordinates
    if P is None:
        form = normal_form(system_file.linear_part, system, m)
        return Derivation(file=system_file, result=form.result, normal_form=form)
    diagonal = diagonalize(system, P)
    form = normal_form(system_file.linear_part, diagonal, m)
    return Derivation(
        file=system_file,
        result=transform_result(form.result, P, names=system.names),
        diagonal_result=form.result,
        normal_form=form,
    )


def _derive_linear(system_file: "SystemFile", m: int) -> "Derivation":
    return Derivation(file=system_file, result=linear_rg(system_file.matrix_series(), m))


def _get_derivation_strategy(mode: "SystemMode") -> "Callable[[SystemFile, int], Derivation]":
    strategies_map: "Dict[SystemMode, Callable[[SystemFile, int], Derivation]]" = {
        SystemMode.PERIODIC: _derive_periodic,
        SystemMode.AUTONOMOUS: _derive_autonomous,
        SystemMode.LINEAR: _derive_linear,
    }
    try:
        return strategies_map[mode]
    except KeyError:
        raise InputError(f"Files in {mode.value} mode are reduced with the gsp or phase commands")


def derive(system_file: "SystemFile", m: int) -> "Derivation":
    if m < 1:
        raise InputError("The RG order must be at least 1")
    logger.info("Deriving the order %d RG equation of a %s system", m, system_file.mode.value)
    return _get_derivation_strategy(system_file.mode)(system_file, m)


def parse_assignments(values: "Sequence[str]") -> "Dict[str, float]":
    """["k=1.8", ...] -> {"k": 1.8}."""
    parsed = {}
    for value in values or ():
        name, sep, number = value.partition("=")
        if not sep or not name.strip():
            raise InputError(f"Expected name=value, got {value!r}")
        try:
            parsed[name.strip()] = float(number)
        except ValueError:
            raise InputError(f"{name.strip()} needs a numeric value, got {number!r}")
    return parsed


def initial_state(res: "RGResult", y0: "Sequence[float]", parameters: "Mapping[str, float]") -> "np.ndarray":
    """Starting state followed by the parameter values, in the order of the system."""
    system = res.system
    if len(y0) != system.n_state:
        raise InputError(f"Expected {system.n_state} initial values, got {len(y0)}")
    missing = set(system.parameter_names) - set(parameters)
    if missing:
        raise InputError(f"Missing parameter values: {', '.join(sorted(missing))}")
    return np.asarray(list(y0) + list(system.parameter_vector(parameters)), dtype=float)
