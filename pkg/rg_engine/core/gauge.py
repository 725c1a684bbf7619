"""Integral constants of the recursion and the coordinate change they induce."""
import logging
from typing import List, Sequence

from ..exceptions import DimensionMismatch, InconsistentDerivation, InputError
from ..qp import QPVector
from .collect import compose_coefficient
from .derive import RGResult, rg_derive

logger = logging.getLogger(__name__)


def apply_gauge(res: "RGResult", B: "Sequence[QPVector]") -> "RGResult":
    """Re-derives ``res`` with u^(i) = B_i + (mean-zero part).

    Checks R~_1 = R_1 and R~_2 = R_2 - [B_1, R_1] against the zero-constant
    derivation of the same system.
    """
    B = list(B)
    if len(B) > res.m:
        raise DimensionMismatch(f"Got {len(B)} gauge fields for order {res.m}")
    system = res.system
    for i, b in enumerate(B, start=1):
        if len(b) != system.n or b.n != system.n or b.basis != system.basis:
            raise DimensionMismatch(f"B_{i} is not a vector field of the system")
        if not b.is_t_independent():
            raise InputError(f"B_{i} depends on t")
        for j in range(system.n_state, system.n):
            if not b[j].is_zero():
                raise InputError(f"B_{i} moves the parameter {system.names[j]}")

    baseline = rg_derive(system, res.m) if res.gauged else res
    gauged = rg_derive(system, res.m, gauge=B)
    if not B or all(b.is_zero() for b in B):
        return gauged

    if gauged.R[0] != baseline.R[0]:
        raise InconsistentDerivation("Gauging changed the first order RG equation")
    if res.m >= 2:
        expected = baseline.R[1] - B[0].bracket(baseline.R[0])
        if gauged.R[1] != expected:
            raise InconsistentDerivation("R~_2 differs from R_2 - [B_1, R_1]")
    logger.debug("Gauge applied up to order %d", res.m)
    return gauged


def near_identity_factor(res: "RGResult", gauged: "RGResult") -> "List[QPVector]":
    """phi_1..phi_m with alpha~_t = alpha_t o phi up to eps^m, phi(y) = y + sum eps^l phi_l(y).

    The eps^l coefficient of alpha_t(phi(y)) is phi_l + [eps^l] sum_k eps^k
    u^(k)(y + sum_{j<l} eps^j phi_j), so each phi_l follows from the lower
    ones. Every phi_l must be t-independent.
    """
    if res.system is not gauged.system and res.system != gauged.system:
        raise DimensionMismatch("Both results must belong to one system")
    m = min(res.m, gauged.m)
    identity = res.system.identity()
    orders = {k: res.U[k - 1] for k in range(1, m + 1)}
    phi: "List[QPVector]" = []
    for l in range(1, m + 1):
        coefficient = compose_coefficient(
            {k: u for k, u in orders.items() if k <= l}, identity, phi, l
        )
        phi_l = gauged.U[l - 1] - coefficient
        if not phi_l.is_t_independent():
            raise InconsistentDerivation(
                f"The order {l} factor between both RG transformations depends on t"
            )
        phi.append(phi_l)
    return phi
