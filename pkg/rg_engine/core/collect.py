"""Taylor collection of the eps-expansion of a perturbed vector field.

``G_K(t, y, x_1, ..., x_{K-1})`` is the coefficient of eps^K in
``sum_p eps^p g_p(t, y + sum_j eps^j x_j)``. It is computed by exact
substitution into eps-graded series truncated at the needed grade, never
through explicit derivative tensors.
"""
import logging
from typing import Dict, List, Mapping, Sequence

from ..exceptions import DimensionMismatch
from ..qp import QPPoly, QPVector
from .system import PerturbedSystem

logger = logging.getLogger(__name__)

Series = List[QPPoly]


def _series_mul(a: "Series", b: "Series", grade: int) -> "Series":
    zero = QPPoly.zero(a[0].n, a[0].basis)
    result = [zero] * (grade + 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j in range(0, min(grade - i, len(b) - 1) + 1):
            if b[j].is_zero():
                continue
            result[i + j] = result[i + j] + ai * b[j]
    return result


def compose_coefficient(
    orders: "Mapping[int, QPVector]",
    base: "QPVector",
    subs: "Sequence[QPVector]",
    K: int,
) -> "QPVector":
    """Coefficient of eps^K in sum_p eps^p F_p(t, base + sum_j eps^j subs[j-1]).

    ``orders`` maps p >= 1 to fields F_p whose variables are substituted by
    the graded series; ``base`` and ``subs`` live in the target ring and
    ``subs`` must hold at least K - min(p) entries.
    """
    n_target, basis = base.n, base.basis
    size = len(next(iter(orders.values()))) if orders else len(base)
    total = [QPPoly.zero(n_target, basis) for _ in range(size)]
    zero_alpha = (0,) * n_target
    for p, field in orders.items():
        grade = K - p
        if grade < 0:
            continue
        if grade == 0:
            contribution = field.substitute(list(base), n=n_target)
            total = [a + b for a, b in zip(total, contribution)]
            continue
        # x_j = base_j + eps*subs[0]_j + ... + eps^grade*subs[grade-1]_j
        variables = [
            [base[j]] + [subs[i][j] for i in range(grade)] for j in range(len(base))
        ]
        powers: "List[Dict[int, Series]]" = [{1: v} for v in variables]

        def power(j, e):
            cache = powers[j]
            if e not in cache:
                cache[e] = _series_mul(power(j, e - 1), variables[j], grade)
            return cache[e]

        for i, component in enumerate(field):
            accumulated = total[i]
            for (k, alpha), coeff in component.items():
                series: "Series" = [
                    QPPoly._canonical(n_target, basis, {(k, zero_alpha): coeff})
                ] + [QPPoly.zero(n_target, basis)] * grade
                for j, e in enumerate(alpha):
                    if e:
                        series = _series_mul(series, power(j, e), grade)
                accumulated = accumulated + series[grade]
            total[i] = accumulated
    return QPVector(total)


def collect_G(system: "PerturbedSystem", subs: "Sequence[QPVector]", K: int) -> "QPVector":
    """G_K(t, y, x_1, ..., x_{K-1}) evaluated at the given substitutes x_j."""
    if K < 1:
        raise DimensionMismatch("The collection order K must be at least 1")
    if len(subs) != K - 1:
        raise DimensionMismatch(f"collect_G at order {K} needs {K - 1} substitutes")
    for x in subs:
        if x.n != system.n or x.basis != system.basis or len(x) != system.n:
            raise DimensionMismatch("Substitutes must be vector fields of the system")
    result = compose_coefficient(system.orders, system.identity(), subs, K)
    logger.debug("G_%d collected with %d terms", K, sum(len(c) for c in result))
    return result


def collect_G_polynomial(system: "PerturbedSystem", K: int) -> "QPVector":
    """G_K as a polynomial in the extended variables (y, x_1, ..., x_{K-1}).

    Variable ``j*n + i`` of the result is component i of x_j (x_0 = y).
    """
    if K < 1:
        raise DimensionMismatch("The collection order K must be at least 1")
    n, basis = system.n, system.basis
    n_ext = n * K
    base = QPVector(QPPoly.variable(n_ext, basis, i) for i in range(n))
    subs = [
        QPVector(QPPoly.variable(n_ext, basis, j * n + i) for i in range(n))
        for j in range(1, K)
    ]
    return compose_coefficient(system.orders, base, subs, K)
