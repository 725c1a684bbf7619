"""Plain text rendering of eps-graded equations.

    dy1/dt = eps^2*(1/2*y1 + (-3/2 - 8/3*i)*y1^2*y2)

Exact coefficients print in lowest terms, float coefficients with 17
significant digits.
"""
from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .qp import GaussianRational, QPPoly, QPVector


def format_real(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def _split(coeff) -> "Tuple[object, object]":
    if isinstance(coeff, GaussianRational):
        return coeff.real, coeff.imag
    if isinstance(coeff, complex):
        return coeff.real, coeff.imag
    return coeff, 0


def format_coefficient(coeff) -> "Tuple[str, bool]":
    """Returns (text, negative) with the sign pulled out of real and imaginary coefficients."""
    real, imag = _split(coeff)
    if imag == 0:
        return format_real(abs(real)), real < 0
    if real == 0:
        magnitude = abs(imag)
        text = "i" if magnitude == 1 else f"{format_real(magnitude)}*i"
        return text, imag < 0
    sign = "-" if imag < 0 else "+"
    return f"({format_real(real)} {sign} {format_real(abs(imag))}*i)", False


def format_monomial(alpha: "Sequence[int]", names: "Sequence[str]") -> str:
    factors = []
    for name, power in zip(names, alpha):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors)


def _exponential(poly: "QPPoly", k) -> str:
    if not any(k):
        return ""
    frequency = poly.basis.frequency(k)
    if frequency == 1:
        return "exp(i*t)"
    if frequency == -1:
        return "exp(-i*t)"
    return f"exp({format_real(frequency)}*i*t)"


def _term_order(item):
    (k, alpha), _ = item
    return sum(alpha), tuple(-a for a in alpha), k


def format_poly(poly: "QPPoly", names: "Sequence[str]") -> str:
    if poly.is_zero():
        return "0"
    pieces: "List[Tuple[str, bool]]" = []
    for (k, alpha), coeff in sorted(poly.items(), key=_term_order):
        factors = [f for f in (format_monomial(alpha, names), _exponential(poly, k)) if f]
        text, negative = format_coefficient(coeff)
        if factors and text == "1":
            pieces.append(("*".join(factors), negative))
        else:
            pieces.append(("*".join([text] + factors), negative))
    first, negative = pieces[0]
    out = f"-{first}" if negative else first
    for text, negative in pieces[1:]:
        out += f" - {text}" if negative else f" + {text}"
    return out


def _eps_power(order: int) -> str:
    return "eps" if order == 1 else f"eps^{order}"


def format_graded(graded: "Mapping[int, QPPoly]", names: "Sequence[str]") -> str:
    """sum_k eps^k p_k with zero orders left out."""
    parts = [
        f"{_eps_power(order)}*({format_poly(poly, names)})"
        for order, poly in sorted(graded.items())
        if not poly.is_zero()
    ]
    return " + ".join(parts) if parts else "0"


def render_equations(
    orders: "Sequence[QPVector]",
    names: "Sequence[str]",
    components: "Optional[Iterable[int]]" = None,
) -> str:
    """One ``dname/dt = ...`` line per component; ``orders[k - 1]`` multiplies eps^k."""
    if not orders:
        return ""
    components = range(len(orders[0])) if components is None else components
    lines = []
    for j in components:
        graded = {order: vec[j] for order, vec in enumerate(orders, start=1)}
        lines.append(f"d{names[j]}/dt = {format_graded(graded, names)}")
    return "\n".join(lines) + "\n"


def render_result(res) -> str:
    """The RG equation of an RGResult, parameter components omitted."""
    return render_equations(res.R, res.system.names, range(res.system.n_state))


def _format_row(row: "Sequence[object]", variable: str) -> str:
    text = []
    for power, coeff in enumerate(row):
        if coeff == 0:
            continue
        monomial = "" if power == 0 else variable if power == 1 else f"{variable}^{power}"
        value, negative = format_coefficient(coeff)
        if monomial and value == "1":
            piece = monomial
        else:
            piece = "*".join(p for p in (value, monomial) if p)
        text.append((piece, negative))
    if not text:
        return "0"
    first, negative = text[0]
    out = f"-{first}" if negative else first
    for piece, negative in text[1:]:
        out += f" - {piece}" if negative else f" + {piece}"
    return out


def render_polar(polar) -> str:
    """Real form dr/dt, dtheta/dt of a conjugate pair."""
    lines = []
    for name, table in (("r", polar.radial), ("theta", polar.angular)):
        parts = [
            f"{_eps_power(order)}*({_format_row(row, 'r')})"
            for order, row in sorted(table.items())
            if any(c != 0 for c in row)
        ]
        lines.append(f"d{name}/dt = {' + '.join(parts) if parts else '0'}")
    return "\n".join(lines) + "\n"


def render_matrix(matrix, label: str) -> str:
    names: "Tuple[str, ...]" = ()
    rows = []
    for row in matrix:
        rows.append("[" + ", ".join(format_poly(entry, names) for entry in row) + "]")
    return f"{label} = [" + ", ".join(rows) + "]"


def render_linear_result(res) -> str:
    lines = [render_matrix(matrix, f"R{k}") for k, matrix in enumerate(res.R, start=1)]
    return "\n".join(lines) + "\n"
