"""Scalar coefficients.

Exact mode works with Gaussian rationals (Fraction real and imaginary
parts); float mode works with Python ``complex``. Both types support the
same arithmetic, so the polynomial code never branches on the mode except
where a scalar has to be created from scratch.
"""
import enum
from fractions import Fraction
from numbers import Rational
from typing import Union


class ScalarMode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class GaussianRational:
    """An exact complex number ``real + imag*i`` with rational parts."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        object.__setattr__(self, "real", Fraction(real))
        object.__setattr__(self, "imag", Fraction(imag))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            return cls(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return GaussianRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        norm = o.real * o.real + o.imag * o.imag
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        return GaussianRational(
            (self.real * o.real + self.imag * o.imag) / norm,
            (self.imag * o.real - self.real * o.imag) / norm,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return complex(self) ** exponent
        result = GaussianRational(1)
        base = self if exponent >= 0 else GaussianRational(1) / self
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __repr__(self):
        return f"GaussianRational({self.real!s}, {self.imag!s})"

    def __str__(self):
        if self.imag == 0:
            return str(self.real)
        if self.real == 0:
            return f"{self.imag}*i"
        sign = "-" if self.imag < 0 else "+"
        return f"({self.real} {sign} {abs(self.imag)}*i)"


Scalar = Union[GaussianRational, complex]

I_EXACT = GaussianRational(0, 1)


def scalar(value, mode: "ScalarMode") -> "Scalar":
    """Converts ``value`` (int, Fraction, float, complex or GaussianRational) to the mode's type."""
    if mode is ScalarMode.EXACT:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return GaussianRational(value)
        if isinstance(value, complex):
            return GaussianRational(Fraction(value.real), Fraction(value.imag))
        return GaussianRational(Fraction(value))
    return complex(value)


def imaginary_unit(mode: "ScalarMode") -> "Scalar":
    return I_EXACT if mode is ScalarMode.EXACT else 1j
