"""Quasi-periodic polynomials.

A :class:`QPPoly` is a finite sum of terms ``c * y^alpha * exp(i*lambda(k)*t)``
over ``n`` state variables and a :class:`FrequencyBasis`. Terms are stored in
a dict keyed by ``(k, alpha)`` and kept sorted (k first, then alpha), zero
coefficients are never stored. Instances are immutable.
"""
import cmath
from fractions import Fraction
from typing import Dict, Iterable, Iterator, NamedTuple, Sequence, Tuple

from ..exceptions import BasisMismatch, DimensionMismatch, MeanNotZero
from .basis import FrequencyBasis
from .scalars import GaussianRational, ScalarMode, imaginary_unit, scalar

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]

_SCALAR_TYPES = (int, Fraction, float, complex, GaussianRational)


class QPTerm(NamedTuple):
    coeff: object
    alpha: "Tuple[int, ...]"
    k: "Tuple[int, ...]"


class QPPoly:
    __slots__ = ("n", "basis", "_terms", "_hash")

    def __init__(self, n: int, basis: "FrequencyBasis", terms=()):
        self.n = n
        self.basis = basis
        accumulated: "Dict[Key, object]" = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for key, coeff in items:
            k, alpha = tuple(key[0]), tuple(key[1])
            if len(alpha) != n:
                raise DimensionMismatch(f"alpha {alpha} does not have {n} entries")
            if len(k) != basis.dim:
                raise DimensionMismatch(f"k {k} does not have {basis.dim} entries")
            if any(a < 0 for a in alpha):
                raise DimensionMismatch(f"alpha {alpha} has a negative exponent")
            key = (k, alpha)
            accumulated[key] = accumulated[key] + coeff if key in accumulated else coeff
        self._terms = {
            key: accumulated[key] for key in sorted(accumulated) if accumulated[key] != 0
        }
        self._hash = None

    @classmethod
    def _canonical(cls, n, basis, terms: "Dict[Key, object]") -> "QPPoly":
        poly = cls.__new__(cls)
        poly.n = n
        poly.basis = basis
        poly._terms = {key: terms[key] for key in sorted(terms) if terms[key] != 0}
        poly._hash = None
        return poly

    # Constructors

    @classmethod
    def zero(cls, n, basis) -> "QPPoly":
        return cls._canonical(n, basis, {})

    @classmethod
    def constant(cls, n, basis, value) -> "QPPoly":
        return cls._canonical(n, basis, {(basis.zero(), (0,) * n): value})

    @classmethod
    def variable(cls, n, basis, j: int, coeff=1) -> "QPPoly":
        alpha = [0] * n
        alpha[j] = 1
        return cls._canonical(n, basis, {(basis.zero(), tuple(alpha)): coeff})

    @classmethod
    def monomial(cls, n, basis, coeff, alpha=None, k=None) -> "QPPoly":
        alpha = tuple(alpha) if alpha is not None else (0,) * n
        k = tuple(k) if k is not None else basis.zero()
        return cls(n, basis, [((k, alpha), coeff)])

    # Inspection

    def items(self) -> "Iterator[Tuple[Key, object]]":
        return iter(self._terms.items())

    def terms(self) -> "Iterator[QPTerm]":
        for (k, alpha), coeff in self._terms.items():
            yield QPTerm(coeff, alpha, k)

    def coefficient(self, alpha, k=None):
        k = tuple(k) if k is not None else self.basis.zero()
        return self._terms.get((k, tuple(alpha)), 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_t_independent(self) -> bool:
        return all(not any(k) for k, _ in self._terms)

    def degree(self) -> int:
        return max((sum(alpha) for _, alpha in self._terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, QPPoly):
            return (
                self.n == other.n
                and self.basis == other.basis
                and self._terms == other._terms
            )
        if isinstance(other, _SCALAR_TYPES):
            if other == 0:
                return self.is_zero()
            return self == QPPoly.constant(self.n, self.basis, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.basis, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"({c}; {a}; {k})" for (k, a), c in self._terms.items())
        return f"QPPoly(n={self.n}, [{body}])"

    # Ring operations

    def _check(self, other: "QPPoly"):
        if self.n != other.n or self.basis != other.basis:
            raise BasisMismatch(
                f"Cannot combine polynomials over n={self.n}, basis {self.basis} "
                f"and n={other.n}, basis {other.basis}."
            )

    def _lift(self, other) -> "QPPoly":
        if isinstance(other, QPPoly):
            self._check(other)
            return other
        if isinstance(other, _SCALAR_TYPES):
            return QPPoly.constant(self.n, self.basis, other)
        raise TypeError(f"Cannot combine QPPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms[key] + coeff if key in terms else coeff
        return QPPoly._canonical(self.n, self.basis, terms)

    __radd__ = __add__

    def __neg__(self):
        return QPPoly._canonical(
            self.n, self.basis, {key: -c for key, c in self._terms.items()}
        )

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, factor) -> "QPPoly":
        if factor == 0:
            return QPPoly.zero(self.n, self.basis)
        return QPPoly._canonical(
            self.n, self.basis, {key: c * factor for key, c in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self.scale(other)
        other = self._lift(other)
        terms: "Dict[Key, object]" = {}
        for (k1, a1), c1 in self._terms.items():
            for (k2, a2), c2 in other._terms.items():
                key = (
                    tuple(x + y for x, y in zip(k1, k2)),
                    tuple(x + y for x, y in zip(a1, a2)),
                )
                product = c1 * c2
                terms[key] = terms[key] + product if key in terms else product
        return QPPoly._canonical(self.n, self.basis, terms)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("QPPoly powers must be non-negative integers")
        result = QPPoly.constant(self.n, self.basis, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # Calculus

    def diff_y(self, j: int) -> "QPPoly":
        """Partial derivative with respect to the state variable y_j (0-based)."""
        if not 0 <= j < self.n:
            raise DimensionMismatch(f"Variable index {j} out of range for n={self.n}")
        terms = {}
        for (k, alpha), coeff in self._terms.items():
            if alpha[j] == 0:
                continue
            lowered = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1 :]
            terms[(k, lowered)] = coeff * alpha[j]
        return QPPoly._canonical(self.n, self.basis, terms)

    def _mode(self) -> "ScalarMode":
        exact = self.basis.exact and all(
            isinstance(c, (GaussianRational, int, Fraction)) for c in self._terms.values()
        )
        return ScalarMode.EXACT if exact else ScalarMode.FLOAT

    def diff_t(self) -> "QPPoly":
        """d/dt: every term is multiplied by i*lambda(k)."""
        unit = imaginary_unit(self._mode())
        terms = {}
        for (k, alpha), coeff in self._terms.items():
            lam = self.basis.frequency(k)
            if lam != 0:
                terms[(k, alpha)] = coeff * unit * lam
        return QPPoly._canonical(self.n, self.basis, terms)

    def average_t(self) -> "QPPoly":
        """The k = 0 slice, i.e. the long-time average in t."""
        return QPPoly._canonical(
            self.n, self.basis, {key: c for key, c in self._terms.items() if not any(key[0])}
        )

    def oscillating_part(self) -> "QPPoly":
        return QPPoly._canonical(
            self.n, self.basis, {key: c for key, c in self._terms.items() if any(key[0])}
        )

    def antiderivative_t(self) -> "QPPoly":
        """Primitive in t with zero integral constant; requires a mean-zero polynomial."""
        mode = self._mode()
        unit = imaginary_unit(mode)
        terms = {}
        for (k, alpha), coeff in self._terms.items():
            if not any(k):
                raise MeanNotZero(
                    f"Term y^{alpha} has zero frequency; subtract the average first."
                )
            lam = self.basis.frequency(k)
            terms[(k, alpha)] = coeff / (unit * scalar(lam, mode))
        return QPPoly._canonical(self.n, self.basis, terms)

    # Composition and evaluation

    def substitute(self, subs: "Sequence[QPPoly]", n: int = None) -> "QPPoly":
        """p(t, y_1 <- s_1, ..., y_n <- s_n); the result lives in the ring of the substitutes."""
        if len(subs) != self.n:
            raise DimensionMismatch(f"Expected {self.n} substitutes, got {len(subs)}")
        target_n = subs[0].n if subs else (self.n if n is None else n)
        for s in subs:
            if s.basis != self.basis:
                raise BasisMismatch("Substitutes must share the polynomial's basis")
            if s.n != target_n:
                raise BasisMismatch("Substitutes must share one state dimension")
        powers = [{0: QPPoly.constant(target_n, self.basis, 1), 1: s} for s in subs]

        def power(j, e):
            cache = powers[j]
            if e not in cache:
                cache[e] = power(j, e - 1) * subs[j]
            return cache[e]

        result: "Dict[Key, object]" = {}
        zero_alpha = (0,) * target_n
        for (k, alpha), coeff in self._terms.items():
            term = QPPoly._canonical(target_n, self.basis, {(k, zero_alpha): coeff})
            for j, e in enumerate(alpha):
                if e:
                    term = term * power(j, e)
            for key, c in term._terms.items():
                result[key] = result[key] + c if key in result else c
        return QPPoly._canonical(target_n, self.basis, result)

    def embed(self, n: int, offset: int = 0) -> "QPPoly":
        """Re-indexes variables into a ring with ``n`` variables, y_j -> y_{j+offset}."""
        if offset + self.n > n:
            raise DimensionMismatch("Embedding does not fit the target ring")
        terms = {}
        for (k, alpha), coeff in self._terms.items():
            lifted = (0,) * offset + alpha + (0,) * (n - offset - self.n)
            terms[(k, lifted)] = coeff
        return QPPoly._canonical(n, self.basis, terms)

    def eval(self, t: float, y: "Sequence[complex]") -> complex:
        if len(y) != self.n:
            raise DimensionMismatch(f"Expected {self.n} coordinates, got {len(y)}")
        total = 0j
        for (k, alpha), coeff in self._terms.items():
            value = complex(coeff)
            for yj, e in zip(y, alpha):
                if e:
                    value *= complex(yj) ** e
            if any(k):
                value *= cmath.exp(1j * float(self.basis.frequency(k)) * t)
            total += value
        return total

    def to_float(self) -> "QPPoly":
        return QPPoly._canonical(
            self.n,
            self.basis.to_float(),
            {key: complex(c) for key, c in self._terms.items()},
        )

    def conjugate_coefficients(self) -> "QPPoly":
        return QPPoly._canonical(
            self.n, self.basis, {key: c.conjugate() for key, c in self._terms.items()}
        )


def polynomial_from_terms(
    n: int, basis: "FrequencyBasis", terms: "Iterable[QPTerm]"
) -> "QPPoly":
    return QPPoly(n, basis, [((t.k, t.alpha), t.coeff) for t in terms])
