import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from ..conf import engine_settings
from ..exceptions import NonLatticeFrequency, ZeroFrequencyCollision

Frequency = Union[Fraction, float]


def rational_gcd(values: "Sequence[Fraction]") -> "Fraction":
    """Largest rational g such that every value is an integer multiple of g."""
    values = [Fraction(v) for v in values if v != 0]
    if not values:
        return Fraction(0)
    common = 1
    for v in values:
        common = common * v.denominator // math.gcd(common, v.denominator)
    g = 0
    for v in values:
        g = math.gcd(g, abs(v.numerator * (common // v.denominator)))
    return Fraction(g, common)


def _extended_gcd(a: int, b: int) -> "Tuple[int, int, int]":
    """(g, s, t) with s a + t b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _integer_combination(values: "Sequence[Fraction]", value: "Fraction") -> "Optional[Tuple[int, ...]]":
    """Some integer k with sum k_j values_j == value, or None."""
    common = value.denominator
    for v in values:
        common = common * v.denominator // math.gcd(common, v.denominator)
    g, k = 0, [0] * len(values)
    for j, v in enumerate(values):
        g, s, t = _extended_gcd(g, int(v * common))
        k = [s * kj for kj in k]
        k[j] += t
    target = int(value * common)
    if g == 0 or target % g:
        return None
    return tuple(kj * (target // g) for kj in k)


@dataclass(frozen=True)
class FrequencyBasis:
    """Frequencies omega_1..omega_d spanning the integer lattice of Fourier exponents.

    The values are assumed rationally independent. This cannot be checked in
    general; :meth:`frequency` raises when a nonzero lattice vector maps to 0.
    """

    values: "Tuple[Frequency, ...]" = ()

    def __post_init__(self):
        converted = tuple(
            v if isinstance(v, float) else Fraction(v) for v in self.values
        )
        if any(v == 0 for v in converted):
            raise NonLatticeFrequency("Basis frequencies must be nonzero.")
        object.__setattr__(self, "values", converted)

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    @property
    def period_hint(self) -> "Optional[Fraction]":
        """T / (2*pi) when all exponents share a rational generator."""
        if self.dim == 0 or not self.exact:
            return None
        return 1 / rational_gcd(self.values)

    def period(self) -> "Optional[float]":
        if self.period_hint is not None:
            return 2 * math.pi * float(self.period_hint)
        if self.dim == 1:
            return 2 * math.pi / abs(float(self.values[0]))
        return None

    def zero(self) -> "Tuple[int, ...]":
        return (0,) * self.dim

    def frequency(self, k: "Sequence[int]") -> "Frequency":
        """lambda(k) = sum_j k_j omega_j, refusing exact resonances of k != 0."""
        lam = sum((kj * wj for kj, wj in zip(k, self.values)), Fraction(0))
        if any(k):
            if self.exact:
                collided = lam == 0
            else:
                scale = sum(abs(kj * float(wj)) for kj, wj in zip(k, self.values))
                collided = abs(lam) <= engine_settings.FLOAT_FREQUENCY_TOL * scale
            if collided:
                raise ZeroFrequencyCollision(k)
        return lam

    def to_float(self) -> "FrequencyBasis":
        return FrequencyBasis(tuple(float(v) for v in self.values))

    def lattice_point(self, value: "Frequency") -> "Tuple[int, ...]":
        """Integer vector k with frequency(k) == value.

        A multiple of a single basis value is preferred. Exact bases fall back
        to an integer combination of all values; float bases only resolve
        single directions and raise NonLatticeFrequency otherwise.
        """
        if value == 0:
            return self.zero()
        for index, w in enumerate(self.values):
            ratio = value / w
            if isinstance(ratio, Fraction):
                hit = ratio.denominator == 1
                multiple = int(ratio)
            else:
                multiple = round(ratio)
                hit = abs(ratio - multiple) <= engine_settings.FLOAT_FREQUENCY_TOL * max(
                    1.0, abs(ratio)
                )
            if hit:
                k = [0] * self.dim
                k[index] = multiple
                return tuple(k)
        if self.exact:
            combination = _integer_combination(self.values, Fraction(value))
            if combination is not None:
                return combination
        raise NonLatticeFrequency(
            f"Frequency {value} is not on the lattice of {self.values}."
        )

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"
