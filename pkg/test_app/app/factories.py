"""Seeded random systems for the algebraic identity tests."""
import random
from fractions import Fraction
from typing import Optional, Sequence

from django.conf import settings

from rg_engine.core import PerturbedSystem
from rg_engine.loading import parse_system_file
from rg_engine.qp import FrequencyBasis, GaussianRational, QPPoly, QPVector

# 1 and 7/2 only collide on lattice vectors with |k_1| >= 7
BASES = (
    FrequencyBasis((Fraction(1),)),
    FrequencyBasis((Fraction(1), Fraction(7, 2))),
)


def sample_system(name: str):
    return parse_system_file(settings.SAMPLE_SYSTEMS_DIR / name)


def random_coefficient(rng: "random.Random") -> "GaussianRational":
    return GaussianRational(
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
    )


def random_alpha(rng: "random.Random", n: int, degree: int):
    alpha = [0] * n
    for _ in range(rng.randint(0, degree)):
        alpha[rng.randrange(n)] += 1
    return tuple(alpha)


def random_poly(
    rng: "random.Random",
    n: int,
    basis: "FrequencyBasis",
    degree: int = 2,
    terms: int = 3,
    oscillating: bool = True,
) -> "QPPoly":
    items = []
    for _ in range(terms):
        k = tuple(rng.randint(-1, 1) for _ in range(basis.dim)) if oscillating else basis.zero()
        items.append(((k, random_alpha(rng, n, degree)), random_coefficient(rng)))
    return QPPoly(n, basis, items)


def random_vector(
    rng: "random.Random",
    n: int,
    basis: "FrequencyBasis",
    degree: int = 2,
    terms: int = 3,
    oscillating: bool = True,
) -> "QPVector":
    return QPVector(random_poly(rng, n, basis, degree, terms, oscillating) for _ in range(n))


def random_system(
    seed: int,
    n: int = 2,
    orders: "Sequence[int]" = (1, 2),
    basis: "Optional[FrequencyBasis]" = None,
    degree: int = 2,
    terms: int = 3,
    oscillating: bool = True,
) -> "PerturbedSystem":
    rng = random.Random(seed)
    basis = basis if basis is not None else BASES[seed % len(BASES)]
    return PerturbedSystem(
        n=n,
        basis=basis,
        orders={p: random_vector(rng, n, basis, degree, terms, oscillating) for p in orders},
    )
