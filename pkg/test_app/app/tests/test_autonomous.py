from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from app.factories import random_system, sample_system
from rg_engine.autonomous import (
    DiagonalLinearPart,
    autonomize,
    change_system,
    equivariance_check,
    invert,
    normal_form,
    polar_reduce,
)
from rg_engine.core import PerturbedSystem, rg_derive
from rg_engine.exceptions import DimensionMismatch, EquivarianceViolation, InputError
from rg_engine.numerics import find_rg_fixed_points, radial_orbits, Stability
from rg_engine.pipelines import derive
from rg_engine.qp import FrequencyBasis, GaussianRational, QPPoly, QPVector
from rg_engine.render import render_polar, render_result

P = [
    [GaussianRational(1), GaussianRational(1)],
    [GaussianRational(0, 1), GaussianRational(0, -1)],
]


def poly(res, terms):
    """A polynomial over the variables of ``res`` from {alpha: coefficient}."""
    system = res.system
    zero = system.basis.zero()
    return QPPoly(system.n, system.basis, [((zero, alpha), c) for alpha, c in terms.items()])


def real_second_order(res, with_forcing: bool):
    """24 R_2 of the forced oscillator in real coordinates (y1, y2, k)."""
    first = {
        (1, 0, 0): 12, (3, 0, 0): -9, (2, 1, 0): -16, (1, 2, 0): -9, (0, 3, 0): -16,
    }
    second = {
        (0, 1, 0): 12, (0, 3, 0): -9, (1, 2, 0): 16, (2, 1, 0): -9, (3, 0, 0): 16,
    }
    if with_forcing:
        first.update({(1, 0, 1): -6, (0, 1, 1): -4})
        second.update({(1, 0, 1): -4, (0, 1, 1): 6})
    scale = Fraction(1, 24)
    return QPVector(
        [
            poly(res, {a: GaussianRational(c * scale) for a, c in first.items()}),
            poly(res, {a: GaussianRational(c * scale) for a, c in second.items()}),
            QPPoly.zero(res.system.n, res.system.basis),
        ]
    )


class ForcedOscillatorTest(SimpleTestCase):
    def test_nonresonant_forcing_in_diagonal_coordinates(self):
        # Setup
        derivation = derive(sample_system("forced_oscillator_omega3.json"), 2)
        diagonal = derivation.diagonal_result

        self.assertTrue(diagonal.R[0].is_zero())
        expected = QPVector(
            [
                poly(
                    diagonal,
                    {
                        (1, 0, 0): GaussianRational(Fraction(1, 2)),
                        (2, 1, 0): GaussianRational(Fraction(-3, 2), Fraction(-8, 3)),
                    },
                ),
                poly(
                    diagonal,
                    {
                        (0, 1, 0): GaussianRational(Fraction(1, 2)),
                        (1, 2, 0): GaussianRational(Fraction(-3, 2), Fraction(8, 3)),
                    },
                ),
                QPPoly.zero(3, diagonal.system.basis),
            ]
        )
        self.assertEqual(diagonal.R[1], expected)
        self.assertTrue(derivation.normal_form.time_independent)
        self.assertEqual(equivariance_check(derivation.normal_form.F, diagonal), [])

        # Rendered equations
        lines = render_result(diagonal).splitlines()
        self.assertEqual(lines[0], "dy1/dt = eps^2*(1/2*y1 + (-3/2 - 8/3*i)*y1^2*y2)")
        self.assertEqual(len(lines), 2)

    def test_polar_form_and_limit_cycle(self):
        # Setup
        derivation = derive(sample_system("forced_oscillator_omega3.json"), 2)
        polar = polar_reduce(derivation.conjugate_result)

        self.assertEqual(dict(polar.radial), {2: (0, Fraction(1, 2), 0, Fraction(-3, 2))})
        self.assertEqual(dict(polar.angular), {2: (0, 0, Fraction(-8, 3))})
        self.assertEqual(
            render_polar(polar),
            "dr/dt = eps^2*(1/2*r - 3/2*r^3)\ndtheta/dt = eps^2*(-8/3*r^2)\n",
        )

        orbits = radial_orbits(polar, 0.1)
        self.assertEqual(len(orbits), 1)
        self.assertAlmostEqual(orbits[0].radius, np.sqrt(1 / 3), places=12)
        self.assertEqual(orbits[0].stability, Stability.STABLE)
        self.assertIn("# real form", derivation.rendering)

    def test_resonant_forcing_in_real_coordinates(self):
        # Setup
        res = derive(sample_system("forced_oscillator_omega2.json"), 2).result

        self.assertTrue(res.R[0].is_zero())
        self.assertEqual(res.R[1], real_second_order(res, with_forcing=True))

    def test_primary_resonance(self):
        # Setup
        res = derive(sample_system("forced_oscillator_omega1.json"), 2).result

        expected_first = QPVector(
            [
                QPPoly.zero(3, res.system.basis),
                poly(res, {(0, 0, 1): GaussianRational(Fraction(1, 2))}),
                QPPoly.zero(3, res.system.basis),
            ]
        )
        self.assertEqual(res.R[0], expected_first)
        self.assertEqual(res.R[1], real_second_order(res, with_forcing=False))

        # Fixed point of the RG equation at k = 1.8
        points = find_rg_fixed_points(res, 0.01, [[-4.3, 2.3]], parameters={"k": 1.8})
        self.assertEqual(len(points), 1)
        np.testing.assert_allclose(points[0].point, [-4.35, 2.31], atol=0.02)
        self.assertLess(points[0].residual, 1e-9)


class NormalFormTest(SimpleTestCase):
    def test_random_normal_forms_are_equivariant(self):
        for seed, nu in zip(range(12), [(1, -1), (1, 2), (1, 3), (2, -1)] * 3):
            # Setup
            system = random_system(seed, basis=FrequencyBasis(()), oscillating=False)
            F = DiagonalLinearPart(nu)

            form = normal_form(F, system, 2)
            self.assertEqual(equivariance_check(F, form.result), [], f"seed {seed}")
            self.assertTrue(form.time_independent)

    def test_autonomize_shifts_frequencies(self):
        # Setup
        basis = FrequencyBasis(())
        y1 = QPPoly.variable(2, basis, 0)
        system = PerturbedSystem(
            n=2, basis=basis, orders={1: QPVector([y1 * y1, QPPoly.zero(2, basis)])}
        )

        periodic = autonomize(DiagonalLinearPart((1, -1)), system)
        self.assertEqual(periodic.basis, FrequencyBasis((1,)))
        ((k, alpha), coeff), = periodic.g(1)[0].items()
        self.assertEqual((k, alpha, coeff), ((1,), (2, 0), 1))

    def test_violations_are_reported(self):
        # Setup
        basis = FrequencyBasis(())
        y1 = QPPoly.variable(2, basis, 0)
        system = PerturbedSystem(
            n=2, basis=basis, orders={1: QPVector([y1 * y1, QPPoly.zero(2, basis)])}
        )
        res = rg_derive(system, 1)

        violations = equivariance_check(DiagonalLinearPart((1, -1)), res)
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].alpha, (2, 0))
        with self.assertRaises(EquivarianceViolation):
            polar_reduce(res)
        with self.assertRaises(DimensionMismatch):
            equivariance_check(DiagonalLinearPart((1, -1, 2)), res)

    def test_float_eigenvalues_rejected(self):
        with self.assertRaises(InputError):
            DiagonalLinearPart((1.0, -1.0))


class CoordinateChangeTest(SimpleTestCase):
    def test_exact_inverse(self):
        inverse = invert(P)
        half = GaussianRational(Fraction(1, 2))
        self.assertEqual(inverse, [[half, GaussianRational(0, Fraction(-1, 2))], [half, GaussianRational(0, Fraction(1, 2))]])

    def test_singular_matrix(self):
        with self.assertRaises(InputError):
            invert([[GaussianRational(1), GaussianRational(2)], [GaussianRational(2), GaussianRational(4)]])

    def test_change_is_undone_by_the_inverse(self):
        for seed in range(4):
            # Setup
            system = random_system(seed)

            there = change_system(system, P)
            back = change_system(there, invert(P))
            self.assertEqual(back.orders, system.orders)
