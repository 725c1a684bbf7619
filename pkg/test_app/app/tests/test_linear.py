from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from scipy.linalg import expm

from app.factories import sample_system
from rg_engine.core import rg_derive
from rg_engine.exceptions import DimensionMismatch, InputError
from rg_engine.linear import (
    MatrixFourierSeries,
    alpha_periodicity,
    alpha_t,
    exponent_collisions,
    floquet_exponents,
    linear_embedding,
    linear_rg,
    linear_slice,
    monodromy_defect_scan,
    monodromy_numeric,
)
from rg_engine.qp import FrequencyBasis, GaussianRational, QPPoly


def entry(basis, terms):
    """A Fourier series from {k: coefficient}."""
    return QPPoly(0, basis, [(((k,), ()), GaussianRational(c)) for k, c in terms.items()])


class LinearRGTest(SimpleTestCase):
    def setUp(self):
        self.A = sample_system("linear_mathieu.json").matrix_series()

    def test_matches_the_nonlinear_derivation(self):
        res = linear_rg(self.A, 3)
        R, U = linear_slice(rg_derive(linear_embedding(self.A), 3))
        self.assertEqual(res.R, R)
        self.assertEqual(res.U, U)

    def test_first_order_is_the_average(self):
        # Setup
        res = linear_rg(self.A, 1)
        basis = self.A.basis

        zero = QPPoly.zero(0, basis)
        self.assertEqual(res.R[0], ((zero, entry(basis, {0: 1})), (entry(basis, {0: -1}), zero)))
        np.testing.assert_allclose(
            np.sort(floquet_exponents(res, 0.1).imag), [-0.1, 0.1], atol=1e-14
        )

    def test_monodromy_defect_slope(self):
        res = linear_rg(self.A, 2)
        report = monodromy_defect_scan(self.A, res, eps_grid=[0.04, 0.02, 0.01])
        self.assertGreater(report.slope, 2.6)
        self.assertEqual(len(list(report.rows())), 3)
        self.assertLess(alpha_periodicity(res, 0.04, np.linspace(0.0, 6.0, 7)), 1e-12)

    def test_collisions(self):
        # Setup
        basis = FrequencyBasis((1,))
        zero = QPPoly.zero(0, basis)
        # nilpotent R_1: a double zero exponent
        A = MatrixFourierSeries(
            n=2,
            basis=basis,
            orders={
                1: ((zero, entry(basis, {0: 1})), (zero, zero)),
            },
        )

        res = linear_rg(A, 1)
        collisions = exponent_collisions(res, [0.1, 0.05])
        self.assertEqual([c.eps for c in collisions], [0.1, 0.05])
        self.assertEqual(exponent_collisions(linear_rg(self.A, 1), [0.1]), [])

    def test_invalid_series(self):
        # Setup
        basis = FrequencyBasis((1, Fraction(7, 2)))

        with self.assertRaises(InputError):
            MatrixFourierSeries(n=1, basis=basis, orders={})
        with self.assertRaises(DimensionMismatch):
            MatrixFourierSeries(
                n=2, basis=FrequencyBasis((1,)), orders={1: ((QPPoly.zero(0, FrequencyBasis((1,))),),)}
            )
        with self.assertRaises(DimensionMismatch):
            linear_rg(self.A, 0)


class MonodromyTest(SimpleTestCase):
    def test_constant_coefficients(self):
        # Setup
        basis = FrequencyBasis(())
        zero = QPPoly.zero(0, basis)
        one = QPPoly.constant(0, basis, GaussianRational(1))
        A = MatrixFourierSeries(n=2, basis=basis, orders={1: ((zero, one), (-one, zero))})
        generator = np.array([[0.0, 1.0], [-1.0, 0.0]])

        with self.assertRaises(InputError):
            monodromy_numeric(A, 0.1)
        np.testing.assert_allclose(
            monodromy_numeric(A, 0.1, T=2 * np.pi), expm(0.1 * 2 * np.pi * generator), atol=1e-8
        )
        res = linear_rg(A, 2)
        np.testing.assert_allclose(alpha_t(res, 1.3, 0.1), np.eye(2), atol=1e-15)

    def test_volume_is_preserved(self):
        monodromy = monodromy_numeric(sample_system("linear_mathieu.json").matrix_series(), 0.1)
        self.assertAlmostEqual(abs(np.linalg.det(monodromy)), 1.0, places=8)
