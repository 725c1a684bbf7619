from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, override_settings

from app.factories import sample_system
from rg_engine.core import PerturbedSystem, rg_derive
from rg_engine.exceptions import InputError, NewtonDivergence, TrajectoryEscape
from rg_engine.numerics import (
    IntegratorConfig,
    IntegratorMethod,
    NumericField,
    Stability,
    classify,
    error_scan,
    find_fixed_points,
    fit_slope,
    integrate,
    long_interval_check,
    newton,
    orbit_tracking,
    scipy_method,
    seed_grid,
)
from rg_engine.pipelines import derive, initial_state, parse_assignments
from rg_engine.qp import FrequencyBasis, GaussianRational, QPPoly, QPVector


class IntegrateTest(SimpleTestCase):
    def test_strategies_agree_on_decay(self):
        # Setup
        rk4 = IntegratorConfig(method="rk4", step=1e-3)
        rk45 = IntegratorConfig(method=IntegratorMethod.RK45)
        dop853 = IntegratorConfig(method="dop853")

        for config in (rk4, rk45, dop853):
            trajectory = integrate(lambda t, x: -x, np.array([1.0]), (0.0, 1.0), config)
            self.assertAlmostEqual(trajectory.final[0], np.exp(-1.0), places=8)
            self.assertAlmostEqual(trajectory(0.5)[0], np.exp(-0.5), places=7)

    def test_complex_states_round_trip(self):
        trajectory = integrate(lambda t, x: 1j * x, np.array([1.0 + 0j]), (0.0, np.pi))
        self.assertTrue(trajectory.complex_state)
        self.assertAlmostEqual(trajectory.final[0], -1.0 + 0j, places=7)

    def test_escape_is_reported(self):
        for method in ("rk4", "rk45", "dop853"):
            with self.assertRaises(TrajectoryEscape):
                integrate(
                    lambda t, x: x**2,
                    np.array([1.0]),
                    (0.0, 2.0),
                    IntegratorConfig(method=method, step=1e-3),
                    escape_radius=1e3,
                )

    def test_invalid_config(self):
        with self.assertRaises(InputError):
            IntegratorConfig(rtol=0)
        with self.assertRaises(ValueError):
            IntegratorConfig(method="euler")

    def test_adaptive_scipy_methods(self):
        self.assertEqual(scipy_method(IntegratorMethod.RK45), "RK45")
        self.assertEqual(scipy_method(IntegratorMethod.DOP853), "DOP853")
        with self.assertRaises(InputError):
            scipy_method(IntegratorMethod.RK4)

    @override_settings(RG_ENGINE={"INTEGRATOR": {"METHOD": "rk4", "STEP": 0.5}})
    def test_config_from_settings(self):
        config = IntegratorConfig.from_settings(atol=1e-6)
        self.assertEqual(config.method, IntegratorMethod.RK4)
        self.assertEqual(config.step, 0.5)
        self.assertEqual(config.atol, 1e-6)
        self.assertEqual(config.rtol, 1e-9)


class FixedPointTest(SimpleTestCase):
    def setUp(self):
        # x' = x^2 - 2 on the line
        self.field = NumericField(
            n=1,
            value=lambda x: x**2 - 2.0,
            jacobian=lambda x: np.array([[2.0 * x[0]]]),
        )

    def test_newton_and_stability(self):
        point, residual, _ = newton(self.field, [1.0])
        self.assertAlmostEqual(point[0], np.sqrt(2.0), places=12)
        self.assertLess(residual, 1e-12)

        points = find_fixed_points(self.field, [[1.0], [1.5], [-1.0]])
        self.assertEqual(len(points), 2)
        by_sign = {np.sign(p.point[0]): p for p in points}
        self.assertEqual(by_sign[1.0].stability, Stability.UNSTABLE)
        self.assertEqual(by_sign[-1.0].stability, Stability.STABLE)

    def test_failing_seeds_are_skipped(self):
        # Setup
        field = NumericField(n=1, value=lambda x: x**2 + 1.0, jacobian=lambda x: np.array([[2.0 * x[0]]]))

        with self.assertRaises(NewtonDivergence):
            newton(field, [0.0])
        self.assertEqual(find_fixed_points(field, [[0.0], [0.5]]), [])

    def test_classify(self):
        self.assertEqual(classify([-1.0, -2.0 + 1j]), Stability.STABLE)
        self.assertEqual(classify([-1.0, 0.5]), Stability.UNSTABLE)
        self.assertEqual(classify([0.0, -1.0]), Stability.NON_HYPERBOLIC)

    def test_seed_grid(self):
        grid = seed_grid([0.0, -1.0], [1.0, 1.0], 3)
        self.assertEqual(grid.shape, (9, 2))
        self.assertEqual(list(grid[0]), [0.0, -1.0])
        self.assertEqual(list(grid[-1]), [1.0, 1.0])


class ApproximationErrorTest(SimpleTestCase):
    def setUp(self):
        self.res = derive(sample_system("forced_oscillator_omega3.json"), 2).result
        self.y0 = initial_state(self.res, [0.3, 0.2], parse_assignments(["k=0.5"]))

    def test_error_scales_with_the_order(self):
        report = error_scan(self.res.system, self.res, self.y0, T=2.0, eps_grid=[0.04, 0.02, 0.01])
        self.assertEqual(len(report.errors), 3)
        self.assertEqual(report.dropped, [])
        self.assertTrue(all(b < a for a, b in zip(report.errors, report.errors[1:])))
        self.assertGreater(report.slope, 1.7)

    def test_long_interval_error_is_first_order(self):
        large = long_interval_check(self.res.system, self.res, self.y0, 0.1, T=1.0)
        small = long_interval_check(self.res.system, self.res, self.y0, 0.05, T=1.0)
        self.assertAlmostEqual(small.horizon, 400.0)
        self.assertLess(large.ratio, 10.0)
        self.assertLess(small.ratio, 2 * large.ratio)

    def test_scan_grid_is_validated(self):
        with self.assertRaises(InputError):
            error_scan(self.res.system, self.res, self.y0, eps_grid=[0.01, 0.02])
        with self.assertRaises(InputError):
            long_interval_check(self.res.system, self.res, self.y0, 0.1, transform_order=3)

    def test_fit_slope(self):
        eps = [0.04, 0.02, 0.01]
        self.assertAlmostEqual(fit_slope(eps, [e**3 for e in eps]), 3.0, places=10)
        self.assertIsNone(fit_slope([0.1], [0.2]))

    def test_initial_state_checks_parameters(self):
        with self.assertRaises(InputError):
            initial_state(self.res, [0.3, 0.2], {})
        with self.assertRaises(InputError):
            initial_state(self.res, [0.3], {"k": 1.0})
        with self.assertRaises(InputError):
            parse_assignments(["k"])


class OrbitTrackingTest(SimpleTestCase):
    def test_exact_solution_stays_near_the_fixed_point_image(self):
        # Setup
        basis = FrequencyBasis((1,))
        half = GaussianRational(Fraction(1, 2))
        # dx/dt = eps x cos t
        g1 = QPPoly(1, basis, [(((1,), (1,)), half), (((-1,), (1,)), half)])
        system = PerturbedSystem(n=1, basis=basis, orders={1: QPVector([g1])})
        res = rg_derive(system, 1)

        self.assertTrue(res.R[0].is_zero())
        reports = [orbit_tracking(system, res, eps, [[0.5]], T=2.0) for eps in (0.1, 0.05)]
        for report in reports:
            self.assertLess(report.max_distance, report.eps**2)
        self.assertLess(reports[1].max_distance, reports[0].max_distance)
        self.assertAlmostEqual(reports[1].horizon, 40.0)
