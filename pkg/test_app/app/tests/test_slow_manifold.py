import numpy as np
from django.test import SimpleTestCase, override_settings

from app.factories import sample_system
from rg_engine.exceptions import InputError, SplitError
from rg_engine.numerics import IntegratorConfig, Stability, fit_slope
from rg_engine.slow_manifold import (
    gsp_reduce,
    invariance_residual,
    manifold_graph,
    phase_drift,
    phase_reduce,
    stability_on_manifold,
    symbolic_chart,
    symbolic_oscillator,
    tangent_stable_split,
)
from rg_engine.slow_manifold.gsp import CACHE_SIZE

ENZYME = {
    "variables": ["x1", "x2"],
    "f": ["0", "x1 - x2 - x1*x2"],
    "g1": ["-x1 + c*x2 + x1*x2", "0"],
    "parameters": {"c": 0.5},
    "delta": 0.5,
}

RING = ["x*(1 - x**2 - y**2) - y", "y*(1 - x**2 - y**2) + x"]


class TangentStableSplitTest(SimpleTestCase):
    def test_decomposition(self):
        # Setup
        A = np.array([[0.0, 0.0], [0.5, -2.0]])
        DU = np.array([1.0, 0.25])
        g = np.array([-0.25, 0.0])

        split = tangent_stable_split(A, DU)
        np.testing.assert_allclose(split.chart_component(g), [-0.25])
        np.testing.assert_allclose(split.stable_component(g), [0.0, -1 / 32], atol=1e-15)
        np.testing.assert_allclose(split.tangent_projection(g) + split.stable_projection(g), g)

    def test_degenerate_splits(self):
        with self.assertRaises(SplitError):
            tangent_stable_split(np.zeros((2, 2)), np.array([1.0, 0.0]))
        # tangent direction inside range(A)
        with self.assertRaises(SplitError):
            tangent_stable_split(np.array([[0.0, 0.0], [0.0, -1.0]]), np.array([0.0, 1.0]))
        with self.assertRaises(InputError):
            tangent_stable_split(np.zeros((3, 3)), np.array([1.0, 0.0]))


class SlowReductionTest(SimpleTestCase):
    def setUp(self):
        self.file = sample_system("enzyme_kinetics.json")
        self.chart = self.file.chart()

    def test_first_order_at_the_sample_point(self):
        reduction = gsp_reduce(self.chart, 1)
        np.testing.assert_allclose(reduction.R1([1.0]), [-0.25], atol=1e-14)
        np.testing.assert_allclose(reduction.h1([1.0]), [0.0, 1 / 32], atol=1e-14)

    def test_reduced_flow_over_the_chart(self):
        # Setup
        reduction = gsp_reduce(self.chart, 1)
        c = 0.5

        for y in (0.0, 0.5, 2.0):
            np.testing.assert_allclose(reduction.R1([y]), [-(1 - c) * y / (1 + y)], atol=1e-14)
        rows = list(reduction.rows([[0.5], [1.0]]))
        self.assertEqual(len(rows[0]), 4)
        with self.assertRaises(InputError):
            reduction.R2([1.0])

    def test_flow_does_not_depend_on_the_chart(self):
        # Setup
        stretched = symbolic_chart(
            chart_variables=["s"], U=["2*s", "2*s/(1 + 2*s)"], **ENZYME
        )
        original = gsp_reduce(self.chart, 1)
        reparametrized = gsp_reduce(stretched, 1)

        np.testing.assert_allclose(
            stretched.tangent([0.5]) @ reparametrized.R1([0.5]),
            self.chart.tangent([1.0]) @ original.R1([1.0]),
            atol=1e-14,
        )
        np.testing.assert_allclose(reparametrized.h1([0.5]), original.h1([1.0]), atol=1e-14)

    def test_invariance_residual_order(self):
        eps_grid = [0.1, 0.05, 0.025]
        for order, lower in ((1, 1.8), (2, 2.7)):
            reduction = gsp_reduce(self.chart, order)
            residuals = [invariance_residual(self.chart, reduction, [1.0], eps) for eps in eps_grid]
            self.assertTrue(all(b < a for a, b in zip(residuals, residuals[1:])), f"order {order}")
            self.assertGreater(fit_slope(eps_grid, residuals), lower, f"order {order}")

    def test_graph_at_zero_eps_is_the_chart(self):
        reduction = gsp_reduce(self.chart, 2)
        np.testing.assert_allclose(manifold_graph(self.chart, reduction, 0.0)([1.0]), [1.0, 0.5])
        np.testing.assert_allclose(
            manifold_graph(self.chart, reduction, 0.1)([1.0]),
            np.array([1.0, 0.5]) + 0.1 * reduction.h1([1.0]) + 0.01 * reduction.h2([1.0]),
        )

    def test_stable_point_at_the_origin(self):
        reduction = gsp_reduce(self.chart, 1)
        points = stability_on_manifold(reduction, self.file.chart_block["seeds"], 0.1)
        self.assertEqual(len(points), 1)
        self.assertAlmostEqual(points[0].point[0], 0.0, places=10)
        self.assertEqual(points[0].stability, Stability.STABLE)

    def test_point_cache_is_bounded(self):
        # Setup
        reduction = gsp_reduce(self.chart, 1)

        for y in np.linspace(0.0, 2.0, CACHE_SIZE + 50):
            reduction.R1([y])
        self.assertEqual(reduction._terms.cache_info().currsize, CACHE_SIZE)
        np.testing.assert_allclose(reduction.R1([1.0]), [-0.25], atol=1e-14)

    def test_orders_are_limited(self):
        with self.assertRaises(InputError):
            gsp_reduce(self.chart, 3)


class ChartValidationTest(SimpleTestCase):
    def test_sample_chart_is_normally_attracting(self):
        # Setup
        file = sample_system("enzyme_kinetics.json")

        file.chart().validate(file.chart_block["samples"])

    def test_not_a_manifold_of_fixed_points(self):
        # Setup
        chart = symbolic_chart(chart_variables=["y1"], U=["y1", "y1"], **ENZYME)

        with self.assertRaises(SplitError):
            chart.validate([[1.0]])

    def test_spectral_gap(self):
        # Setup
        settings = dict(ENZYME, delta=2.0)
        chart = symbolic_chart(chart_variables=["y1"], U=["y1", "y1/(1 + y1)"], **settings)

        # Df(U(0)) has the eigenvalue -1
        with self.assertRaises(SplitError):
            chart.validate([[0.0]])
        chart.validate([[2.0]])

    def test_unknown_symbols(self):
        with self.assertRaises(InputError):
            symbolic_chart(chart_variables=["y1"], U=["y1", "z/(1 + y1)"], **ENZYME)


class PhaseReductionTest(SimpleTestCase):
    def test_circle_couplings(self):
        # Setup
        forcings = {
            "tangential": (["-y/sqrt(x**2 + y**2)", "x/sqrt(x**2 + y**2)"], 1.0),
            "radial": (["x/sqrt(x**2 + y**2)", "y/sqrt(x**2 + y**2)"], 0.0),
            "along the flow": (RING, 1.0),
        }

        for name, (g1, coupling) in forcings.items():
            system = symbolic_oscillator(["x", "y"], RING, g1)
            model = phase_reduce(system, [0.5, 0.0], 6.28, samples=256)
            self.assertAlmostEqual(model.period, 2 * np.pi, places=7, msg=name)
            self.assertAlmostEqual(model.coupling, coupling, places=6, msg=name)
            self.assertLess(model.normalization_residual, 1e-6, name)

    def test_orbit_and_multipliers(self):
        # Setup
        system = sample_system("circle_oscillator.json").oscillator()

        model = phase_reduce(system, [0.5, 0.0], 6.28, samples=64)
        np.testing.assert_allclose(np.linalg.norm(model.orbit, axis=1), 1.0, atol=1e-7)
        multipliers = sorted(np.abs(model.multipliers))
        self.assertAlmostEqual(multipliers[1], 1.0, places=6)
        self.assertAlmostEqual(multipliers[0], np.exp(-4 * np.pi), places=6)
        self.assertEqual(len(list(model.rows())), 64)
        self.assertAlmostEqual(model.drift(0.01), 0.01, places=7)

    def test_drift_matches_the_coupling(self):
        # Setup
        system = sample_system("circle_oscillator.json").oscillator()

        drift = phase_drift(system, [0.5, 0.0], 0.01, 6.28, periods=20)
        self.assertAlmostEqual(drift.unperturbed_period, 2 * np.pi, places=6)
        self.assertAlmostEqual(drift.coupling_estimate, 1.0, places=4)

    def test_invalid_requests(self):
        # Setup
        system = sample_system("circle_oscillator.json").oscillator()

        with self.assertRaises(InputError):
            phase_drift(system, [0.5, 0.0], 0.0, 6.28)
        with self.assertRaises(InputError):
            phase_reduce(system, [0.5, 0.0], -1.0)
        with self.assertRaises(InputError):
            symbolic_oscillator(["x", "y"], RING[:1], RING)

    def test_integrator_follows_the_settings(self):
        # Setup
        system = sample_system("circle_oscillator.json").oscillator()
        rk45 = IntegratorConfig(method="rk45", rtol=1e-10, atol=1e-12)

        model = phase_reduce(system, [0.5, 0.0], 6.28, samples=32, config=rk45)
        self.assertAlmostEqual(model.period, 2 * np.pi, places=5)
        self.assertAlmostEqual(model.coupling, 1.0, places=4)
        with override_settings(RG_ENGINE={"PHASE_METHOD": "rk4"}):
            with self.assertRaises(InputError):
                phase_reduce(system, [0.5, 0.0], 6.28)
