import json
from fractions import Fraction

from django.test import SimpleTestCase
from rest_framework import serializers

from app.factories import sample_system
from rg_engine.exceptions import InputError
from rg_engine.fields import ComplexRationalField, RationalField
from rg_engine.files import SystemMode
from rg_engine.loading import canonical_json, dump_system_file, load_system_data
from rg_engine.pipelines import derive
from rg_engine.qp import GaussianRational, ScalarMode
from rg_engine.serializers import DerivationSerializer, flatten_errors

PERIODIC = {
    "mode": "periodic",
    "n": 2,
    "base_frequencies": ["1"],
    "orders": {
        "1": [
            {"component": 0, "coeff_re": "1/2", "alpha": [0, 1], "k": [1]},
            {"component": 1, "coeff_im": "-3", "alpha": [2, 0], "k": [0]},
        ]
    },
}


def with_changes(data, **changes):
    changed = json.loads(json.dumps(data))
    changed.update(changes)
    return changed


class SystemFileSerializerTest(SimpleTestCase):
    def errors(self, data):
        with self.assertRaises(serializers.ValidationError) as raised:
            load_system_data(data if isinstance(data, str) else json.dumps(data))
        return list(flatten_errors(raised.exception.detail))

    def test_periodic_file(self):
        # Setup
        system_file = load_system_data(json.dumps(PERIODIC))
        system = system_file.system()

        self.assertEqual(system_file.mode, SystemMode.PERIODIC)
        self.assertEqual(system_file.scalar_mode, ScalarMode.EXACT)
        self.assertEqual(system.n, 2)
        self.assertEqual(system.names, ("y1", "y2"))
        self.assertEqual(system.g(1)[0].coefficient((0, 1), k=(1,)), GaussianRational(Fraction(1, 2)))
        self.assertEqual(system.g(1)[1].coefficient((2, 0)), GaussianRational(0, -3))

    def test_float_mode(self):
        # Setup
        system_file = load_system_data(json.dumps(with_changes(PERIODIC, scalar_mode="float")))
        system = system_file.system()

        self.assertFalse(system.basis.exact)
        self.assertEqual(system.g(1)[0].coefficient((0, 1), k=(1,)), 0.5 + 0j)

    def test_parameters_follow_the_state(self):
        # Setup
        system = sample_system("forced_oscillator_omega3.json").system()

        self.assertEqual(system.n, 3)
        self.assertEqual(system.n_state, 2)
        self.assertEqual(system.parameter_names, ("k",))

    def test_invalid_json(self):
        errors = self.errors("{")
        self.assertEqual(len(errors), 1)
        self.assertTrue(errors[0].startswith("file: "))

    def test_unknown_fields(self):
        # Setup
        data = with_changes(PERIODIC, extra=1)
        nested = json.loads(json.dumps(PERIODIC))
        nested["orders"]["1"][1]["bogus"] = 0

        self.assertEqual(self.errors(data), ["extra: Unknown field."])
        self.assertEqual(self.errors(nested), ["orders.1[1].bogus: Unknown field."])

    def test_term_shapes(self):
        # Setup
        component = json.loads(json.dumps(PERIODIC))
        component["orders"]["1"][0]["component"] = 2
        alpha = json.loads(json.dumps(PERIODIC))
        alpha["orders"]["1"][1]["alpha"] = [2]
        frequencies = json.loads(json.dumps(PERIODIC))
        frequencies["orders"]["1"][0]["k"] = [1, 0]

        self.assertEqual(self.errors(component), ["orders.1[0]: component must be below 2."])
        self.assertEqual(self.errors(alpha), ["orders.1[1]: alpha must have 2 entries."])
        self.assertEqual(self.errors(frequencies), ["orders.1[0]: k must have 1 entries."])

    def test_state_dimension_is_positive(self):
        self.assertIn(
            "n: Ensure this value is greater than or equal to 1.", self.errors(with_changes(PERIODIC, n=0))
        )

    def test_order_keys(self):
        # Setup
        data = with_changes(PERIODIC, orders={"0": PERIODIC["orders"]["1"]})

        self.assertEqual(self.errors(data), ["orders.0: orders keys must be positive integers."])

    def test_zero_denominator(self):
        # Setup
        data = json.loads(json.dumps(PERIODIC))
        data["orders"]["1"][0]["coeff_re"] = "1/0"

        self.assertEqual(
            self.errors(data), ["orders.1[0].coeff_re: The denominator of '1/0' is zero."]
        )

    def test_blocks_required_by_the_mode(self):
        # Setup
        data = with_changes(PERIODIC, mode="autonomous")
        chart = {
            "mode": "critical_manifold",
            "n": 2,
            "chart": {
                "variables": ["x1", "x2"],
                "f": ["0"],
                "g1": ["0", "0"],
                "chart_variables": ["y1"],
                "U": ["y1", "0"],
            },
        }

        self.assertEqual(self.errors(data), ["F: Required in this mode."])
        self.assertEqual(self.errors(chart), ["chart.f: Expected 2 expressions."])
        self.assertEqual(
            self.errors(with_changes(PERIODIC, coordinates=[["1", "0"], ["0", "1"]])),
            ["coordinates: Only autonomous systems take coordinates."],
        )


class DumpTest(SimpleTestCase):
    def test_dump_is_idempotent(self):
        for name in (
            "forced_oscillator_omega3.json",
            "linear_mathieu.json",
            "enzyme_kinetics.json",
            "circle_oscillator.json",
        ):
            # Setup
            original = sample_system(name)

            text = dump_system_file(original)
            reloaded = load_system_data(text, name)
            self.assertEqual(dump_system_file(reloaded), text, name)
            self.assertEqual(reloaded.mode, original.mode, name)

    def test_reloaded_system_is_unchanged(self):
        # Setup
        original = sample_system("forced_oscillator_omega2.json")

        reloaded = load_system_data(dump_system_file(original))
        self.assertEqual(reloaded.system().orders, original.system().orders)
        self.assertEqual(reloaded.coordinates, original.coordinates)


class FieldsTest(SimpleTestCase):
    def test_rational_field(self):
        # Setup
        field = RationalField()

        self.assertEqual(field.run_validation("3/4"), Fraction(3, 4))
        self.assertEqual(field.run_validation("0.25"), Fraction(1, 4))
        self.assertEqual(field.run_validation(-2), Fraction(-2))
        self.assertEqual(field.to_representation(Fraction(6, 8)), "3/4")
        for value in (True, 0.5, "x/2", "1/0"):
            with self.assertRaises(serializers.ValidationError):
                field.run_validation(value)

    def test_complex_rational_field(self):
        # Setup
        field = ComplexRationalField()

        self.assertEqual(
            field.run_validation({"re": "1/2", "im": "-1"}), GaussianRational(Fraction(1, 2), -1)
        )
        self.assertEqual(field.run_validation("2"), GaussianRational(2))
        self.assertEqual(field.to_representation(GaussianRational(0, Fraction(1, 3))), {"re": "0", "im": "1/3"})
        with self.assertRaises(serializers.ValidationError):
            field.run_validation({"re": "1", "j": "2"})


class DerivationSerializerTest(SimpleTestCase):
    def test_primary_resonance(self):
        # Setup
        derivation = derive(sample_system("forced_oscillator_omega1.json"), 2)

        data = DerivationSerializer(derivation, context={"result_exclude": ["U"]}).data
        result = data["result"]
        self.assertEqual(result["m"], 2)
        self.assertEqual(result["base_frequencies"], ["1"])
        self.assertNotIn("U", result)
        self.assertNotIn("gauge", result)
        self.assertEqual(result["F"], {"nu": ["1", "-1"]})
        (term,) = result["R"][0]
        self.assertEqual(
            (term["component"], term["coeff_re"], term["coeff_im"], term["alpha"]),
            (1, "1/2", "0", [0, 0, 1]),
        )
        self.assertEqual(data["rendered"], derivation.rendering)
        self.assertTrue(canonical_json(data).endswith("}\n"))

    def test_periodic_results_have_no_linear_part(self):
        # Setup
        derivation = derive(load_system_data(json.dumps(PERIODIC)), 1)

        result = DerivationSerializer(derivation).data["result"]
        self.assertEqual(result["m"], 1)
        self.assertNotIn("F", result)

    def test_flatten_errors(self):
        # Setup
        detail = {"non_field_errors": ["bad"], "a": {"b": [{}, {"c": ["worse"]}]}}

        self.assertEqual(list(flatten_errors(detail)), ["file: bad", "a.b[1].c: worse"])

    def test_unknown_result_parts(self):
        # Setup
        derivation = derive(sample_system("linear_mathieu.json"), 1)

        with self.assertRaises(InputError):
            DerivationSerializer(derivation, context={"result_exclude": ["gauge"]}).data
