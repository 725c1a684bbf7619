import csv
import json
import shutil
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase


def read_report(path):
    """(comments, header, rows) of a CSV report."""
    comments, lines = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            comments.append(line[2:])
        else:
            lines.append(line)
    header, *rows = list(csv.reader(lines))
    return comments, header, rows


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)

    def sample(self, name):
        return str(settings.SAMPLE_SYSTEMS_DIR / name)

    def write_system(self, data, name="system.json"):
        path = self.tmp / name
        path.write_text(json.dumps(data))
        return str(path)

    def run_command(self, name, *args):
        out = self.tmp / f"{name}.out"
        call_command(name, *args, "--out", str(out), stdout=StringIO())
        return out

    def assertExitCode(self, code, name, *args):
        with self.assertRaises(CommandError) as raised:
            call_command(name, *args, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, code)
        return str(raised.exception)


class DeriveCommandTest(CommandTestCase):
    def test_derive_writes_json(self):
        # Setup
        render = self.tmp / "equations.txt"

        out = self.run_command(
            "derive", "--in", self.sample("forced_oscillator_omega3.json"), "--order", "2", "--render", str(render)
        )
        data = json.loads(out.read_text())
        self.assertEqual(data["mode"], "autonomous")
        self.assertEqual(data["result"]["m"], 2)
        self.assertEqual(data["result"]["names"], ["y1", "y2", "k"])
        self.assertEqual(data["result"]["R"][0], [])
        self.assertEqual(data["result"]["F"], {"nu": ["1", "-1"]})
        self.assertIn("diagonal", data)
        self.assertEqual(data["diagonal"]["F"], {"nu": ["1", "-1"]})
        self.assertIn("dr/dt = eps^2*(1/2*r - 3/2*r^3)", render.read_text())
        self.assertEqual(render.read_text(), data["rendered"])

    def test_exclude_parts_of_the_result(self):
        out = self.run_command(
            "derive", "--in", self.sample("linear_mathieu.json"), "--order", "2", "--exclude", "U"
        )
        data = json.loads(out.read_text())
        self.assertNotIn("U", data["result"])
        self.assertNotIn("F", data["result"])
        self.assertEqual(len(data["result"]["R"]), 2)
        self.assertNotIn("diagonal", data)

    def test_output_is_deterministic(self):
        # Setup
        args = ("--in", self.sample("forced_oscillator_omega2.json"), "--order", "2")

        first = self.run_command("derive", *args).read_text()
        second = self.run_command("derive", *args).read_text()
        self.assertEqual(first, second)

    def test_order_must_be_positive(self):
        self.assertExitCode(2, "derive", "--in", self.sample("forced_oscillator_omega3.json"), "--order", "0")

    def test_missing_file(self):
        self.assertExitCode(2, "derive", "--in", str(self.tmp / "missing.json"), "--order", "1")

    def test_invalid_file_reports_paths(self):
        # Setup
        path = self.write_system(
            {
                "mode": "periodic",
                "n": 1,
                "base_frequencies": ["1"],
                "orders": {"1": [{"component": 0, "coeff_re": "1/0", "alpha": [1], "k": [1]}]},
                "extra": True,
            }
        )

        message = self.assertExitCode(2, "derive", "--in", path, "--order", "1")
        self.assertIn("extra: Unknown field.", message)

    def test_gsp_files_are_not_derived(self):
        self.assertExitCode(2, "derive", "--in", self.sample("enzyme_kinetics.json"), "--order", "1")

    def test_resonant_basis_is_a_derivation_error(self):
        # Setup
        path = self.write_system(
            {
                "mode": "periodic",
                "n": 1,
                "base_frequencies": ["1", "2"],
                "orders": {"1": [{"component": 0, "coeff_re": "1", "alpha": [1], "k": [2, -1]}]},
            }
        )

        message = self.assertExitCode(3, "derive", "--in", path, "--order", "1")
        self.assertIn("(2, -1)", message)


class NumericCommandsTest(CommandTestCase):
    def test_verify_scan(self):
        out = self.run_command(
            "verify",
            "--in", self.sample("forced_oscillator_omega3.json"),
            "--order", "2",
            "--y0", "0.3", "0.2",
            "--param", "k=0.5",
            "--eps-grid", "0.04", "0.02",
            "--horizon", "1",
        )
        comments, header, rows = read_report(out)
        self.assertEqual(header, ["eps", "error"])
        self.assertEqual([float(row[0]) for row in rows], [0.04, 0.02])
        self.assertTrue(all(float(row[1]) > 0 for row in rows))
        self.assertIn("order = 2", comments)
        self.assertTrue(any(c.startswith("slope = ") for c in comments))

    def test_verify_needs_every_parameter(self):
        self.assertExitCode(
            2,
            "verify",
            "--in", self.sample("forced_oscillator_omega3.json"),
            "--order", "2",
            "--y0", "0.3", "0.2",
        )

    def test_fixed_points(self):
        out = self.run_command(
            "fixed_points",
            "--in", self.sample("forced_oscillator_omega1.json"),
            "--order", "2",
            "--eps", "0.01",
            "--param", "k=1.8",
            "--lower", "-4.5", "2.2",
            "--upper", "-4.2", "2.4",
            "--count", "2",
        )
        _, header, rows = read_report(out)
        self.assertEqual(header[:2], ["y1", "y2"])
        self.assertEqual(header[-2:], ["stability", "residual"])
        points = np.array([[float(row[0]), float(row[1])] for row in rows])
        self.assertTrue(np.any(np.all(np.abs(points - [-4.35, 2.31]) < 0.02, axis=1)))

    def test_orbits(self):
        out = self.run_command(
            "orbits", "--in", self.sample("forced_oscillator_omega3.json"), "--order", "2", "--eps", "0.1"
        )
        _, header, rows = read_report(out)
        self.assertEqual(header, ["radius", "slope", "stability"])
        self.assertEqual(len(rows), 1)
        self.assertAlmostEqual(float(rows[0][0]), np.sqrt(1 / 3), places=12)
        self.assertEqual(rows[0][2], "stable")

    def test_floquet(self):
        out = self.run_command(
            "floquet",
            "--in", self.sample("linear_mathieu.json"),
            "--order", "2",
            "--eps-grid", "0.04", "0.02", "0.01",
        )
        comments, header, rows = read_report(out)
        self.assertEqual(header, ["eps", "defect", "exponent1_re", "exponent1_im", "exponent2_re", "exponent2_im"])
        self.assertEqual(len(rows), 3)
        slope = float(next(c for c in comments if c.startswith("slope = ")).split("=")[1])
        self.assertGreater(slope, 2.6)

    def test_floquet_needs_a_linear_file(self):
        self.assertExitCode(2, "floquet", "--in", self.sample("forced_oscillator_omega3.json"), "--order", "1")


class ReductionCommandsTest(CommandTestCase):
    def test_gsp(self):
        out = self.run_command(
            "gsp", "--in", self.sample("enzyme_kinetics.json"), "--order", "2", "--eps", "0.1"
        )
        comments, header, rows = read_report(out)
        self.assertEqual(header, ["y1", "R1_y1", "h1_x1", "h1_x2", "R2_y1", "h2_x1", "h2_x2"])
        self.assertEqual(len(rows), 4)
        at_one = next(row for row in rows if float(row[0]) == 1.0)
        self.assertAlmostEqual(float(at_one[1]), -0.25, places=12)
        self.assertAlmostEqual(float(at_one[3]), 1 / 32, places=12)
        self.assertIn("fixed point (0) stable", comments)

    def test_gsp_checks_the_chart(self):
        # Setup
        path = self.write_system(
            {
                "mode": "critical_manifold",
                "n": 2,
                "chart": {
                    "variables": ["x1", "x2"],
                    "f": ["0", "x1 - x2 - x1*x2"],
                    "g1": ["-x1", "0"],
                    "chart_variables": ["y1"],
                    "U": ["y1", "y1"],
                    "samples": [[1.0]],
                },
            }
        )

        self.assertExitCode(3, "gsp", "--in", path)

    def test_phase(self):
        out = self.run_command(
            "phase", "--in", self.sample("circle_oscillator.json"), "--eps", "0.01", "--samples", "32"
        )
        comments, header, rows = read_report(out)
        self.assertEqual(header, ["t", "U_x", "U_y", "Q_x", "Q_y"])
        self.assertEqual(len(rows), 32)
        values = dict(c.split(" = ") for c in comments)
        self.assertAlmostEqual(float(values["period"]), 2 * np.pi, places=7)
        self.assertAlmostEqual(float(values["coupling"]), 1.0, places=6)
        self.assertAlmostEqual(float(values["dalpha/dt"]), 0.01, places=8)

    def test_phase_without_a_cycle(self):
        # Setup
        path = self.write_system(
            {
                "mode": "phase",
                "n": 2,
                "oscillator": {
                    "variables": ["x", "y"],
                    "f": ["-x", "-y"],
                    "g1": ["0", "0"],
                    "seed": [0.5, 0.0],
                    "period_guess": 1.0,
                },
            }
        )

        self.assertExitCode(4, "phase", "--in", path)
