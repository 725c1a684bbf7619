from ...exceptions import InputError
from ...files import SystemMode
from ...linear import exponent_collisions, linear_rg, monodromy_defect_scan
from ...reports import write_csv
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Floquet exponents of a linear periodic system and the monodromy defect over an eps grid."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_order_argument(parser)
        parser.add_argument("--eps-grid", type=float, nargs="+", default=None)
        parser.add_argument("--period", type=float, default=None, help="Needed for constant coefficients")

    def run(self, **options):
        order = self.check_order(options)
        system_file = self.load(options)
        if system_file.mode is not SystemMode.LINEAR:
            raise InputError("floquet needs a system file in linear mode")
        A = system_file.matrix_series()
        res = linear_rg(A, order)
        report = monodromy_defect_scan(A, res, options["eps_grid"], T=options["period"])
        comments = []
        if report.slope is not None:
            comments.append(f"slope = {report.slope:.17g}")
        for collision in exponent_collisions(res, report.eps):
            comments.append(
                f"exponents {collision.first} and {collision.second} collide at eps = {collision.eps:.17g}"
            )
        header = ["eps", "defect"]
        for j in range(1, A.n + 1):
            header += [f"exponent{j}_re", f"exponent{j}_im"]
        with self.output(options["out"]) as stream:
            write_csv(stream, header, report.rows(), comments)
