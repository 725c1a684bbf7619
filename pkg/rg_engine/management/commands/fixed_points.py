from ...core import RGResult
from ...exceptions import InputError
from ...numerics import find_rg_fixed_points, seed_grid
from ...pipelines import derive
from ...reports import write_csv
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Finds fixed points of the RG equation by Newton iteration from a grid of seeds."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_order_argument(parser)
        self.add_parameter_argument(parser)
        parser.add_argument("--eps", type=float, required=True)
        parser.add_argument("--lower", type=float, nargs="+", default=None)
        parser.add_argument("--upper", type=float, nargs="+", default=None)
        parser.add_argument("--count", type=int, default=7, help="Seeds per axis")

    def run(self, **options):
        order = self.check_order(options)
        res = derive(self.load(options), order).result
        if not isinstance(res, RGResult):
            raise InputError("fixed-points needs a periodic or autonomous system")
        n = res.system.n_state
        lower = options["lower"] or [-6.0] * n
        upper = options["upper"] or [6.0] * n
        if len(lower) != n or len(upper) != n:
            raise InputError(f"--lower and --upper need {n} values")
        points = find_rg_fixed_points(
            res,
            options["eps"],
            seed_grid(lower, upper, options["count"]),
            parameters=self.parameters(options),
        )
        names = res.system.names[:n]
        header = list(names)
        for j in range(1, n + 1):
            header += [f"eig{j}_re", f"eig{j}_im"]
        header += ["stability", "residual"]
        rows = []
        for point in sorted(points, key=lambda p: tuple(p.point)):
            row = list(point.point)
            for value in point.eigenvalues:
                row += [value.real, value.imag]
            rows.append(row + [point.stability.value, point.residual])
        with self.output(options["out"]) as stream:
            write_csv(stream, header, rows)
