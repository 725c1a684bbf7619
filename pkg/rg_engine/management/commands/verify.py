from ...core import RGResult
from ...exceptions import InputError
from ...numerics import error_scan, long_interval_check
from ...pipelines import derive, initial_state
from ...reports import write_csv
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Measures the RG approximation error against direct integration over an eps grid."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_order_argument(parser)
        self.add_parameter_argument(parser)
        parser.add_argument("--y0", type=float, nargs="+", required=True, help="RG initial state")
        parser.add_argument("--eps-grid", type=float, nargs="+", default=None)
        parser.add_argument("--horizon", type=float, default=None, help="T, integrate up to T/eps")
        parser.add_argument(
            "--long-interval",
            type=float,
            default=None,
            metavar="EPS",
            help="Check the error over T/eps^2 at this eps instead of scanning",
        )
        parser.add_argument("--transform-order", type=int, default=1)

    def run(self, **options):
        order = self.check_order(options)
        derivation = derive(self.load(options), order)
        res = derivation.result
        if not isinstance(res, RGResult):
            raise InputError("verify needs a periodic or autonomous system; use floquet for linear ones")
        y0 = initial_state(res, options["y0"], self.parameters(options))
        with self.output(options["out"]) as stream:
            if options["long_interval"] is not None:
                report = long_interval_check(
                    res.system,
                    res,
                    y0,
                    options["long_interval"],
                    T=options["horizon"],
                    transform_order=options["transform_order"],
                )
                write_csv(
                    stream,
                    ["eps", "horizon", "transform_order", "sup_error", "ratio"],
                    [[report.eps, report.horizon, report.transform_order, report.sup_error, report.ratio]],
                )
                return
            report = error_scan(res.system, res, y0, T=options["horizon"], eps_grid=options["eps_grid"])
            comments = [f"order = {report.order}", f"horizon = {report.horizon:.17g}"]
            if report.slope is not None:
                comments.append(f"slope = {report.slope:.17g}")
            comments.extend(f"dropped eps = {eps:.17g}: {reason}" for eps, reason in report.dropped)
            write_csv(stream, ["eps", "error"], report.rows(), comments)
