import numpy as np

from ...exceptions import InputError
from ...files import SystemMode
from ...reports import write_csv
from ...slow_manifold import gsp_reduce, stability_on_manifold
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Reduces a system with a critical manifold of fixed points to its slow chart equation."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--order", type=int, default=1, choices=[1, 2])
        parser.add_argument("--eps", type=float, default=None, help="Classify fixed points at this eps")
        parser.add_argument("--alpha", type=float, nargs="+", action="append", default=None)

    def run(self, **options):
        system_file = self.load(options)
        if system_file.mode is not SystemMode.CRITICAL_MANIFOLD:
            raise InputError("gsp needs a system file in critical_manifold mode")
        block = system_file.chart_block
        chart = system_file.chart()
        samples = options["alpha"] or block.get("samples")
        if not samples:
            raise InputError("No chart points: pass --alpha or list samples in the file")
        samples = [np.asarray(alpha, dtype=float) for alpha in samples]
        chart.validate(samples)
        reduction = gsp_reduce(chart, options["order"])
        names = block["chart_variables"]
        variables = block["variables"]
        header = list(names) + [f"R1_{name}" for name in names] + [f"h1_{x}" for x in variables]
        if reduction.order == 2:
            header += [f"R2_{name}" for name in names] + [f"h2_{x}" for x in variables]
        comments = []
        if options["eps"] is not None and block.get("seeds"):
            for point in stability_on_manifold(reduction, block["seeds"], options["eps"]):
                coordinates = ", ".join("%.17g" % value for value in point.point)
                comments.append(f"fixed point ({coordinates}) {point.stability.value}")
        with self.output(options["out"]) as stream:
            write_csv(stream, header, reduction.rows(samples), comments)
