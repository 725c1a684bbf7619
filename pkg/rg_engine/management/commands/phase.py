from ...exceptions import InputError
from ...files import SystemMode
from ...reports import write_csv
from ...slow_manifold import phase_reduce
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Phase reduction of a perturbed oscillator with a stable limit cycle."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--eps", type=float, default=None, help="Report dalpha/dt at this eps")
        parser.add_argument("--samples", type=int, default=512, help="Points per period")

    def run(self, **options):
        system_file = self.load(options)
        if system_file.mode is not SystemMode.PHASE:
            raise InputError("phase needs a system file in phase mode")
        block = system_file.oscillator_block
        model = phase_reduce(
            system_file.oscillator(),
            block["seed"],
            block["period_guess"],
            samples=options["samples"],
        )
        comments = [
            f"period = {model.period:.17g}",
            f"coupling = {model.coupling:.17g}",
            f"normalization_residual = {model.normalization_residual:.17g}",
        ]
        if options["eps"] is not None:
            comments.append(f"dalpha/dt = {model.drift(options['eps']):.17g}")
        variables = block["variables"]
        header = ["t"] + [f"U_{x}" for x in variables] + [f"Q_{x}" for x in variables]
        with self.output(options["out"]) as stream:
            write_csv(stream, header, model.rows(), comments)
