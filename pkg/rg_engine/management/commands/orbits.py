from ...autonomous import polar_reduce
from ...numerics import radial_orbits
from ...pipelines import derive
from ...reports import write_csv
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Lists the invariant circles r = r* of the polar form of a conjugate-pair RG equation."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_order_argument(parser)
        parser.add_argument("--eps", type=float, required=True)

    def run(self, **options):
        order = self.check_order(options)
        derivation = derive(self.load(options), order)
        polar = polar_reduce(derivation.conjugate_result)
        orbits = radial_orbits(polar, options["eps"])
        with self.output(options["out"]) as stream:
            write_csv(
                stream,
                ["radius", "slope", "stability"],
                [[orbit.radius, orbit.slope, orbit.stability.value] for orbit in orbits],
            )
