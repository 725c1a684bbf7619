from ...loading import canonical_json
from ...pipelines import derive
from ...serializers import DerivationSerializer
from ..base import EngineCommand


class Command(EngineCommand):
    help = "Derives the m-th order RG equation of a system file and writes it as JSON."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_order_argument(parser)
        parser.add_argument(
            "--render", default=None, metavar="PATH", help="Also write the equations as text ('-' for stdout)"
        )
        parser.add_argument(
            "--exclude", action="append", default=[], help="Result part to leave out (U, gauge, ...)"
        )

    def run(self, **options):
        order = self.check_order(options)
        derivation = derive(self.load(options), order)
        serializer = DerivationSerializer(
            derivation, context={"result_exclude": options["exclude"]}
        )
        with self.output(options["out"]) as stream:
            stream.write(canonical_json(serializer.data))
        if options["render"]:
            with self.output(options["render"]) as stream:
                stream.write(derivation.rendering)
