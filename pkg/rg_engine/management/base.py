import contextlib

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from ..exceptions import RGEngineError
from ..files import SystemFile
from ..loading import parse_system_file
from ..pipelines import parse_assignments
from ..serializers import flatten_errors


class EngineCommand(BaseCommand):
    """Reads ``--in``, runs :meth:`run` and maps engine errors to exit codes."""

    requires_system_checks = []
    requires_migrations_checks = False

    def add_arguments(self, parser):
        parser.add_argument("--in", dest="input", required=True, help="System file (JSON)")
        parser.add_argument("--out", default=None, help="Output path, stdout when omitted")

    def add_order_argument(self, parser, required=True):
        parser.add_argument("--order", type=int, required=required, help="RG order m >= 1")

    def add_parameter_argument(self, parser):
        parser.add_argument(
            "--param",
            action="append",
            default=[],
            metavar="NAME=VALUE",
            help="Value of a declared parameter, repeatable",
        )

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except serializers.ValidationError as exc:
            raise CommandError("\n".join(flatten_errors(exc.detail)), returncode=2)
        except RGEngineError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code)
        except OSError as exc:
            raise CommandError(str(exc), returncode=2)

    def run(self, **options):
        raise NotImplementedError

    def load(self, options) -> "SystemFile":
        return parse_system_file(options["input"])

    def check_order(self, options) -> int:
        order = options.get("order")
        if order is None or order < 1:
            raise CommandError("--order must be a positive integer", returncode=2)
        return order

    def parameters(self, options):
        return parse_assignments(options.get("param", []))

    @contextlib.contextmanager
    def output(self, path):
        if path is None or path == "-":
            yield self.stdout
        else:
            with open(path, "w", newline="") as stream:
                yield stream
