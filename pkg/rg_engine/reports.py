"""CSV output: a header row, then one row per record, floats with 17 significant digits."""
import csv
from numbers import Integral, Real
from typing import Iterable, Sequence, TextIO


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        return "%.17g" % float(value)
    return str(value)


def write_csv(
    stream: "TextIO",
    header: "Sequence[str]",
    rows: "Iterable[Sequence]",
    comments: "Sequence[str]" = (),
) -> None:
    """Comment lines start with ``#`` and precede the header."""
    for comment in comments:
        stream.write(f"# {comment}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
