"""Small CSV helpers shared by the exporters."""
import csv
import io
import sys
from contextlib import contextmanager


def fmt(value):
    if isinstance(value, float):
        return format(value, ".15g")
    return str(value)


@contextmanager
def _sink(dest):
    if dest is None or dest == "-":
        yield sys.stdout
    elif isinstance(dest, io.TextIOBase) or hasattr(dest, "write"):
        yield dest
    else:
        with open(dest, "w", newline="") as fh:
            yield fh


def write_csv(header, rows, dest=None):
    """Write a header row and data rows; ``dest`` is a path, a file or stdout."""
    with _sink(dest) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
