"""CSV emission helpers. Floats are written with ``repr`` so files
round-trip exactly."""

from __future__ import annotations

import csv
import io
import math
import sys
from pathlib import Path


def fmt(v) -> str:
    if isinstance(v, float) or hasattr(v, "dtype"):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


def write_rows(dest, header, rows, footer=()):
    """Write ``header`` + ``rows`` (+ two-column ``footer`` rows) to a path,
    an open text stream, or stdout when ``dest`` is None."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    for row in footer:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if dest is None:
        sys.stdout.write(text)
    elif hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).parent.mkdir(parents=True, exist_ok=True)
        Path(dest).write_text(text, encoding="utf-8")
    return text


def read_rows(path):
    """Return ``(header, rows)`` with numeric cells converted to float."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[_num(c) for c in row] for row in reader]
    return header, rows


def _num(cell):
    try:
        return float(cell)
    except ValueError:
        return cell
