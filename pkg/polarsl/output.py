"""
Serialization for the command-line frontend.

CSV: '.' decimal separator, '\\n' line endings, reals in 17-significant-digit
scientific notation (lossless for 64-bit floats). JSON: insertion-ordered
keys, two-space indent, trailing newline. Plots: whitespace-separated .dat
plus a gnuplot script that reads it.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np


def format_real(x: float) -> str:
    return f"{float(x):.16e}"


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_real(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def to_json(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def write_text(text: str, path: Optional[Path] = None) -> None:
    """Write to path, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def emit_plot(
    stem: Path,
    columns: Mapping[str, Sequence[float]],
    *,
    xlabel: str,
    ylabel: str,
    title: str,
) -> Tuple[Path, Path]:
    """Write stem.dat and stem.gp; the first column is the abscissa."""
    stem = Path(stem)
    dat = stem.with_suffix(".dat")
    script = stem.with_suffix(".gp")
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])

    lines = ["# " + " ".join(names)]
    lines += [" ".join(format_real(v) for v in row) for row in data]
    dat.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")

    plots = ", \\\n     ".join(
        f"'{dat.name}' using 1:{i + 2} with lines title '{name}'"
        for i, name in enumerate(names[1:])
    )
    script.write_text(
        "\n".join(
            [
                f'set title "{title}"',
                f'set xlabel "{xlabel}"',
                f'set ylabel "{ylabel}"',
                "set xrange [0:pi]",
                "set grid",
                f"plot {plots}",
                "",
            ]
        ),
        encoding="utf-8",
        newline="",
    )
    return dat, script
