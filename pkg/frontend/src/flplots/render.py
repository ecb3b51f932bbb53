"""Chart construction and atomic PNG output for run-telemetry CSVs.

The simulator writes one CSV row per training round.  This module reads
those files — and only those files; it has no other coupling to the
simulator — and draws line charts with one curve per input CSV.
"""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from matplotlib.figure import Figure

#: Column layout of a run-telemetry CSV, in file order.
EXPECTED_COLUMNS = (
    "round",
    "selected_ids",
    "t_down_s",
    "t_round_s",
    "flight_j_cum",
    "dissem_j_cum",
    "total_j_cum",
    "test_accuracy",
    "test_loss",
)

#: Chart kind -> (column plotted on the y axis, y-axis label).
KINDS = {
    "accuracy": ("test_accuracy", "test accuracy"),
    "energy": ("total_j_cum", "cumulative UAV energy (J)"),
}


class SchemaError(ValueError):
    """An input CSV does not have the expected telemetry columns."""


@dataclass(frozen=True)
class PlotJob:
    """One chart: labelled input CSVs, an output path, and what to plot.

    Attributes:
        kind: "accuracy" or "energy".
        inputs: (legend label, CSV path) pairs, one curve each.
        out_path: destination PNG.
    """

    kind: str
    inputs: tuple[tuple[str, Path], ...]
    out_path: Path

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "inputs",
            tuple((str(label), Path(path)) for label, path in self.inputs),
        )
        object.__setattr__(self, "out_path", Path(self.out_path))
        problems = []
        if self.kind not in KINDS:
            problems.append(f"kind must be one of {sorted(KINDS)}, got {self.kind!r}")
        if not self.inputs:
            problems.append("at least one input CSV is required")
        if any(not label for label, _ in self.inputs):
            problems.append("legend labels must be non-empty")
        if problems:
            raise ValueError("; ".join(problems))


def load_series(path: Path, column: str) -> tuple[list[int], list[float]]:
    """Read (round, value) pairs for one column of a telemetry CSV.

    Args:
        path: CSV file to read.
        column: name of the value column, e.g. "test_accuracy".

    Returns:
        (rounds, values), parallel lists ordered as in the file.

    Raises:
        SchemaError: missing header or missing expected columns, with the
            offending column names in the message.
        ValueError: unreadable file, empty body, or a malformed cell.
    """
    rounds: list[int] = []
    values: list[float] = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise SchemaError(f"{path}: empty file, expected a telemetry header")
            missing = [name for name in EXPECTED_COLUMNS if name not in reader.fieldnames]
            if missing:
                raise SchemaError(
                    f"{path}: missing required column(s): {', '.join(missing)}"
                )
            for row in reader:
                row_index = len(rounds) + 1
                try:
                    round_value = int(row["round"])
                    value = float(row[column])
                except (TypeError, ValueError) as exc:
                    raise ValueError(
                        f"{path}: bad value in data row {row_index}: {exc}"
                    ) from exc
                rounds.append(round_value)
                values.append(value)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if not rounds:
        raise ValueError(f"{path}: no data rows")
    return rounds, values


def build_figure(job: PlotJob) -> Figure:
    """Draw the chart for ``job`` in memory and return the figure.

    All inputs are read and validated before any drawing happens, so a bad
    CSV raises without side effects.
    """
    column, y_label = KINDS[job.kind]
    series = [(label, *load_series(path, column)) for label, path in job.inputs]
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.add_subplot()
    for label, rounds, curve in series:
        ax.plot(rounds, curve, marker=".", markersize=4, label=label)
    ax.set_xlabel("training round")
    ax.set_ylabel(y_label)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def render(job: PlotJob) -> Path:
    """Render the chart and write it as a PNG, atomically.

    The image appears complete or not at all: pixels go to a temp file in
    the destination directory first and are renamed into place.  Input
    files are only read, never modified.

    Returns:
        The destination path.

    Raises:
        SchemaError / ValueError: bad inputs; no output file is created.
        OSError: any output I/O failure, with the destination path in the
            message.
    """
    fig = build_figure(job)
    target = Path(job.out_path)
    try:
        fd, tmp_name = tempfile.mkstemp(
            prefix=target.name + ".", suffix=".tmp", dir=target.parent
        )
        try:
            os.close(fd)
            fig.savefig(tmp_name, format="png", dpi=150)
            os.replace(tmp_name, target)
        except BaseException:
            os.unlink(tmp_name)
            raise
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc}") from exc
    return target


def job_from_args(kind: str, labelled_paths: Sequence[str], out_path: str | Path) -> PlotJob:
    """Build a PlotJob from ``LABEL=PATH`` strings as given on a command line.

    Each string splits on its first "=", so labels may not contain "=" but
    paths may.

    Raises:
        ValueError: a string has no "=", or an empty label or path.
    """
    inputs = []
    for raw in labelled_paths:
        label, sep, path = raw.partition("=")
        if not sep or not label or not path:
            raise ValueError(f"--in expects LABEL=PATH, got {raw!r}")
        inputs.append((label, Path(path)))
    return PlotJob(kind=kind, inputs=tuple(inputs), out_path=Path(out_path))
