"""Chart building, input validation, and atomic PNG output."""

from __future__ import annotations

import os
from pathlib import Path

import pytest

pytest.importorskip("flplots")

from flplots.render import (
    EXPECTED_COLUMNS,
    KINDS,
    PlotJob,
    SchemaError,
    build_figure,
    job_from_args,
    load_series,
    render,
)

# Frozen copy of the simulator's CSV header: the whole interface between
# the two packages.  If either side drifts, this literal catches it.
HEADER = (
    "round,selected_ids,t_down_s,t_round_s,flight_j_cum,dissem_j_cum,"
    "total_j_cum,test_accuracy,test_loss"
)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def write_telemetry(path, accuracies, energies=None):
    """Fabricate a schema-conforming telemetry CSV, one row per round."""
    if energies is None:
        energies = [120.0 * (i + 1) for i in range(len(accuracies))]
    lines = [HEADER]
    for i, (acc, total) in enumerate(zip(accuracies, energies)):
        flight = total * 0.9999
        dissem = total - flight
        lines.append(
            f"{i + 1},0;3;7,0.0817,1.2,{flight!r},{dissem!r},{total!r},"
            f"{acc!r},{2.3 - acc!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def sweep_fixtures(tmp_path):
    """Three fabricated runs shaped like an epoch sweep (E=1, E=5, E=20)."""
    curves = {
        "E=1": [0.10, 0.12, 0.20, 0.35, 0.48, 0.60, 0.68, 0.74],
        "E=5": [0.11, 0.30, 0.52, 0.68, 0.78, 0.84, 0.88, 0.90],
        "E=20": [0.15, 0.55, 0.74, 0.84, 0.89, 0.92, 0.94, 0.95],
    }
    inputs = []
    for label, accs in curves.items():
        csv_path = tmp_path / f"{label.replace('=', '')}.csv"
        write_telemetry(csv_path, accs)
        inputs.append((label, csv_path))
    return tuple(inputs)


def test_expected_columns_match_frozen_header():
    assert ",".join(EXPECTED_COLUMNS) == HEADER


def test_kinds_cover_both_charts():
    assert KINDS["accuracy"][0] == "test_accuracy"
    assert KINDS["energy"][0] == "total_j_cum"


def test_load_series_roundtrip(tmp_path):
    accs = [0.1, 0.4, 0.8]
    path = write_telemetry(tmp_path / "run.csv", accs)
    rounds, values = load_series(path, "test_accuracy")
    assert rounds == [1, 2, 3]
    assert values == accs


def test_plotjob_validation(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.5])
    with pytest.raises(ValueError, match="kind"):
        PlotJob(kind="pie", inputs=(("a", path),), out_path=tmp_path / "o.png")
    with pytest.raises(ValueError, match="at least one"):
        PlotJob(kind="accuracy", inputs=(), out_path=tmp_path / "o.png")
    with pytest.raises(ValueError, match="label"):
        PlotJob(kind="accuracy", inputs=(("", path),), out_path=tmp_path / "o.png")


def test_job_from_args_splits_on_first_equals(tmp_path):
    job = job_from_args("accuracy", ["E=1=/data/e=1.csv"], tmp_path / "o.png")
    assert job.inputs == (("E", Path("1=/data/e=1.csv")),)
    for bad in ("nolabel", "=path.csv", "label="):
        with pytest.raises(ValueError, match="LABEL=PATH"):
            job_from_args("accuracy", [bad], tmp_path / "o.png")


def test_accuracy_chart_has_three_curves(tmp_path):
    inputs = sweep_fixtures(tmp_path)
    job = PlotJob(kind="accuracy", inputs=inputs, out_path=tmp_path / "acc.png")
    fig = build_figure(job)
    ax = fig.axes[0]
    assert len(ax.lines) == 3
    _, labels = ax.get_legend_handles_labels()
    assert labels == ["E=1", "E=5", "E=20"]
    assert ax.get_ylabel() == "test accuracy"

    out = render(job)
    data = out.read_bytes()
    assert data.startswith(PNG_MAGIC)
    assert len(data) > 1000


def test_energy_chart_series_all_non_decreasing(tmp_path):
    inputs = sweep_fixtures(tmp_path)
    for _, path in inputs:
        _, totals = load_series(path, "total_j_cum")
        assert all(a <= b for a, b in zip(totals, totals[1:]))

    job = PlotJob(kind="energy", inputs=inputs, out_path=tmp_path / "energy.png")
    fig = build_figure(job)
    for line in fig.axes[0].lines:
        ys = list(line.get_ydata())
        assert all(a <= b for a, b in zip(ys, ys[1:]))
    assert fig.axes[0].get_ylabel() == "cumulative UAV energy (J)"

    out = render(job)
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_single_input_renders(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.2, 0.6])
    job = PlotJob(kind="energy", inputs=(("run", path),), out_path=tmp_path / "e.png")
    assert render(job).exists()


def test_missing_column_named_in_error(tmp_path):
    # Drop test_accuracy (column 8) from header and rows alike.
    path = write_telemetry(tmp_path / "bad.csv", [0.3, 0.5])
    lines = path.read_text(encoding="utf-8").strip().split("\n")
    broken = [",".join(row.split(",")[:7] + row.split(",")[8:]) for row in lines]
    path.write_text("\n".join(broken) + "\n", encoding="utf-8")

    out = tmp_path / "acc.png"
    job = PlotJob(kind="accuracy", inputs=(("run", path),), out_path=out)
    with pytest.raises(SchemaError, match="test_accuracy"):
        render(job)
    assert not out.exists()


def test_schema_checked_even_for_unplotted_columns(tmp_path):
    # Every telemetry column is required, not just the one being drawn.
    path = tmp_path / "bad.csv"
    path.write_text(
        "round,total_j_cum,test_accuracy\n1,10.0,0.5\n", encoding="utf-8"
    )
    with pytest.raises(SchemaError) as err:
        load_series(path, "total_j_cum")
    assert "t_down_s" in str(err.value)
    assert "flight_j_cum" in str(err.value)


def test_empty_body_errors_without_output(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(HEADER + "\n", encoding="utf-8")
    out = tmp_path / "acc.png"
    job = PlotJob(kind="accuracy", inputs=(("run", path),), out_path=out)
    with pytest.raises(ValueError, match="no data rows"):
        render(job)
    assert not out.exists()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["empty.csv"]


def test_zero_byte_file_errors(tmp_path):
    path = tmp_path / "zero.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(SchemaError, match="empty file"):
        load_series(path, "test_accuracy")


def test_malformed_cell_names_file_and_row(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.3, 0.5])
    text = path.read_text(encoding="utf-8").replace("0.5", "not-a-number")
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ValueError, match="data row 2"):
        load_series(path, "test_accuracy")


def test_unreadable_input_reported_as_value_error(tmp_path):
    job = PlotJob(
        kind="accuracy",
        inputs=(("run", tmp_path / "nope.csv"),),
        out_path=tmp_path / "o.png",
    )
    with pytest.raises(ValueError, match="nope.csv"):
        render(job)


def test_inputs_never_mutated(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.2, 0.4, 0.9])
    before = path.read_bytes()
    render(PlotJob(kind="accuracy", inputs=(("run", path),), out_path=tmp_path / "o.png"))
    assert path.read_bytes() == before


def test_render_failure_names_target_and_leaves_no_temp(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.2, 0.4])
    target = tmp_path / "taken"
    target.mkdir()  # os.replace onto an existing directory fails
    job = PlotJob(kind="accuracy", inputs=(("run", path),), out_path=target)
    with pytest.raises(OSError, match="taken"):
        render(job)
    leftovers = [p.name for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert leftovers == []


def test_render_to_missing_directory_raises_oserror(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.2])
    job = PlotJob(
        kind="accuracy",
        inputs=(("run", path),),
        out_path=tmp_path / "no_such_dir" / "o.png",
    )
    with pytest.raises(OSError, match="o.png"):
        render(job)


def test_output_overwrites_previous_chart(tmp_path):
    path = write_telemetry(tmp_path / "run.csv", [0.2, 0.8])
    out = tmp_path / "o.png"
    render(PlotJob(kind="accuracy", inputs=(("a", path),), out_path=out))
    first = out.read_bytes()
    render(PlotJob(kind="energy", inputs=(("a", path),), out_path=out))
    second = out.read_bytes()
    assert first.startswith(PNG_MAGIC) and second.startswith(PNG_MAGIC)
    assert first != second
    assert sorted(os.listdir(tmp_path)) == ["o.png", "run.csv"]
