"""Line charts from federated-run telemetry CSVs.

Reads the simulator's per-round CSV output (and nothing else of the
simulator) and draws accuracy-versus-round or cumulative-energy-versus-round
line charts, one curve per input file.
"""

from .render import (
    EXPECTED_COLUMNS,
    KINDS,
    PlotJob,
    SchemaError,
    build_figure,
    job_from_args,
    load_series,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "EXPECTED_COLUMNS",
    "KINDS",
    "PlotJob",
    "SchemaError",
    "build_figure",
    "job_from_args",
    "load_series",
    "render",
    "__version__",
]
