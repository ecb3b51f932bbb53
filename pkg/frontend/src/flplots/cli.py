"""Command-line entry point: render a chart from telemetry CSVs.

Usage:
    plot --kind accuracy|energy --in label=path [--in label=path ...] --out figure.png

Exit codes: 0 success, 1 invalid arguments or inputs, 2 output I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, job_from_args, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render a line chart (one curve per input CSV) from "
        "federated-run telemetry.",
    )
    parser.add_argument(
        "--kind",
        required=True,
        choices=sorted(KINDS),
        help="quantity plotted against the round index",
    )
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="LABEL=PATH",
        help="legend label and input CSV; repeat for multiple curves",
    )
    parser.add_argument(
        "--out", required=True, type=Path, help="destination PNG file"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        job = job_from_args(args.kind, args.inputs, args.out)
        render(job)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
