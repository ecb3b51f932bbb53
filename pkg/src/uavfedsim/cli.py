"""Command-line front end: run scenarios, sweep a key, validate configs.

Exit codes: 0 success, 1 validation problem (bad config, bad arguments),
2 I/O failure. Output files are written atomically, so a failed invocation
never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .channel import a2g_rate, a2g_snr, ofdma_share
from .config import ConfigError, ScenarioConfig, load_config
from .fl_core import num_selected
from .orchestrator import RunResult, emit, run_scenario

__all__ = ["main"]

SUMMARY_HEADER = "key,value,rounds,final_accuracy,final_loss,flight_j,dissem_j,total_j"


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="TOML scenario file; defaults apply when omitted")
    parser.add_argument("--set", metavar="K=V", action="append", default=[],
                        dest="overrides", help="override a config key (section.key=value)")
    parser.add_argument("--seed", type=int, default=None, metavar="N",
                        help="shorthand for --set scenario.seed=N")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavfedsim",
        description=(
            "Simulate federated learning hosted by a hovering UAV over an "
            "air-ground OFDMA network: per-round latency, UAV energy, and "
            "training curves."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write telemetry")
    _add_common(p_run)
    p_run.add_argument("--out", metavar="PATH", required=True, help="output file")
    p_run.add_argument("--format", choices=("csv", "json"), default="csv")

    p_sweep = sub.add_parser("sweep", help="run one scenario per value of a config key")
    _add_common(p_sweep)
    p_sweep.add_argument("--sweep-key", metavar="SECTION.KEY", required=True)
    p_sweep.add_argument("--sweep-values", metavar="V1,V2,...", required=True)
    p_sweep.add_argument("--out", metavar="DIR", required=True, help="output directory")

    p_val = sub.add_parser("validate", help="check a config and report every violation")
    _add_common(p_val)

    p_rate = sub.add_parser("rate-table", help="print link rates and SNRs per distance")
    _add_common(p_rate)
    p_rate.add_argument("--r-values", metavar="R1,R2,...", default="",
                        help="horizontal distances in meters; empty prints header only")

    return parser


def _load(args: argparse.Namespace) -> ScenarioConfig:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"scenario.seed={args.seed}")
    return load_config(args.config, overrides)


def _fail_validation(exc: ConfigError) -> int:
    for line in exc.violations:
        print(f"error: {line}", file=sys.stderr)
    return 1


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _fail_validation(exc)
    result = run_scenario(config)
    try:
        emit(result, args.format, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _split_values(raw: str) -> list[str]:
    return [v.strip() for v in raw.split(",") if v.strip()]


def _summary_row(key: str, value: str, result: RunResult) -> str:
    if result.records:
        last = result.records[-1]
        tail = (
            str(len(result.records)),
            _f17(last.test_accuracy),
            _f17(last.test_loss),
            _f17(last.cumulative_flight_j),
            _f17(last.cumulative_dissemination_j),
            _f17(last.cumulative_total_j),
        )
    else:
        tail = ("0", "", "", "", "", "")
    return ",".join((key, value) + tail)


def _cmd_sweep(args: argparse.Namespace) -> int:
    values = _split_values(args.sweep_values)
    if not values:
        print("error: --sweep-values needs at least one value", file=sys.stderr)
        return 1
    if len(set(values)) != len(values):
        print(f"error: duplicate sweep values in {args.sweep_values!r}", file=sys.stderr)
        return 1
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return 2
    base_overrides = list(args.overrides)
    if args.seed is not None:
        base_overrides.append(f"scenario.seed={args.seed}")
    summary = [SUMMARY_HEADER]
    for value in values:
        try:
            config = load_config(args.config, base_overrides + [f"{args.sweep_key}={value}"])
        except ConfigError as exc:
            return _fail_validation(exc)
        result = run_scenario(config)
        try:
            emit(result, "csv", out_dir / f"{args.sweep_key}={value}.csv")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        summary.append(_summary_row(args.sweep_key, value, result))
    summary_path = out_dir / "summary.csv"
    try:
        tmp = summary_path.with_suffix(".csv.tmp")
        tmp.write_text("\n".join(summary) + "\n", encoding="utf-8")
        tmp.replace(summary_path)
    except OSError as exc:
        print(f"error: cannot write {summary_path}: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _fail_validation(exc)
    print(f"OK: {config.num_ues} clients, {config.epochs} local epochs, "
          f"{config.max_rounds} max rounds, seed {config.seed}")
    return 0


def _cmd_rate_table(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        return _fail_validation(exc)
    distances = []
    for raw in _split_values(args.r_values):
        try:
            r = float(raw)
        except ValueError:
            print(f"error: --r-values entry {raw!r} is not a number", file=sys.stderr)
            return 1
        if r < 0:
            print(f"error: distance must be >= 0, got {raw}", file=sys.stderr)
            return 1
        distances.append(r)
    link = config.link
    k = num_selected(config.num_ues, config.alpha)
    share = ofdma_share(link.system_bandwidth_hz, k)
    print("r_m,uplink_snr,uplink_rate_bps,downlink_snr,downlink_rate_bps")
    for r in distances:
        up_snr = a2g_snr(link.ue_tx_power_w, link, r)
        down_snr = a2g_snr(link.uav_tx_power_w, link, r)
        print(",".join((
            _f17(r),
            _f17(up_snr),
            _f17(a2g_rate(share, up_snr)),
            _f17(down_snr),
            _f17(a2g_rate(link.system_bandwidth_hz, down_snr)),
        )))
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "rate-table": _cmd_rate_table,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
