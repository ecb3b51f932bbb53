"""Scenario configuration: TOML loading, overrides, validation.

Config files use the measurement units the scenario is naturally quoted in
(dB, dBm, mW, MHz, GHz, m); keys carry the unit as a suffix and values are
normalized to SI on load. Every section and key has a default, so an empty
or absent file yields the reference scenario.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib  # type: ignore[no-redef]

from .channel import LinkParams
from .timing_energy import PowerModel

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "DEFAULTS",
    "default_mapping",
    "load_config",
    "apply_overrides",
    "build_config",
]

DEFAULTS: dict[str, dict[str, Any]] = {
    "scenario": {
        "num_ues": 100,
        "alpha": 0.1,
        "seed": 1,
    },
    "training": {
        "epochs": 1,
        "max_rounds": 100,
        "batch_size": 50,
        "learning_rate": 0.05,
        "layer_dims": [784, 32, 10],
        "bits_per_param": 32,
    },
    "link": {
        "beta0_db": -50.0,
        "noise_dbm": -110.0,
        "bandwidth_mhz": 1.0,
        "height_m": 100.0,
        "uav_tx_power_mw": 10.0,
        "ue_tx_power_mw": 100.0,
    },
    "power": {
        "propulsion_w": 100.0,
    },
    "compute": {
        "cpu_ghz_min": 1.8,
        "cpu_ghz_max": 2.0,
        "cycles_per_bit": 20.0,
    },
    "geometry": {
        "radius_min_m": 0.0,
        "radius_max_m": 10.0,
    },
    "data": {
        "source": "synthetic",
        "partition": "iid",
        "shards_per_client": 2,
        "num_samples": 2000,
        "num_classes": 10,
        "feature_dim": 784,
        "test_samples": 500,
        "mnist_train_images": "",
        "mnist_train_labels": "",
        "mnist_test_images": "",
        "mnist_test_labels": "",
    },
}

# Keys that are legal but absent from DEFAULTS (optional, no default value).
_OPTIONAL_KEYS: dict[str, set[str]] = {
    "scenario": {"target_accuracy"},
}


class ConfigError(ValueError):
    """Invalid configuration; collects every violation, one per line."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("\n".join(self.violations))


def default_mapping() -> dict[str, dict[str, Any]]:
    """Fresh deep copy of the default config mapping."""
    return copy.deepcopy(DEFAULTS)


def _known_keys(section: str) -> set[str]:
    return set(DEFAULTS.get(section, ())) | _OPTIONAL_KEYS.get(section, set())


def _merge_file(mapping: dict[str, dict[str, Any]], loaded: Mapping[str, Any]) -> None:
    problems = []
    for section, table in loaded.items():
        if section not in DEFAULTS:
            problems.append(f"unknown config section [{section}]")
            continue
        if not isinstance(table, Mapping):
            problems.append(f"[{section}] must be a table of keys, got {type(table).__name__}")
            continue
        for key, value in table.items():
            if key not in _known_keys(section):
                problems.append(f"unknown config key {section}.{key}")
            else:
                mapping[section][key] = value
    if problems:
        raise ConfigError(problems)


def _parse_override_value(raw: str) -> Any:
    """Interpret an override value with TOML literal syntax, else as text."""
    try:
        return tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        return raw


def apply_overrides(mapping: dict[str, dict[str, Any]], overrides: Iterable[str]) -> None:
    """Apply `section.key=value` assignments onto a config mapping in place."""
    problems = []
    for item in overrides:
        key_path, sep, raw = item.partition("=")
        if not sep:
            problems.append(f"override {item!r} is not of the form section.key=value")
            continue
        parts = key_path.strip().split(".")
        if len(parts) != 2:
            problems.append(f"override key {key_path.strip()!r} must be section.key")
            continue
        section, key = parts
        if section not in DEFAULTS or key not in _known_keys(section):
            problems.append(f"override targets unknown config key {section}.{key}")
            continue
        mapping[section][key] = _parse_override_value(raw.strip())
    if problems:
        raise ConfigError(problems)


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario, all values normalized to SI units."""

    num_ues: int
    alpha: float
    seed: int
    target_accuracy: float | None
    epochs: int
    max_rounds: int
    batch_size: int
    learning_rate: float
    layer_dims: tuple[int, ...]
    bits_per_param: int
    link: LinkParams
    power: PowerModel
    cpu_hz_min: float
    cpu_hz_max: float
    cycles_per_bit: float
    radius_min_m: float
    radius_max_m: float
    data_source: str
    partition: str
    shards_per_client: int
    num_samples: int
    num_classes: int
    feature_dim: int
    test_samples: int
    mnist_paths: tuple[str, str, str, str]
    mapping: dict[str, dict[str, Any]] = field(repr=False, compare=False, default_factory=dict)


class _Checker:
    """Accumulates violations while pulling typed values out of the mapping."""

    def __init__(self, mapping: Mapping[str, Mapping[str, Any]]):
        self.mapping = mapping
        self.problems: list[str] = []

    def _get(self, section: str, key: str) -> Any:
        return self.mapping[section].get(key)

    def fail(self, message: str) -> None:
        self.problems.append(message)

    def integer(self, section: str, key: str, minimum: int | None = None,
                maximum: int | None = None) -> int:
        value = self._get(section, key)
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"{section}.{key} must be an integer, got {value!r}")
            return minimum if minimum is not None else 0
        if minimum is not None and value < minimum:
            self.fail(f"{section}.{key} must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            self.fail(f"{section}.{key} must be <= {maximum}, got {value}")
        return value

    def real(self, section: str, key: str, minimum: float | None = None,
             exclusive_min: float | None = None) -> float:
        value = self._get(section, key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"{section}.{key} must be a number, got {value!r}")
            return 0.0
        value = float(value)
        if not math.isfinite(value):
            self.fail(f"{section}.{key} must be finite, got {value}")
        elif minimum is not None and value < minimum:
            self.fail(f"{section}.{key} must be >= {minimum}, got {value}")
        elif exclusive_min is not None and value <= exclusive_min:
            self.fail(f"{section}.{key} must be > {exclusive_min}, got {value}")
        return value

    def text(self, section: str, key: str, choices: set[str] | None = None) -> str:
        value = self._get(section, key)
        if not isinstance(value, str):
            self.fail(f"{section}.{key} must be a string, got {value!r}")
            return ""
        if choices is not None and value not in choices:
            self.fail(f"{section}.{key} must be one of {sorted(choices)}, got {value!r}")
        return value


def build_config(mapping: Mapping[str, Mapping[str, Any]]) -> ScenarioConfig:
    """Validate a merged mapping and normalize it into a ScenarioConfig.

    Raises ConfigError listing every violation at once rather than stopping
    at the first.
    """
    c = _Checker(mapping)

    num_ues = c.integer("scenario", "num_ues", minimum=1)
    alpha = c.real("scenario", "alpha", exclusive_min=0.0)
    if alpha > 1.0:
        c.fail(f"scenario.alpha must be <= 1, got {alpha}")
    seed = c.integer("scenario", "seed", minimum=0, maximum=2**64 - 1)
    target = mapping["scenario"].get("target_accuracy")
    target_accuracy: float | None = None
    if target is not None:
        if isinstance(target, bool) or not isinstance(target, (int, float)):
            c.fail(f"scenario.target_accuracy must be a number, got {target!r}")
        elif not 0.0 < float(target) <= 1.0:
            c.fail(f"scenario.target_accuracy must be in (0, 1], got {target}")
        else:
            target_accuracy = float(target)

    epochs = c.integer("training", "epochs", minimum=1)
    max_rounds = c.integer("training", "max_rounds", minimum=0)
    batch_size = c.integer("training", "batch_size", minimum=1)
    learning_rate = c.real("training", "learning_rate", minimum=0.0)
    raw_dims = mapping["training"].get("layer_dims")
    layer_dims: tuple[int, ...] = ()
    if (not isinstance(raw_dims, (list, tuple)) or len(raw_dims) < 2
            or any(isinstance(d, bool) or not isinstance(d, int) or d < 1 for d in raw_dims)):
        c.fail(f"training.layer_dims must be a list of >= 2 positive integers, got {raw_dims!r}")
    else:
        layer_dims = tuple(raw_dims)
    bits_per_param = c.integer("training", "bits_per_param", minimum=1)

    beta0_db = c.real("link", "beta0_db")
    noise_dbm = c.real("link", "noise_dbm")
    bandwidth_mhz = c.real("link", "bandwidth_mhz", exclusive_min=0.0)
    height_m = c.real("link", "height_m", exclusive_min=0.0)
    uav_tx_mw = c.real("link", "uav_tx_power_mw", minimum=0.0)
    ue_tx_mw = c.real("link", "ue_tx_power_mw", minimum=0.0)

    propulsion_w = c.real("power", "propulsion_w", minimum=0.0)

    cpu_ghz_min = c.real("compute", "cpu_ghz_min", exclusive_min=0.0)
    cpu_ghz_max = c.real("compute", "cpu_ghz_max", exclusive_min=0.0)
    if cpu_ghz_min > cpu_ghz_max:
        c.fail(f"compute.cpu_ghz_min ({cpu_ghz_min}) exceeds cpu_ghz_max ({cpu_ghz_max})")
    cycles_per_bit = c.real("compute", "cycles_per_bit", exclusive_min=0.0)

    radius_min_m = c.real("geometry", "radius_min_m", minimum=0.0)
    radius_max_m = c.real("geometry", "radius_max_m", minimum=0.0)
    if radius_min_m > radius_max_m:
        c.fail(f"geometry.radius_min_m ({radius_min_m}) exceeds radius_max_m ({radius_max_m})")

    data_source = c.text("data", "source", choices={"synthetic", "mnist"})
    partition = c.text("data", "partition", choices={"iid", "shards"})
    shards_per_client = c.integer("data", "shards_per_client", minimum=1)
    num_samples = c.integer("data", "num_samples", minimum=1)
    num_classes = c.integer("data", "num_classes", minimum=1)
    feature_dim = c.integer("data", "feature_dim", minimum=1)
    test_samples = c.integer("data", "test_samples", minimum=1)
    mnist_paths = tuple(
        c.text("data", key)
        for key in ("mnist_train_images", "mnist_train_labels",
                    "mnist_test_images", "mnist_test_labels")
    )

    if data_source == "mnist" and not all(mnist_paths):
        c.fail("data.source = 'mnist' requires all four mnist_* path keys to be set")
    if layer_dims:
        in_dim = 784 if data_source == "mnist" else feature_dim
        out_dim = 10 if data_source == "mnist" else num_classes
        if layer_dims[0] != in_dim:
            c.fail(f"training.layer_dims[0] ({layer_dims[0]}) must match the "
                   f"feature width {in_dim}")
        if layer_dims[-1] != out_dim:
            c.fail(f"training.layer_dims[-1] ({layer_dims[-1]}) must match the "
                   f"class count {out_dim}")

    if c.problems:
        raise ConfigError(c.problems)

    return ScenarioConfig(
        num_ues=num_ues,
        alpha=alpha,
        seed=seed,
        target_accuracy=target_accuracy,
        epochs=epochs,
        max_rounds=max_rounds,
        batch_size=batch_size,
        learning_rate=learning_rate,
        layer_dims=layer_dims,
        bits_per_param=bits_per_param,
        link=LinkParams(
            beta0_db=beta0_db,
            noise_dbm=noise_dbm,
            system_bandwidth_hz=bandwidth_mhz * 1e6,
            uav_height_m=height_m,
            uav_tx_power_w=uav_tx_mw * 1e-3,
            ue_tx_power_w=ue_tx_mw * 1e-3,
        ),
        power=PowerModel(propulsion_w=propulsion_w, uav_tx_w=uav_tx_mw * 1e-3),
        cpu_hz_min=cpu_ghz_min * 1e9,
        cpu_hz_max=cpu_ghz_max * 1e9,
        cycles_per_bit=cycles_per_bit,
        radius_min_m=radius_min_m,
        radius_max_m=radius_max_m,
        data_source=data_source,
        partition=partition,
        shards_per_client=shards_per_client,
        num_samples=num_samples,
        num_classes=num_classes,
        feature_dim=feature_dim,
        test_samples=test_samples,
        mnist_paths=mnist_paths,  # type: ignore[arg-type]
        mapping={s: dict(t) for s, t in mapping.items()},
    )


def load_config(
    path: str | Path | None = None,
    overrides: Iterable[str] = (),
) -> ScenarioConfig:
    """Load, override, and validate a scenario configuration.

    Args:
        path: TOML file to merge onto the defaults; None keeps pure defaults.
        overrides: `section.key=value` strings applied after the file.

    Returns:
        The validated, SI-normalized configuration.

    Raises:
        ConfigError: missing file, unknown keys, TOML syntax errors, or any
            value violation (all value violations reported together).
    """
    mapping = default_mapping()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError([f"config file not found: {p}"])
        try:
            loaded = tomllib.loads(p.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError([f"config file {p} is not valid TOML: {exc}"]) from exc
        _merge_file(mapping, loaded)
    apply_overrides(mapping, overrides)
    return build_config(mapping)
