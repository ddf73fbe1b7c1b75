"""Run configuration: YAML file, flag overrides and validation.

Precedence, lowest first: built-in defaults, the ``--config`` file, the
dedicated flags (``--model``, ``--out``, ``--jobs``, ``--format``), then
``--set section.key=value`` overrides in the order given.
"""

from __future__ import annotations

import copy
import math
import numbers
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ConfigError
from .scaling import DEFAULT_PARAMS

FIG2_PARAMS: dict[str, Any] = {
    "omega_h": 10.0, "omega_c": 1e-3, "t_hot": 2.0, "t_cold": 1e-3,
    "lambda_per_omega_c": 1.0, "zeta_per_omega_c": 0.1, "mode": "lowT",
}

_STRING_PARAMS = {"mode": ("full", "lowT")}

DEFAULT_CONFIG: dict[str, Any] = {
    "model": "gaussian",
    "params": {},
    "jobs": 1,
    "output": {"dir": "out", "format": "csv"},
    "sweep": {"parameter": "eta", "start": 0.0, "stop": 2.0, "points": 21, "scale": "linear"},
    "fig2": {"xi0_start": 0.0, "xi0_stop": 3 * math.pi, "points": 301, "params": {}},
    "scaling": {
        "d_values": [1, 2, 3], "omega_h": 10.0, "t_hot": 2.0, "kappa": 0.1,
        "t_cold_min": 1e-4, "t_cold_max": 1e-2, "points": 20,
        "eta_factor": 1e3, "sensitivity_factor": 1e2,
        "xi0": math.pi / 2, "lambda_per_omega_c": 1.0,
    },
    "oracle": {
        "variant": "dressed", "shells": None, "edge_tol": 1e-10, "tol": 1e-6,
        "max_dim": 4096, "max_liouville_dim": 5000,
    },
}

# sections whose keys are open-ended and checked against the model instead
_FREE_SECTIONS = {("params",), ("fig2", "params")}


def _merge(base: dict, update: Mapping, path: tuple = ()) -> dict:
    for key, value in update.items():
        where = path + (key,)
        if where not in _FREE_SECTIONS and key not in base:
            raise ConfigError(f"unknown config key {'.'.join(map(str, where))!r}")
        if isinstance(base.get(key), dict) and where not in _FREE_SECTIONS:
            if not isinstance(value, Mapping):
                raise ConfigError(f"config key {'.'.join(where)!r} must be a mapping")
            _merge(base[key], value, where)
        elif where in _FREE_SECTIONS:
            if not isinstance(value, Mapping):
                raise ConfigError(f"config key {'.'.join(where)!r} must be a mapping")
            base[key] = {**base[key], **value}
        else:
            base[key] = value
    return base


def parse_scalar(raw: str) -> Any:
    """YAML scalar with plain numeric strings such as ``1e-3`` read as floats."""
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value {raw!r}: {exc}") from exc
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return value
    return value


def _coerce_numbers(obj):
    if isinstance(obj, dict):
        return {k: _coerce_numbers(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_coerce_numbers(v) for v in obj]
    if isinstance(obj, str):
        try:
            return float(obj)
        except ValueError:
            return obj
    return obj


def load_file(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping at the top level")
    return _coerce_numbers(data)


def apply_set(config: dict, assignment: str) -> dict:
    """Apply one ``dotted.key=value`` override in place."""
    if "=" not in assignment:
        raise ConfigError(f"--set expects key=value, got {assignment!r}")
    key, raw = assignment.split("=", 1)
    parts = key.strip().split(".")
    update: dict = {}
    node = update
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = parse_scalar(raw.strip())
    return _merge(config, update)


def _check_params(family: str, params: Mapping[str, Any], where: str) -> None:
    allowed = DEFAULT_PARAMS[family]
    for key, value in params.items():
        if key not in allowed:
            raise ConfigError(f"{where}.{key}: unknown {family} parameter")
        if key in _STRING_PARAMS:
            if value not in _STRING_PARAMS[key]:
                raise ConfigError(f"{where}.{key}: expected one of {_STRING_PARAMS[key]}, got {value!r}")
        elif value is not None and (isinstance(value, bool) or not isinstance(value, numbers.Real)):
            raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
        elif value is not None and not math.isfinite(value):
            raise ConfigError(f"{where}.{key}: must be finite, got {value!r}")


def _positive_int(value, where: str, minimum: int = 1) -> int:
    if (isinstance(value, bool) or not isinstance(value, numbers.Real)
            or not float(value).is_integer() or value < minimum):
        raise ConfigError(f"{where}: expected an integer >= {minimum}, got {value!r}")
    return int(value)


def validate(config: dict) -> dict:
    """Type and range checks that need no physics; returns ``config``."""
    if config["model"] not in DEFAULT_PARAMS:
        raise ConfigError(f"model: expected one of {sorted(DEFAULT_PARAMS)}, got {config['model']!r}")
    _check_params(config["model"], config["params"], "params")
    _check_params("poisson", config["fig2"]["params"], "fig2.params")
    config["jobs"] = _positive_int(config["jobs"], "jobs")
    if config["output"]["format"] not in ("csv", "structured"):
        raise ConfigError(f"output.format: expected 'csv' or 'structured', got {config['output']['format']!r}")
    for section, minimum in (("sweep", 2), ("fig2", 2), ("scaling", 3)):
        config[section]["points"] = _positive_int(config[section]["points"], f"{section}.points", minimum)
    config["scaling"]["d_values"] = [_positive_int(d, "scaling.d_values")
                                     for d in config["scaling"]["d_values"]]
    if config["oracle"]["variant"] not in ("kick", "dressed"):
        raise ConfigError(f"oracle.variant: expected 'kick' or 'dressed', got {config['oracle']['variant']!r}")
    if config["oracle"]["shells"] is not None:
        config["oracle"]["shells"] = _positive_int(config["oracle"]["shells"], "oracle.shells")
    return config


def build_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None,
                 assignments: list[str] | tuple[str, ...] = ()) -> dict:
    """Resolved and validated configuration."""
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        _merge(config, load_file(path))
    if overrides:
        _merge(config, overrides)
    for assignment in assignments:
        apply_set(config, assignment)
    return validate(config)
