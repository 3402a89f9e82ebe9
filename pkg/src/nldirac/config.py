"""Line-oriented ``key = value`` run configuration with env overrides."""

from __future__ import annotations

import argparse

ENV_PREFIX = "NLDIRAC_"
TRUE = {"1", "true", "yes", "on"}
FALSE = {"0", "false", "no", "off"}


class ConfigError(ValueError):
    pass


def normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = normalize_key(key)
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def env_values(environ) -> dict:
    return {
        normalize_key(k[len(ENV_PREFIX):]): v
        for k, v in environ.items()
        if k.startswith(ENV_PREFIX) and k != ENV_PREFIX + "CONFIG"
    }


def coerce(action: argparse.Action, raw: str, source: str):
    """Convert a config string the way argparse would convert the flag."""
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        low = raw.lower()
        if low in TRUE:
            return True
        if low in FALSE:
            return False
        raise ConfigError(f"{source}: {action.dest} expects true/false, got {raw!r}")
    if raw.strip() == "" and action.default is None:
        return None
    parts = [p.strip() for p in raw.split(";") if p.strip()] if isinstance(action, argparse._AppendAction) else [raw]
    out = []
    for part in parts:
        try:
            value = action.type(part) if action.type else part
        except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"{source}: bad value for {action.dest}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{source}: {action.dest} must be one of {sorted(action.choices)}")
        out.append(value)
    return out if isinstance(action, argparse._AppendAction) else out[0]


def layered_defaults(subparser: argparse.ArgumentParser, config_path, environ) -> dict:
    """Config-file values overlaid by environment values, validated and typed."""
    actions = {a.dest: a for a in subparser._actions if a.dest not in ("help", "config")}
    resolved = {}
    layers = []
    if config_path:
        layers.append((str(config_path), read_config_file(config_path)))
    layers.append(("environment", env_values(environ)))
    for source, values in layers:
        unknown = sorted(set(values) - set(actions))
        if unknown:
            raise ConfigError(f"{source}: unknown keys {unknown}")
        for key, raw in values.items():
            resolved[key] = coerce(actions[key], raw, source)
    return resolved


def dump(values: dict) -> str:
    """Resolved configuration in the same ``key = value`` format."""
    lines = []
    for key in sorted(values):
        v = values[key]
        if isinstance(v, (list, tuple)):
            v = "; ".join(_scalar(x) for x in v)
        else:
            v = _scalar(v)
        lines.append(f"{key} = {v}")
    return "\n".join(lines) + "\n"


def _scalar(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_scalar(x) for x in v)
    if isinstance(v, dict):
        return ",".join(f"{k}={_scalar(x)}" for k, x in v.items())
    return str(v)
