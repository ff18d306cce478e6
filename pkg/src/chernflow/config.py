"""TOML run configuration with fail-closed validation.

Sections and keys are a fixed vocabulary; unknown names are errors so that a
typo in a tolerance cannot silently fall back to a default.
"""

import sys

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .errors import ConfigError

_SCHEMA = {
    "grid": {
        "n": int,
        "points": (int, list),
        "periods": list,
    },
    "background": {
        "preset": str,
        "s0_expr": str,
        "f_expr": str,
        "seed": int,
    },
    "flow": {
        "method": str,
        "dt_init": (int, float),
        "residual_tol": (int, float),
        "t_max": (int, float),
        "record_every": int,
    },
    "supersolution": {
        "case": str,
        "lambda": (int, float),
        "a_search_points": int,
        "C_M": (int, float),
        "euler_char": int,
    },
    "sweep": {
        "param": str,
        "values": list,
    },
}


def validate_config(raw):
    """Check a parsed config dict against the schema; returns it unchanged."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a table")
    for section, table in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section '{section}'")
        if not isinstance(table, dict):
            raise ConfigError(f"section '{section}' must be a table")
        for key, value in table.items():
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key '{section}.{key}'")
            expected = _SCHEMA[section][key]
            if not isinstance(value, expected):
                raise ConfigError(
                    f"key '{section}.{key}' has type {type(value).__name__}, "
                    f"expected {expected}")
    return raw


def load_config(path):
    try:
        with open(path, "rb") as fh:
            raw = _toml.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config {path!r}: {exc}") from exc
    return validate_config(raw)


def set_dotted(cfg, dotted, value):
    """Set 'section.key' in a nested config dict (used by sweeps)."""
    try:
        section, key = dotted.split(".")
    except ValueError:
        raise ConfigError(f"sweep parameter must look like 'section.key', "
                          f"got {dotted!r}") from None
    if section not in _SCHEMA or key not in _SCHEMA[section]:
        raise ConfigError(f"unknown sweep parameter '{dotted}'")
    out = {s: dict(t) for s, t in cfg.items()}
    out.setdefault(section, {})[key] = value
    return validate_config(out)
