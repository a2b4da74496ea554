"""Flat ``key = value`` configuration files."""

from __future__ import annotations


class ConfigError(ValueError):
    pass


def read_config(path: str) -> dict:
    """``key = value`` per line; ``#`` starts a comment; keys use flag names."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{no}: empty key")
        out[key.lstrip("-").replace("-", "_")] = value
    return out
