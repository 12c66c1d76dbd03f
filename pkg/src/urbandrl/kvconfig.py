"""Flat ``key = value`` configuration files."""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Any


def parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_kv(path) -> dict[str, str]:
    return parse_kv(Path(path).read_text())


def format_kv(values: dict[str, Any]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in values.items())


def _coerce(value, kind) -> Any:
    if not isinstance(value, str):
        return value
    if kind in (bool, "bool"):
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    if kind in (int, "int"):
        try:
            return int(value)
        except ValueError:
            f = float(value)
            if not f.is_integer():
                raise ValueError(f"not an integer: {value!r}") from None
            return int(f)
    if kind in (float, "float"):
        return float(value)
    return value


def take_fields(cls, values: dict[str, str]):
    """Build dataclass ``cls`` from the string values whose keys are its fields.

    Returns the instance and the dict of keys it did not consume.
    """
    kwargs = {}
    rest = dict(values)
    for f in dataclasses.fields(cls):
        if f.name in rest:
            kwargs[f.name] = _coerce(rest.pop(f.name), f.type)
    return cls(**kwargs), rest
