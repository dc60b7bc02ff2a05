"""Measured radio-state characterization and device-profile JSON files.

A profile file is a JSON object whose keys mirror the state labels. Every
key is optional and overlays the built-in characterization::

    {"sleep": {"current_ma": 0.02}, "rx1": {"duration_ms": {"dr8_10": 98.3}}}

Units are fixed: ms, mA, mAh, V.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

from . import airtime, phy
from .errors import ProfileError

STATE_ORDER = (
    "preTx",
    "tx",
    "hop",
    "postTx",
    "rx1wait",
    "preRx1",
    "rx1",
    "postRx1",
    "rx2wait",
    "preRx2",
    "rx2",
    "postRx2",
    "sleep",
)
# States spent with the radio asleep; they share the sleep current override.
IDLE_STATES = ("rx1wait", "rx2wait", "sleep")

_GROUPS = dict.fromkeys(phy.DR_GROUPS)

DEFAULTS: dict[str, Any] = {
    "preTx": {"duration_ms": 2.370, "current_ma": 3.8},
    "tx": {"current_ma": 25.7},
    "hop": {"duration_ms": airtime.DEFAULT_HOP_MS, "current_ma": 12.3},
    "postTx": {
        "current_ma": 3.7,
        "duration_ms": {"dr8_10": 10.40, "dr9_11": 12.40, "dr0": 0.676, "dr5": 0.676},
    },
    "rx1wait": {"duration_ms": airtime.RECEIVE_DELAY1_MS, "current_ma": 0.0005},
    "preRx1": {"duration_ms": 1.300, "current_ma": 2.3},
    "rx1": {
        "current_ma": 5.8,
        "duration_ms": dict(airtime.RX1_EMPTY_MS),
        "ack_duration_ms": dict(airtime.RX1_ACK_MS),
    },
    "postRx1": {"duration_ms": 0.700, "current_ma": 1.2},
    "rx2wait": {"duration_ms": 911.2, "current_ma": 0.0005},
    "preRx2": {"duration_ms": 1.500, "current_ma": 1.8},
    "rx2": {
        "duration_ms": airtime.RX2_EMPTY_MS,
        "ack_duration_ms": airtime.RX2_ACK_MS,
        "current_ma": 5.8,
    },
    "postRx2": {"duration_ms": 0.700, "current_ma": 1.2},
    "sleep": {"current_ma": 0.0005},
    "supply_v": 3.3,
    "battery_mah": 230.0,
}


@dataclass(frozen=True)
class RadioStateProfile:
    """Validated, immutable view over a profile document."""

    data: Mapping[str, Any]

    def __post_init__(self):
        _check_tree(self.data, DEFAULTS, "", require_all=True)
        object.__setattr__(self, "data", _freeze(self.data))

    def current(self, state: str) -> float:
        return self.data[state]["current_ma"]

    def duration(self, state: str, dr_index: int | None = None, ack: bool = False) -> float:
        """Duration of a fixed or DR-dependent state. ``tx`` and ``sleep`` are derived elsewhere."""
        entry = self.data[state]
        value = entry["ack_duration_ms" if ack else "duration_ms"]
        if isinstance(value, Mapping):
            if dr_index is None:
                raise ValueError(f"{state} duration depends on the data rate")
            return value[phy.dr_group(dr_index)]
        return value

    @property
    def supply_v(self) -> float:
        return self.data["supply_v"]

    @property
    def battery_mah(self) -> float:
        return self.data["battery_mah"]

    def to_dict(self) -> dict[str, Any]:
        return _thaw(self.data)

    def overlay(self, overrides: Mapping[str, Any]) -> "RadioStateProfile":
        return RadioStateProfile(_merge(self.to_dict(), overrides, DEFAULTS, ""))

    def with_idle_current(self, current_ma: float) -> "RadioStateProfile":
        return self.overlay({s: {"current_ma": current_ma} for s in IDLE_STATES})


def _freeze(obj):
    if isinstance(obj, Mapping):
        return MappingProxyType({k: _freeze(v) for k, v in obj.items()})
    return obj


def _thaw(obj):
    if isinstance(obj, Mapping):
        return {k: _thaw(v) for k, v in obj.items()}
    return obj


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _check_leaf(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProfileError(path, f"expected a number, got {type(value).__name__}")
    if value != value or value in (float("inf"), float("-inf")):
        raise ProfileError(path, "must be finite")
    if value < 0:
        raise ProfileError(path, f"must be non-negative, got {value}")
    if path in ("supply_v", "battery_mah") and value == 0:
        raise ProfileError(path, "must be positive")


def _check_tree(node, schema, path, require_all=False):
    if isinstance(schema, Mapping):
        if not isinstance(node, Mapping):
            raise ProfileError(path, "expected an object")
        for key in node:
            if key not in schema:
                raise ProfileError(_join(path, key), "unknown key")
        if require_all:
            missing = [k for k in schema if k not in node]
            if missing:
                raise ProfileError(_join(path, missing[0]), "missing")
        for key, value in node.items():
            _check_tree(value, schema[key], _join(path, key), require_all)
    else:
        _check_leaf(node, path)


def _merge(base, overrides, schema, path):
    if not isinstance(overrides, Mapping):
        raise ProfileError(path, "expected an object")
    out = copy.deepcopy(base)
    for key, value in overrides.items():
        sub = _join(path, key)
        if key not in schema:
            raise ProfileError(sub, "unknown key")
        if isinstance(schema[key], Mapping):
            out[key] = _merge(out[key], value, schema[key], sub)
        else:
            _check_leaf(value, sub)
            out[key] = float(value)
    return out


DEFAULT_PROFILE = RadioStateProfile(DEFAULTS)


def load_profile(path) -> RadioStateProfile:
    """Read a JSON profile and overlay it on the built-in characterization."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read profile {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError("", f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    return DEFAULT_PROFILE.overlay(doc)


def leaf_paths(profile: RadioStateProfile = DEFAULT_PROFILE) -> list[tuple[str, ...]]:
    """Every numeric constant in the profile as a key path."""
    out = []

    def walk(node, prefix):
        for key, value in node.items():
            if isinstance(value, Mapping):
                walk(value, prefix + (key,))
            else:
                out.append(prefix + (key,))

    walk(profile.data, ())
    return out


def nested_override(path: tuple[str, ...], value: float) -> dict:
    doc: Any = value
    for key in reversed(path):
        doc = {key: doc}
    return doc


def get_leaf(profile: RadioStateProfile, path: tuple[str, ...]) -> float:
    node: Any = profile.data
    for key in path:
        node = node[key]
    return node
