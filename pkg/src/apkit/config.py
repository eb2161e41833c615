"""Run configuration: a JSON object describing group, instance and gauge.

Example::

    {
      "group":    {"kind": "Z", "window": 2000},
      "instance": {"kind": "trig", "frequencies": [0.618], "amplitudes": [1.0]},
      "gauge":    {"name": "sup", "window": 50},
      "eps":      [0.5, 0.25],
      "complete": true
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import UsageError
from .group import as_fraction

KNOWN_KEYS = {"group", "instance", "gauge", "eps", "window", "complete", "exact", "out", "cap", "seed", "R"}


@dataclass
class RunConfig:
    group: dict
    instance: dict
    gauge: dict
    eps: list | None = None
    window: object = None
    complete: bool = False
    exact: bool = False
    out: str | None = None
    cap: int = 10**7
    R: int | None = None
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("group", "instance", "gauge"):
            if not isinstance(getattr(self, name), dict):
                raise UsageError(f"config field {name!r} must be an object")
        if self.eps is not None:
            self.eps = parse_eps(self.eps)
        if self.window is not None:
            w = as_fraction(self.window)
            if w < 0:
                raise UsageError("window must be >= 0")

    def build_dict(self) -> dict:
        """The dictionary handed to the instance builder."""
        group = dict(self.group)
        if self.window is not None:
            group["window"] = self.window
        return {"group": group, "instance": self.instance, "gauge": self.gauge,
                "complete": self.complete, "cap": self.cap}

    def to_dict(self) -> dict:
        out = {"group": self.group, "instance": self.instance, "gauge": self.gauge,
               "complete": self.complete, "exact": self.exact}
        if self.eps is not None:
            out["eps"] = [str(e) for e in self.eps]
        if self.window is not None:
            out["window"] = str(self.window)
        if self.R is not None:
            out["R"] = self.R
        return out


def parse_eps(values) -> list:
    """Exact, strictly positive, de-duplicated and sorted (largest first)."""
    if isinstance(values, str):
        values = [v for v in values.replace(";", ",").split(",") if v.strip()]
    if not isinstance(values, (list, tuple)) or not values:
        raise UsageError("eps grid must be a nonempty list")
    eps = [as_fraction(v.strip() if isinstance(v, str) else v) for v in values]
    if any(e <= 0 for e in eps):
        raise UsageError("eps values must be strictly positive")
    return sorted(set(eps), reverse=True)


def from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(d) - KNOWN_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key in ("group", "instance", "gauge"):
        if key not in d:
            raise UsageError(f"config is missing {key!r}")
    return RunConfig(d["group"], d["instance"], d["gauge"], d.get("eps"), d.get("window"),
                     bool(d.get("complete", False)), bool(d.get("exact", False)), d.get("out"),
                     int(d.get("cap", 10**7)), d.get("R"), dict(d))


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    return from_dict(data)
