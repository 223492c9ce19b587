"""Run configuration: a ``key = value`` text file, overridden by CLI flags."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .phases import threshold_from_base
from .templates import CostConstants


@dataclass(frozen=True)
class Config:
    threshold_base: float = 1.9
    cutoff: float | None = None
    zeta: float = 1.0
    c: float = 2.0
    entropy_tol: float = 1e-9
    workers: int = 1

    @property
    def threshold(self):
        return threshold_from_base(self.threshold_base)

    @property
    def constants(self) -> CostConstants:
        return CostConstants(zeta=self.zeta, c=self.c)

    def update(self, **overrides) -> "Config":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(key: str, raw: str):
    if key == "workers":
        return int(raw)
    if key == "cutoff" and raw.lower() in ("", "none", "default"):
        return None
    return float(raw)


def parse_config(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("config line %d: expected key = value" % lineno)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ValueError("config line %d: unknown key %r" % (lineno, key))
        try:
            out[key] = _coerce(key, raw)
        except ValueError:
            raise ValueError("config line %d: bad value %r for %s" % (lineno, raw, key)) from None
    return out


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return Config()
    return Config(**parse_config(Path(path).read_text()))
