"""Pipeline configuration: a single JSON document."""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .corpus import SiteId, TimeWindow, parse_sites
from .errors import ConfigError
from .events import GsdmmParams
from .langmodel import DIVERGENCE_MODES
from .measures import DEFAULT_DELTA0, DEFAULT_TAU
from .preprocess import STEMMERS

DEFAULTS: dict[str, Any] = {
    "inputs": {"tweets": None, "users": None, "training_users": None, "articles": None},
    "sites": [],
    "strict_sites": True,
    "window": None,
    "preprocess": {"stemmer": "none", "stopwords": None},
    "publisher": {"threshold": 0.5, "log_counts": False, "model": None},
    "gsdmm": {"alpha": 0.1, "beta": 0.1, "K": 50, "iterations": 10, "seed": 0},
    "events": {"min_cluster_size": 1, "top_words": 20},
    "measures": {"tau": DEFAULT_TAU, "delta0": DEFAULT_DELTA0, "divergence_mode": "jsd-mixture"},
    "serank": {"engines": {}, "rank_base": 1, "strict": True},
    "out_dir": "out",
}

# which inputs each stage reads
STAGE_INPUTS = {
    "classify-publishers": ("users", "training_users"),
    "detect-events": ("tweets",),
    "rank": ("tweets", "articles"),
    "serank": ("tweets",),
    "report": (),
}
STAGE_INPUTS["run"] = tuple(sorted({p for v in STAGE_INPUTS.values() for p in v}))


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "engines":
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass
class PipelineConfig:
    raw: dict
    base_dir: Path

    @classmethod
    def from_dict(cls, raw: dict, base_dir=".") -> "PipelineConfig":
        unknown = set(raw) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(_merge(DEFAULTS, raw), Path(base_dir))
        cfg._validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_dict(raw, path.parent)

    def _validate(self) -> None:
        try:
            self.sites
            self.gsdmm
            self.window
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
        if self.raw["preprocess"]["stemmer"] not in STEMMERS:
            raise ConfigError(f"preprocess.stemmer must be one of {STEMMERS}")
        if self.raw["measures"]["divergence_mode"] not in DIVERGENCE_MODES:
            raise ConfigError(f"measures.divergence_mode must be one of {DIVERGENCE_MODES}")
        if self.raw["serank"]["rank_base"] not in (0, 1):
            raise ConfigError("serank.rank_base must be 0 or 1")
        if not self.sites:
            raise ConfigError("config must register at least one site")

    def with_overrides(self, *, seed: int | None = None, out: str | None = None) -> "PipelineConfig":
        raw = copy.deepcopy(self.raw)
        if seed is not None:
            raw["gsdmm"]["seed"] = int(seed)
        base = self.base_dir
        if out is not None:
            raw["out_dir"] = str(Path(out).resolve())
        return PipelineConfig(raw, base)

    def resolve(self, p: str | None) -> Path | None:
        if p is None:
            return None
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p

    def input_path(self, name: str) -> Path | None:
        return self.resolve(self.raw["inputs"].get(name))

    def check_inputs(self, stage: str) -> None:
        """Fail fast, naming the first referenced input file that does not exist."""
        needed = list(STAGE_INPUTS[stage])
        if "training_users" in needed and self.raw["publisher"]["model"]:
            needed.remove("training_users")
            needed.append("publisher_model")
        for name in needed:
            path = self.resolve(self.raw["publisher"]["model"]) if name == "publisher_model" else self.input_path(name)
            if path is None:
                raise ConfigError(f"inputs.{name} is not configured")
            if not path.is_file():
                raise ConfigError(f"inputs.{name}: file not found: {path}")
        if stage in ("serank", "run"):
            for engine, p in self.raw["serank"]["engines"].items():
                path = self.resolve(p)
                if not path.is_file():
                    raise ConfigError(f"serank.engines.{engine}: file not found: {path}")

    @property
    def out_dir(self) -> Path:
        return self.resolve(self.raw["out_dir"])

    @property
    def sites(self) -> list[SiteId]:
        return parse_sites(self.raw["sites"])

    @property
    def site_names(self) -> list[str]:
        return [s.name for s in self.sites]

    @property
    def gsdmm(self) -> GsdmmParams:
        return GsdmmParams(**self.raw["gsdmm"])

    @property
    def window(self) -> TimeWindow | None:
        w = self.raw["window"]
        return None if w is None else TimeWindow(int(w["start"]), int(w["end"]))

    @property
    def stopwords_path(self) -> Path | None:
        return self.resolve(self.raw["preprocess"]["stopwords"])

    def section(self, name: str) -> dict:
        return self.raw[name]

    def digest(self) -> str:
        """Stable hash of the effective configuration; the output directory is excluded."""
        hashed = {k: v for k, v in self.raw.items() if k != "out_dir"}
        blob = json.dumps(hashed, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        return hashlib.sha256(blob.encode("ascii")).hexdigest()
