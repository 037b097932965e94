"""Declarative detector configuration: which rules run and the method /
constructor lists they match against. Loadable from a YAML (or JSON) file so
rules can be tightened without code changes."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from mlsmells.detectors.catalog import _BY_ID
from mlsmells.pysource import DEFAULT_ESTIMATORS, ML_LIBRARIES

ALL_KIND_IDS = tuple(sorted(_BY_ID))


@dataclass(frozen=True)
class DetectorConfig:
    enabled: tuple[str, ...] = ALL_KIND_IDS
    ml_libraries: tuple[str, ...] = tuple(sorted(ML_LIBRARIES))
    inplace_methods: tuple[str, ...] = (
        "drop",
        "drop_duplicates",
        "dropna",
        "fillna",
        "replace",
        "reset_index",
        "sort_values",
    )
    dataframe_readers: tuple[str, ...] = ("pandas.read_csv", "pandas.read_table")
    estimators: tuple[str, ...] = tuple(sorted(DEFAULT_ESTIMATORS))
    optimizer_prefixes: tuple[str, ...] = ("tensorflow.keras.optimizers.", "torch.optim.")
    model_construction_prefixes: tuple[str, ...] = (
        "keras.Model",
        "keras.Sequential",
        "keras.models.",
        "tensorflow.keras.Model",
        "tensorflow.keras.Sequential",
        "tensorflow.keras.models.",
        "torch.nn.",
    )
    memory_free_calls: tuple[str, ...] = ("clear_session", "empty_cache")
    random_api_prefixes: tuple[str, ...] = ("numpy.random.", "random.", "torch.rand")
    seed_calls: tuple[str, ...] = (
        "numpy.random.seed",
        "random.seed",
        "tensorflow.random.set_seed",
        "torch.manual_seed",
    )
    # extra self-admission terms per kind id, merged over the built-in
    # (kind name + kind id) terms by analysis.detect_self_admission
    self_admission_terms: dict[str, tuple[str, ...]] = field(default_factory=dict)
    stage_overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = set(self.enabled) - set(ALL_KIND_IDS)
        if unknown:
            raise ValueError(f"unknown smell kind(s) in config: {sorted(unknown)}")

    def to_dict(self) -> dict:
        out: dict = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                out[f.name] = sorted(value)
            elif isinstance(value, dict):
                out[f.name] = {k: sorted(v) if isinstance(v, (tuple, list)) else v for k, v in sorted(value.items())}
            else:
                out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "DetectorConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown detector config key(s): {sorted(unknown)}")
        kwargs: dict = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if f.name == "self_admission_terms":
                kwargs[f.name] = {k: tuple(v) for k, v in value.items()}
            elif f.name == "stage_overrides":
                kwargs[f.name] = dict(value)
            else:
                kwargs[f.name] = tuple(value)
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "DetectorConfig":
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        if data is None:
            return cls()
        if not isinstance(data, dict):
            raise ValueError(f"detector config must be a mapping, got {type(data).__name__}")
        return cls.from_dict(data)

    def ruleset_hash(self) -> str:
        """Stable digest of the effective configuration; keys the detection cache."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
