"""Run configuration: one JSON document, optionally overridden by CLI flags."""

from __future__ import annotations

import json
import dataclasses
from dataclasses import asdict, dataclass, fields

from .errors import ConfigError, DomainError
from .repeater import RepeaterConfig, nesting_levels
from .streams import SEED_MASK
from .xy_chain import ChainParams

SCENARIOS = (
    "spectrum",
    "correlations",
    "monolithic",
    "repeater_simple",
    "repeater_full",
    "extract",
    "compare",
)

DEFAULT_N_VALUES = {
    "correlations": list(range(2, 41)),
    "monolithic": list(range(3, 31)),
    "repeater_simple": [8, 16, 32, 64, 128],
    "repeater_full": [8, 16, 32, 64, 128],
    "compare": [8, 16, 32, 64, 128],
}

CHAIN_KEYS = ("n_sites", "field", "anisotropy")
REPEATER_KEYS = (
    "segment_length",
    "link_prob",
    "link_fidelity",
    "swap_fidelity",
    "bsm_prob",
    "target_fidelity",
)


@dataclass
class RunConfig:
    scenario: str
    n_sites: int = 10
    field: float = 1.5
    anisotropy: float = 1.0
    n_values: list = dataclasses.field(default_factory=list)
    segment_length: int = 4
    link_prob: float | None = None
    link_fidelity: float = 0.95
    swap_fidelity: float = 0.95
    bsm_prob: float = 0.5
    target_fidelity: float = 0.97
    trials: int = 1000
    seed: int = 20240101
    output_path: str = "out.csv"
    k_points: int = 1001
    fidelities: list = dataclasses.field(default_factory=lambda: [0.8, 0.9, 0.97, 1.0])
    shots: int = 100_000
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}", "scenario")
        if not self.n_values:
            self.n_values = DEFAULT_N_VALUES.get(self.scenario, [self.n_sites])
        _int_field(self, "trials", minimum=1)
        _int_field(self, "shots", minimum=1)
        _int_field(self, "k_points", minimum=2)
        _int_field(self, "workers", minimum=1)
        _int_field(self, "seed", minimum=0)
        if self.seed > SEED_MASK:
            raise ConfigError("must fit in 64 unsigned bits", "seed")
        if not self.output_path:
            raise ConfigError("must be a non-empty path", "output_path")
        if any(int(n) != n or n < 1 for n in self.n_values):
            raise ConfigError("must be positive integers", "n_values")
        self.n_values = [int(n) for n in self.n_values]
        try:
            self.chain()
        except DomainError as exc:
            raise ConfigError(str(exc), "chain") from exc
        if self.scenario in ("repeater_simple", "repeater_full", "compare"):
            for n in self.n_values:
                rc = self.repeater(n)
                if self.scenario != "repeater_simple":
                    nesting_levels(rc.n_segments)
        if self.scenario == "extract":
            for f in self.fidelities:
                if not 0.25 <= f <= 1:
                    raise ConfigError("fidelities must be in [1/4, 1]", "fidelities")

    def chain(self, n_sites: int | None = None) -> ChainParams:
        return ChainParams(self.n_sites if n_sites is None else n_sites, self.field, self.anisotropy)

    def repeater(self, total_length: int) -> RepeaterConfig:
        return RepeaterConfig(
            total_length=total_length,
            segment_length=self.segment_length,
            link_fidelity=self.link_fidelity,
            swap_fidelity=self.swap_fidelity,
            bsm_prob=self.bsm_prob,
            target_fidelity=self.target_fidelity,
            field=self.field,
            link_prob=self.link_prob,
        )

    def to_dict(self) -> dict:
        return asdict(self)


def _int_field(cfg, name, minimum):
    v = getattr(cfg, name)
    if isinstance(v, bool) or int(v) != v or v < minimum:
        raise ConfigError(f"must be an integer >= {minimum}, got {v!r}", name)
    setattr(cfg, name, int(v))


_KNOWN = {f.name for f in fields(RunConfig)}


def flatten_document(doc: dict) -> dict:
    """Accept nested ``chain`` / ``repeater`` sections or flat keys."""
    flat = {}
    for key, value in doc.items():
        if key == "chain" and isinstance(value, dict):
            for k, v in value.items():
                if k not in CHAIN_KEYS:
                    raise ConfigError(f"unknown chain key {k!r}", f"chain.{k}")
                flat[k] = v
        elif key == "repeater" and isinstance(value, dict):
            for k, v in value.items():
                if k == "total_length":
                    flat.setdefault("n_values", [v])
                    continue
                if k == "field":
                    flat["field"] = v
                    continue
                if k not in REPEATER_KEYS:
                    raise ConfigError(f"unknown repeater key {k!r}", f"repeater.{k}")
                flat[k] = v
        elif key in _KNOWN:
            flat[key] = value
        else:
            raise ConfigError("unknown configuration key", key)
    return flat


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    doc = {}
    if path is not None:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", "config") from exc
        if not isinstance(doc, dict):
            raise ConfigError("top level must be an object", "config")
    flat = flatten_document(doc)
    flat.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if "scenario" not in flat:
        raise ConfigError("missing", "scenario")
    try:
        return RunConfig(**flat)
    except TypeError as exc:
        raise ConfigError(str(exc), "config") from exc
