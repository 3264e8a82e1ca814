"""Per-run resource accounting shared by all protocols."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

from .errors import NumericalError


@dataclass(frozen=True)
class CostLedger:
    rounds: float
    injected_energy: float
    end_to_end_prob: float
    end_to_end_fidelity: float
    pairs_consumed: float
    extracted_work: float
    efficiency: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v >= 0):
                raise NumericalError(f"ledger field {f.name} must be finite and >= 0, got {v!r}")
        if self.end_to_end_prob > 1 + 1e-12 or self.end_to_end_fidelity > 1 + 1e-12:
            raise NumericalError("probabilities and fidelities must not exceed 1")

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)


def efficiency(work: float, energy: float) -> float:
    return work / energy if energy > 0 else 0.0
