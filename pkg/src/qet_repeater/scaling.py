"""Competing scaling-law fits for a positive series y(N).

Three least-squares models are fitted:

* exponential  log y = a + rate * N
* polynomial   log y = a + rate * log N
* polylog      y     = a + rate * log N

Residuals are all measured the same way, as the RMS of log y - log y_hat,
so the models can be ranked against each other.  A polylog prediction that
is not positive gets an infinite residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MODELS = ("exponential", "polynomial", "polylog")


class DegenerateSeriesError(DomainError):
    pass


@dataclass(frozen=True)
class FitSummary:
    model: str
    rate: float
    intercept: float
    residual: float


@dataclass(frozen=True)
class ScalingFit:
    fits: dict
    best: str

    def __getitem__(self, model: str) -> FitSummary:
        return self.fits[model]


def _line(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


def _log_rms(log_y, log_pred):
    return float(np.sqrt(np.mean((log_y - log_pred) ** 2)))


def fit_scaling(n, y) -> ScalingFit:
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    if n.shape != y.shape or n.ndim != 1:
        raise DomainError("n and y must be 1-d sequences of equal length")
    if n.size < 4:
        raise DomainError(f"need at least 4 points, got {n.size}")
    if np.any(n <= 0) or np.any(y <= 0):
        raise DomainError("n and y must be positive")
    if np.ptp(y) <= 1e-12 * np.max(np.abs(y)):
        raise DegenerateSeriesError("series is constant; no growth model to fit")
    log_n, log_y = np.log(n), np.log(y)

    fits = {}
    rate, icpt = _line(n, log_y)
    fits["exponential"] = FitSummary("exponential", rate, icpt, _log_rms(log_y, icpt + rate * n))
    rate, icpt = _line(log_n, log_y)
    fits["polynomial"] = FitSummary("polynomial", rate, icpt, _log_rms(log_y, icpt + rate * log_n))
    rate, icpt = _line(log_n, y)
    pred = icpt + rate * log_n
    resid = _log_rms(log_y, np.log(pred)) if np.all(pred > 0) else math.inf
    fits["polylog"] = FitSummary("polylog", rate, icpt, resid)

    best = min(MODELS, key=lambda m: fits[m].residual)
    return ScalingFit(fits, best)


def log_slope(n, y) -> tuple[float, float]:
    """Slope of log|y| against n and the RMS residual of that line."""
    n = np.asarray(n, dtype=float)
    log_y = np.log(np.abs(np.asarray(y, dtype=float)))
    slope, icpt = _line(n, log_y)
    return slope, _log_rms(log_y, icpt + slope * n)
