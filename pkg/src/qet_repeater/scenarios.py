"""Scenario orchestration and CSV/manifest emission."""

from __future__ import annotations

import csv
import json
import logging
import time
from pathlib import Path

import numpy as np

from . import __version__, extraction, monolithic, repeater, xy_chain
from .config import RunConfig
from .errors import NumericalError
from .scaling import DegenerateSeriesError, fit_scaling

log = logging.getLogger(__name__)

REPEATER_COLUMNS = ("n", "l", "m", "rounds", "energy", "prob", "fidelity", "pairs", "work", "efficiency")
FIT_COLUMNS = ("protocol", "metric", "model", "rate", "intercept", "residual", "best")
PROTOCOLS = ("monolithic", "simple_iterative", "full_repeater")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".15g")
    return str(value)


def write_csv(path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def manifest_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".manifest.json")


def fits_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + "_fits" + p.suffix)


def _ledger_row(cfg_r: repeater.RepeaterConfig, ledger):
    return (
        cfg_r.total_length,
        cfg_r.segment_length,
        cfg_r.n_segments,
        ledger.rounds,
        ledger.injected_energy,
        ledger.end_to_end_prob,
        ledger.end_to_end_fidelity,
        ledger.pairs_consumed,
        ledger.extracted_work,
        ledger.efficiency,
    )


def run_spectrum(cfg: RunConfig):
    params = cfg.chain()
    samples = xy_chain.sample_dispersion(params, cfg.k_points)
    return {cfg.output_path: (("k", "epsilon"), [tuple(s) for s in samples])}


def run_correlations(cfg: RunConfig):
    rows = []
    for n in cfg.n_values:
        if n < 2:
            continue
        params = cfg.chain(n)
        cxx = xy_chain.correlation_xx(xy_chain.ground_covariance(params), 1, n)
        rows.append((n, cxx, cxx * cxx))
    return {cfg.output_path: (("n", "cxx", "e_std"), rows)}


def run_monolithic(cfg: RunConfig):
    rows = []
    for n in cfg.n_values:
        if n < 3:
            continue
        rep = monolithic.analyze(cfg.chain(n))
        rows.append((n, rep.success_prob, rep.injected_energy, rep.total_cost, rep.induced_norm, rep.parity_sign))
    return {cfg.output_path: (("n", "p_succ", "de_inj", "e_total", "induced_norm", "parity"), rows)}


def run_repeater_simple(cfg: RunConfig):
    rows = []
    for n in cfg.n_values:
        rc = cfg.repeater(n)
        rows.append(_ledger_row(rc, repeater.simple_iterative_cost(rc).ledger))
    return {cfg.output_path: (REPEATER_COLUMNS, rows)}


def run_repeater_full(cfg: RunConfig):
    rows = []
    for n in cfg.n_values:
        rc = cfg.repeater(n)
        ledger = repeater.simulate_full_repeater(rc, cfg.seed, cfg.trials, cfg.workers)
        log.info("repeater_full n=%d energy=%.6g fidelity=%.6g", n, ledger.injected_energy, ledger.end_to_end_fidelity)
        rows.append(_ledger_row(rc, ledger))
    return {cfg.output_path: (REPEATER_COLUMNS, rows)}


def run_extract(cfg: RunConfig):
    rows = []
    for f in cfg.fidelities:
        analytic = extraction.yield_vs_fidelity(f, cfg.field)
        mean, err = extraction.sample_work(extraction.werner_channel(f), cfg.field, cfg.shots, cfg.seed, cfg.workers)
        rows.append((float(f), analytic, mean, err))
    return {cfg.output_path: (("fidelity", "work_analytic", "work_sampled", "stderr"), rows)}


def compare_ledgers(cfg: RunConfig) -> dict:
    """Ledgers of the three protocols at every requested total length."""
    out = {p: [] for p in PROTOCOLS}
    for n in cfg.n_values:
        rc = cfg.repeater(n)
        out["monolithic"].append(repeater.monolithic_ledger(n, cfg.field))
        out["simple_iterative"].append(repeater.simple_iterative_cost(rc).ledger)
        out["full_repeater"].append(repeater.simulate_full_repeater(rc, cfg.seed, cfg.trials, cfg.workers))
    return out


def scaling_table(n_values, ledgers: dict) -> list[tuple]:
    """Fit rows (protocol, metric, model, rate, intercept, residual, best)."""
    rows = []
    metrics = {"rounds": "rounds", "energy": "injected_energy", "efficiency": "efficiency", "work": "extracted_work"}
    for protocol in PROTOCOLS:
        for metric, attr in metrics.items():
            y = [getattr(l, attr) for l in ledgers[protocol]]
            try:
                fit = fit_scaling(n_values, y)
            except DegenerateSeriesError:
                rows.append((protocol, metric, "constant", 0.0, float(y[0]), 0.0, 1))
                continue
            for model, summary in fit.fits.items():
                rows.append(
                    (protocol, metric, model, summary.rate, summary.intercept, summary.residual, int(model == fit.best))
                )
    return rows


def run_compare(cfg: RunConfig):
    ledgers = compare_ledgers(cfg)
    rows = []
    for i, n in enumerate(cfg.n_values):
        rc = cfg.repeater(n)
        for protocol in PROTOCOLS:
            rows.append((protocol,) + _ledger_row(rc, ledgers[protocol][i]))
    fit_rows = scaling_table(cfg.n_values, ledgers)
    for r in fit_rows:
        if r[-1]:
            log.info("fit protocol=%s metric=%s best=%s rate=%.6g", r[0], r[1], r[2], r[3])
    return {
        cfg.output_path: (("protocol",) + REPEATER_COLUMNS, rows),
        str(fits_path(cfg.output_path)): (FIT_COLUMNS, fit_rows),
    }


RUNNERS = {
    "spectrum": run_spectrum,
    "correlations": run_correlations,
    "monolithic": run_monolithic,
    "repeater_simple": run_repeater_simple,
    "repeater_full": run_repeater_full,
    "extract": run_extract,
    "compare": run_compare,
}


def run(cfg: RunConfig) -> list[Path]:
    """Run one scenario; returns the paths written (CSVs then the manifest)."""
    start = time.perf_counter()
    log.info("run scenario=%s seed=%d out=%s", cfg.scenario, cfg.seed, cfg.output_path)
    tables = RUNNERS[cfg.scenario](cfg)
    # fit tables may carry inf residuals for models that cannot fit
    _, data_rows = tables[cfg.output_path]
    for row in data_rows:
        for v in row:
            if isinstance(v, float) and not np.isfinite(v):
                raise NumericalError(f"non-finite value in {cfg.scenario} output: {row}")
    written = []
    for path, (columns, rows) in tables.items():
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        write_csv(path, columns, rows)
        written.append(Path(path))
    manifest = {
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "version": __version__,
        "config": cfg.to_dict(),
        "outputs": [str(p) for p in written],
        "wall_time_s": time.perf_counter() - start,
    }
    mpath = manifest_path(cfg.output_path)
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append(mpath)
    log.info("done scenario=%s files=%d wall_time_s=%.3f", cfg.scenario, len(written), manifest["wall_time_s"])
    return written
