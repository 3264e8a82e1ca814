"""Command-line entry point: ``qet-repeater <scenario> [--config FILE] [flags]``.

Exit status: 0 on success, 2 on configuration errors, 3 on numerical errors,
1 on I/O failures.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import SCENARIOS, load_config
from .errors import ConfigError, DomainError, NumericalError
from .scenarios import run

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 1


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi = part.split(":")[:2]
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


FLAGS = (
    # flag, destination, type, help
    ("--config", "config", str, "JSON configuration file"),
    ("--n", "n_sites", int, "chain length N (also the single sweep point if --n-values is absent)"),
    ("--n-values", "n_values", _int_list, "comma list of N, ranges as lo:hi"),
    ("--h", "field", float, "transverse field h"),
    ("--gamma", "anisotropy", float, "anisotropy gamma"),
    ("--l", "segment_length", int, "repeater segment length L"),
    ("--p-l", "link_prob", float, "link heralding probability (default 2^-(L-2))"),
    ("--f-l", "link_fidelity", float, "elementary link fidelity"),
    ("--f-swap", "swap_fidelity", float, "swap gate fidelity"),
    ("--p-bsm", "bsm_prob", float, "BSM success probability"),
    ("--f-target", "target_fidelity", float, "purification target fidelity"),
    ("--trials", "trials", int, "Monte Carlo trials per point"),
    ("--shots", "shots", int, "extraction shots per fidelity"),
    ("--fidelities", "fidelities", _float_list, "comma list of channel fidelities"),
    ("--k-points", "k_points", int, "momentum grid size for the spectrum"),
    ("--seed", "seed", int, "master seed (64-bit unsigned)"),
    ("--workers", "workers", int, "worker processes for Monte Carlo"),
    ("--out", "output_path", str, "output CSV path; the manifest is written next to it"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qet-repeater", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        for flag, dest, typ, help_ in FLAGS:
            p.add_argument(flag, dest=dest, type=typ, default=None, help=help_)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    overrides = {dest: getattr(args, dest) for _, dest, _, _ in FLAGS if dest != "config"}
    overrides["scenario"] = args.scenario
    if overrides["n_sites"] is not None and overrides["n_values"] is None:
        overrides["n_values"] = [overrides["n_sites"]]
    log = logging.getLogger("qet_repeater")
    try:
        cfg = load_config(args.config, overrides)
        run(cfg)
    except (ConfigError, DomainError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except NumericalError as exc:
        log.error("numerical error: %s", exc)
        return EXIT_NUMERICAL
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
