"""Segmented repeater chain: link generation, swapping, purification and costs.

Two families of models live here.  The closed forms cover the simple
iterative chain (linear swapping, no purification).  The Monte Carlo in
:func:`simulate_full_repeater` covers the nested architecture:

* level 0: every segment heralds raw links (geometric in ``link_prob``) and
  purifies them to ``target_fidelity``;
* level l >= 1: adjacent purified links are joined by a BSM that is retried
  until it succeeds; each failure destroys both inputs, which are rebuilt
  from scratch and paid for again.  The merged link has fidelity
  ``F_child * F_swap`` and is purified back to ``target_fidelity``.

Pair consumption inside purification is accounted with expected values.  The
copies a purification step consumes are assumed to be produced concurrently,
so a level charges the sampled build time of one copy plus one round per
purification round.  Rounds count link-heralding attempts, BSM attempts and
purification rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import NamedTuple

import numpy as np

from . import monolithic
from .errors import ConfigError, DomainError, NumericalError
from .ledger import CostLedger, efficiency
from .purification import BellDiagonalState, purify_to_target, werner_from_fidelity
from .streams import map_units, mean_and_stderr, unit_rng

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class RepeaterConfig:
    total_length: int
    segment_length: int
    link_fidelity: float = 0.95
    swap_fidelity: float = 0.95
    bsm_prob: float = 0.5
    target_fidelity: float = 0.97
    field: float = 1.5
    link_prob: float | None = None

    def __post_init__(self):
        n, l = self.total_length, self.segment_length
        if int(n) != n or n < 1:
            raise ConfigError("must be a positive integer", "total_length")
        if int(l) != l or l < 3:
            raise ConfigError("must be an integer >= 3 (a link needs a bulk site)", "segment_length")
        if n % l:
            raise ConfigError(f"total length {n} is not divisible by segment length {l}", "total_length")
        if self.link_prob is None:
            object.__setattr__(self, "link_prob", default_link_prob(l))
        if not 0 < self.link_prob <= 1:
            raise ConfigError("must lie in (0, 1]", "link_prob")
        if not 0.5 < self.link_fidelity <= 1:
            raise ConfigError("must lie in (1/2, 1]", "link_fidelity")
        if not 0 < self.swap_fidelity <= 1:
            raise ConfigError("must lie in (0, 1]", "swap_fidelity")
        if not 0 < self.bsm_prob <= 1:
            raise ConfigError("must lie in (0, 1]", "bsm_prob")
        if not 0.5 < self.target_fidelity < 1:
            raise ConfigError("must lie in (1/2, 1)", "target_fidelity")
        if not self.field > 0:
            raise ConfigError("must be > 0", "field")

    @property
    def n_segments(self) -> int:
        return self.total_length // self.segment_length


def default_link_prob(segment_length: int) -> float:
    """Heralding probability of a link, taken from the monolithic model at length L."""
    return math.ldexp(1.0, -(segment_length - 2))


class LinkEnergy(NamedTuple):
    full: float
    """2^(L-2) (L-2) h: mean monolithic cost of one successful link."""
    per_attempt: float
    """(L-2) h: energy injected by one attempt."""


def link_energy_constant(segment_length: int, field: float) -> LinkEnergy:
    return LinkEnergy(
        monolithic.total_cost(segment_length, field),
        monolithic.injected_energy(segment_length, field),
    )


# -- link generation ---------------------------------------------------------


def _check_links(n_segments, link_prob):
    if int(n_segments) != n_segments or n_segments < 1:
        raise DomainError(f"number of segments must be a positive integer, got {n_segments!r}")
    if not 0 < link_prob <= 1:
        raise DomainError(f"link probability must lie in (0, 1], got {link_prob!r}")


def expected_rounds_exact(n_segments: int, link_prob: float) -> float:
    """sum_{k=1}^{M} 1 / (1 - (1 - P)^(M - k + 1))."""
    _check_links(n_segments, link_prob)
    q = 1.0 - link_prob
    return math.fsum(1.0 / -math.expm1(j * math.log(q)) if q > 0 else 1.0 for j in range(1, n_segments + 1))


class RoundsApprox(NamedTuple):
    harmonic: float
    asymptotic: float


def harmonic_number(m: int) -> float:
    return math.fsum(1.0 / k for k in range(1, m + 1))


def expected_rounds_approx(n_segments: int, link_prob: float) -> RoundsApprox:
    """H_M / P and its large-M form (ln M + gamma_E) / P."""
    _check_links(n_segments, link_prob)
    return RoundsApprox(
        harmonic_number(n_segments) / link_prob,
        (math.log(n_segments) + EULER_GAMMA) / link_prob,
    )


def expected_max_geometric(n_segments: int, link_prob: float) -> float:
    """E[max of M iid geometric(P)] by inclusion-exclusion.

    Alternating sum; fine for the M <= 64 used here, loses digits beyond.
    """
    _check_links(n_segments, link_prob)
    q = 1.0 - link_prob
    total = 0.0
    for j in range(1, n_segments + 1):
        total += (-1) ** (j + 1) * math.comb(n_segments, j) / (1.0 - q**j)
    return total


def _link_generation_trial(index, seed, n_segments, link_prob):
    rng = unit_rng(seed, "link_generation", index)
    return float(rng.geometric(link_prob, size=n_segments).max())


def simulate_link_generation(
    n_segments: int, link_prob: float, trials: int, seed: int, workers: int = 1
) -> tuple[float, float]:
    """Monte Carlo of parallel heralding: rounds until every segment has a link.

    Returns the mean number of rounds and its standard error.
    """
    _check_links(n_segments, link_prob)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    fn = partial(_link_generation_trial, seed=seed, n_segments=n_segments, link_prob=link_prob)
    return mean_and_stderr(map_units(fn, trials, workers))


# -- simple iterative chain --------------------------------------------------


def chain_fidelity(link_fidelity: float, swap_fidelity: float, n_segments) -> float:
    """F_L * F_swap^(M-1).  ``n_segments`` may be real for threshold analysis."""
    for v in (link_fidelity, swap_fidelity):
        if not 0 < v <= 1:
            raise DomainError(f"fidelities must lie in (0, 1], got {v!r}")
    return link_fidelity * swap_fidelity ** (n_segments - 1)


def fidelity_threshold_segments(link_fidelity: float, swap_fidelity: float, threshold: float = 0.5) -> float:
    """Real M at which :func:`chain_fidelity` equals ``threshold``."""
    if not 0 < swap_fidelity < 1:
        raise DomainError("a finite crossing needs swap fidelity in (0, 1)")
    return 1.0 + math.log(threshold / link_fidelity) / math.log(swap_fidelity)


def swap_chain_probability(bsm_prob: float, n_segments: int) -> float:
    if not 0 < bsm_prob <= 1:
        raise DomainError(f"BSM probability must lie in (0, 1], got {bsm_prob!r}")
    if n_segments < 1:
        raise DomainError("need at least one segment")
    return bsm_prob ** (n_segments - 1)


class SimpleIterativeCost(NamedTuple):
    ledger: CostLedger
    injected_energy_per_attempt_constant: float
    """Energy computed with the per-attempt link constant (L-2) h."""


def simple_iterative_cost(config: RepeaterConfig) -> SimpleIterativeCost:
    """Closed-form ledger of linear swapping without purification.

    The ledger charges ``c N / p_BSM^(M-1)`` with ``c`` the mean cost of one
    successful monolithic link; the alternative with ``c = (L-2) h`` is
    returned alongside.
    """
    m = config.n_segments
    c = link_energy_constant(config.segment_length, config.field)
    prob = swap_chain_probability(config.bsm_prob, m)
    if prob == 0.0:
        raise NumericalError(f"swap-chain probability underflows at M={m}")
    energy = c.full * config.total_length / prob
    work = config.field * prob
    ledger = CostLedger(
        rounds=expected_rounds_exact(m, config.link_prob),
        injected_energy=energy,
        end_to_end_prob=prob,
        end_to_end_fidelity=chain_fidelity(config.link_fidelity, config.swap_fidelity, m),
        pairs_consumed=m / prob,
        extracted_work=work,
        efficiency=efficiency(work, energy),
    )
    return SimpleIterativeCost(ledger, c.per_attempt * config.total_length / prob)


def monolithic_ledger(n_sites: int, field: float) -> CostLedger:
    """Monolithic protocol in ledger form (fidelity of the heralded channel taken as 1)."""
    p = monolithic.success_probability(n_sites)
    energy = monolithic.total_cost(n_sites, field)
    work = field * p
    return CostLedger(
        rounds=1.0 / p,
        injected_energy=energy,
        end_to_end_prob=p,
        end_to_end_fidelity=1.0,
        pairs_consumed=1.0,
        extracted_work=work,
        efficiency=efficiency(work, energy),
    )


# -- nested repeater ---------------------------------------------------------


class LevelPlan(NamedTuple):
    input_fidelity: float
    state: BellDiagonalState
    cycles: int
    pairs: float


def nesting_levels(n_segments: int) -> int:
    levels = n_segments.bit_length() - 1
    if n_segments < 1 or 1 << levels != n_segments:
        raise ConfigError(f"nesting needs a power-of-two segment count, got {n_segments}", "total_length")
    return levels


def purification_plan(config: RepeaterConfig) -> list[LevelPlan]:
    """Deterministic fidelity/pair schedule for each nesting level."""
    levels = nesting_levels(config.n_segments)
    plans = []
    f_in = config.link_fidelity
    for level in range(levels + 1):
        if level > 0:
            f_in = chain_fidelity(plans[-1].state.fidelity, config.swap_fidelity, 2)
        state, cycles, pairs = purify_to_target(werner_from_fidelity(f_in), config.target_fidelity)
        plans.append(LevelPlan(f_in, state, cycles, pairs))
    return plans


class RepeaterTrial(NamedTuple):
    rounds: float
    energy: float
    fidelity: float
    bsm_attempts: int


def _build_link(level, plans, config, link_cost, rng, counter):
    plan = plans[level]
    if level == 0:
        p = config.link_prob
        rounds = 1 if p >= 1 else int(rng.geometric(p))
        return rounds + 2 * plan.cycles, link_cost * plan.pairs
    rounds = 0
    energy = 0.0
    while True:
        r1, e1 = _build_link(level - 1, plans, config, link_cost, rng, counter)
        r2, e2 = _build_link(level - 1, plans, config, link_cost, rng, counter)
        rounds += max(r1, r2) + 1
        energy += e1 + e2
        counter[0] += 1
        if config.bsm_prob >= 1 or rng.random() < config.bsm_prob:
            break
    return rounds + 2 * plan.cycles, energy * plan.pairs


def _full_repeater_trial(index, config, seed):
    plans = purification_plan(config)
    rng = unit_rng(seed, "repeater_full", index)
    counter = [0]
    link_cost = link_energy_constant(config.segment_length, config.field).full
    rounds, energy = _build_link(len(plans) - 1, plans, config, link_cost, rng, counter)
    return RepeaterTrial(float(rounds), energy, plans[-1].state.fidelity, counter[0])


def simulate_full_repeater_trials(
    config: RepeaterConfig, seed: int, trials: int, workers: int = 1
) -> list[RepeaterTrial]:
    if trials < 1:
        raise DomainError("trials must be >= 1")
    purification_plan(config)  # fail fast on invalid nesting or non-convergence
    fn = partial(_full_repeater_trial, config=config, seed=seed)
    return map_units(fn, trials, workers)


def summarize_trials(config: RepeaterConfig, results: list[RepeaterTrial]) -> CostLedger:
    link_cost = link_energy_constant(config.segment_length, config.field).full
    rounds, _ = mean_and_stderr([r.rounds for r in results])
    energy, _ = mean_and_stderr([r.energy for r in results])
    prob = 1.0  # repeat-until-success delivers in every trial
    work = config.field * prob
    return CostLedger(
        rounds=rounds,
        injected_energy=energy,
        end_to_end_prob=prob,
        end_to_end_fidelity=min(r.fidelity for r in results),
        pairs_consumed=energy / link_cost,
        extracted_work=work,
        efficiency=efficiency(work, energy),
    )


def simulate_full_repeater(config: RepeaterConfig, seed: int, trials: int, workers: int = 1) -> CostLedger:
    """Monte Carlo ledger of the nested purify-and-swap repeater."""
    return summarize_trials(config, simulate_full_repeater_trials(config, seed, trials, workers))
