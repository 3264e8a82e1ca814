"""Bell-diagonal states and the DEJMPS recurrence map."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BellDiagonalState:
    """Populations on (Phi+, Phi-, Psi+, Psi-)."""

    pop_phi_plus: float
    pop_phi_minus: float
    pop_psi_plus: float
    pop_psi_minus: float

    def __post_init__(self):
        pops = self.populations
        if min(pops) < -_NORM_TOL:
            raise DomainError(f"negative Bell population in {pops}")
        if abs(sum(pops) - 1.0) > _NORM_TOL:
            raise DomainError(f"Bell populations sum to {sum(pops)!r}, expected 1")

    @property
    def populations(self) -> tuple[float, float, float, float]:
        return (self.pop_phi_plus, self.pop_phi_minus, self.pop_psi_plus, self.pop_psi_minus)

    @property
    def fidelity(self) -> float:
        return self.pop_phi_plus

    @property
    def error(self) -> float:
        return 1.0 - self.pop_phi_plus


def werner_from_fidelity(fidelity: float) -> BellDiagonalState:
    if not 0.25 <= fidelity <= 1.0:
        raise DomainError(f"Werner fidelity must lie in [1/4, 1], got {fidelity!r}")
    rest = (1.0 - fidelity) / 3.0
    return BellDiagonalState(fidelity, rest, rest, rest)


def purify_round(state: BellDiagonalState) -> tuple[BellDiagonalState, float]:
    """One DEJMPS round on two copies of ``state``.

    Returns the post-selected state and the probability that the two
    parity measurements agree.
    """
    a, b, c, d = state.populations
    norm = (a + b) ** 2 + (c + d) ** 2
    out = BellDiagonalState(
        (a * a + b * b) / norm,
        2.0 * c * d / norm,
        (c * c + d * d) / norm,
        2.0 * a * b / norm,
    )
    return out, norm


def basis_rotation(state: BellDiagonalState) -> BellDiagonalState:
    """Local rotation exchanging the Psi+ and Psi- populations."""
    a, b, c, d = state.populations
    return BellDiagonalState(a, b, d, c)


def purify_cycle(state: BellDiagonalState) -> tuple[BellDiagonalState, float]:
    """Round, basis rotation, round.  Returns the state and the joint success probability."""
    first, p1 = purify_round(state)
    second, p2 = purify_round(basis_rotation(first))
    return second, p1 * p2


def purify_to_target(
    state: BellDiagonalState, target_fidelity: float, max_cycles: int = 50
) -> tuple[BellDiagonalState, int, float]:
    """Run cycles until the fidelity reaches ``target_fidelity``.

    Each round consumes two input pairs and succeeds with probability equal to
    its normalization, so the expected number of raw pairs per delivered pair
    is multiplied by ``2 / success`` per round.

    Returns
    -------
    state : BellDiagonalState
    cycles : int
    expected_pairs : float
    """
    if not target_fidelity < 1.0:
        raise DomainError(f"target fidelity must be < 1, got {target_fidelity!r}")
    if not state.fidelity > 0.5:
        raise DomainError(f"purification needs fidelity > 1/2, got {state.fidelity!r}")
    pairs = 1.0
    cycles = 0
    while state.fidelity < target_fidelity:
        if cycles >= max_cycles:
            raise ConvergenceError(
                f"fidelity {state.fidelity:.6g} below target {target_fidelity} after {cycles} cycles"
            )
        first, p1 = purify_round(state)
        state, p2 = purify_round(basis_rotation(first))
        pairs = 2.0 * (2.0 * pairs / p1) / p2
        cycles += 1
    return state, cycles, pairs
