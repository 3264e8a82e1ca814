"""Energy extraction at the receiver of a shared two-qubit channel.

Alice measures Y on her qubit and sends the outcome mu to Bob, who rotates
his conditional state about x and keeps the energy released under
H_B = -h Z.  Basis ordering is |00>, |01>, |10>, |11> with Alice first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .errors import DomainError, NumericalError
from .streams import map_units, mean_and_stderr, unit_rng

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

_KET0 = np.array([1, 0], dtype=complex)
_KET1 = np.array([0, 1], dtype=complex)

PHI_PLUS = (np.kron(_KET0, _KET0) + np.kron(_KET1, _KET1)) / math.sqrt(2)
PHI_MINUS = (np.kron(_KET0, _KET0) - np.kron(_KET1, _KET1)) / math.sqrt(2)
PSI_PLUS = (np.kron(_KET0, _KET1) + np.kron(_KET1, _KET0)) / math.sqrt(2)
PSI_MINUS = (np.kron(_KET0, _KET1) - np.kron(_KET1, _KET0)) / math.sqrt(2)
BELL_BASIS = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)

SHOT_BLOCK = 4096


def _check_density(rho, dim):
    if rho.shape != (dim, dim):
        raise DomainError(f"density matrix must be {dim}x{dim}, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-12:
        raise DomainError("density matrix must have unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -1e-10:
        raise DomainError("density matrix is not positive semidefinite")


@dataclass(frozen=True)
class TwoQubitState:
    density: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.density, dtype=complex)
        _check_density(rho, 4)
        object.__setattr__(self, "density", rho)

    def bell_populations(self) -> np.ndarray:
        return np.array([np.vdot(v, self.density @ v).real for v in BELL_BASIS])


@dataclass(frozen=True)
class QubitState:
    density: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.density, dtype=complex)
        _check_density(rho, 2)
        object.__setattr__(self, "density", rho)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([np.trace(self.density @ s).real for s in (SX, SY, SZ)])

    @classmethod
    def from_bloch(cls, r) -> "QubitState":
        x, y, z = r
        return cls(0.5 * (I2 + x * SX + y * SY + z * SZ))

    @classmethod
    def from_ket(cls, psi) -> "QubitState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def bell_phi_plus() -> TwoQubitState:
    return TwoQubitState(np.outer(PHI_PLUS, PHI_PLUS.conj()))


def werner_channel(fidelity: float) -> TwoQubitState:
    """F |Phi+><Phi+| plus (1-F)/3 on each of the other Bell states."""
    if not 0.25 <= fidelity <= 1.0:
        raise DomainError(f"Werner fidelity must lie in [1/4, 1], got {fidelity!r}")
    weights = (fidelity,) + ((1.0 - fidelity) / 3.0,) * 3
    rho = sum(w * np.outer(v, v.conj()) for w, v in zip(weights, BELL_BASIS))
    return TwoQubitState(rho)


def reduced_bob(state: TwoQubitState) -> QubitState:
    rho = state.density.reshape(2, 2, 2, 2)
    return QubitState(np.einsum("abac->bc", rho))


def alice_projector(mu: int) -> np.ndarray:
    if mu not in (1, -1):
        raise DomainError(f"outcome must be +1 or -1, got {mu!r}")
    return 0.5 * (I2 + mu * SY)


def measure_alice_y(state: TwoQubitState, mu: int) -> tuple[float, QubitState]:
    """Probability of outcome ``mu`` and Bob's normalized conditional state."""
    proj = np.kron(alice_projector(mu), I2)
    post = proj @ state.density @ proj
    prob = float(np.trace(post).real)
    if prob < 1e-15:
        raise NumericalError(f"outcome {mu} has vanishing probability {prob:g}")
    bob = np.einsum("abac->bc", (post / prob).reshape(2, 2, 2, 2))
    return prob, QubitState(0.5 * (bob + bob.conj().T))


def bob_energy(q: QubitState, field: float) -> float:
    if not field > 0:
        raise DomainError(f"field must be > 0, got {field!r}")
    return -field * float(q.bloch[2])


def ergotropy(q: QubitState, field: float) -> float:
    """Maximal unitary work under -h Z: h (|r| - r_z)."""
    if not field > 0:
        raise DomainError(f"field must be > 0, got {field!r}")
    r = q.bloch
    return max(0.0, field * (float(np.linalg.norm(r)) - float(r[2])))


def bob_unitary(mu: int) -> np.ndarray:
    """exp(+i mu pi/4 X), which maps (|0> - i mu |1>)/sqrt(2) onto |0>."""
    if mu not in (1, -1):
        raise DomainError(f"outcome must be +1 or -1, got {mu!r}")
    return (I2 + 1j * mu * SX) / math.sqrt(2)


def extract(q: QubitState, mu: int, field: float) -> tuple[QubitState, float]:
    """Apply Bob's correction for outcome ``mu``; work is the mean-energy decrease."""
    u = bob_unitary(mu)
    final = QubitState(u @ q.density @ u.conj().T)
    return final, bob_energy(q, field) - bob_energy(final, field)


def yield_vs_fidelity(fidelity: float, field: float) -> float:
    """Work delivered through a Werner channel: h (4F - 1) / 3."""
    if not 0.25 <= fidelity <= 1.0:
        raise DomainError(f"Werner fidelity must lie in [1/4, 1], got {fidelity!r}")
    return field * (4.0 * fidelity - 1.0) / 3.0


def _shot_block(index, density, field, shots, seed):
    state = TwoQubitState(density)
    n = min(SHOT_BLOCK, shots - index * SHOT_BLOCK)
    rng = unit_rng(seed, "extract", index)
    branches = {}
    for mu in (1, -1):
        prob, bob = measure_alice_y(state, mu)
        final, _ = extract(bob, mu, field)
        p_ground = 0.5 * (1.0 + final.bloch[2])
        branches[mu] = (prob, bob_energy(bob, field), p_ground)
    mu = np.where(rng.random(n) < branches[1][0], 1, -1)
    u = rng.random(n)
    work = np.empty(n)
    for m in (1, -1):
        sel = mu == m
        _, e_before, p_ground = branches[m]
        measured = np.where(u[sel] < p_ground, -field, field)
        work[sel] = e_before - measured
    return work.tolist()


def sample_work(state: TwoQubitState, field: float, shots: int, seed: int, workers: int = 1) -> tuple[float, float]:
    """Shot-sampled extracted work.

    Each shot samples Alice's outcome, applies the matching correction and
    then a projective energy measurement on Bob; the shot's work is Bob's
    conditional mean energy minus the measured energy.  Returns mean and
    standard error.
    """
    if shots < 1:
        raise DomainError("shots must be >= 1")
    n_blocks = -(-shots // SHOT_BLOCK)
    fn = partial(_shot_block, density=state.density, field=field, shots=shots, seed=seed)
    values = [w for block in map_units(fn, n_blocks, workers) for w in block]
    return mean_and_stderr(values)
