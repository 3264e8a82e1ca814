"""Measurement-induced (monolithic) protocol between the two chain endpoints.

The bulk sites 2..N-1 are measured and the endpoint covariance is updated by
the outcome-independent Schur complement

    Gamma_S' = Gamma_S - Gamma_SB Gamma_B^{-1} Gamma_BS.

The resource model is the closed form: success probability 2^-(N-2), energy
(N-2) h injected per attempt and their ratio as the mean total cost.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningWarning, DomainError, NumericalError
from .xy_chain import ChainParams, MajoranaCovariance, ground_covariance

DEFAULT_PINV_TOL = 1e-10


class Correction(enum.Enum):
    IDENTITY = "identity"
    PAULI_Z = "pauli_z"


def endpoint_indices(n_sites: int) -> list[int]:
    """Majorana indices (a_1, b_1, a_N, b_N)."""
    return [0, 1, 2 * n_sites - 2, 2 * n_sites - 1]


def bulk_indices(n_sites: int) -> list[int]:
    return list(range(2, 2 * n_sites - 2))


@dataclass(frozen=True)
class PartitionedCovariance:
    endpoint_block: np.ndarray
    bulk_block: np.ndarray
    cross_block: np.ndarray

    @property
    def n_sites(self) -> int:
        return self.bulk_block.shape[0] // 2 + 2

    def assemble(self) -> np.ndarray:
        """Reassemble the parent covariance in the interleaved site ordering."""
        n = self.n_sites
        s, b = endpoint_indices(n), bulk_indices(n)
        m = np.zeros((2 * n, 2 * n))
        m[np.ix_(s, s)] = self.endpoint_block
        m[np.ix_(b, b)] = self.bulk_block
        m[np.ix_(s, b)] = self.cross_block
        m[np.ix_(b, s)] = -self.cross_block.T
        return m


def partition(cov: MajoranaCovariance) -> PartitionedCovariance:
    n = cov.n_sites
    if n < 3:
        raise DomainError(f"partition needs at least 3 sites, got {n}")
    s, b = endpoint_indices(n), bulk_indices(n)
    m = cov.matrix
    return PartitionedCovariance(
        endpoint_block=m[np.ix_(s, s)].copy(),
        bulk_block=m[np.ix_(b, b)].copy(),
        cross_block=m[np.ix_(s, b)].copy(),
    )


def induced_update(p: PartitionedCovariance, tol: float = DEFAULT_PINV_TOL) -> np.ndarray:
    """The 4x4 term Gamma_SB Gamma_B^{-1} Gamma_BS.

    A pseudo-inverse with singular-value cutoff ``tol`` replaces the inverse;
    a :class:`ConditioningWarning` is emitted when the cutoff drops modes.
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    u, s, vt = np.linalg.svd(p.bulk_block)
    keep = s > tol
    if not np.all(keep):
        warnings.warn(
            f"pseudo-inverse discarded {int((~keep).sum())} bulk modes below {tol:g}",
            ConditioningWarning,
            stacklevel=2,
        )
    inv = (vt[keep].T / s[keep]) @ u[:, keep].T
    cross_t = -p.cross_block.T
    return p.cross_block @ inv @ cross_t


def conditional_endpoint_covariance(p: PartitionedCovariance, tol: float = DEFAULT_PINV_TOL) -> np.ndarray:
    """Schur complement of the bulk block."""
    return p.endpoint_block - induced_update(p, tol)


def induced_norm(p: PartitionedCovariance, tol: float = DEFAULT_PINV_TOL) -> float:
    """Spectral norm of the site-1/site-N block of the induced update."""
    return float(np.linalg.norm(induced_update(p, tol)[:2, 2:], 2))


def induced_coupling(p: PartitionedCovariance, tol: float = DEFAULT_PINV_TOL) -> float:
    """The (a_1, b_N) element of the updated endpoint covariance."""
    return float(conditional_endpoint_covariance(p, tol)[0, 3])


def induced_norm_sweep(n_values, field: float, anisotropy: float, tol: float = DEFAULT_PINV_TOL):
    """List of (N, induced norm) over the requested chain lengths."""
    if not field > 1.0:
        raise DomainError(f"induced_norm_sweep requires field > 1, got {field}")
    out = []
    for n in n_values:
        cov = ground_covariance(ChainParams(int(n), field, anisotropy))
        out.append((int(n), induced_norm(partition(cov), tol)))
    return out


def parity_sign(n_sites: int) -> int:
    if n_sites < 2:
        raise DomainError(f"need N >= 2, got {n_sites}")
    return 1 if n_sites % 2 else -1


def bob_correction(n_sites: int) -> Correction:
    return Correction.IDENTITY if parity_sign(n_sites) > 0 else Correction.PAULI_Z


def _check_cost_inputs(n_sites, field=None):
    if int(n_sites) != n_sites or n_sites < 3:
        raise DomainError(f"cost model needs an integer N >= 3, got {n_sites!r}")
    if field is not None and not field > 0:
        raise DomainError(f"field must be > 0, got {field!r}")


def success_probability(n_sites: int) -> float:
    _check_cost_inputs(n_sites)
    return math.ldexp(1.0, -(n_sites - 2))


def injected_energy(n_sites: int, field: float) -> float:
    _check_cost_inputs(n_sites, field)
    return (n_sites - 2) * field


def total_cost(n_sites: int, field: float) -> float:
    """Mean energy spent per successful run, 2^(N-2) (N-2) h."""
    p = success_probability(n_sites)
    if p == 0.0:
        raise NumericalError(f"success probability underflows at N={n_sites}")
    return injected_energy(n_sites, field) / p


@dataclass(frozen=True)
class MonolithicReport:
    n_sites: int
    induced_norm: float
    induced_coupling: float
    parity_sign: int
    correction: Correction
    success_prob: float
    injected_energy: float
    total_cost: float


def analyze(params: ChainParams, tol: float = DEFAULT_PINV_TOL) -> MonolithicReport:
    n = params.n_sites
    p = partition(ground_covariance(params))
    return MonolithicReport(
        n_sites=n,
        induced_norm=induced_norm(p, tol),
        induced_coupling=induced_coupling(p, tol),
        parity_sign=parity_sign(n),
        correction=bob_correction(n),
        success_prob=success_probability(n),
        injected_energy=injected_energy(n, params.field),
        total_cost=total_cost(n, params.field),
    )
