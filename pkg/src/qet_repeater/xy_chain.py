"""Free-fermion solution of the open anisotropic XY chain in a transverse field.

The spin Hamiltonian is

    H = -sum_j [(1+g)/2 X_j X_{j+1} + (1-g)/2 Y_j Y_{j+1}] - h sum_j Z_j

with coupling J = 1.  Majorana operators are defined through the Jordan-Wigner
string S_j = prod_{l<j} Z_l as

    a_j = S_j X_j,    b_j = S_j Y_j,

so that Z_j = -i a_j b_j, X_j X_{j+1} = -i b_j a_{j+1} and
Y_j Y_{j+1} = i a_j b_{j+1}.  No constant is dropped on the way, which keeps
every energy reported here in the spin basis.  The covariance matrix uses the
interleaved ordering (a_1, b_1, ..., a_N, b_N) and the convention
Gamma_lm = (i/2) <[w_l, w_m]>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSpectrumError, DomainError, PhaseDomainError

#: Uniform grid used to locate the minimum of the dispersion.  Odd so that
#: k = 0 is a grid point.
GAP_GRID_POINTS = 100_001

ZERO_MODE_TOL = 1e-12


@dataclass(frozen=True)
class ChainParams:
    """An XY chain instance: ``n_sites`` spins, field ``field``, anisotropy ``anisotropy``."""

    n_sites: int
    field: float
    anisotropy: float

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise DomainError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        if not self.field > 0:
            raise DomainError(f"field must be > 0, got {self.field!r}")
        if not 0.0 <= self.anisotropy <= 1.0:
            raise DomainError(f"anisotropy must lie in [0, 1], got {self.anisotropy!r}")

    def with_sites(self, n_sites: int) -> "ChainParams":
        return ChainParams(n_sites, self.field, self.anisotropy)


class DispersionSample(NamedTuple):
    momentum: float
    energy: float


@dataclass(frozen=True)
class MajoranaCovariance:
    """Majorana two-point matrix of a Gaussian state, ordering (a_1, b_1, ..., a_N, b_N)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DomainError(f"covariance must be a square matrix of even size, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0] // 2

    def antisymmetry_error(self) -> float:
        return float(np.max(np.abs(self.matrix + self.matrix.T)))

    def purity_error(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m @ m + np.eye(m.shape[0]))))


def _a(j: int) -> int:
    return 2 * j


def _b(j: int) -> int:
    return 2 * j + 1


def dispersion(params: ChainParams, k):
    """Quasiparticle energy ``2 sqrt((h - cos k)^2 + (g sin k)^2)``.

    Accepts a scalar or an array of momenta.
    """
    k_arr = np.asarray(k, dtype=float)
    if np.any(np.abs(k_arr) > math.pi + 1e-12):
        raise DomainError("momentum must lie in [-pi, pi]")
    h, g = params.field, params.anisotropy
    eps = 2.0 * np.sqrt((h - np.cos(k_arr)) ** 2 + (g * np.sin(k_arr)) ** 2)
    return float(eps) if eps.ndim == 0 else eps


def sample_dispersion(params: ChainParams, n_points: int = 1001) -> list[DispersionSample]:
    """Dispersion on a uniform grid over [-pi, pi]."""
    k = np.linspace(-math.pi, math.pi, n_points)
    eps = dispersion(params, k)
    return [DispersionSample(float(x), float(e)) for x, e in zip(k, eps)]


def energy_gap(params: ChainParams, n_points: int = GAP_GRID_POINTS) -> float:
    """Minimum of the dispersion over a dense momentum grid (paramagnetic phase only)."""
    if not params.field > 1.0:
        raise PhaseDomainError(f"energy gap requires field > 1, got {params.field}")
    k = np.linspace(-math.pi, math.pi, n_points)
    return float(np.min(dispersion(params, k)))


def inverse_correlation_length(params: ChainParams) -> float:
    h, g = params.field, params.anisotropy
    disc = h * h + g * g - 1.0
    if not h > 1.0 or not disc > 0.0:
        raise PhaseDomainError(
            f"correlation length needs h > 1 and h^2 + g^2 - 1 > 0 (h={h}, g={g})"
        )
    return math.log((h + math.sqrt(disc)) / (1.0 + g))


def correlation_length(params: ChainParams) -> float:
    """Closed-form correlation length; ``inf`` where the logarithm vanishes."""
    inv = inverse_correlation_length(params)
    return math.inf if inv == 0.0 else 1.0 / inv


def majorana_hamiltonian(params: ChainParams) -> np.ndarray:
    """Real antisymmetric ``K`` with ``H = (i/4) w^T K w``."""
    n, h, g = params.n_sites, params.field, params.anisotropy
    K = np.zeros((2 * n, 2 * n))

    def couple(p, q, c):
        # i c w_p w_q
        K[p, q] += 2.0 * c
        K[q, p] -= 2.0 * c

    for j in range(n):
        couple(_a(j), _b(j), h)
    for j in range(n - 1):
        couple(_b(j), _a(j + 1), 0.5 * (1.0 + g))
        couple(_a(j), _b(j + 1), -0.5 * (1.0 - g))
    return K


def single_particle_energies(params: ChainParams) -> np.ndarray:
    """Non-negative normal-mode energies of the open chain, ascending."""
    lam = np.linalg.eigvalsh(1j * majorana_hamiltonian(params))
    return np.sort(lam[params.n_sites:])


def ground_covariance(params: ChainParams, strict: bool = True) -> MajoranaCovariance:
    """Ground-state covariance from the Bogoliubov-de Gennes problem.

    Parameters
    ----------
    params : ChainParams
    strict : bool
        If True, a normal mode with energy below ``ZERO_MODE_TOL`` raises
        :class:`DegenerateSpectrumError`.  If False, the near-zero subspace is
        paired deterministically (consecutive vectors of a real orthonormal
        basis) so the result is still a pure Gaussian state.

    Returns
    -------
    MajoranaCovariance
    """
    K = majorana_hamiltonian(params)
    lam, vecs = np.linalg.eigh(1j * K)
    zero = np.abs(lam) < ZERO_MODE_TOL
    if np.any(zero) and strict:
        raise DegenerateSpectrumError(
            f"{int(zero.sum())} single-particle eigenvalues below {ZERO_MODE_TOL:g}"
        )
    pos = vecs[:, lam >= ZERO_MODE_TOL]
    # Gamma = i sign(iK) = -2 Im(P_+)
    gamma = -2.0 * np.imag(pos @ pos.conj().T)
    if np.any(zero):
        sub = vecs[:, zero]
        real_span = np.hstack([sub.real, sub.imag])
        u, s, _ = np.linalg.svd(real_span, full_matrices=False)
        basis = u[:, s > 1e-8]
        for x, y in zip(basis.T[0::2], basis.T[1::2]):
            gamma += np.outer(x, y) - np.outer(y, x)
    # exact antisymmetry, so block reassembly is lossless
    return MajoranaCovariance(0.5 * (gamma - gamma.T))


def contraction_matrix(cov: MajoranaCovariance, i: int, j: int) -> np.ndarray:
    """Matrix T_lm = Gamma(b_l, a_{m+1}) for 1-based sites l, m in [i, j)."""
    rows = [_b(l - 1) for l in range(i, j)]
    cols = [_a(m) for m in range(i, j)]
    return cov.matrix[np.ix_(rows, cols)]


def correlation_xx(cov: MajoranaCovariance, i: int, j: int) -> float:
    """<X_i X_j> for 1-based sites ``i < j`` as a signed determinant."""
    n = cov.n_sites
    if not (1 <= i < j <= n):
        raise DomainError(f"need 1 <= i < j <= {n}, got i={i}, j={j}")
    return (-1) ** (j - i) * float(np.linalg.det(contraction_matrix(cov, i, j)))


def ground_energy(cov: MajoranaCovariance, params: ChainParams) -> float:
    """<H> by contracting each spin term against the covariance."""
    g, h, m = params.anisotropy, params.field, cov.matrix
    n = params.n_sites
    energy = 0.0
    for j in range(n - 1):
        xx = -m[_b(j), _a(j + 1)]
        yy = m[_a(j), _b(j + 1)]
        energy -= 0.5 * (1.0 + g) * xx + 0.5 * (1.0 - g) * yy
    for j in range(n):
        energy -= h * (-m[_a(j), _b(j)])
    return float(energy)


def approx_ground_energy(params: ChainParams) -> float:
    """Field-dominated estimate -N h."""
    return -params.n_sites * params.field


def std_energy_scaling(params: ChainParams, n_sites: int | None = None) -> float:
    """|C_xx(1, N)|^2, the yield proxy of a protocol relying on bare correlations."""
    if not params.field > 1.0:
        raise PhaseDomainError(f"std_energy_scaling requires field > 1, got {params.field}")
    p = params if n_sites is None else params.with_sites(n_sites)
    cov = ground_covariance(p)
    return correlation_xx(cov, 1, p.n_sites) ** 2
