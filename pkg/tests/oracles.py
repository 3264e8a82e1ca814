"""Independent reference routes used only by the tests."""

import math

import numpy as np

from qet_repeater.monolithic import endpoint_indices


def dense_conditional_covariance(matrix):
    """Conditional endpoint block read off the inverse of the full covariance."""
    n = matrix.shape[0] // 2
    s = endpoint_indices(n)
    inv = np.linalg.inv(matrix)
    return np.linalg.inv(inv[np.ix_(s, s)])


def brute_force_ergotropy(density, field, n_axis=1001, n_angle=1001):
    """Largest energy drop over a grid of rotations U = exp(-i t (cos b X + sin b Y) / 2).

    Rotations about in-plane axes reach every Bloch direction, so the grid
    covers the unitary orbit up to its spacing.
    """
    rho = np.asarray(density, dtype=complex)
    b = np.linspace(0.0, 2 * math.pi, n_axis)[:, None]
    t = np.linspace(0.0, math.pi, n_angle)[None, :]
    c, s = np.cos(t / 2), np.sin(t / 2)
    # U = [[c, -i s e^{-ib}], [-i s e^{ib}, c]]
    u00, u01 = c + 0j, -1j * s * np.exp(-1j * b)
    u10, u11 = -1j * s * np.exp(1j * b), c + 0j
    # energy -h (|U rho U^dag|_00 - |..|_11)
    p0 = (
        np.abs(u00) ** 2 * rho[0, 0] + np.abs(u01) ** 2 * rho[1, 1] + 2 * np.real(u00 * np.conj(u01) * rho[1, 0])
    ).real
    p1 = (
        np.abs(u10) ** 2 * rho[0, 0] + np.abs(u11) ** 2 * rho[1, 1] + 2 * np.real(u10 * np.conj(u11) * rho[1, 0])
    ).real
    energies = -field * (p0 - p1)
    energy_now = -field * float((rho[0, 0] - rho[1, 1]).real)
    return energy_now - float(np.min(energies))


def inclusion_exclusion_max_geometric(m, p):
    q = 1.0 - p
    return sum((-1) ** (j + 1) * math.comb(m, j) / (1.0 - q**j) for j in range(1, m + 1))
