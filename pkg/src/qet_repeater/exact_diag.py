"""Brute-force exact diagonalization of the spin Hamiltonian.

Independent of the fermionic machinery: the 2^N Hamiltonian is assembled from
Kronecker products of Pauli matrices and its lowest eigenvector is used
directly.  Serves as the oracle for :mod:`qet_repeater.xy_chain`.
"""

from __future__ import annotations

import csv
from functools import reduce
from pathlib import Path

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError
from .xy_chain import ChainParams

MAX_SITES = 12
_DENSE_MAX_SITES = 8

_I2 = sp.identity(2, format="csr", dtype=complex)
_X = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
_Y = sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex))
_Z = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))


def site_operator(op, site: int, n_sites: int):
    """``op`` acting on 0-based ``site`` of an ``n_sites`` chain (sparse)."""
    factors = [op if k == site else _I2 for k in range(n_sites)]
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)


def spin_hamiltonian(params: ChainParams):
    n, h, g = params.n_sites, params.field, params.anisotropy
    dim = 2**n
    H = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(n - 1):
        H = H - 0.5 * (1 + g) * site_operator(_X, j, n) @ site_operator(_X, j + 1, n)
        H = H - 0.5 * (1 - g) * site_operator(_Y, j, n) @ site_operator(_Y, j + 1, n)
    for j in range(n):
        H = H - h * site_operator(_Z, j, n)
    return H


def ed_ground_state(params: ChainParams) -> tuple[float, np.ndarray]:
    if params.n_sites > MAX_SITES:
        raise DomainError(f"exact diagonalization limited to {MAX_SITES} sites")
    H = spin_hamiltonian(params)
    if params.n_sites <= _DENSE_MAX_SITES:
        w, v = np.linalg.eigh(H.toarray())
        return float(w[0]), v[:, 0]
    w, v = spla.eigsh(H, k=1, which="SA", tol=0)
    return float(w[0]), v[:, 0]


def ed_oracle(params: ChainParams) -> tuple[float, float]:
    """Ground energy and <X_1 X_N> from the dense spin Hamiltonian."""
    energy, psi = ed_ground_state(params)
    n = params.n_sites
    op = site_operator(_X, 0, n) @ site_operator(_X, n - 1, n)
    cxx = float(np.real(np.vdot(psi, op @ psi)))
    return energy, cxx


FIXTURE_COLUMNS = ("N", "h", "gamma", "energy", "cxx")


def write_fixture(path, grid) -> None:
    """Write ED reference values for every ``ChainParams`` in ``grid``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FIXTURE_COLUMNS)
        for p in grid:
            energy, cxx = ed_oracle(p)
            writer.writerow(
                [p.n_sites, f"{p.field:.15g}", f"{p.anisotropy:.15g}", f"{energy:.15g}", f"{cxx:.15g}"]
            )


def read_fixture(path) -> list[tuple[ChainParams, float, float]]:
    rows = []
    with open(Path(path), newline="") as fh:
        for r in csv.DictReader(fh):
            p = ChainParams(int(r["N"]), float(r["h"]), float(r["gamma"]))
            rows.append((p, float(r["energy"]), float(r["cxx"])))
    return rows
