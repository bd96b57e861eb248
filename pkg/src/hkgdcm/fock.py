"""Fixed-particle-number sectors of spin-1/2 fermions on a finite lattice.

Basis convention: a spin configuration is an integer whose bit ``i`` is the
occupation of site ``i``.  Up and down configurations are each sorted in
ascending integer order, and the basis state ``(u, d)`` has index
``iu * len(dn_configs) + id`` (up configuration major).

Fermionic modes are ordered ``(0 up, ..., N-1 up, 0 dn, ..., N-1 dn)`` for
the Jordan-Wigner sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
import scipy.sparse as sp

from .operators import SparseHermitian

__all__ = [
    "FockSector",
    "UP",
    "DN",
    "fermion_bilinear",
    "hopping_matrix",
    "number_op",
    "double_occupancy",
    "site_density",
    "site_sz",
]

UP, DN = 0, 1


def _configs(sites: int, n: int) -> np.ndarray:
    out = [sum(1 << b for b in c) for c in combinations(range(sites), n)]
    return np.array(sorted(out), dtype=np.int64)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64)
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x >>= 1
    return count


@dataclass(frozen=True, eq=False)
class FockSector:
    sites: int
    n_up: int
    n_dn: int
    up_configs: np.ndarray = field(init=False, repr=False)
    dn_configs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.sites < 1:
            raise ValueError("sites must be positive")
        if not (0 <= self.n_up <= self.sites and 0 <= self.n_dn <= self.sites):
            raise ValueError("particle numbers must lie in [0, sites]")
        object.__setattr__(self, "up_configs", _configs(self.sites, self.n_up))
        object.__setattr__(self, "dn_configs", _configs(self.sites, self.n_dn))

    @property
    def dim(self) -> int:
        return comb(self.sites, self.n_up) * comb(self.sites, self.n_dn)

    def basis(self) -> list[tuple[int, int]]:
        return [(int(u), int(d)) for u in self.up_configs for d in self.dn_configs]

    def index(self, up: int, dn: int) -> int:
        iu = int(np.searchsorted(self.up_configs, up))
        idn = int(np.searchsorted(self.dn_configs, dn))
        if iu >= self.up_configs.size or self.up_configs[iu] != up:
            raise KeyError(f"up configuration {up:b} not in sector")
        if idn >= self.dn_configs.size or self.dn_configs[idn] != dn:
            raise KeyError(f"down configuration {dn:b} not in sector")
        return iu * self.dn_configs.size + idn

    def _check_site(self, *sites: int) -> None:
        for s in sites:
            if not 0 <= s < self.sites:
                raise IndexError(f"site {s} out of range for {self.sites} sites")

    def _spin_configs(self, spin: int) -> np.ndarray:
        if spin == UP:
            return self.up_configs
        if spin == DN:
            return self.dn_configs
        raise ValueError(f"spin must be UP (0) or DN (1), got {spin!r}")


def _single_species_hop(configs: np.ndarray, i: int, j: int) -> sp.csr_matrix:
    """``c_i^dag c_j`` on one species' configuration list."""
    n = configs.size
    if i == j:
        occ = ((configs >> i) & 1).astype(float)
        return sp.diags(occ, format="csr")
    src = configs[((configs >> j) & 1 == 1) & ((configs >> i) & 1 == 0)]
    dst = src ^ (1 << i) ^ (1 << j)
    lo, hi = min(i, j), max(i, j)
    between = ((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1)
    sign = 1.0 - 2.0 * (_popcount(src & between) & 1)
    rows = np.searchsorted(configs, dst)
    cols = np.searchsorted(configs, src)
    return sp.csr_matrix((sign, (rows, cols)), shape=(n, n))


def hopping_matrix(sector: FockSector, i: int, j: int, spin: int) -> sp.csr_matrix:
    """Non-Hermitian ``c_{i,spin}^dag c_{j,spin}`` on the sector as CSR.

    The other species passes through unchanged; its Jordan-Wigner string is
    crossed twice and cancels.
    """
    sector._check_site(i, j)
    configs = sector._spin_configs(spin)
    hop = _single_species_hop(configs, i, j)
    if spin == UP:
        other = sp.identity(sector.dn_configs.size, format="csr")
        return sp.kron(hop, other, format="csr")
    other = sp.identity(sector.up_configs.size, format="csr")
    return sp.kron(other, hop, format="csr")


def fermion_bilinear(sector: FockSector, i: int, j: int, spin: int) -> SparseHermitian:
    """``c_i^dag c_j + c_j^dag c_i`` for ``i != j``, the number operator for ``i == j``."""
    hop = hopping_matrix(sector, i, j, spin)
    if i == j:
        return SparseHermitian._from_csr(hop)
    return SparseHermitian._from_csr(hop + hop.conj().T)


def number_op(sector: FockSector, i: int, spin: int) -> SparseHermitian:
    return fermion_bilinear(sector, i, i, spin)


def _occupations(sector: FockSector, i: int) -> tuple[np.ndarray, np.ndarray]:
    sector._check_site(i)
    up = ((sector.up_configs >> i) & 1).astype(float)
    dn = ((sector.dn_configs >> i) & 1).astype(float)
    return np.repeat(up, dn.size), np.tile(dn, up.size)


def double_occupancy(sector: FockSector, i: int) -> SparseHermitian:
    """Diagonal ``n_{i,up} n_{i,dn}``."""
    up, dn = _occupations(sector, i)
    return SparseHermitian.diagonal(up * dn)


def site_density(sector: FockSector, i: int) -> SparseHermitian:
    up, dn = _occupations(sector, i)
    return SparseHermitian.diagonal(up + dn)


def site_sz(sector: FockSector, i: int) -> SparseHermitian:
    """``n_up - n_dn`` at site ``i`` (no factor 1/2)."""
    up, dn = _occupations(sector, i)
    return SparseHermitian.diagonal(up - dn)
