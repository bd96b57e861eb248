"""N-level systems with fixed hopping and tunable level energies."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import InvalidModelError
from ..operators import HkHamiltonian, SparseHermitian
from .lattice import GraphModel, KagomeLattice

__all__ = ["nlevel_model", "nlevel_gdcm_formula", "kagome_localized_state", "kagome_model"]


def nlevel_model(graph: GraphModel) -> HkHamiltonian:
    """``H = hop_sign * sum_{i~j} (|i><j| + h.c.) + sum_i g_i |i><i|``.

    ``sum_i O_i`` is the identity, so the all-ones shift is declared trivial.
    """
    if not graph.is_connected():
        raise InvalidModelError("N-level model requires a connected graph")
    n = graph.sites
    if graph.edges:
        i, j = np.array(graph.edges).T
        rows, cols = np.minimum(i, j), np.maximum(i, j)
        h_int = SparseHermitian(n, rows, cols, np.full(rows.size, float(graph.hop_sign)))
    else:
        h_int = SparseHermitian.zeros(n)
    ops = tuple(SparseHermitian(n, [k], [k], [1.0]) for k in range(n))
    return HkHamiltonian(
        h_int,
        ops,
        tuple(f"n{k}" for k in range(n)),
        trivial_directions=(tuple(np.ones(n)),),
    )


def kagome_model(l1: int, l2: int, hop_sign: int = 1) -> HkHamiltonian:
    return nlevel_model(KagomeLattice(l1, l2).graph(hop_sign))


def nlevel_gdcm_formula(density: np.ndarray) -> np.ndarray:
    """``M_ij = n_i delta_ij - n_i n_j`` from level occupations."""
    n = np.asarray(density, dtype=float)
    return np.diag(n) - np.outer(n, n)


def kagome_localized_state(lat: KagomeLattice, hex_index: int) -> np.ndarray:
    """Alternating-sign state on one hexagon, normalized."""
    if not 0 <= hex_index < len(lat.hexagons):
        raise IndexError(f"hexagon {hex_index} out of range ({len(lat.hexagons)} hexagons)")
    psi = np.zeros(lat.sites, dtype=np.complex128)
    for k, site in enumerate(lat.hexagons[hex_index]):
        psi[site] = (-1) ** k
    return psi / np.sqrt(6.0)


def adjacency(graph: GraphModel) -> sp.csr_matrix:
    i, j = np.array(graph.edges).T
    a = sp.coo_matrix((np.ones(i.size), (i, j)), shape=(graph.sites,) * 2)
    return (a + a.T).tocsr()
