"""Two-spin models: the quantum Ising dimer and a frustration-free dimer.

Both use the basis ``|uu>, |dd>, |ud>, |du>`` and couplings to ``O_i = -sz_i``.
"""

from __future__ import annotations

import numpy as np

from ..operators import HkHamiltonian, SparseHermitian

__all__ = ["ising_dimer", "ising_dimer_density_oracle", "ising_dimer_energy_oracle",
           "ising_dimer_gdcm_oracle", "frustration_free_dimer", "PAULI"]

PAULI = {
    "I": np.eye(2),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "y": np.array([[0.0, -1j], [1j, 0.0]]),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}

# kron ordering is (uu, ud, du, dd); reorder to (uu, dd, ud, du)
_DIMER_ORDER = [0, 3, 1, 2]


def _two_site(a: str, b: str) -> np.ndarray:
    m = np.kron(PAULI[a], PAULI[b])
    return m[np.ix_(_DIMER_ORDER, _DIMER_ORDER)]


def _dimer(h_int: np.ndarray) -> HkHamiltonian:
    ops = (
        SparseHermitian.from_matrix(-_two_site("z", "I")),
        SparseHermitian.from_matrix(-_two_site("I", "z")),
    )
    return HkHamiltonian(SparseHermitian.from_matrix(h_int), ops, ("-sz1", "-sz2"))


def ising_dimer() -> HkHamiltonian:
    """``H = -sx1 sx2 - g1 sz1 - g2 sz2``."""
    return _dimer(-_two_site("x", "x"))


def frustration_free_dimer() -> HkHamiltonian:
    """``H = -sz1 sz2 - g1 sz1 - g2 sz2``; ``|uu>`` is a common ground state for g > 0."""
    return _dimer(-_two_site("z", "z"))


def ising_dimer_density_oracle(g1: float, g2: float) -> tuple[float, float]:
    """Closed-form ``(<sz1>, <sz2>)`` in the ground state.

    On the lines ``g1 * g2 == 0`` the two sectors are degenerate whenever
    ``g != 0``; the ``g1 * g2 >= 0`` branch is returned there.
    """
    if g1 * g2 >= 0:
        s = (g1 + g2) / np.sqrt(1 + (g1 + g2) ** 2)
        return float(s), float(s)
    s = (g1 - g2) / np.sqrt(1 + (g1 - g2) ** 2)
    return float(s), float(-s)


def ising_dimer_energy_oracle(g1: float, g2: float) -> float:
    """Ground-state energy written as a function of the densities."""
    s1, s2 = ising_dimer_density_oracle(g1, g2)
    return -(0.5 * np.sqrt(1 - s1**2) + g1 * s1 + 0.5 * np.sqrt(1 - s2**2) + g2 * s2)


def ising_dimer_gdcm_oracle(g1: float, g2: float) -> np.ndarray:
    s1, s2 = ising_dimer_density_oracle(g1, g2)
    off = np.sign(s1 * s2) - s1 * s2
    return np.array([[1 - s1**2, off], [off, 1 - s2**2]])
