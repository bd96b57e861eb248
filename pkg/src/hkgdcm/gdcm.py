"""Generalized density correlation matrix and its null space.

For a non-degenerate ground state ``|psi>`` and Hermitian operators ``O_i``::

    M_ij = 1/2 <O_i O_j + O_j O_i> - <O_i><O_j>

which equals ``Re <O_i psi | O_j psi> - <O_i><O_j>``.  ``dg^T M dg`` is the
variance of ``sum_i dg_i O_i``, so ``M`` is positive semidefinite and its
null vectors are coupling shifts the ground state cannot detect.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .eigensolve import GroundState, ground_state
from .errors import DegenerateGroundStateError, DimensionMismatchError
from .operators import HkHamiltonian, assemble

__all__ = [
    "INVERTIBLE",
    "SINGULAR",
    "FLAT",
    "Gdcm",
    "ResponseMatrix",
    "gdcm",
    "gdcm_from_state",
    "certify_flat",
    "default_singular_tol",
    "null_space",
    "verify_null_direction",
    "generalized_density",
    "response_matrix",
]

INVERTIBLE = "invertible"
SINGULAR = "singular"
FLAT = "identically-flat"


@dataclass(frozen=True, eq=False)
class Gdcm:
    m: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    trivial_directions: np.ndarray  # (k, N), orthonormal rows
    lambda_min_nontrivial: float
    verdict: str
    singular_tol: float
    density: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.m.shape[0]


def default_singular_tol(m: np.ndarray) -> float:
    """``1e-8`` times the mean eigenvalue, floored at ``1e-12``."""
    return max(1e-8 * float(np.trace(m)) / m.shape[0], 1e-12)


def _orthonormal_rows(directions, n: int) -> np.ndarray:
    d = np.asarray(directions, dtype=float).reshape(-1, n) if len(directions) else np.zeros((0, n))
    if d.shape[0] == 0:
        return d
    u, s, vt = np.linalg.svd(d, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * s[0]))
    return vt[:rank]


def _complement(trivial: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal columns spanning the complement of the trivial rows."""
    if trivial.shape[0] == 0:
        return np.eye(n)
    _, _, vt = np.linalg.svd(trivial, full_matrices=True)
    return vt[trivial.shape[0]:].T


def _deflated_spectrum(m: np.ndarray, trivial: np.ndarray):
    q = _complement(trivial, m.shape[0])
    w, v = np.linalg.eigh(q.T @ m @ q)
    return w, q @ v


def gdcm_from_state(
    h: HkHamiltonian,
    psi: np.ndarray,
    trivial_directions=(),
    singular_tol: float | None = None,
) -> Gdcm:
    """GDCM of the operators in ``h`` for the normalized state ``psi``."""
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (h.dim,):
        raise DimensionMismatchError(f"state of shape {psi.shape} vs dim {h.dim}")
    w_cols = np.column_stack([op.matvec(psi) for op in h.ops])
    density = np.real(psi.conj() @ w_cols)
    m = np.real(w_cols.conj().T @ w_cols) - np.outer(density, density)
    m = 0.5 * (m + m.T)
    evals, evecs = np.linalg.eigh(m)
    trivial = _orthonormal_rows(trivial_directions, h.n)
    tol = default_singular_tol(m) if singular_tol is None else singular_tol
    if trivial.shape[0] < h.n:
        lam = float(_deflated_spectrum(m, trivial)[0][0])
    else:
        lam = float("nan")
    verdict = INVERTIBLE if lam > tol else SINGULAR
    return Gdcm(m, evals, evecs, trivial, lam, verdict, tol, density)


def gdcm(
    h: HkHamiltonian,
    g,
    gs: GroundState | None = None,
    trivial_directions=None,
    singular_tol: float | None = None,
) -> Gdcm:
    """GDCM of ``h`` at couplings ``g``.

    ``gs`` is computed when not supplied.  ``trivial_directions`` defaults to
    those declared on ``h``.  A degenerate ground state is refused.
    """
    g = np.asarray(g, dtype=float)
    if g.size != h.n:
        raise DimensionMismatchError(f"expected {h.n} couplings, got {g.size}")
    if gs is None:
        gs = ground_state(assemble(h, g))
    if gs.degenerate:
        raise DegenerateGroundStateError(
            f"ground state is {gs.multiplicity}-fold degenerate", gs.multiplicity
        )
    if trivial_directions is None:
        trivial_directions = h.trivial_directions
    return gdcm_from_state(h, gs.vector, trivial_directions, singular_tol)


def certify_flat(result: Gdcm, atol: float = 1e-12) -> Gdcm:
    """Mark ``result`` identically flat when every entry of ``M`` is below ``atol``."""
    if np.max(np.abs(result.m)) <= atol:
        return replace(result, verdict=FLAT)
    return result


def null_space(result: Gdcm, singular_tol: float | None = None) -> list[np.ndarray]:
    """Orthonormal null vectors of ``M`` orthogonal to the trivial directions."""
    tol = result.singular_tol if singular_tol is None else singular_tol
    if result.trivial_directions.shape[0] >= result.n:
        return []
    w, v = _deflated_spectrum(result.m, result.trivial_directions)
    return [v[:, k].copy() for k in np.flatnonzero(w <= tol)]


def verify_null_direction(
    h: HkHamiltonian,
    g,
    gs: GroundState,
    dg,
    eps: float,
    overlap_tol: float = 1e-8,
) -> bool:
    """True when ``g + eps * dg`` has the same (non-degenerate) ground state as ``gs``."""
    dg = np.asarray(dg, dtype=float)
    if abs(np.linalg.norm(dg) - 1.0) > 1e-10:
        raise ValueError("dg must have unit norm")
    shifted = ground_state(assemble(h, np.asarray(g, dtype=float) + eps * dg))
    if shifted.degenerate:
        raise DegenerateGroundStateError(
            "shifted ground state is degenerate; null direction is indeterminate",
            shifted.multiplicity,
        )
    overlap = abs(np.vdot(shifted.vector, gs.vector))
    return bool(overlap >= 1.0 - overlap_tol)


def generalized_density(h: HkHamiltonian, g) -> np.ndarray:
    """Vector of ground-state expectation values ``<O_i>``."""
    gs = ground_state(assemble(h, g))
    if gs.degenerate:
        raise DegenerateGroundStateError(
            f"degenerate ground state at g={list(np.asarray(g, dtype=float))}", gs.multiplicity
        )
    psi = gs.vector
    return np.array([np.vdot(psi, op.matvec(psi)).real for op in h.ops])


@dataclass(frozen=True, eq=False)
class ResponseMatrix:
    chi: np.ndarray
    step: float
    richardson_error: float
    near_degenerate: bool

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.chi, compute_uv=False)

    def null_direction(self) -> np.ndarray:
        """Right singular vector of the smallest singular value."""
        _, _, vt = np.linalg.svd(self.chi)
        return vt[-1]


def _central_jacobian(h: HkHamiltonian, g: np.ndarray, step: float) -> np.ndarray:
    chi = np.empty((h.n, h.n))
    for j in range(h.n):
        e = np.zeros(h.n)
        e[j] = step
        chi[:, j] = (generalized_density(h, g + e) - generalized_density(h, g - e)) / (2 * step)
    return chi


def response_matrix(h: HkHamiltonian, g, step: float = 1e-5, check_tol: float = 1e-4) -> ResponseMatrix:
    """Central-difference Jacobian ``chi_ij = d<O_i>/dg_j``.

    The Jacobian is recomputed at ``2 * step``; a relative disagreement above
    ``check_tol`` sets ``near_degenerate``.
    """
    g = np.asarray(g, dtype=float)
    if g.size != h.n:
        raise DimensionMismatchError(f"expected {h.n} couplings, got {g.size}")
    generalized_density(h, g)
    chi = _central_jacobian(h, g, step)
    chi2 = _central_jacobian(h, g, 2 * step)
    scale = max(np.max(np.abs(chi)), 1e-12)
    err = float(np.max(np.abs(chi - chi2)) / scale)
    return ResponseMatrix(chi, step, err, err > check_tol)
