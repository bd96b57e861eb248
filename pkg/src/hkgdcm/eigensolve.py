"""Exact ground states with explicit degeneracy detection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DimensionMismatchError, NonHermitianError
from .operators import SparseHermitian

__all__ = ["GroundState", "ground_state", "expectation", "DENSE_MAX_DIM"]

DENSE_MAX_DIM = 4096
_ITERATIVE_K = 4


@dataclass(frozen=True, eq=False)
class GroundState:
    energy: float
    vectors: np.ndarray  # columns span the ground space
    degenerate: bool
    gap: float

    @property
    def vector(self) -> np.ndarray:
        return self.vectors[:, 0]

    @property
    def multiplicity(self) -> int:
        return self.vectors.shape[1]


def _default_tol(energy: float) -> float:
    return 1e-9 * max(1.0, abs(energy))


def ground_state(
    h: SparseHermitian, degeneracy_tol: float | None = None, *, dense_max_dim: int = DENSE_MAX_DIM
) -> GroundState:
    """Lowest eigenpair(s) of ``h``.

    Every eigenvector whose eigenvalue lies within ``degeneracy_tol`` of the
    minimum is returned.  The default tolerance is ``1e-9 * max(1, |E0|)``.
    Above ``dense_max_dim`` the four lowest eigenpairs are obtained from
    ARPACK's Lanczos iteration, so the gap is ``nan`` when all four fall
    inside the tolerance.
    """
    if degeneracy_tol is not None and degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    if not isinstance(h, SparseHermitian):
        raise TypeError("ground_state expects a SparseHermitian")
    if h.dim <= dense_max_dim:
        a = h.to_dense()
        scale = max(np.max(np.abs(a)), 1.0)
        if np.max(np.abs(a - a.conj().T)) > 1e-14 * scale:
            raise NonHermitianError("ground_state: input is not Hermitian")
        w, v = np.linalg.eigh(a)
    else:
        k = min(_ITERATIVE_K, h.dim - 1)
        try:
            w, v = spla.eigsh(h.to_csr(), k=k, which="SA", tol=1e-14)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError(f"Lanczos did not converge: {exc}") from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        v, _ = np.linalg.qr(v)
    e0 = float(w[0])
    tol = _default_tol(e0) if degeneracy_tol is None else degeneracy_tol
    inside = w - e0 <= tol
    count = int(np.count_nonzero(inside))
    gap = float(w[count] - e0) if count < w.size else float("nan")
    if h.dim > dense_max_dim:
        resid = np.linalg.norm(h.matvec(v[:, :count]) - v[:, :count] * w[:count], axis=0)
        if np.max(resid) > 1e-8 * max(h.max_abs(), 1.0):
            raise ConvergenceError("Lanczos residual above tolerance")
    return GroundState(energy=e0, vectors=v[:, :count], degenerate=count > 1, gap=gap)


def expectation(state: np.ndarray, a: SparseHermitian) -> float:
    """``<state|a|state>`` for a normalized state; the (tiny) imaginary part is dropped."""
    state = np.asarray(state)
    if state.ndim != 1 or state.size != a.dim:
        raise DimensionMismatchError(f"state of size {state.size} vs operator dim {a.dim}")
    norm = np.vdot(state, state).real
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
    val = np.vdot(state, a.matvec(state))
    if abs(val.imag) > 1e-12 * max(1.0, a.max_abs()):
        raise NonHermitianError(f"expectation has imaginary part {val.imag!r}")
    return float(val.real)
