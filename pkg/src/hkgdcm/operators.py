"""Sparse Hermitian operators and HK-type Hamiltonians.

A :class:`SparseHermitian` stores only its upper triangle (``row <= col``);
the lower triangle is the implicit conjugate mirror.  All arithmetic is done
in complex128.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatchError, NonHermitianError

__all__ = ["SparseHermitian", "HkHamiltonian", "assemble"]


@dataclass(frozen=True, eq=False)
class SparseHermitian:
    """Hermitian ``dim x dim`` matrix in upper-triangular triplet form."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    _csr: sp.csr_matrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        rows = np.asarray(self.rows, dtype=np.int64).ravel()
        cols = np.asarray(self.cols, dtype=np.int64).ravel()
        vals = np.asarray(self.vals, dtype=np.complex128).ravel()
        if not (rows.shape == cols.shape == vals.shape):
            raise ValueError("rows, cols and vals must have equal length")
        if rows.size and (rows.min() < 0 or cols.max() >= self.dim or rows.max() >= self.dim):
            raise IndexError(f"entry index out of range for dim={self.dim}")
        if np.any(rows > cols):
            raise ValueError("entries must satisfy row <= col")
        diag = rows == cols
        if np.any(vals[diag].imag != 0.0):
            raise NonHermitianError("diagonal entries must be real")
        keys = rows * self.dim + cols
        if np.unique(keys).size != keys.size:
            raise ValueError("duplicate (row, col) entries")
        for name, arr in (("rows", rows), ("cols", cols), ("vals", vals)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        upper = sp.coo_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))
        strict = sp.coo_matrix(
            (vals[~diag], (rows[~diag], cols[~diag])), shape=(self.dim, self.dim)
        )
        full = (upper + strict.conj().T).tocsr()
        full.sort_indices()
        object.__setattr__(self, "_csr", full)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_matrix(cls, a, atol: float = 0.0) -> "SparseHermitian":
        """Build from a dense array or scipy sparse matrix.

        Raises :class:`NonHermitianError` if ``a`` differs from its conjugate
        transpose by more than ``atol``.
        """
        m = sp.csr_matrix(a, dtype=np.complex128)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {m.shape}")
        diff = m - m.conj().T
        if diff.nnz and np.max(np.abs(diff.data)) > atol:
            raise NonHermitianError("matrix is not Hermitian")
        m = (0.5 * (m + m.conj().T)).tocsr()
        upper = sp.triu(m).tocoo()
        keep = upper.data != 0
        vals = upper.data[keep]
        r, c = upper.row[keep], upper.col[keep]
        vals = np.where(r == c, vals.real, vals)
        return cls(m.shape[0], r, c, vals)

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "SparseHermitian":
        values = np.asarray(values, dtype=float)
        idx = np.flatnonzero(values)
        return cls(values.size, idx, idx, values[idx])

    @classmethod
    def identity(cls, dim: int) -> "SparseHermitian":
        return cls.diagonal(np.ones(dim))

    @classmethod
    def zeros(cls, dim: int) -> "SparseHermitian":
        empty = np.zeros(0)
        return cls(dim, empty, empty, empty)

    # -- views ------------------------------------------------------------
    @property
    def nnz(self) -> int:
        return self.vals.size

    def to_csr(self) -> sp.csr_matrix:
        """Full (both triangles) CSR copy."""
        return self._csr.copy()

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray()

    def entries(self) -> list[tuple[int, int, complex]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.vals))) if self.nnz else 0.0

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self._csr @ v

    __matmul__ = matvec

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "SparseHermitian") -> "SparseHermitian":
        if not isinstance(other, SparseHermitian):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dim {self.dim} != {other.dim}")
        return SparseHermitian._from_csr(self._csr + other._csr)

    def scaled(self, c: float) -> "SparseHermitian":
        c = float(c)
        return SparseHermitian(self.dim, self.rows, self.cols, self.vals * c)

    def __mul__(self, c):
        if isinstance(c, (int, float, np.floating, np.integer)):
            return self.scaled(c)
        return NotImplemented

    __rmul__ = __mul__

    @classmethod
    def _from_csr(cls, m: sp.spmatrix) -> "SparseHermitian":
        # input is known Hermitian; keep the upper triangle only
        upper = sp.triu(m).tocoo()
        upper.sum_duplicates()
        keep = upper.data != 0
        r, c, v = upper.row[keep], upper.col[keep], upper.data[keep]
        v = np.where(r == c, v.real, v)
        return cls(m.shape[0], r, c, v)

    def permuted(self, perm: Sequence[int]) -> "SparseHermitian":
        """Return ``P^T A P`` for the basis relabelling ``new[k] = old[perm[k]]``."""
        perm = np.asarray(perm)
        m = self._csr[perm][:, perm]
        return SparseHermitian._from_csr(m)


@dataclass(frozen=True, eq=False)
class HkHamiltonian:
    """``h_int + sum_i g_i ops[i]`` with the couplings supplied per call."""

    h_int: SparseHermitian
    ops: tuple[SparseHermitian, ...]
    labels: tuple[str, ...] = ()
    # coupling directions known not to change the ground state
    trivial_directions: tuple[tuple[float, ...], ...] = ()

    def __post_init__(self):
        ops = tuple(self.ops)
        if not ops:
            raise ValueError("an HK Hamiltonian needs at least one operator")
        for k, op in enumerate(ops):
            if op.dim != self.h_int.dim:
                raise DimensionMismatchError(
                    f"operator {k} has dim {op.dim}, h_int has dim {self.h_int.dim}",
                    index=k,
                )
        labels = tuple(self.labels) or tuple(f"O{k}" for k in range(len(ops)))
        if len(labels) != len(ops):
            raise ValueError("need one label per operator")
        triv = tuple(tuple(float(x) for x in d) for d in self.trivial_directions)
        if any(len(d) != len(ops) for d in triv):
            raise DimensionMismatchError("trivial direction length must equal N")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "trivial_directions", triv)

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.h_int.dim


def assemble(h: HkHamiltonian, g) -> SparseHermitian:
    """Return ``H_int + sum_i g_i O_i`` as a :class:`SparseHermitian`."""
    g = np.asarray(g, dtype=float).ravel()
    if g.size != h.n:
        raise DimensionMismatchError(f"expected {h.n} couplings, got {g.size}")
    total = h.h_int._csr.copy()
    for k, (gk, op) in enumerate(zip(g, h.ops)):
        if op.dim != h.dim:
            raise DimensionMismatchError(f"operator {k} has wrong dim", index=k)
        if gk != 0.0:
            total = total + gk * op._csr
    return SparseHermitian._from_csr(total)
