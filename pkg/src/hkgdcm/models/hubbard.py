"""Periodic half-filled Hubbard chain with site-resolved interactions.

``H = -sum_{n, s} (c_{n,s}^dag c_{n+1,s} + h.c.) + sum_n g_n n_{n,up} n_{n,dn}``
in the ``(N/2, N/2)`` sector, plus the closed-form noninteracting GDCM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidModelError
from ..fock import DN, UP, FockSector, double_occupancy, fermion_bilinear
from ..gdcm import INVERTIBLE, SINGULAR, Gdcm, default_singular_tol
from ..operators import HkHamiltonian

__all__ = [
    "hubbard_chain",
    "hubbard_sector",
    "hubbard_gdcm_analytic",
    "hubbard_lambda_analytic",
    "series_term",
    "appendix_bound_check",
    "BoundReport",
    "BOUND_CONSTANT",
]

# 2 * sum_odd 1/n^4 - 4 * sum_odd 1/n^2
BOUND_CONSTANT = 2 * np.pi**4 / 96 - 4 * np.pi**2 / 8


def _check_n(n: int) -> None:
    if n < 6 or n % 4 != 2:
        raise InvalidModelError(f"Hubbard chain needs N >= 6 with N mod 4 == 2, got {n}")


def hubbard_sector(n: int) -> FockSector:
    _check_n(n)
    return FockSector(n, n // 2, n // 2)


def hubbard_chain(n: int) -> HkHamiltonian:
    sector = hubbard_sector(n)
    h = None
    for site in range(n):
        for spin in (UP, DN):
            term = fermion_bilinear(sector, site, (site + 1) % n, spin)
            h = term if h is None else h + term
    h_int = h.scaled(-1.0)
    ops = tuple(double_occupancy(sector, i) for i in range(n))
    return HkHamiltonian(h_int, ops, tuple(f"D{i}" for i in range(n)))


def series_term(n: int, d) -> np.ndarray:
    """``[1 - 2 (1 - (-1)^d) / (N^2 sin^2(pi d / N))]^2 - 1`` for ``0 < d < N``."""
    d = np.asarray(d)
    odd = (d % 2).astype(float)
    inner = 1.0 - 4.0 * odd / (n**2 * np.sin(np.pi * d / n) ** 2)
    return inner**2 - 1.0


def _analytic_row(n: int) -> np.ndarray:
    row = np.empty(n)
    row[0] = 3.0 / 16.0
    row[1:] = series_term(n, np.arange(1, n)) / 16.0
    return row


def hubbard_gdcm_analytic(n: int) -> Gdcm:
    """Noninteracting GDCM of the half-filled chain at ``g = 0``.

    The matrix is the symmetric circulant built from the first row.
    """
    _check_n(n)
    row = _analytic_row(n)
    idx = np.arange(n)
    m = row[(idx[None, :] - idx[:, None]) % n]
    m = 0.5 * (m + m.T)
    w, v = np.linalg.eigh(m)
    tol = default_singular_tol(m)
    lam = float(w[0])
    return Gdcm(
        m, w, v, np.zeros((0, n)), lam, INVERTIBLE if lam > tol else SINGULAR, tol,
        np.full(n, 0.25),
    )


def hubbard_lambda_analytic(n: int, p: float) -> float:
    """Eigenvalue of the circulant GDCM at lattice momentum ``p``."""
    _check_n(n)
    k = p * n / (2 * np.pi)
    if abs(k - round(k)) > 1e-9 or not 0 <= round(k) < n:
        raise ValueError(f"p={p!r} is not on the grid 2*pi*k/{n}, k = 0..{n - 1}")
    j = np.arange(1, n)
    return float(3.0 / 16.0 + np.sum(series_term(n, j) * np.cos(j * p)) / 16.0)


@dataclass(frozen=True)
class BoundReport:
    sizes: tuple[int, ...]
    sums: tuple[float, ...]
    bound_constant: float
    all_above_minus_three: bool
    monotone_decreasing: bool
    limit_deviation: float  # |S(N_max) - bound_constant|
    min_lambda: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return self.all_above_minus_three and self.monotone_decreasing


def appendix_bound_check(n_max: int) -> BoundReport:
    """Evaluate ``S(N) = sum_{d=1}^{N-1} series_term(N, d)`` for admissible ``N <= n_max``."""
    sizes = tuple(range(6, n_max + 1, 4))
    sums = tuple(float(np.sum(series_term(n, np.arange(1, n)))) for n in sizes)
    lam = tuple(
        min(hubbard_lambda_analytic(n, 2 * np.pi * k / n) for k in range(n)) for n in sizes
    )
    return BoundReport(
        sizes=sizes,
        sums=sums,
        bound_constant=float(BOUND_CONSTANT),
        all_above_minus_three=all(s > -3 for s in sums),
        monotone_decreasing=all(b < a for a, b in zip(sums, sums[1:])),
        limit_deviation=abs(sums[-1] - BOUND_CONSTANT) if sums else float("nan"),
        min_lambda=lam,
    )
