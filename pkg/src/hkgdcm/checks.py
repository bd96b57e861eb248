"""Exact-diagonalization pipelines compared against closed-form oracles."""

from __future__ import annotations

import numpy as np

from .eigensolve import expectation, ground_state
from .fock import site_density, site_sz
from .gdcm import gdcm
from .models import (
    frustration_free_dimer,
    hubbard_chain,
    hubbard_gdcm_analytic,
    hubbard_sector,
    ising_dimer,
    ising_dimer_density_oracle,
    ising_dimer_energy_oracle,
    ising_dimer_gdcm_oracle,
    kagome_model,
    nlevel_gdcm_formula,
)
from .operators import assemble

__all__ = [
    "ising_couplings",
    "ising_oracle_check",
    "frustration_free_check",
    "nlevel_oracle_check",
    "hubbard_oracle_check",
]


def ising_couplings(trials: int, seed: int, bound: float = 3.0, min_product: float = 1e-6):
    """Uniform draws from ``[-bound, bound]^2`` with ``|g1 g2| >= min_product``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < trials:
        g = rng.uniform(-bound, bound, 2)
        if abs(g[0] * g[1]) >= min_product:
            out.append(g)
    return np.array(out)


def ising_oracle_check(trials: int = 200, seed: int = 0) -> dict:
    h = ising_dimer()
    dens = energy = mat = det = 0.0
    for g in ising_couplings(trials, seed):
        gs = ground_state(assemble(h, g))
        sz = -np.array([expectation(gs.vector, op) for op in h.ops])
        s_or = np.array(ising_dimer_density_oracle(*g))
        m = gdcm(h, g, gs).m
        dens = max(dens, np.max(np.abs(sz - s_or)))
        energy = max(energy, abs(gs.energy - ising_dimer_energy_oracle(*g)))
        mat = max(mat, np.max(np.abs(m - ising_dimer_gdcm_oracle(*g))))
        det = max(det, abs(np.linalg.det(m)))
    return {
        "trials": trials,
        "max_density_deviation": float(dens),
        "max_energy_deviation": float(energy),
        "max_gdcm_deviation": float(mat),
        "max_abs_det": float(det),
        "passed": bool(max(dens, energy, mat) <= 1e-10 and det <= 1e-12),
    }


def frustration_free_check(trials: int = 20, seed: int = 0) -> dict:
    h = frustration_free_dimer()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        worst = max(worst, float(np.max(np.abs(gdcm(h, rng.uniform(0.01, 1.0, 2)).m))))
    return {"trials": trials, "max_abs_entry": worst, "passed": worst <= 1e-12}


def nlevel_oracle_check(l1: int = 2, l2: int = 2, hop_sign: int = 1, trials: int = 100,
                        seed: int = 0) -> dict:
    h = kagome_model(l1, l2, hop_sign)
    rng = np.random.default_rng(seed)
    worst, skipped = 0.0, 0
    for _ in range(trials):
        g = rng.uniform(-1.0, 1.0, h.n)
        gs = ground_state(assemble(h, g))
        if gs.degenerate:
            skipped += 1
            continue
        n = np.abs(gs.vector) ** 2
        worst = max(worst, float(np.max(np.abs(gdcm(h, g, gs).m - nlevel_gdcm_formula(n)))))
    return {"trials": trials, "skipped_degenerate": skipped, "max_deviation": worst,
            "passed": worst <= 1e-12}


def hubbard_oracle_check(n: int = 6) -> dict:
    h = hubbard_chain(n)
    sector = hubbard_sector(n)
    g = np.zeros(n)
    gs = ground_state(assemble(h, g))
    result = gdcm(h, g, gs)
    psi = gs.vector
    identity_dev = 0.0
    for i, op in enumerate(h.ops):
        nn = site_density(sector, i)
        sz = site_sz(sector, i)
        rhs = 0.25 * (np.vdot(nn.matvec(psi), nn.matvec(psi)).real
                      - np.vdot(sz.matvec(psi), sz.matvec(psi)).real)
        identity_dev = max(identity_dev, abs(expectation(psi, op) - rhs))
    gdcm_dev = float(np.max(np.abs(result.m - hubbard_gdcm_analytic(n).m)))
    density_dev = float(np.max(np.abs(result.density - 0.25)))
    return {
        "sites": n,
        "unique_ground_state": not gs.degenerate,
        "max_gdcm_deviation": gdcm_dev,
        "max_density_deviation": density_dev,
        "identity_deviation": float(identity_dev),
        "lambda_min": result.lambda_min_nontrivial,
        "passed": gdcm_dev <= 1e-10 and density_dev <= 1e-10 and identity_dev <= 1e-12,
    }
