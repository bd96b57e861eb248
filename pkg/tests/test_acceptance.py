"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py -rA`` to see the per-criterion summary.
Criterion 11 is the long sampling run; deselect it with ``-m "not slow"``.
"""

import json
import math
import time

import numpy as np
import pytest

from hkgdcm import FLAT, SampleConfig, assemble, certify_flat, expectation, gdcm, ground_state
from hkgdcm import null_space, response_matrix, verify_null_direction
from hkgdcm.checks import ising_couplings
from hkgdcm.cli import main
from hkgdcm.fock import site_density, site_sz
from hkgdcm.models import (
    KagomeLattice,
    appendix_bound_check,
    frustration_free_dimer,
    hubbard_chain,
    hubbard_gdcm_analytic,
    hubbard_lambda_analytic,
    hubbard_sector,
    ising_dimer,
    ising_dimer_density_oracle,
    ising_dimer_energy_oracle,
    ising_dimer_gdcm_oracle,
    kagome_localized_state,
    kagome_model,
    nlevel_gdcm_formula,
)
from hkgdcm.sampling import build_histogram, draw_couplings, mode_estimate, sample_lambda_min

SAMPLES = 10_000


def detail(record, text):
    record("detail", text)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# shared cases for criterion 9 --------------------------------------------------

@pytest.fixture(scope="module")
def ising_points():
    return ising_couplings(200, seed=0)


@pytest.fixture(scope="module")
def ff_points():
    return np.random.default_rng(1).uniform(0.01, 1.0, (20, 2))


@pytest.fixture(scope="module")
def localized_case():
    lat = KagomeLattice(2, 2)
    h = kagome_model(2, 2, 1)
    g = np.full(lat.sites, 0.5)
    g[list(lat.hexagons[0])] = 0.0
    return lat, h, g


@pytest.mark.criterion("01 Ising-dimer oracle suite")
def test_criterion_01_ising_dimer(ising_points, record_property):
    h = ising_dimer()
    worst = np.zeros(4)
    with Timer() as t:
        for g in ising_points:
            gs = ground_state(assemble(h, g))
            sz = np.array([-expectation(gs.vector, op) for op in h.ops])
            m = gdcm(h, g, gs).m
            worst = np.maximum(worst, [
                np.max(np.abs(sz - ising_dimer_density_oracle(*g))),
                abs(gs.energy - ising_dimer_energy_oracle(*g)),
                np.max(np.abs(m - ising_dimer_gdcm_oracle(*g))),
                abs(np.linalg.det(m)),
            ])
    detail(record_property, f"density {worst[0]:.1e}, energy {worst[1]:.1e}, "
                            f"gdcm {worst[2]:.1e}, |det| {worst[3]:.1e}, {t.elapsed:.2f} s")
    assert np.all(np.abs(ising_points[:, 0] * ising_points[:, 1]) >= 1e-6)
    assert np.all(np.abs(ising_points) <= 3)
    assert worst[0] <= 1e-10 and worst[1] <= 1e-10 and worst[2] <= 1e-10
    assert worst[3] <= 1e-12
    assert t.elapsed < 1.0


@pytest.mark.criterion("02 frustration-free GDCM is zero")
def test_criterion_02_frustration_free(ff_points, record_property):
    h = frustration_free_dimer()
    with Timer() as t:
        worst = max(float(np.max(np.abs(gdcm(h, g).m))) for g in ff_points)
        verdicts = {certify_flat(gdcm(h, g)).verdict for g in ff_points}
    detail(record_property, f"max |M| {worst:.1e}, {t.elapsed:.2f} s")
    assert np.all(ff_points > 0)
    assert worst <= 1e-12
    assert verdicts == {FLAT}
    assert t.elapsed < 1.0


@pytest.mark.criterion("03 N-level formula vs full pipeline")
def test_criterion_03_nlevel_formula(record_property):
    worst = 0.0
    with Timer() as t:
        for hop_sign in (1, -1):
            h = kagome_model(2, 2, hop_sign)
            rng = np.random.default_rng(300 + hop_sign)
            for _ in range(100):
                g = rng.uniform(-1, 1, h.n)
                gs = ground_state(assemble(h, g))
                n = np.abs(gs.vector) ** 2
                worst = max(worst, float(np.max(np.abs(gdcm(h, g, gs).m - nlevel_gdcm_formula(n)))))
    detail(record_property, f"max deviation {worst:.1e}, {t.elapsed:.2f} s")
    assert worst <= 1e-12
    assert t.elapsed < 10.0


@pytest.mark.criterion("04 Perron-Frobenius positivity (hop -1)")
def test_criterion_04_perron_frobenius(record_property):
    h = kagome_model(2, 2, -1)
    cfg = SampleConfig(SAMPLES, seed=4)
    min_density, lams, excluded = np.inf, [], 0
    with Timer() as t:
        for k in range(SAMPLES):
            g = draw_couplings(cfg, h.n, k)
            gs = ground_state(assemble(h, g))
            if gs.degenerate:
                excluded += 1
                continue
            res = gdcm(h, g, gs)
            min_density = min(min_density, float(np.min(res.density)))
            lams.append(res.lambda_min_nontrivial)
        hist = build_histogram(np.array(lams), cfg, excluded)
    detail(record_property, f"min n_i {min_density:.2e}, min lambda {min(lams):.2e}, "
                            f"fraction_below(1e-8) {hist.fraction_below(1e-8)}, {t.elapsed:.1f} s")
    assert min_density > 0
    assert min(lams) > 0
    assert hist.fraction_below(1e-8) == 0.0
    assert t.elapsed < 120.0


@pytest.mark.criterion("05 singular regime (hop +1)")
def test_criterion_05_singular_regime(record_property):
    h = kagome_model(2, 2, 1)
    with Timer() as t:
        hist = sample_lambda_min(h, SampleConfig(SAMPLES, seed=5))
    frac = hist.fraction_below(1e-6)
    detail(record_property, f"fraction_below(1e-6) {frac:.4f} of {hist.total_kept} kept "
                            f"(median lambda {np.median(hist.values):.2e}), {t.elapsed:.1f} s")
    assert t.elapsed < 120.0
    assert frac > 0.9


@pytest.mark.criterion("06 localized-state persistence")
def test_criterion_06_localized_state(localized_case, record_property):
    lat, h, g = localized_case
    hexagon = list(lat.hexagons[0])
    off = [i for i in range(lat.sites) if i not in hexagon]
    with Timer() as t:
        gs = ground_state(assemble(h, g))
        psi_l = kagome_localized_state(lat, 0)
        overlap = abs(np.vdot(psi_l, gs.vector))
        res = gdcm(h, g, gs)
        nulls = null_space(res)
    n = res.density
    basis = np.column_stack(nulls + [np.ones(lat.sites) / np.sqrt(lat.sites)])
    resid = 0.0
    for z in off:
        e = np.zeros(lat.sites)
        e[z] = 1.0
        resid = max(resid, float(np.linalg.norm(e - basis @ np.linalg.lstsq(basis, e, rcond=None)[0])))
    detail(record_property, f"1 - overlap {1 - overlap:.1e}, gap {gs.gap:.3f}, "
                            f"{len(nulls)} null vectors, span residual {resid:.1e}")
    assert not gs.degenerate
    assert overlap >= 1 - 1e-10
    np.testing.assert_allclose(n[hexagon], 1 / 6, atol=1e-12)
    assert np.max(np.abs(n[off])) <= 1e-12
    assert len(nulls) == len(off)
    assert resid < 1e-10
    assert t.elapsed < 5.0


@pytest.mark.criterion("07 Hubbard ED vs analytic GDCM")
def test_criterion_07_hubbard_ed(record_property):
    n = 6
    with Timer() as t:
        h = hubbard_chain(n)
        sector = hubbard_sector(n)
        gs = ground_state(assemble(h, np.zeros(n)))
        res = gdcm(h, np.zeros(n), gs)
        psi = gs.vector
        ident = 0.0
        for i, op in enumerate(h.ops):
            nn, sz = site_density(sector, i).matvec(psi), site_sz(sector, i).matvec(psi)
            rhs = 0.25 * (np.vdot(nn, nn).real - np.vdot(sz, sz).real)
            ident = max(ident, abs(expectation(psi, op) - rhs))
    analytic = hubbard_gdcm_analytic(n).m
    row = [3 / 16, -7 / 162, 0, -17 / 1296, 0, -7 / 162]
    dev = float(np.max(np.abs(res.m - analytic)))
    detail(record_property, f"|M_ED - M_analytic| {dev:.1e}, |O - 1/4| "
                            f"{np.max(np.abs(res.density - 0.25)):.1e}, identity {ident:.1e}, "
                            f"{t.elapsed:.2f} s")
    assert not gs.degenerate
    np.testing.assert_allclose(analytic[0], row, atol=1e-15)
    assert dev <= 1e-10
    np.testing.assert_allclose(res.m[0], row, atol=1e-10)
    assert np.max(np.abs(res.density - 0.25)) <= 1e-10
    assert ident <= 1e-12
    assert t.elapsed < 30.0


@pytest.mark.criterion("08a Hubbard spectrum: circulant eigenvalues = lambda(p)")
def test_criterion_08a_hubbard_spectrum(record_property):
    worst = 0.0
    with Timer() as t:
        for n in (6, 10, 14):
            lam = np.sort([hubbard_lambda_analytic(n, 2 * np.pi * k / n) for k in range(n)])
            worst = max(worst, float(np.max(np.abs(lam - hubbard_gdcm_analytic(n).eigenvalues))))
    detail(record_property, f"max multiset deviation {worst:.1e}")
    assert worst <= 1e-12
    assert t.elapsed < 10.0


@pytest.mark.criterion("08b Hubbard spectrum: lambda(p) > 0 and S(N) > -3 for N <= 102")
def test_criterion_08b_positivity(record_property):
    with Timer() as t:
        rep = appendix_bound_check(102)
    detail(record_property, f"min lambda {min(rep.min_lambda):.4f}, min S(N) {min(rep.sums):.6f}")
    assert rep.sizes == tuple(range(6, 103, 4))
    assert min(rep.min_lambda) > 0
    assert rep.all_above_minus_three
    assert rep.monotone_decreasing
    assert t.elapsed < 10.0


@pytest.mark.criterion("08c Hubbard spectrum: S(102) within 1e-3 of pi^4/48 - pi^2/2")
def test_criterion_08c_series_limit(record_property):
    rep = appendix_bound_check(102)
    target = math.pi**4 / 48 - math.pi**2 / 2
    detail(record_property, f"S(102) = {rep.sums[-1]:.6f}, target {target:.6f}")
    assert abs(rep.sums[-1] - target) <= 1e-3


@pytest.mark.criterion("09 null-direction certification")
def test_criterion_09_null_directions(ising_points, ff_points, localized_case, record_property):
    cases = [(ising_dimer(), g) for g in ising_points]
    cases += [(frustration_free_dimer(), g) for g in ff_points]
    _, h_loc, g_loc = localized_case
    cases.append((h_loc, g_loc))
    checked, failed = 0, []
    with Timer() as t:
        for h, g in cases:
            gs = ground_state(assemble(h, g))
            for dg in null_space(gdcm(h, g, gs), 1e-8):
                checked += 1
                if not verify_null_direction(h, g, gs, dg, 1e-3):
                    failed.append(tuple(g))
    detail(record_property, f"{checked} directions, {len(failed)} failed, {t.elapsed:.2f} s")
    assert checked >= 200 + 40 + 6
    assert not failed
    assert t.elapsed < 10.0


@pytest.mark.criterion("10 response-matrix cross-check")
def test_criterion_10_response(record_property):
    h = ising_dimer()
    rng = np.random.default_rng(10)
    target = np.array([1.0, -1.0]) / np.sqrt(2)
    worst = 0.0
    with Timer() as t:
        for _ in range(20):
            g = rng.uniform(0.05, 2.0, 2) * rng.choice([-1, 1])
            v = response_matrix(h, g).null_direction()
            worst = max(worst, math.acos(min(1.0, abs(float(v @ target)))))
    detail(record_property, f"max angle {worst:.1e} rad, {t.elapsed:.2f} s")
    assert worst <= 1e-4
    assert t.elapsed < 5.0


@pytest.mark.slow
@pytest.mark.criterion("11 size trend of the lambda_min mode (hop -1)")
def test_criterion_11_size_trend(record_property):
    modes = []
    with Timer() as t:
        for size in (2, 3, 4):
            hist = sample_lambda_min(kagome_model(size, size, -1), SampleConfig(SAMPLES, seed=11))
            modes.append(mode_estimate(hist))
    detail(record_property, "modes " + ", ".join(f"{m:.4g}" for m in modes) + f", {t.elapsed:.0f} s")
    assert modes[0] >= modes[1] >= modes[2]
    assert t.elapsed < 1800.0


@pytest.mark.criterion("12 determinism across reruns and GDCM_THREADS")
def test_criterion_12_determinism(tmp_path, monkeypatch, record_property):
    outputs = []
    for run, threads in enumerate(("1", "4", "4")):
        monkeypatch.setenv("GDCM_THREADS", threads)
        prefix = tmp_path / f"run{run}" / "kagome"
        assert main(["sample", "--model", "kagome", "--l1", "2", "--l2", "2", "--hop-sign", "-1",
                     "--n", str(SAMPLES), "--seed", "7", "--out-prefix", str(prefix), "--svg"]) == 0
        outputs.append(tuple(prefix.with_suffix(s).read_bytes() for s in (".csv", ".json", ".svg")))
    meta = json.loads(outputs[0][1])
    detail(record_property, f"{meta['total_kept']} kept, mode {meta['mode']:.4g}")
    assert outputs[0] == outputs[1] == outputs[2]
