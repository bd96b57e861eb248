"""Monte-Carlo sampling of the smallest nontrivial GDCM eigenvalue.

Draw ``k`` uses its own generator seeded from ``(seed, k)``, so the set of
sampled couplings does not depend on how draws are split across workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import ground_state
from .errors import DegenerateGroundStateError
from .gdcm import FLAT, INVERTIBLE, certify_flat, gdcm, null_space
from .operators import HkHamiltonian, assemble

__all__ = [
    "SampleConfig",
    "LambdaMinHistogram",
    "draw_couplings",
    "collect_lambda_min",
    "build_histogram",
    "sample_lambda_min",
    "mode_estimate",
    "one_for_all_test",
    "OneForAllReport",
    "worker_count",
]

FLAT_CAVEAT = (
    "the operators carry no ground-state fluctuation at this point; "
    "the coupling-to-density map cannot be inverted"
)
GENERIC_CAVEAT = (
    "a nonzero determinant at one point implies invertibility for generic "
    "couplings, except on a measure-zero set of g"
)


@dataclass(frozen=True)
class SampleConfig:
    num_samples: int
    seed: int
    g_low: float = -1.0
    g_high: float = 1.0
    bins: int = 100
    lambda_max: float | None = None  # None: 99.5th percentile of kept samples
    percentile: float = 99.5

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if not self.g_low < self.g_high:
            raise ValueError("g_low must be below g_high")
        if self.bins < 10:
            raise ValueError("bins must be >= 10")
        if self.lambda_max is not None and self.lambda_max <= 0:
            raise ValueError("lambda_max must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class LambdaMinHistogram:
    bin_edges: np.ndarray
    densities: np.ndarray
    values: np.ndarray  # kept lambda_min in draw order
    total_kept: int
    total_excluded: int
    total_overflow: int = 0
    config: SampleConfig | None = field(default=None, compare=False)

    def fraction_below(self, eps: float = 1e-6) -> float:
        return float(np.mean(self.values < eps))

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def worker_count() -> int:
    env = os.environ.get("GDCM_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def draw_couplings(cfg: SampleConfig, n: int, index: int) -> np.ndarray:
    rng = np.random.default_rng([cfg.seed, index])
    return rng.uniform(cfg.g_low, cfg.g_high, n)


def _one_draw(h: HkHamiltonian, cfg: SampleConfig, index: int, trivial) -> float | None:
    g = draw_couplings(cfg, h.n, index)
    gs = ground_state(assemble(h, g))
    if gs.degenerate:
        return None
    return gdcm(h, g, gs, trivial).lambda_min_nontrivial


def collect_lambda_min(
    h: HkHamiltonian, cfg: SampleConfig, trivial_directions=None, workers: int | None = None
) -> tuple[np.ndarray, int]:
    """Kept ``lambda_min`` values in draw order and the number of degenerate draws."""
    workers = worker_count() if workers is None else workers
    idx = range(cfg.num_samples)
    if workers == 1:
        raw = [_one_draw(h, cfg, k, trivial_directions) for k in idx]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(
                pool.map(lambda k: _one_draw(h, cfg, k, trivial_directions), idx, chunksize=64)
            )
    kept = np.array([x for x in raw if x is not None], dtype=float)
    return kept, len(raw) - kept.size


def build_histogram(
    values: np.ndarray, cfg: SampleConfig, excluded: int = 0
) -> LambdaMinHistogram:
    """Histogram on ``[0, lambda_max]`` normalized to unit integral.

    Values above ``lambda_max`` are counted as overflow and left out of the
    densities; tiny negative round-off is clipped to the first bin.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DegenerateGroundStateError("every draw had a degenerate ground state")
    top = cfg.lambda_max
    if top is None:
        top = float(np.percentile(values, cfg.percentile))
    if not top > 0:
        # every sample is (numerically) zero
        top = max(float(np.max(np.abs(values))), 1e-12)
    clipped = np.clip(values, 0.0, None)
    inside = clipped[clipped <= top]
    counts, edges = np.histogram(inside, bins=cfg.bins, range=(0.0, top))
    dens = counts / (inside.size * np.diff(edges))
    return LambdaMinHistogram(
        bin_edges=edges,
        densities=dens,
        values=values,
        total_kept=int(values.size),
        total_excluded=int(excluded),
        total_overflow=int(values.size - inside.size),
        config=cfg,
    )


def sample_lambda_min(
    h: HkHamiltonian, cfg: SampleConfig, trivial_directions=None, workers: int | None = None
) -> LambdaMinHistogram:
    values, excluded = collect_lambda_min(h, cfg, trivial_directions, workers)
    return build_histogram(values, cfg, excluded)


def mode_estimate(hist: LambdaMinHistogram) -> float:
    """Centre of the highest-density bin; ties go to the smallest lambda."""
    if hist.densities.size == 0:
        raise ValueError("empty histogram")
    return float(hist.centers[int(np.argmax(hist.densities))])


@dataclass(frozen=True, eq=False)
class OneForAllReport:
    g: np.ndarray
    lambda_min: float
    verdict: str
    eigenvalues: np.ndarray
    null_directions: list
    caveat: str


def one_for_all_test(h: HkHamiltonian, g, trivial_directions=None) -> OneForAllReport:
    """GDCM verdict at a single coupling point."""
    g = np.asarray(g, dtype=float)
    result = certify_flat(gdcm(h, g, trivial_directions=trivial_directions))
    if result.verdict == FLAT:
        caveat = FLAT_CAVEAT
    elif result.verdict == INVERTIBLE:
        caveat = GENERIC_CAVEAT
    else:
        caveat = "the ground state is shared along the listed null directions"
    return OneForAllReport(
        g=g,
        lambda_min=result.lambda_min_nontrivial,
        verdict=result.verdict,
        eigenvalues=result.eigenvalues,
        null_directions=null_space(result),
        caveat=caveat,
    )
