"""Result files: JSON reports, CSV histograms and SVG renderings."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import HkError
from .gdcm import Gdcm, null_space
from .sampling import LambdaMinHistogram, mode_estimate

__all__ = [
    "SCHEMA_VERSION",
    "HistogramFormatError",
    "to_jsonable",
    "dump_json",
    "gdcm_payload",
    "histogram_payload",
    "write_histogram_csv",
    "read_histogram_csv",
    "render_histogram",
    "render_svg",
]

SCHEMA_VERSION = 1
CSV_HEADER = ("bin_left", "bin_right", "density")


class HistogramFormatError(HkError, ValueError):
    code = "bad_histogram_csv"


def to_jsonable(obj):
    """Convert numpy containers to plain Python; NaN and inf become ``None``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dump_json(payload: dict, path=None) -> str:
    # float repr is the shortest string that round-trips exactly
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def gdcm_payload(result: Gdcm) -> dict:
    return {
        "matrix": result.m,
        "eigenvalues": result.eigenvalues,
        "lambda_min_nontrivial": result.lambda_min_nontrivial,
        "singular_tol": result.singular_tol,
        "verdict": result.verdict,
        "trivial_directions": result.trivial_directions,
        "null_space": null_space(result),
        "density": result.density,
    }


def histogram_payload(hist: LambdaMinHistogram, extra: dict | None = None) -> dict:
    cfg = hist.config
    out = {
        "schema": SCHEMA_VERSION,
        "total_kept": hist.total_kept,
        "total_excluded": hist.total_excluded,
        "total_overflow": hist.total_overflow,
        "mode": mode_estimate(hist),
        "fraction_below": {
            "1e-08": hist.fraction_below(1e-8),
            "1e-06": hist.fraction_below(1e-6),
        },
        "lambda_min_min": float(np.min(hist.values)),
        "lambda_min_median": float(np.median(hist.values)),
    }
    if cfg is not None:
        out["config"] = {
            "num_samples": cfg.num_samples,
            "seed": cfg.seed,
            "g_low": cfg.g_low,
            "g_high": cfg.g_high,
            "bins": cfg.bins,
            "lambda_max": float(hist.bin_edges[-1]),
            "percentile": cfg.percentile,
        }
    if extra:
        out.update(extra)
    return out


def write_histogram_csv(hist: LambdaMinHistogram, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for lo, hi, d in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.densities):
            w.writerow([f"{lo:.17g}", f"{hi:.17g}", f"{d:.17g}"])


def read_histogram_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise HistogramFormatError(str(exc)) from exc
    if not rows or tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise HistogramFormatError(f"{path}: expected header {','.join(CSV_HEADER)}")
    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(c) for c in r] for r in body], dtype=float)
    except ValueError as exc:
        raise HistogramFormatError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise HistogramFormatError(f"{path}: no histogram rows")
    if data.ndim != 2 or data.shape[1] != 3:
        raise HistogramFormatError(f"{path}: every row needs three columns")
    left, right, dens = data.T
    if np.any(right <= left) or np.any(dens < 0) or not np.all(np.isfinite(data)):
        raise HistogramFormatError(f"{path}: invalid bin edges or densities")
    if not np.any(dens > 0):
        raise HistogramFormatError(f"{path}: all densities are zero")
    return left, right, dens


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def render_svg(left, right, dens, title: str = "") -> str:
    """Bar plot of ``p(lambda_min)`` against ``lambda_min`` as SVG text."""
    width, height = 640, 400
    mx, my, top_pad = 70, 50, 30
    pw, ph = width - mx - 20, height - my - top_pad
    x0, x1 = float(left[0]), float(right[-1])
    ymax = float(np.max(dens))
    sx = pw / (x1 - x0)
    sy = ph / ymax
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2}" y="18" text-anchor="middle" '
                     f'font-size="14">{escape(title)}</text>')
    base = top_pad + ph
    for lo, hi, d in zip(left, right, dens):
        if d <= 0:
            continue
        x = mx + (lo - x0) * sx
        w = max((hi - lo) * sx, 0.5)
        h = d * sy
        parts.append(
            f'<rect class="bar" x="{_fmt(x)}" y="{_fmt(base - h)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="steelblue"/>'
        )
    parts.append(f'<line x1="{mx}" y1="{base}" x2="{mx + pw}" y2="{base}" stroke="black"/>')
    parts.append(f'<line x1="{mx}" y1="{top_pad}" x2="{mx}" y2="{base}" stroke="black"/>')
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        xp = mx + pw * k / 4
        parts.append(f'<text x="{_fmt(xp)}" y="{base + 16}" text-anchor="middle" '
                     f'font-size="11">{xv:.3g}</text>')
        yv = ymax * k / 4
        yp = base - ph * k / 4
        parts.append(f'<text x="{mx - 6}" y="{_fmt(yp + 4)}" text-anchor="end" '
                     f'font-size="11">{yv:.3g}</text>')
    parts.append(f'<text x="{mx + pw / 2}" y="{height - 10}" text-anchor="middle" '
                 'font-size="13">λ_min</text>')
    parts.append(f'<text x="16" y="{top_pad + ph / 2}" text-anchor="middle" font-size="13" '
                 f'transform="rotate(-90 16 {top_pad + ph / 2})">p(λ_min)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_histogram(csv_path, svg_path, title: str = "") -> Path:
    """Read a histogram CSV and write its SVG rendering; nothing is written on error."""
    left, right, dens = read_histogram_csv(csv_path)
    svg = render_svg(left, right, dens, title)
    out = Path(svg_path)
    out.write_text(svg, encoding="utf-8")
    return out
