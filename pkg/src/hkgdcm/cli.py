"""Command-line front end.

Every subcommand accepts its options as flags.  ``hkgdcm run FILE`` reads the
same options from a flat ``key = value`` file (one per line, ``#`` comments,
keys spelled like the long flags with ``_`` or ``-``) that must also set
``mode``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import checks
from .eigensolve import ground_state
from .errors import DegenerateGroundStateError, HkError
from .gdcm import certify_flat, gdcm, response_matrix
from .io import (
    dump_json,
    gdcm_payload,
    histogram_payload,
    render_histogram,
    write_histogram_csv,
)
from .models import (
    appendix_bound_check,
    frustration_free_dimer,
    hubbard_chain,
    ising_dimer,
    kagome_model,
    nlevel_model,
    read_edge_list,
)
from .operators import HkHamiltonian, assemble
from .sampling import SampleConfig, mode_estimate, sample_lambda_min

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_ERROR = 4

MODES = ("gdcm-at-point", "sample", "oracle-check", "appendix-check", "render")
MODELS = ("ising-dimer", "frustration-free", "kagome", "graph", "hubbard")


class UsageError(HkError):
    code = "usage"


def build_model(spec: dict) -> HkHamiltonian:
    """Instantiate a model from its JSON description (see :func:`model_spec`)."""
    name = spec["name"]
    if name == "ising-dimer":
        return ising_dimer()
    if name == "frustration-free":
        return frustration_free_dimer()
    if name == "kagome":
        return kagome_model(int(spec["l1"]), int(spec["l2"]), int(spec["hop_sign"]))
    if name == "graph":
        graph = read_edge_list(spec["graph_file"])
        return nlevel_model(graph)
    if name == "hubbard":
        return hubbard_chain(int(spec["sites"]))
    raise UsageError(f"unknown model {name!r}")


def model_spec(args) -> dict:
    if args.model is None:
        raise UsageError("--model is required")
    spec = {"name": args.model}
    if args.model == "kagome":
        spec.update(l1=args.l1, l2=args.l2, hop_sign=args.hop_sign)
    elif args.model == "graph":
        if not args.graph_file:
            raise UsageError("--graph-file is required for --model graph")
        spec["graph_file"] = str(args.graph_file)
    elif args.model == "hubbard":
        if args.sites is None:
            raise UsageError("--sites is required for --model hubbard")
        spec["sites"] = args.sites
    return spec


def _parse_g(text: str, n: int) -> np.ndarray:
    try:
        g = np.array([float(x) for x in text.split(",") if x.strip()], dtype=float)
    except ValueError as exc:
        raise UsageError(f"--g: {exc}") from exc
    if g.size != n:
        raise UsageError(f"--g has {g.size} entries, model needs {n}")
    return g


def _emit(payload: dict, out) -> None:
    text = dump_json(payload, out)
    if out is None:
        sys.stdout.write(text)


def cmd_gdcm_at_point(args) -> int:
    spec = model_spec(args)
    h = build_model(spec)
    g = np.zeros(h.n) if args.g is None else _parse_g(args.g, h.n)
    gs = ground_state(assemble(h, g))
    if gs.degenerate:
        raise DegenerateGroundStateError(
            f"ground state is {gs.multiplicity}-fold degenerate at this g", gs.multiplicity
        )
    trivial = () if args.no_trivial else None
    result = certify_flat(gdcm(h, g, gs, trivial))
    payload = {
        "schema": 1,
        "mode": "gdcm-at-point",
        "model": spec,
        "g": g,
        "ground_energy": gs.energy,
        "gap": gs.gap,
        "gdcm": gdcm_payload(result),
    }
    if args.response:
        chi = response_matrix(h, g, args.step)
        payload["response"] = {
            "chi": chi.chi,
            "step": chi.step,
            "singular_values": chi.singular_values(),
            "richardson_error": chi.richardson_error,
            "near_degenerate": chi.near_degenerate,
        }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    spec = model_spec(args)
    h = build_model(spec)
    cfg = SampleConfig(
        num_samples=args.n,
        seed=args.seed,
        g_low=args.g_low,
        g_high=args.g_high,
        bins=args.bins,
        lambda_max=args.lambda_max,
    )
    trivial = () if args.no_trivial else None
    hist = sample_lambda_min(h, cfg, trivial)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_suffix(".csv")
    write_histogram_csv(hist, csv_path)
    dump_json(histogram_payload(hist, {"mode_name": "sample", "model": spec}),
              prefix.with_suffix(".json"))
    if args.svg:
        render_histogram(csv_path, prefix.with_suffix(".svg"), title=_title(spec))
    print(f"kept={hist.total_kept} excluded={hist.total_excluded} "
          f"mode={mode_estimate(hist):.6g} fraction_below(1e-6)={hist.fraction_below(1e-6):.6g}")
    return EXIT_OK


def _title(spec: dict) -> str:
    if spec["name"] == "kagome":
        return f"kagome {spec['l1']}x{spec['l2']}, hop_sign {spec['hop_sign']:+d}"
    return spec["name"]


def cmd_oracle_check(args) -> int:
    name = args.model
    t0 = time.perf_counter()
    if name == "ising-dimer":
        res = checks.ising_oracle_check(args.trials, args.seed)
        worst = max(res["max_density_deviation"], res["max_energy_deviation"],
                    res["max_gdcm_deviation"])
    elif name == "frustration-free":
        res = checks.frustration_free_check(args.trials, args.seed)
        worst = res["max_abs_entry"]
    elif name == "kagome":
        res = checks.nlevel_oracle_check(args.l1, args.l2, args.hop_sign, args.trials, args.seed)
        worst = res["max_deviation"]
    elif name == "hubbard":
        res = checks.hubbard_oracle_check(args.sites or 6)
        worst = max(res["max_gdcm_deviation"], res["max_density_deviation"],
                    res["identity_deviation"])
    else:
        raise UsageError(f"no oracle for model {name!r}")
    status = "PASS" if res["passed"] else "FAIL"
    print(f"{status} oracle-check {name}: max deviation {worst:.3e} "
          f"({time.perf_counter() - t0:.2f} s)")
    if args.out:
        dump_json({"schema": 1, "mode": "oracle-check", "model": name, **res}, args.out)
    return EXIT_OK if res["passed"] else EXIT_CHECK_FAILED


def cmd_appendix_check(args) -> int:
    rep = appendix_bound_check(args.n_max)
    for n, s, lam in zip(rep.sizes, rep.sums, rep.min_lambda):
        print(f"N={n:4d}  S(N)={s:.12f}  min lambda(p)={lam:.12f}")
    print(f"bound constant 2(pi^4/96) - 4(pi^2/8) = {rep.bound_constant:.12f}")
    status = "PASS" if rep.ok and min(rep.min_lambda) > 0 else "FAIL"
    print(f"{status} S(N) > -3 for all N, decreasing in N, lambda(p) > 0")
    if args.out:
        dump_json({"schema": 1, "mode": "appendix-check", "sizes": rep.sizes, "sums": rep.sums,
                   "min_lambda": rep.min_lambda, "bound_constant": rep.bound_constant,
                   "passed": status == "PASS"}, args.out)
    return EXIT_OK if status == "PASS" else EXIT_CHECK_FAILED


def cmd_render(args) -> int:
    render_histogram(args.csv, args.svg, args.title)
    return EXIT_OK


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--sites", type=int, help="Hubbard chain length")
    p.add_argument("--l1", type=int, default=2)
    p.add_argument("--l2", type=int, default=2)
    p.add_argument("--hop-sign", type=int, default=1, choices=(1, -1))
    p.add_argument("--graph-file", type=Path)
    p.add_argument("--no-trivial", action="store_true",
                   help="do not deflate the model's declared trivial directions")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hkgdcm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gdcm-at-point", help="GDCM, spectrum and verdict at one g")
    _add_model_args(p)
    p.add_argument("--g", help="comma-separated couplings (default: all zero)")
    p.add_argument("--response", action="store_true", help="also report d<O>/dg")
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_gdcm_at_point)

    p = sub.add_parser("sample", help="histogram of lambda_min over random g")
    _add_model_args(p)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--g-low", type=float, default=-1.0)
    p.add_argument("--g-high", type=float, default=1.0)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--out-prefix", default="lambda_min")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("oracle-check", help="compare ED against closed forms")
    _add_model_args(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("appendix-check", help="positivity of the Hubbard GDCM spectrum")
    p.add_argument("--n-max", type=int, default=102)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_appendix_check)

    p = sub.add_parser("render", help="SVG plot of a histogram CSV")
    p.add_argument("csv", type=Path)
    p.add_argument("svg", type=Path)
    p.add_argument("--title", default="")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("run", help="run a key=value experiment file")
    p.add_argument("config", type=Path)
    p.set_defaults(func=None)
    return parser


def read_config(path) -> list[str]:
    """Translate a ``key = value`` file into an argument vector."""
    argv, mode = [], None
    positional = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "mode":
            mode = value
        elif key in ("csv", "svg"):
            positional.append(value)
        elif value.lower() in ("true", "yes"):
            argv.append(f"--{key}")
        elif value.lower() in ("false", "no"):
            continue
        else:
            argv.append(f"--{key}={value}")
    if mode not in MODES:
        raise UsageError(f"{path}: mode must be one of {', '.join(MODES)}")
    return [mode, *positional, *argv]


def _fail(exc: Exception, status: int) -> int:
    code = getattr(exc, "code", type(exc).__name__)
    sys.stderr.write(json.dumps({"error": code, "message": str(exc)}) + "\n")
    return status


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            args = parser.parse_args(read_config(args.config))
            if args.command == "run":
                raise UsageError("nested run")
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    except DegenerateGroundStateError as exc:
        return _fail(exc, EXIT_DEGENERATE)
    except (HkError, ValueError, OSError) as exc:
        return _fail(exc, EXIT_ERROR)


if __name__ == "__main__":
    raise SystemExit(main())
