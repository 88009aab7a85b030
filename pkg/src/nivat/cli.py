"""Command line front end.

Every command prints (or writes with ``--out``) one JSON report embedding a
run manifest.  Exit status: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import __version__
from .balanced import construct_balanced, find_forced_cell
from .complexity import ScanRange, complexity_table, pattern_complexity
from .configurations import EvaluationError, Ledrappier, PeriodicSum, ledrappier_complement, spec_from_json
from .dynamics import (
    Inconclusive,
    ambiguity_witness,
    detect_periods,
    mn_over_2_harness,
    nivat_sum2_harness,
)
from .generators import Sum2Params
from .geometry import Shape, Vec
from .poly import annihilator_nullspace, periodic_product_annihilator, relabeling_search, vertex_locus_counts
from .render import atomic_write, locus_svg, rows_to_csv, shapes_svg, shaving_svg, window_to_csv, write_pgm


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_rect(s: str) -> tuple[int, int]:
    try:
        m, n = s.lower().split("x")
        m, n = int(m), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MxN, got {s!r}")
    if m < 1 or n < 1:
        raise argparse.ArgumentTypeError("rectangle sides must be >= 1")
    return m, n


def parse_vec(s: str) -> Vec:
    try:
        x, y = s.split(",")
        return Vec(int(x), int(y))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {s!r}")


def parse_range(s: str) -> ScanRange:
    """``X,Y,WxH`` or ``WxH`` (origin 0,0)."""
    try:
        parts = s.split(",")
        if len(parts) == 3:
            origin = Vec(int(parts[0]), int(parts[1]))
            w, h = parse_rect(parts[2])
        elif len(parts) == 1:
            origin = Vec(0, 0)
            w, h = parse_rect(parts[0])
        else:
            raise ValueError
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"expected X,Y,WxH or WxH, got {s!r}")
    return ScanRange(origin, w, h)


def parse_vec_list(s: str) -> list[Vec]:
    return [parse_vec(p) for p in s.split(";") if p.strip()]


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file: {path}")
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})")


def digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def timestamp() -> str:
    sde = os.environ.get("SOURCE_DATE_EPOCH")
    t = datetime.fromtimestamp(int(sde), timezone.utc) if sde else datetime.now(timezone.utc)
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def _plain(v):
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_plain(a) for a in v]
    return v


def manifest(args, inputs: list[str]) -> dict:
    params = {k: _plain(v) for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    return {
        "tool": "nivat",
        "version": __version__,
        "schema": 1,
        "command": args.command if not getattr(args, "harness_command", None) else f"harness {args.harness_command}",
        "parameters": params,
        "inputs": {p: digest(p) for p in inputs},
        "seed": getattr(args, "seed", None),
        "timestamp": timestamp(),
    }


def emit(args, report: dict, inputs: list[str]) -> None:
    doc = {"manifest": manifest(args, inputs), "result": report}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_complexity(args) -> dict:
    spec = spec_from_json(load_json(args.config))
    inputs = [args.config]
    if args.shape:
        dom = Shape.from_json(load_json(args.shape))
        inputs.append(args.shape)
    else:
        dom = Shape.rect(*args.rect)
    rep = pattern_complexity(spec, dom, args.window)
    out = rep.to_json()
    out["low_complexity"] = rep.count <= len(dom)
    if args.table:
        m, n = args.table
        rows = [
            {"m": k[0], "n": k[1], "count": r.count, "mn": k[0] * k[1], "exact": r.exact}
            for k, r in complexity_table(spec, m, n, args.window).items()
        ]
        out["table"] = rows
        if args.csv:
            atomic_write(args.csv, rows_to_csv(rows))
    emit(args, out, inputs)
    return out


def cmd_balanced(args) -> dict:
    spec = spec_from_json(load_json(args.config))
    m, n = args.rect
    cert = construct_balanced(spec, m, n, args.dir, "fixed" if args.fixed else "alternate", args.window)
    out = cert.to_json()
    if not cert.exact:
        out["warning"] = "complexity counts are window lower bounds; condition (ii) is not certified"
        print("warning: inexact complexity oracle, certificate is not theorem-grade", file=sys.stderr)
    try:
        fc = find_forced_cell(spec, cert.shape, cert.edge, cert.direction, window=args.window)
        out["forced_cell"] = fc.to_json()
    except Inconclusive as e:
        out["forced_cell"] = {"inconclusive": str(e)}
    if args.trace:
        d = Path(args.trace)
        for i, D in enumerate(cert.trace):
            atomic_write(d / f"D_{i:03d}.json", json.dumps(D.to_json()) + "\n")
        atomic_write(d / "shaving.svg", shaving_svg(list(cert.trace)))
        out["trace"] = {"directory": str(d), "shapes": len(cert.trace)}
    emit(args, out, [args.config])
    return out


def cmd_annihilate(args) -> dict:
    spec = spec_from_json(load_json(args.config))
    support = Shape.from_json(load_json(args.support))
    region = args.region
    rep = annihilator_nullspace(spec, support, region)
    out = {"found": rep is not None, "annihilator": rep.to_json() if rep else None}
    if rep is None and args.relabel is not None:
        hit = relabeling_search(spec, support, region, args.relabel)
        out["relabeling"] = None if hit is None else {"mapping": {str(k): v for k, v in hit[0].items()}, "annihilator": hit[1].to_json()}
    emit(args, out, [args.config, args.support])
    return out


def cmd_periods(args) -> dict:
    spec = spec_from_json(load_json(args.config))
    rep = detect_periods(spec, args.window, args.max_norm)
    out = rep.to_json(args.top)
    emit(args, out, [args.config])
    return out


def cmd_ambiguity(args) -> dict:
    spec = spec_from_json(load_json(args.config))
    specs = spec
    if args.complement:
        if not isinstance(spec, Ledrappier):
            raise ValueError("--complement needs a ledrappier configuration")
        specs = (spec, ledrappier_complement(spec))
    wit = ambiguity_witness(specs, args.dir, args.width, args.length, args.search)
    out = {
        "found": wit is not None,
        "search": args.search.to_json(),
        "witness": wit.to_json() if wit else None,
    }
    emit(args, out, [args.config])
    return out


def cmd_harness_sum2(args) -> dict:
    m, n = args.rect
    params = Sum2Params(max_period=args.max_period, alphabet=args.alphabet)
    out = nivat_sum2_harness(args.trials, m, n, args.seed, params, args.window, args.max_norm, args.workers)
    if args.csv:
        rows = [
            {"trial": r["index"], "outcome": r["outcome"], "low_pairs": len(r["low_pairs"]), "period": r["period"]}
            for r in out["results"]
        ]
        atomic_write(args.csv, rows_to_csv(rows))
    emit(args, out, [])
    return out


def cmd_harness_mnhalf(args) -> dict:
    spec = spec_from_json(load_json(args.config))
    m, n = args.rect
    if args.g_periods is not None:
        g_periods = args.g_periods
    elif isinstance(spec, PeriodicSum):
        g_periods = [c.period for c in spec.components[2:]]
    else:
        raise ValueError("--g-periods is required unless the config is a periodic-sum")
    out = mn_over_2_harness(spec, m, n, g_periods, args.window)
    if args.render:
        d = Path(args.render)
        g = periodic_product_annihilator(g_periods)
        loc = vertex_locus_counts(g.support(), m, n)
        atomic_write(d / "locus.svg", locus_svg(loc.R_shape, loc.U_shape))
        scan = ScanRange.from_json(out["scan"])
        write_pgm(d / "window.pgm", spec.window(scan.origin, scan.width + m - 1, scan.height + n - 1))
        out["render"] = {"directory": str(d)}
    emit(args, out, [args.config])
    return out


def cmd_render(args) -> dict:
    out: dict = {}
    inputs = []
    if args.config:
        if args.window is None:
            raise UsageError("render --config needs --window")
        spec = spec_from_json(load_json(args.config))
        win = spec.window(args.window.origin, args.window.width, args.window.height)
        inputs.append(args.config)
        if args.pgm:
            out["pgm"] = write_pgm(args.pgm, win)
        if args.csv:
            atomic_write(args.csv, window_to_csv(win))
            out["csv"] = args.csv
    if args.shape:
        shape = Shape.from_json(load_json(args.shape))
        inputs.append(args.shape)
        if not args.svg:
            raise UsageError("render --shape needs --svg")
        atomic_write(args.svg, shapes_svg([(shape, "#4c72b0")]))
        out["svg"] = args.svg
    if not out:
        raise UsageError("nothing to render: give --config with --pgm/--csv or --shape with --svg")
    emit(args, out, inputs)
    return out


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nivat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"nivat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, window_help="scan range X,Y,WxH for inexact counts"):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--window", type=parse_range, default=None, help=window_help)

    sp = sub.add_parser("complexity", help="pattern complexity of a shape or rectangle")
    sp.add_argument("--config", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--shape")
    g.add_argument("--rect", type=parse_rect)
    sp.add_argument("--table", type=parse_rect, help="also tabulate P(m,n) up to MxN")
    sp.add_argument("--csv", help="CSV file for --table")
    common(sp)
    sp.set_defaults(func=cmd_complexity)

    sp = sub.add_parser("balanced", help="construct a balanced set by shaving")
    sp.add_argument("--config", required=True)
    sp.add_argument("--rect", type=parse_rect, required=True)
    sp.add_argument("--dir", type=parse_vec, required=True)
    sp.add_argument("--fixed", action="store_true", help="always shave in --dir (axis directions only)")
    sp.add_argument("--trace", nargs="?", const="trace", help="directory (default ./trace) for the D_0 > D_1 > ... shapes and an SVG")
    common(sp)
    sp.set_defaults(func=cmd_balanced)

    sp = sub.add_parser("annihilate", help="search an annihilator with given support")
    sp.add_argument("--config", required=True)
    sp.add_argument("--support", required=True)
    sp.add_argument("--region", type=parse_range, required=True)
    sp.add_argument("--relabel", type=int, default=None, metavar="K", help="try relabelings into [-K, K]")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_annihilate)

    sp = sub.add_parser("periods", help="shift agreement and certified periods")
    sp.add_argument("--config", required=True)
    sp.add_argument("--window", type=parse_range, required=True)
    sp.add_argument("--max-norm", type=int, default=10)
    sp.add_argument("--top", type=int, default=20)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_periods)

    sp = sub.add_parser("ambiguity", help="search an ambiguous stripe segment")
    sp.add_argument("--config", required=True)
    sp.add_argument("--dir", type=parse_vec, required=True)
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--length", type=int, default=8)
    sp.add_argument("--search", type=parse_range, required=True)
    sp.add_argument("--complement", action="store_true", help="pair a ledrappier seed with its complement")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_ambiguity)

    sp = sub.add_parser("harness", help="randomized theorem harnesses")
    hs = sp.add_subparsers(dest="harness_command", required=True)
    h = hs.add_parser("sum2", help="two-component periodic sums")
    h.add_argument("--trials", type=int, default=100)
    h.add_argument("--rect", type=parse_rect, default=(6, 6))
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--max-norm", type=int, default=36)
    h.add_argument("--max-period", type=int, default=6)
    h.add_argument("--alphabet", type=int, default=4)
    h.add_argument("--workers", type=int, default=1)
    h.add_argument("--csv")
    common(h)
    h.set_defaults(func=cmd_harness_sum2)
    h = hs.add_parser("mnhalf", help="R/U accounting for a known decomposition")
    h.add_argument("--config", required=True)
    h.add_argument("--rect", type=parse_rect, required=True)
    h.add_argument("--g-periods", type=parse_vec_list, default=None, help="X,Y;X,Y;...")
    h.add_argument("--render", help="directory for PGM window and R/U SVG")
    common(h)
    h.set_defaults(func=cmd_harness_mnhalf)

    sp = sub.add_parser("render", help="PGM/CSV of a window, SVG of a shape")
    sp.add_argument("--config")
    sp.add_argument("--window", type=parse_range)
    sp.add_argument("--pgm")
    sp.add_argument("--csv")
    sp.add_argument("--shape")
    sp.add_argument("--svg")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"nivat: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, EvaluationError, Inconclusive, RuntimeError, FileNotFoundError, KeyError, OSError) as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
