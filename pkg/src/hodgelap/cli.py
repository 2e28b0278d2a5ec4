"""``hodgelap`` command line: build, spectrum, bounds, bloch, color-check.

Exit codes: 0 pass, 1 certificate or check FAIL, 2 input error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .bloch import (BLOCH_TABLE, LATTICES, bz_maximum, catalog, cell_from_dict, default_grid)
from .bounds import ComparabilityConstants, certify, weighted_bound, weighted_constant
from .coloring import ColoringError, greedy_coloring, intertwine_residuals, parity_check
from .complex import up_down_degrees
from .fileformat import InputError, load_complex, load_json, parse_coloring
from .hodge import laplacian_block, normalized_block
from .spectral import ConvergenceError, eig_hermitian

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _metadata(args, t0, **extra) -> dict:
    meta = {"version": __version__, "command": args.command,
            "wall_time": round(time.perf_counter() - t0, 6)}
    meta.update(extra)
    return meta


def _emit(args, report: dict, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, indent=2, default=_jsonable))
    else:
        print("\n".join(lines))
    out = getattr(args, "output", None)
    if out:
        with open(out, "w") as fh:
            json.dump(report, fh, indent=2, default=_jsonable)
            fh.write("\n")


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else x.numerator
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_build(args) -> int:
    t0 = time.perf_counter()
    doc = load_complex(args.input)
    cx = doc.build(args.dim, args.weights)
    counts = cx.counts()
    degrees = []
    lines = ["counts: " + " / ".join(str(c) for c in counts)]
    for k in range(cx.n + 1):
        down, up = up_down_degrees(cx, k)
        degrees.append({"k": k, "D_down": float(down), "D_up": float(up)})
        lines.append(f"k={k}: D_down={_fmt(float(down))} D_up={_fmt(float(up))}")
    g = cx.graph
    lines.append(f"graph degree: max {g.max_degree()}, min {min((g.degree(x) for x in g.vertices), default=0)}")
    report = {"counts": counts, "degrees": degrees, "max_degree": g.max_degree(),
              "metadata": _metadata(args, t0, n=cx.n, weights=args.weights)}
    _emit(args, report, lines)
    return EXIT_PASS


def cmd_spectrum(args) -> int:
    t0 = time.perf_counter()
    doc = load_complex(args.input)
    cx = doc.build(args.dim, args.weights)
    k = args.degree
    if not 0 <= k <= cx.n:
        raise InputError(f"degree {k} outside 0..{cx.n}", None, args.input)
    size = cx.size(k)
    if size > args.cap:
        raise InputError(f"block has dimension {size} > dense cap {args.cap}; "
                         f"use 'hodgelap bounds' for an operator-norm estimate", None, args.input)
    if size == 0:
        result_vals, resid = [], 0.0
    else:
        if args.normalized:
            mat = normalized_block(cx, k, args.flavor, via="form").toarray()
        else:
            # Delta_k is self-adjoint in l2(m_k); M^{1/2} Delta M^{-1/2} is its Hermitian form
            s = np.sqrt(cx.weight_arrays[k])
            mat = s[:, None] * laplacian_block(cx, k, args.flavor).toarray() / s[None, :]
            mat = 0.5 * (mat + mat.conj().T)
        res = eig_hermitian(mat, tol=args.tol)
        # rounding-level values of a PSD block print as 0
        floor = args.tol * max(1.0, float(np.max(np.abs(res.eigenvalues))))
        result_vals = [0.0 if abs(x) <= floor else float(x) for x in res.eigenvalues]
        resid = res.residual
    lines = [_fmt(x) for x in result_vals] + [f"# residual {resid:.3e}"]
    report = {"degree": k, "flavor": args.flavor, "normalized": args.normalized,
              "eigenvalues": [float(f"{x:.12g}") for x in result_vals], "residual": resid,
              "metadata": _metadata(args, t0, tol=args.tol)}
    _emit(args, report, lines)
    return EXIT_PASS


def _constants_only(args, t0) -> int:
    c = ComparabilityConstants(*args.constants)
    cw = weighted_constant(c)
    d = args.regular_degree
    line_degree = 2 * (d - 1)
    bound = weighted_bound(c, line_degree)
    lines = [f"C_w = {cw} ~ {float(cw):.6f}",
             f"regular degree {d}: Delta(L) = {line_degree}, bound C_w * Delta(L) ~ {float(bound):.4f}"]
    report = {"C_w": cw, "C_w_float": float(cw), "regular_degree": d, "line_degree": line_degree,
              "bound": float(bound), "metadata": _metadata(args, t0)}
    _emit(args, report, lines)
    return EXIT_PASS


def cmd_bounds(args) -> int:
    t0 = time.perf_counter()
    if args.input is None:
        if args.constants is None or args.regular_degree is None:
            raise InputError("give an input file, or --constants with --regular-degree", None, None)
        return _constants_only(args, t0)
    doc = load_complex(args.input)
    cx = doc.build(args.dim, args.weights)
    degrees = range(cx.n + 1) if args.all else [cx.n if args.degree is None else args.degree]
    consts = ComparabilityConstants(*args.constants) if args.constants else None
    reports, lines, passed = [], [], True
    for k in degrees:
        if not 0 <= k <= cx.n:
            raise InputError(f"degree {k} outside 0..{cx.n}", None, args.input)
        rep = certify(cx, k, args.flavor, seed=args.seed, tol=args.tol, constants=consts)
        passed &= rep.passed
        d = rep.to_dict()
        d.pop("wall_time")
        reports.append(d)
        lines.append(f"k={k} ({args.flavor}) computed norm {_fmt(rep.computed_norm)}  {rep.verdict}")
        for c in rep.certificates:
            tag = "PASS" if c.margin >= -1e-8 else "FAIL"
            lines.append(f"  certificate {c.name:<32} {_fmt(c.value):>14}  margin {c.margin:+.6g}  {tag}")
        for c in rep.stated:
            tag = "holds" if c.margin >= -1e-8 else "VIOLATED"
            lines.append(f"  stated      {c.name:<32} {_fmt(c.value):>14}  margin {c.margin:+.6g}  {tag}")
    report = {"reports": reports, "verdict": "PASS" if passed else "FAIL",
              "metadata": _metadata(args, t0, seed=args.seed, tol=args.tol)}
    _emit(args, report, lines)
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_bloch(args) -> int:
    t0 = time.perf_counter()
    if args.cell:
        try:
            cells = [cell_from_dict(load_json(args.cell))]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"invalid cell: {exc}", None, args.cell) from None
    elif args.all:
        cells = [catalog(name) for name in (BLOCH_TABLE if not args.extended else LATTICES)]
    elif args.lattice:
        if args.lattice not in LATTICES:
            raise InputError(f"unknown lattice {args.lattice!r}; choose from {', '.join(LATTICES)}")
        cells = [catalog(args.lattice)]
    else:
        raise InputError("give --lattice, --cell or --all")
    rows, lines = [], []
    lines.append(f"{'lattice':<12} {'d':>3} {'4(d-1)':>7} {'sup-norm':>14} {'ratio':>7}  argmax theta")
    for cell in cells:
        grid = args.grid or default_grid(cell.dim)
        res = bz_maximum(cell, grid, args.tol, args.flavor, args.up)
        d = cell.degree()
        universal = 4 * (d - 1)
        ratio = universal / res.value if res.value else float("inf")
        rows.append({"lattice": cell.name, "degree": d, "universal": universal,
                     "sup_norm": float(f"{res.value:.12g}"), "coarse": float(f"{res.coarse:.12g}"),
                     "ratio": float(f"{ratio:.12g}"), "theta": [float(f"{t:.9g}") for t in res.theta],
                     "grid": grid})
        th = ", ".join(f"{t:.6f}" for t in res.theta)
        lines.append(f"{cell.name:<12} {d:>3} {universal:>7} {res.value:>14.9f} {ratio:>7.3f}  ({th})")
    report = {"rows": rows, "flavor": args.flavor, "up": args.up,
              "metadata": _metadata(args, t0, tol=args.tol)}
    _emit(args, report, lines)
    return EXIT_PASS


def cmd_color_check(args) -> int:
    t0 = time.perf_counter()
    doc = load_complex(args.input)
    cx = doc.build(args.dim, args.weights)
    try:
        if args.colors:
            coloring = parse_coloring(load_json(args.colors), cx.graph.vertices, args.colors)
        elif args.greedy:
            coloring = greedy_coloring(cx.graph, args.greedy)
        elif doc.coloring is not None:
            coloring = doc.coloring
        else:
            raise InputError("no colouring: give --colors, --greedy or a 'coloring' section", None, args.input)
        res = intertwine_residuals(cx, coloring)
    except ColoringError as exc:
        print(f"FAIL: {exc}")
        if getattr(args, "output", None):
            with open(args.output, "w") as fh:
                json.dump({"verdict": "FAIL", "error": str(exc)}, fh, indent=2)
        return EXIT_FAIL
    keys = ("d", "delta", "laplacian", "normalized")
    worst = max((rec[key] for rec in res.values() for key in keys if key in rec), default=0.0)
    spec_gap = max(rec["spectrum"] for rec in res.values())
    parity_bad = [(s, i) for k in range(1, cx.n + 1) for s in cx.simplices[k]
                  for i in range(k + 1) if not parity_check(s, i, coloring)]
    passed = worst <= args.tol and spec_gap <= 1e-9 and not parity_bad
    lines = []
    for k, rec in res.items():
        parts = [f"{key}={rec[key]:.3e}" for key in keys + ("spectrum",) if key in rec]
        lines.append(f"k={k}: " + " ".join(parts) + f" kernel skew/sym={rec['kernel_skew']}/{rec['kernel_sym']}")
    lines.append(f"parity check: {len(parity_bad)} failing faces")
    lines.append("PASS" if passed else "FAIL")
    report = {"residuals": {str(k): v for k, v in res.items()}, "max_residual": worst,
              "spectrum_gap": spec_gap, "parity_failures": len(parity_bad),
              "colors_used": coloring.p, "verdict": "PASS" if passed else "FAIL",
              "metadata": _metadata(args, t0, tol=args.tol)}
    _emit(args, report, lines)
    return EXIT_PASS if passed else EXIT_FAIL


def _complex_args(p, with_dim=True):
    p.add_argument("input", help="complex document (JSON)")
    if with_dim:
        p.add_argument("--dim", type=int, default=None, help="clique dimension n (default: from file)")
    p.add_argument("--weights", choices=("file", "unit"), default="file",
                   help="weights from the file, or all 1")


def _common(p):
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--output", "-o", help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hodgelap", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="level sizes and face-degree maxima")
    _complex_args(p)
    _common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="dense eigenvalues of one Laplacian block")
    _complex_args(p)
    p.add_argument("--degree", "-k", type=int, required=True)
    p.add_argument("--flavor", choices=("skew", "sym"), default="skew")
    p.add_argument("--normalized", action="store_true", help="use the normalized block")
    p.add_argument("--cap", type=int, default=2000, help="largest block for dense work")
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bounds", help="norm certificates for normalized blocks")
    p.add_argument("input", nargs="?", help="complex document (JSON)")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--weights", choices=("file", "unit"), default="file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--degree", "-k", type=int, default=None, help="degree (default: top)")
    g.add_argument("--all", action="store_true", help="every degree")
    p.add_argument("--flavor", choices=("skew", "sym"), default="skew")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--constants", type=Fraction, nargs=4, metavar=("c0", "C0", "c1", "C1"),
                   help="comparability constants for the weighted bound")
    p.add_argument("--regular-degree", type=int, help="with --constants and no input: bound for a d-regular graph")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bloch", help="Brillouin-zone norm of a periodic edge block")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lattice", help=f"one of {', '.join(LATTICES)}")
    g.add_argument("--cell", help="custom cell document (JSON)")
    g.add_argument("--all", action="store_true", help="the standard five-lattice table")
    p.add_argument("--extended", action="store_true", help="with --all, every catalogue lattice")
    p.add_argument("--grid", type=int, default=None, help="points per axis (default 64/64/32/16 by rank)")
    p.add_argument("--tol", type=float, default=1e-9, help="refinement step tolerance")
    p.add_argument("--flavor", choices=("skew", "sym"), default="sym")
    p.add_argument("--up", action="store_true", help="include the triangle up-part")
    _common(p)
    p.set_defaults(func=cmd_bloch)

    p = sub.add_parser("color-check", help="colour-unitary intertwining residuals")
    _complex_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--colors", help="JSON map vertex -> colour")
    g.add_argument("--greedy", type=int, metavar="P", help="greedy colouring with at most P colours")
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p)
    p.set_defaults(func=cmd_color_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
