"""Command-line front end: ``jostlab {eval,spectrum,completeness,render,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 evaluation at a pole, 4 solver integrity failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

from jostlab import completeness as cp
from jostlab import invariants
from jostlab import render as rd
from jostlab import scattering as sc
from jostlab import spectrum as sp
from jostlab.errors import (
    BoundaryRootCollision,
    IrregularSingular,
    JostSingular,
    SinkWriteError,
    SMatrixPole,
    WindingMismatch,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_POLE, EXIT_SOLVER = 0, 1, 2, 3, 4

DEFAULT_WINDOW = (-3.0, 3.0, -5.0, 5.0)
DEFAULT_RSUM = (0.0, 1.0, 2.0, 4.0, 8.0, 200.0)

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


class UsageError(Exception):
    pass


def parse_complex(text):
    """Parse "a+bi", "a-bi", "bi", "a" (``j`` accepted for ``i``)."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(rf"(?P<re>{_NUM})(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij]", s)
    if m:
        im = m.group("im")
        im = float(im + "1") if im in ("+", "-") else float(im)
        return complex(float(m.group("re")), im)
    m = re.fullmatch(rf"(?P<im>{_NUM}|[+-]?)[ij]", s)
    if m:
        im = m.group("im")
        im = float(im + "1") if im in ("", "+", "-") else float(im)
        return complex(0.0, im)
    if re.fullmatch(_NUM, s):
        return complex(float(s), 0.0)
    raise UsageError(f"cannot parse complex number {text!r}; use the form a+bi")


def parse_window(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--window needs RE_MIN,RE_MAX,IM_MIN,IM_MAX")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad --window value {text!r}") from None
    if not all(math.isfinite(v) for v in vals) or vals[1] < vals[0] or vals[3] < vals[2]:
        raise UsageError(f"bad --window value {text!r}")
    return vals


def _pair(z):
    return None if z is None else [float(z.real), float(z.imag)]


def _common(p):
    p.add_argument("--alpha", type=float, default=None, help="coupling alpha = 2a sqrt|V0| (default 5)")
    p.add_argument("--a", type=float, default=None, help="range a of the potential (default 1)")
    p.add_argument("--sign", choices=["repulsive", "attractive"], default=None)
    p.add_argument("--preset", choices=sorted(rd.PRESETS), default=None)
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.add_argument("--format", choices=["json", "csv", "ppm", "png"], default=None)
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--figure", default=None, help="also save an annotated matplotlib figure here")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jostlab", description="Exact s-wave S-matrix of exponential potentials", allow_abbrev=False
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="S and the Jost functions at given momenta", allow_abbrev=False)
    _common(p)
    p.add_argument("--k", action="append", default=[], help="momentum a+bi (repeatable, comma lists allowed)")

    p = sub.add_parser("spectrum", help="poles (and zeros) of S in a k-window", allow_abbrev=False)
    _common(p)
    p.add_argument("--window", default=None, help="RE_MIN,RE_MAX,IM_MIN,IM_MAX in k (use --window=...)")
    p.add_argument("--zeros", action="store_true", help="also list the zeros of S")

    p = sub.add_parser("completeness", help="redundant-pole sums and the half-integer ratio", allow_abbrev=False)
    _common(p)
    p.add_argument("--rsum", type=float, action="append", default=None, help="value of r + r' (repeatable)")
    p.add_argument("--nmax", type=int, default=40, help="number of redundant-pole terms (default 40)")
    p.add_argument("--ratio-nmax", type=int, default=30, help="largest n in the half-integer table")

    p = sub.add_parser("render", help="domain-coloring image or magnitude grid", allow_abbrev=False)
    _common(p)
    p.add_argument("--window", default=None, help="RE_MIN,RE_MAX,IM_MIN,IM_MAX in k (use --window=...)")
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--height", type=int, default=None)

    p = sub.add_parser("verify", help="run the invariant suite", allow_abbrev=False)
    _common(p)
    p.add_argument("--list", action="store_true", help="print invariant names and exit")
    p.add_argument("--only", action="append", default=None, help="run only this invariant (repeatable)")
    return parser


def _potential(args):
    base = rd.PRESETS[args.preset][0] if args.preset else sc.PotentialSpec(5.0, 1.0, "repulsive")
    alpha = base.alpha if args.alpha is None else args.alpha
    a = base.a if args.a is None else args.a
    sign = base.sign if args.sign is None else args.sign
    try:
        return sc.PotentialSpec(alpha, a, sign)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit_text(args, text):
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise SinkWriteError(str(exc)) from exc
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(args, allowed, default="json"):
    fmt = args.format or default
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not supported here (choose from {', '.join(allowed)})")
    return fmt


# ---------------------------------------------------------------- eval


def cmd_eval(args):
    pot = _potential(args)
    fmt = _fmt(args, ("json", "csv"))
    ks = [parse_complex(t) for item in args.k for t in item.split(",") if t.strip()]
    if not ks:
        raise UsageError("eval needs at least one --k")
    records = []
    for k in ks:
        s = complex(sc.s_matrix(k, pot))
        fp = complex(sc.jost_plus(k, pot))
        fm = complex(sc.jost_minus(k, pot))
        records.append({"k": k, "S": s, "F_plus": fp, "F_minus": fm, "abs_S": abs(s), "arg_S": math.atan2(s.imag, s.real)})
    if fmt == "json":
        out = [
            {
                "k": _pair(r["k"]),
                "S": _pair(r["S"]),
                "F_plus": _pair(r["F_plus"]),
                "F_minus": _pair(r["F_minus"]),
                "abs_S": r["abs_S"],
                "arg_S": r["arg_S"],
            }
            for r in records
        ]
        _emit_text(args, _json({"potential": _pot_dict(pot), "records": out}))
    else:
        header = ["k_re", "k_im", "S_re", "S_im", "Fp_re", "Fp_im", "Fm_re", "Fm_im", "abs_S", "arg_S"]
        rows = [
            [*(_pair(r["k"])), *_pair(r["S"]), *_pair(r["F_plus"]), *_pair(r["F_minus"]), r["abs_S"], r["arg_S"]]
            for r in records
        ]
        _emit_text(args, _csv(header, [[repr(v) for v in row] for row in rows]))
    return EXIT_OK


def _pot_dict(pot):
    return {"alpha": pot.alpha, "a": pot.a, "sign": pot.sign.value}


# ---------------------------------------------------------------- spectrum


def _window(args, fallback):
    if args.window:
        return parse_window(args.window)
    if args.preset:
        spec = rd.PRESETS[args.preset][1]
        return (spec.k_re_min, spec.k_re_max, spec.k_im_min, spec.k_im_max)
    return fallback


def feature_record(f):
    return {
        "kind": f.kind.value,
        "k": _pair(f.k_loc),
        "nu": _pair(f.nu_loc),
        "residue": _pair(f.residue_k),
        "multiplicity": f.multiplicity,
    }


def cmd_spectrum(args):
    pot = _potential(args)
    fmt = _fmt(args, ("json", "csv"))
    win = sp.KWindow(*_window(args, DEFAULT_WINDOW))
    res = sp.search_window(pot, win, include_zeros=args.zeros)
    feats = [feature_record(f) for f in res.features]
    if fmt == "json":
        doc = {
            "potential": _pot_dict(pot),
            "window": {"k_re": [win.re_min, win.re_max], "k_im": [win.im_min, win.im_max]},
            "features": feats,
            "region": None if res.region is None else res.region.as_dict(),
            "winding_total": res.winding_total,
        }
        _emit_text(args, _json(doc))
    else:
        header = ["kind", "k_re", "k_im", "nu_re", "nu_im", "residue_re", "residue_im", "multiplicity"]
        rows = []
        for f in feats:
            resid = f["residue"] or ["", ""]
            rows.append([f["kind"], *map(repr, f["k"]), *map(repr, f["nu"]), *map(str, resid), f["multiplicity"]])
        _emit_text(args, _csv(header, rows))
    if args.figure and not win.empty:
        from jostlab import figures

        height = max(16, int(400 * (win.im_max - win.im_min) / (win.re_max - win.re_min)))
        spec = rd.ImageSpec(400, height, win.re_min, win.re_max, win.im_min, win.im_max)
        figures.domain_figure(rd.domain_color(pot, spec), spec, res.features, args.figure, _title(pot))
    return EXIT_OK


def _title(pot):
    return f"{pot.sign.value}, a = {pot.a:g}, alpha = {pot.alpha:g}"


# ---------------------------------------------------------------- completeness


def completeness_tables(pot, rsums, n_terms, ratio_nmax):
    rows = []
    for r in rsums:
        q = cp.CompletenessQuery(r, n_terms)
        part = cp.redundant_pole_sum(q, pot)
        closed = cp.closed_form(cp.z_of(r, pot), pot)
        rows.append({"r_sum": r, "partial_sum": part, "closed_form": closed, "abs_diff": abs(part - closed)})
    ratios = []
    for n in range(0, ratio_nmax + 1):
        mag = float(abs(sc.s_matrix(1j * (n + 0.5) / (2 * pot.a), pot)))
        asym = cp.half_integer_asymptote(n, pot)
        ratios.append({"n": n, "abs_S": mag, "asymptote": asym, "ratio": mag / asym})
    return rows, ratios


def cmd_completeness(args):
    pot = _potential(args)
    fmt = _fmt(args, ("json", "csv"))
    if not 1 <= args.nmax <= cp.MAX_TERMS:
        raise UsageError(f"--nmax must be in 1..{cp.MAX_TERMS}")
    if args.ratio_nmax < 0:
        raise UsageError("--ratio-nmax must be >= 0")
    rsums = args.rsum if args.rsum else list(DEFAULT_RSUM)
    if any(not (math.isfinite(r) and r >= 0) for r in rsums):
        raise UsageError("--rsum values must be finite and >= 0")
    rows, ratios = completeness_tables(pot, rsums, args.nmax, args.ratio_nmax)
    if fmt == "json":
        _emit_text(args, _json({"potential": _pot_dict(pot), "n_terms": args.nmax, "pole_sum": rows, "half_integer": ratios}))
    else:
        a = _csv(
            ["r+r'", f"partial_sum({args.nmax})", "closed_form", "abs_diff"],
            [[repr(r["r_sum"]), repr(r["partial_sum"]), repr(r["closed_form"]), repr(r["abs_diff"])] for r in rows],
        )
        b = _csv(
            ["n", "abs_S", "asymptote", "ratio"],
            [[r["n"], repr(r["abs_S"]), repr(r["asymptote"]), repr(r["ratio"])] for r in ratios],
        )
        _emit_text(args, a + "\n" + b)
    if args.figure:
        from jostlab import figures

        figures.completeness_figure(sorted(rows, key=lambda r: r["r_sum"]), ratios, args.figure)
    return EXIT_OK


# ---------------------------------------------------------------- render


def cmd_render(args):
    pot = _potential(args)
    fmt = _fmt(args, ("ppm", "png", "csv"), default="ppm")
    base = rd.PRESETS[args.preset][1] if args.preset else rd.PRESETS["fig1"][1]
    win = parse_window(args.window) if args.window else (base.k_re_min, base.k_re_max, base.k_im_min, base.k_im_max)
    try:
        spec = rd.ImageSpec(
            args.width or base.width, args.height or base.height, *win, base.white_clip, base.black_clip
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if fmt == "csv":
        data = rd.magnitude_csv(rd.magnitude_grid(pot, spec)).encode("ascii")
        failures = 0
        buf = None
    else:
        buf = rd.domain_color(pot, spec)
        failures = buf.failures
        data = rd.ppm_bytes(buf) if fmt == "ppm" else rd.png_bytes(buf)
    if args.out:
        rd.write_bytes(args.out, data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if failures:
        print(f"{failures} pixel(s) failed to evaluate (drawn magenta)", file=sys.stderr)
    if args.figure:
        from jostlab import figures

        feats = sp.search_window(pot, spec.window(), include_zeros=True).features
        if buf is None:
            buf = rd.domain_color(pot, spec)
        figures.domain_figure(buf, spec, feats, args.figure, _title(pot))
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args):
    if args.list:
        for name in invariants.names():
            print(name)
        return EXIT_OK
    if args.only:
        unknown = [n for n in args.only if n not in invariants.names()]
        if unknown:
            raise UsageError(f"unknown invariant(s): {', '.join(unknown)}")
    if args.tol is not None and not args.tol >= 0:
        raise UsageError("--tol must be >= 0")
    failed = 0
    total = 0
    for name, ok, detail in invariants.run(args.tol, args.only):
        total += 1
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", flush=True)
    print(f"{total - failed}/{total} invariants passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "spectrum": cmd_spectrum,
    "completeness": cmd_completeness,
    "render": cmd_render,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"jostlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SMatrixPole as exc:
        print(f"jostlab: pole of S ({exc.kind}): {exc}", file=sys.stderr)
        return EXIT_POLE
    except (JostSingular, IrregularSingular) as exc:
        print(f"jostlab: pole of a Jost function: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (WindingMismatch, BoundaryRootCollision) as exc:
        print(f"jostlab: solver integrity failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SinkWriteError as exc:
        print(f"jostlab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
