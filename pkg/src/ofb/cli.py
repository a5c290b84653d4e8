"""Command-line entry point.

Every subcommand writes CSV (to stdout or ``--csv PATH``): a comment line
with the tool version and the full flag set, a header row, then values
with 17 significant digits. Flags may also come from a plain ``key=value``
file given with ``--config``; flags on the command line win.

Exit codes: 0 success, 1 verification failure, 2 validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .geometry import ChannelGeometry, DomainError, FlowParams

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
FIGURES = ("logwins", "jacobi2", "reynolds2")


class UsageError(Exception):
    """Invalid flag value; carries the flag name for the message."""

    def __init__(self, flag, msg):
        super().__init__(f"argument {flag}: {msg}")


# -- argument types ---------------------------------------------------------

def _finite(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {s!r}")
    return v


def _positive(s):
    v = _finite(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {s}")
    return v


def _float_list(s):
    try:
        vals = [_positive(t) for t in str(s).split(",") if t.strip()]
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(f"bad list {s!r}: {exc}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _int_list(s):
    try:
        return [int(t) for t in str(s).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {s!r}") from None


def _bool(s):
    t = str(s).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {s!r}")


# -- CSV --------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def _flag_value(v):
    if isinstance(v, list):
        return ",".join(_flag_value(t) for t in v)
    if isinstance(v, float):
        return repr(v)
    return _fmt(v)


def _flag_line(args):
    skip = {"func", "config", "csv", "command"}
    parts = [f"--{k.replace('_', '-')}={_flag_value(v)}" for k, v in sorted(vars(args).items()) if k not in skip]
    return f"# ofb {__version__} {args.command} " + " ".join(parts)


def write_csv(args, header, rows):
    buf = io.StringIO()
    buf.write(_flag_line(args) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    text = buf.getvalue()
    if args.csv in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _geom(args):
    if args.R is None or args.h is None:
        raise UsageError("--R/--h", "both --R and --h are required")
    try:
        return ChannelGeometry(args.R, args.h)
    except DomainError as exc:
        flag = "--h" if "half-height" in str(exc) else "--R"
        raise UsageError(flag, str(exc)) from None


def _flow(args):
    try:
        return FlowParams(args.U, args.eta)
    except DomainError as exc:
        raise UsageError("--U/--eta", str(exc)) from None


def _pool_map(fn, items):
    from .minimizer import worker_count

    n = worker_count()
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- commands ---------------------------------------------------------------

def cmd_bounds(args):
    from .bounds import bounds_report

    rep = bounds_report(_geom(args)).as_dict()
    write_csv(args, list(rep), [list(rep.values())])
    return EXIT_OK


def cmd_strip(args):
    from .bounds import STRIP_LOWER_CONST, strip_bounds
    from .strip import euler_lagrange_residual, separated_quotient

    res = separated_quotient()
    xs = np.linspace(-30.0 * res.w_l2, 30.0 * res.w_l2, 20001)
    el = float(np.max(np.abs(euler_lagrange_residual(xs, res.w_l2, res.multiplier))))
    header = ["alpha", "h0", "mu_h0", "w_l2", "quotient_h0", "c_upper", "ratio", "el_residual"]
    row = [res.alpha, res.h0, res.mu_h0, res.w_l2, res.quotient, res.c_upper,
           res.c_upper / STRIP_LOWER_CONST, el]
    if args.h is not None:
        try:
            lo, hi = strip_bounds(args.h, res.c_upper / args.h)
        except DomainError as exc:
            raise UsageError("--h", str(exc)) from None
        header += ["h", "strip_lower", "strip_upper"]
        row += [args.h, lo, hi]
    write_csv(args, header, [row])
    return EXIT_OK


def cmd_extension(args):
    from .extension import B2_exact, ExtensionField

    geom = _geom(args)
    try:
        ext = ExtensionField.build(geom, args.U)
    except DomainError as exc:
        raise UsageError("--U", str(exc)) from None
    if args.grid is not None:
        if len(args.grid) != 2 or min(args.grid) < 2:
            raise UsageError("--grid", "expected NX,NY with both at least 2")
        write_csv(args, ["x", "y", "psi_x", "psi_y"], ext.sample_grid(*args.grid))
        return EXIT_OK
    header = ["R", "h", "U", "B1", "B2", "B2_exact", "grad_norm", "l4_norm"]
    row = [geom.R, geom.h, ext.U, ext.B1, ext.B2, B2_exact(geom.R, geom.h), ext.grad_norm, ext.l4_norm]
    status = EXIT_OK
    if args.verify:
        chk = ext.verify()
        b2 = chk.B2_closed if args.b2 == "reference" else chk.B2_exact
        b2_err = abs(b2 - chk.B2_quadrature) / chk.B2_quadrature
        header += ["B1_quadrature", "B1_rel_err", "B2_checked", "B2_quadrature", "B2_rel_err", "flux", "passed"]
        ok = chk.B1_rel_err <= args.rtol and b2_err <= args.rtol and abs(chk.flux) <= 1e-10 * ext.U
        row += [chk.B1_quadrature, chk.B1_rel_err, args.b2, chk.B2_quadrature, b2_err, chk.flux, ok]
        status = EXIT_OK if ok else EXIT_VERIFY
    write_csv(args, header, [row])
    return status


def cmd_threshold(args):
    from .threshold import certify_uniqueness

    rep = certify_uniqueness(_geom(args), _flow(args))
    header = list(rep.CSV_HEADER) + ["S_R_lower", "lhs_umbral", "rhs_umbral", "grad_u_bound"]
    row = list(rep.csv_row()) + [rep.S_R_lower, rep.lhs_umbral, rep.rhs_umbral, rep.grad_u_bound]
    write_csv(args, header, [row])
    return EXIT_OK


def _minimize_kwargs(args, geom):
    from .minimizer import grid_shape

    try:
        grid_shape(geom, args.step)
    except DomainError as exc:
        raise UsageError("--step", str(exc)) from None
    return dict(tol=args.tol, max_iter=args.max_iter)


def cmd_minimize(args):
    from .minimizer import minimize

    geom = _geom(args)
    kw = _minimize_kwargs(args, geom)
    if args.init == "random":
        jobs = [("random", s) for s in (args.seeds or [0])]
    else:
        jobs = [(args.init, None)]
    results = _pool_map(
        lambda job: minimize(geom, args.step, init=job[0], seed=job[1], even_constrained=args.even, **kw), jobs
    )
    header = ["R", "h", "step", "init", "seed", "even", "S_estimate", "asymmetry",
              "iterations", "converged", "residual"]
    rows = [[geom.R, geom.h, args.step, r.init, r.seed, r.constrained_even, r.S_estimate, r.asymmetry,
             r.iterations, r.converged, r.residual] for r in results]
    rows.sort(key=lambda row: (-1 if row[4] is None else row[4]))
    if args.field:
        best = min(results, key=lambda r: r.S_estimate)
        np.savetxt(args.field, best.field.rows(), delimiter=",", fmt="%.17g",
                   header=_flag_line(args)[2:] + "\nx,y,v", comments="# ")
    write_csv(args, header, rows)
    return EXIT_OK


def cmd_scan(args):
    from .minimizer import ScanRow, symmetry_breaking_scan

    if args.R_list is None or args.h is None:
        raise UsageError("--h/--R-list", "both --h and --R-list are required")
    R_list = sorted(args.R_list)
    try:
        res = symmetry_breaking_scan(args.h, R_list, args.step, args.tol, seeds=tuple(args.seeds),
                                     max_iter=args.max_iter, margins=args.margins)
    except DomainError as exc:
        raise UsageError("--h/--R-list/--step", str(exc)) from None
    rows = res.table()
    header = list(ScanRow.CSV_HEADER)
    write_csv(args, header, rows)
    return EXIT_OK


def _figure_rows(name):
    from .bounds import STRIP_LOWER_CONST, upper_bound_X0
    from .strip import separated_quotient
    from .threshold import re_bar

    if name in ("logwins", "jacobi2"):
        hs = np.unique(np.concatenate([np.linspace(1.05, 5.0, 80), np.linspace(5.0, 50.0, 181)]))
        if name == "logwins":
            header = ["h", "strip_lower", "strip_upper_X0", "ratio"]

            def row(h):
                lo, up = STRIP_LOWER_CONST / h, upper_bound_X0(h)
                return [h, lo, up, up / lo]
        else:
            c = separated_quotient().c_upper
            header = ["h", "strip_lower", "strip_upper_sep", "ratio"]

            def row(h):
                lo, up = STRIP_LOWER_CONST / h, c / h
                return [h, lo, up, up / lo]
        rows = _pool_map(lambda h: row(float(h)), hs)
    else:
        Rs = np.linspace(5.5, 200.0, 390)
        header = ["R", "h", "re_bar"]
        rows = _pool_map(lambda R: [float(R), 5.0, re_bar(ChannelGeometry(float(R), 5.0))], Rs)
    rows.sort(key=lambda r: r[0])
    return header, rows


def cmd_figure(args):
    header, rows = _figure_rows(args.name)
    write_csv(args, header, rows)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="ofb", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ofb {__version__}")
    p.add_argument("--config", metavar="FILE", help="key=value file supplying defaults for the subcommand flags")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--csv", "--out", dest="csv", metavar="PATH", help="output file (default stdout)")
        return sp

    def geom_flags(sp):
        sp.add_argument("--R", type=_finite, help="half-length of the channel")
        sp.add_argument("--h", type=_finite, help="half-height of the channel")

    sp = add("bounds", cmd_bounds, "lower and upper bounds for the Sobolev constant")
    geom_flags(sp)

    sp = add("strip", cmd_strip, "separated-variables bound on the strip")
    sp.add_argument("--h", type=_finite, help="also report the strip bounds at this half-height")

    sp = add("extension", cmd_extension, "solenoidal extension constants B1, B2")
    geom_flags(sp)
    sp.add_argument("--U", type=_finite, default=1.0)
    sp.add_argument("--verify", action="store_true", help="compare with quadrature; exit 1 on mismatch")
    sp.add_argument("--b2", choices=("reference", "exact"), default="reference",
                    help="which closed form of B2 --verify checks")
    sp.add_argument("--rtol", type=_positive, default=1e-6)
    sp.add_argument("--grid", type=_int_list, metavar="NX,NY", help="emit the sampled field instead")

    sp = add("threshold", cmd_threshold, "uniqueness certificate and Reynolds bound")
    geom_flags(sp)
    sp.add_argument("--U", type=_finite, default=1.0)
    sp.add_argument("--eta", type=_finite, default=1.0)

    def grid_flags(sp):
        sp.add_argument("--step", type=_positive, default=0.05)
        sp.add_argument("--tol", type=_positive, default=1e-8)
        sp.add_argument("--max-iter", dest="max_iter", type=int, default=20000)

    sp = add("minimize", cmd_minimize, "grid minimisation of the Sobolev quotient")
    geom_flags(sp)
    grid_flags(sp)
    sp.add_argument("--init", choices=("even_bump", "offset_bump", "random"), default="offset_bump")
    sp.add_argument("--even", action="store_true", help="restrict to fields even in x")
    sp.add_argument("--seeds", type=_int_list, default=[0], help="seeds for --init random, comma separated")
    sp.add_argument("--field", metavar="PATH", help="write the best field as x,y,v CSV")

    sp = add("scan", cmd_scan, "even versus free minimisation over a list of R")
    sp.add_argument("--h", type=_finite)
    sp.add_argument("--R-list", dest="R_list", type=_float_list, metavar="R1,R2,...")
    grid_flags(sp)
    sp.add_argument("--seeds", type=_int_list, default=[0, 1, 2])
    sp.add_argument("--margins", choices=("all", "last", "none"), default="all")

    sp = add("figure", cmd_figure, "sweep data behind the bound and threshold plots")
    sp.add_argument("name", choices=FIGURES)
    return p


def read_config(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("--config", f"{path}:{n}: expected key=value")
            k, v = (t.strip() for t in line.split("=", 1))
            out[k.lstrip("-").replace("-", "_")] = v
    return out


def _apply_config(parser, argv, ns):
    sub = parser._subparsers._group_actions[0].choices[ns.command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in read_config(ns.config).items():
        act = actions.get(key)
        if act is None or key in ("help", "csv"):
            raise UsageError("--config", f"unknown key {key!r} for {ns.command}")
        try:
            if isinstance(act, argparse._StoreTrueAction):
                defaults[key] = _bool(raw)
            elif act.type is not None:
                defaults[key] = act.type(raw)
            else:
                defaults[key] = raw
        except argparse.ArgumentTypeError as exc:
            raise UsageError("--config", f"{key}: {exc}") from None
        if act.choices is not None and defaults[key] not in act.choices:
            raise UsageError("--config", f"{key}: invalid choice {raw!r}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ofb {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ofb {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
