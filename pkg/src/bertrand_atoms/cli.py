"""
Command-line front end.

Subcommands: ``spectrum``, ``sturm``, ``orbit``, ``tf``, ``table`` and
``geomcheck``.  Tables go to stdout (or ``--output``) as CSV or JSON with
every float printed as ``%.12g``, so identical arguments give
byte-identical output.  Exit status is 0 on success, 1 on a numerical
failure and 2 on bad arguments.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "BERTRAND_ATOMS_THREADS"


# ---------------------------------------------------------------------------
# formatting

def fmt(value):
    """Locale-independent scalar formatting used by every writer."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12g" % value
    if value is None:
        return ""
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float("%.12g" % value)
        return v if math.isfinite(v) else None
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def render_csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_field(fmt(v)) for v in row) + "\n")
    return buf.getvalue()


def _csv_field(s):
    return f'"{s}"' if "," in s or '"' in s else s


def render_json(config, header, rows, checks):
    doc = {
        "config": _json_value(config),
        "results": [_json_value(dict(zip(header, row))) for row in rows],
        "checks": [_json_value(c) for c in checks],
    }
    return json.dumps(doc, indent=2) + "\n"


def _check(name, value, tol, passed=None):
    passed = (abs(value) <= tol) if passed is None else passed
    return {"name": name, "value": value, "tolerance": tol, "passed": bool(passed)}


def svg_document(curves, comment, width=800, height=800, margin=40):
    """SVG 1.1 text with one ``<polyline>`` per curve and ``comment`` as metadata.

    ``curves`` is a list of ``(x, y, colour)``; all curves share one
    data-to-viewBox map that fills the box with equal axis scaling.
    """
    xs = np.concatenate([np.asarray(c[0], float) for c in curves])
    ys = np.concatenate([np.asarray(c[1], float) for c in curves])
    x0, x1, y0, y1 = xs.min(), xs.max(), ys.min(), ys.max()
    span = max(x1 - x0, y1 - y0) or 1.0
    scale = (min(width, height) - 2 * margin) / span
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'viewBox="0 0 {width} {height}" width="{width}" height="{height}">',
             "<!--"]
    lines += [f"  {k}: {fmt(v)}" for k, v in comment.items()]
    lines.append("-->")
    for x, y, colour in curves:
        px = margin + (np.asarray(x) - x0) * scale
        py = height - margin - (np.asarray(y) - y0) * scale
        pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
        lines.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def thread_count():
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 0:
        raise DomainError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


def ordered_map(func, items):
    """``map`` over a thread pool; results come back in input order."""
    items = list(items)
    n = min(thread_count(), max(len(items), 1))
    if n == 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def _emit(args, config, header, rows, checks=()):
    text = render_json(config, header, rows, checks) if args.format == "json" else render_csv(header, rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_svg(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# subcommands

def run_spectrum(args):
    from .spectra import SpectrumParams, hydrogen_level_2d, hydrogen_level_3d, level_ordering, LevelIndex, Level

    params = SpectrumParams(Z=args.Z, e=args.e, w=args.w, model=args.model)
    if args.n is not None:
        if args.model != "hydrogen3d":
            raise DomainError("--n applies to hydrogen3d only")
        levels = [Level(LevelIndex(args.n - 1, 0), hydrogen_level_3d(params, args.n), args.n)]
    elif args.l is not None:
        if args.model != "hydrogen2d":
            raise DomainError("--l applies to hydrogen2d only")
        levels = [Level(LevelIndex(0, args.l), hydrogen_level_2d(params, args.l), args.l)]
    else:
        levels = level_ordering(params, args.model, args.count)
    header = ["model", "Z", "n_hat", "l", "group_key", "energy"]
    rows = [(args.model, args.Z, lv.index.n_hat, lv.index.l, lv.group_key, lv.energy) for lv in levels]
    config = {"subcommand": "spectrum", "model": args.model, "Z": args.Z, "e": args.e, "w": args.w,
              "count": len(rows)}
    _emit(args, config, header, rows)
    return EXIT_OK


def _parse_gamma(text):
    from fractions import Fraction
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"gamma must be 1 or 1/2, got {text!r}")


def run_sturm(args):
    from .spectra import LevelIndex, fisheye_coupling_law
    from .sturm import RadialProblem, eigenfunction, solve_fisheye_couplings

    gamma = _parse_gamma(args.gamma)
    problems = [RadialProblem(gamma=gamma, l=l, mesh=args.mesh) for l in args.l]
    spectra = ordered_map(lambda p: solve_fisheye_couplings(p, args.count), problems)
    header = ["gamma", "l", "k", "beta", "analytic_beta", "rel_err"]
    rows, checks = [], []
    for prob, spec in zip(problems, spectra):
        for e in spec.entries:
            exact = fisheye_coupling_law(gamma, LevelIndex(e.k, prob.l))
            rows.append((gamma, prob.l, e.k, e.beta, exact, abs(e.beta - exact) / exact))
    worst = max(r[-1] for r in rows)
    checks.append(_check("max_rel_err", worst, 1e-6))
    if args.eigenfunction:
        prob, spec = problems[0], spectra[0]
        entry = spec.entries[min(args.k, len(spec) - 1)]
        sol = eigenfunction(prob, entry.beta)
        sel = (sol.r >= 1e-3) & (sol.r <= 1e3)
        text = render_csv(["r", "u"], zip(sol.r[sel][::10], sol.u[sel][::10]))
        with open(args.eigenfunction, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    config = {"subcommand": "sturm", "gamma": gamma, "l": list(args.l), "count": args.count, "mesh": args.mesh}
    _emit(args, config, header, rows, checks)
    return EXIT_OK if worst <= 1e-6 else EXIT_NUMERIC


def run_orbit(args):
    from .dynamics import OrbitParams, analyze, integrate_orbit, orbit_polyline, period_formula

    params = OrbitParams.from_delta(args.delta, Z=args.Z, a=args.a)
    traj = integrate_orbit(params, tol=args.tol)
    if traj.terminated:
        print(f"error: trajectory terminated ({traj.status})", file=sys.stderr)
        return EXIT_NUMERIC
    an = analyze(traj)
    t_formula = period_formula(params)
    span = an.period if an.closed else traj.t[-1]
    ts = np.linspace(0.0, span, args.points, endpoint=not an.closed)
    r, p, phi = traj.dense(ts)
    checks = [
        _check("closed", 0.0, 0.0, an.closed),
        _check("orbit_residual", an.orbit_residual, 1e-3),
        _check("energy_drift", an.energy_drift, 1e-9),
    ]
    if args.format == "json":
        header = ["delta", "L", "closed", "period", "period_formula", "self_intersections",
                  "orbit_residual", "energy_drift"]
        rows = [(params.delta, params.L, an.closed, an.period, t_formula, an.self_intersections,
                 an.orbit_residual, an.energy_drift)]
    else:
        header = ["t", "r", "phi", "p_r", "x", "y"]
        rows = zip(ts, r, phi, p, r * np.cos(phi), r * np.sin(phi))
    config = {"subcommand": "orbit", "delta": args.delta, "Z": args.Z, "a": args.a, "tol": args.tol,
              "points": args.points}
    _emit(args, config, header, rows, checks)
    if args.svg:
        x, y = orbit_polyline(traj, an.period)
        comment = {"delta": params.delta, "period": an.period if an.closed else "open",
                   "period_formula": t_formula, "self_intersections": an.self_intersections,
                   "orbit_residual": an.orbit_residual}
        _write_svg(args.svg, svg_document([(x, y, "#1f4e79")], comment))
    return EXIT_OK if an.closed else EXIT_NUMERIC


def run_tf(args):
    from .atomstat import solve_tf, tietz_phi

    sol = solve_tf(x_max=args.xmax)
    n = int(round(args.xmax / args.step))
    x = np.linspace(0.0, args.xmax, n + 1)
    ptf = sol(x)
    pt = tietz_phi(x)
    diff = np.abs(ptf - pt)
    header = ["x", "phi_tf", "phi_tietz", "abs_diff"]
    checks = [_check("boundary", sol.boundary, 1e-6), {"name": "slope0", "value": sol.slope0,
                                                         "tolerance": None, "passed": True}]
    config = {"subcommand": "tf", "xmax": args.xmax, "step": args.step}
    _emit(args, config, header, zip(x, ptf, pt, diff), checks)
    if args.svg:
        keep = x <= min(args.xmax, 10.0)
        comment = {"slope0": sol.slope0, "max_abs_diff_0_10": float(np.max(diff[keep]))}
        _write_svg(args.svg, svg_document([(x[keep], 5 * ptf[keep], "#1f4e79"),
                                           (x[keep], 5 * pt[keep], "#b03a2e")], comment))
    return EXIT_OK


def _parse_z_range(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def run_table(args):
    from .ptable import configuration, filling_order, group_key, period_lengths

    config = {"subcommand": "table", "rule": args.rule}
    if args.Z is not None:
        zs = _parse_z_range(args.Z)
        confs = ordered_map(lambda z: configuration(z, args.rule), zs)
        header = ["Z", "rule", "configuration", "last_orbital"]
        rows = [(c.Z, c.rule, str(c), c.last[0].label) for c in confs]
        config["Z"] = args.Z
    elif args.count is not None:
        header = ["position", "orbital", "n", "l", "group_key", "capacity"]
        rows = [(i + 1, o.label, o.n, o.l, group_key(o, args.rule), o.capacity)
                for i, o in enumerate(filling_order(args.rule, args.count))]
        config["count"] = args.count
    else:
        if args.rule != "madelung":
            raise DomainError("period layouts are defined from the madelung order")
        lengths = period_lengths(args.periods, args.n_periods)
        header = ["period", "length", "electrons_through"]
        rows = [(i + 1, n, sum(lengths[:i + 1])) for i, n in enumerate(lengths)]
        config.update(periods=args.periods, n_periods=len(lengths))
    _emit(args, config, header, rows)
    return EXIT_OK


def run_geomcheck(args):
    from .geometry import invariant_battery

    results = invariant_battery()
    header = ["invariant", "value", "tolerance", "passed"]
    rows = [(r["name"], r["value"], r["tolerance"], r["passed"]) for r in results]
    config = {"subcommand": "geomcheck"}
    _emit(args, config, header, rows, results)
    return EXIT_OK if all(r["passed"] for r in results) else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    parser = _Parser(prog="bertrand-atoms", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="write the table here instead of stdout")

    p = sub.add_parser("spectrum", help="closed-form level tables")
    p.add_argument("--model", choices=("hydrogen3d", "hydrogen2d", "tietz"), default="tietz")
    p.add_argument("--Z", type=_positive_int, default=1)
    p.add_argument("--e", type=float, default=1.0)
    p.add_argument("--w", type=float, default=1.0)
    p.add_argument("--count", type=_positive_int, default=10)
    p.add_argument("--n", type=_positive_int, help="single hydrogen3d level")
    p.add_argument("--l", type=int, help="single hydrogen2d level")
    common(p)
    p.set_defaults(func=run_spectrum)

    p = sub.add_parser("sturm", help="quantized fish-eye couplings")
    p.add_argument("--gamma", default="1", help="1 or 1/2")
    p.add_argument("--l", type=int, nargs="+", default=[0])
    p.add_argument("--count", type=_positive_int, default=3)
    p.add_argument("--mesh", type=int, default=20000)
    p.add_argument("--eigenfunction", metavar="CSV", help="write u(r) of entry --k of the first l")
    p.add_argument("--k", type=int, default=0)
    common(p)
    p.set_defaults(func=run_sturm)

    p = sub.add_parser("orbit", help="zero-energy orbit in the screened potential")
    p.add_argument("--delta", type=float, default=2.0)
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--points", type=_positive_int, default=2048)
    p.add_argument("--svg", metavar="PATH")
    common(p)
    p.set_defaults(func=run_orbit)

    p = sub.add_parser("tf", help="Thomas-Fermi versus Tietz screening")
    p.add_argument("--xmax", type=float, default=50.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--svg", metavar="PATH")
    common(p)
    p.set_defaults(func=run_tf)

    p = sub.add_parser("table", help="filling orders, configurations and periods")
    p.add_argument("--rule", choices=("madelung", "nl", "fock_n"), default="madelung")
    p.add_argument("--periods", choices=("janet", "conventional"), default="janet")
    p.add_argument("--n-periods", type=_positive_int, default=None)
    p.add_argument("--Z", help="atomic number or inclusive range LO:HI")
    p.add_argument("--count", type=_positive_int, help="list the first COUNT orbitals")
    common(p)
    p.set_defaults(func=run_table)

    p = sub.add_parser("geomcheck", help="run the geometry invariant battery")
    common(p)
    p.set_defaults(func=run_geomcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
