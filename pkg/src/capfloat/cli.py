"""Command-line front end.

Exit codes: 0 verified/positive outcome, 1 negative mathematical outcome,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from dataclasses import asdict

import numpy as np

from . import billiard, conjecture, curve, polychain, trigroots
from .svgplot import PALETTE, SVG

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

STRUCTURED_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "results", "certificates"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "results": {},
        "certificates": {"type": "array"},
    },
}


class UsageError(Exception):
    pass


# -- argument parsing helpers ------------------------------------------------

_FUNCS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "atan": math.atan, "arctan": math.atan, "asin": math.asin, "arcsin": math.asin,
    "acos": math.acos, "arccos": math.acos, "sqrt": math.sqrt,
}
_BINOPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow,
}


def parse_angle(text: str) -> float:
    """Evaluate an angle expression like 'pi/4' or 'atan(sqrt(5))' without eval()."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            if len(node.args) != 1 or node.keywords:
                raise ValueError("functions take one argument")
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression element {ast.dump(node)}")

    try:
        return float(ev(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse angle {text!r}: {exc}") from None


def parse_n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"expected n or a range lo..hi, got {text!r}") from None
    if lo < 2 or hi < lo:
        raise UsageError(f"need 2 <= lo <= hi, got {text!r}")
    if hi > trigroots.N_MAX:
        raise UsageError(f"n must not exceed 2**20, got {hi}")
    return list(range(lo, hi + 1))


def load_curve(source: str) -> curve.FourierCurve:
    try:
        return curve.parse_curve(source)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read curve {source!r}: {exc}") from None


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _structured(command: str, inputs: dict, results, certificates=()) -> str:
    doc = {"command": command, "inputs": inputs, "results": results, "certificates": list(certificates)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _r(x: float) -> str:
    return repr(float(x))


# -- subcommands ----------------------------------------------------------------


def cmd_solve(args, out) -> int:
    ns = parse_n_range(args.n)
    roots = trigroots.roots_table(ns)
    if args.format == "structured":
        results = {
            "counts": {str(n): trigroots.branch_count(n) for n in ns},
            "roots": [asdict(r) for r in roots],
            "A_n": {str(n): list(trigroots.build_An(n).members) for n in ns},
        }
        out.write(_structured("solve", {"n": args.n}, results))
    elif args.format == "delimited":
        out.write(trigroots.to_delimited(roots))
    else:
        for n in ns:
            rs = trigroots.solve_Bn(n)
            if not rs:
                out.write(f"B_{n} is empty\n")
                continue
            for r in rs:
                out.write(
                    f"n={r.n} k={r.k} bracket=({r.lo:.15f}, {r.hi:.15f}) "
                    f"root={r.value:.17g} residual={r.residual:.3e}\n"
                )
    return EXIT_OK


def _chord_fans(c: curve.FourierCurve, deltas, starts: int = 48):
    fans = []
    for d in deltas:
        segs = []
        for j in range(starts):
            a = 2 * math.pi * j / starts
            p = billiard.PhasePoint(a, d)
            q = billiard.billiard_step(c, p)
            segs.append((curve.boundary_point(c, p.alpha), curve.boundary_point(c, q.alpha)))
        fans.append((d, segs))
    return fans


def cmd_table(args, out) -> int:
    try:
        c = curve.make_omega_n_tau(args.n, args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    m = args.points
    alpha = [2 * math.pi * j / m for j in range(m)]
    pts = curve.boundary_points(c, alpha)
    end = curve.boundary_point(c, 2 * math.pi)
    gap = math.hypot(end[0] - pts[0, 0], end[1] - pts[0, 1])
    deltas = list(trigroots.build_An(args.n).members)
    if args.plot:
        svg = SVG()
        for i, (d, segs) in enumerate(_chord_fans(c, deltas)):
            svg.segments(segs, stroke=PALETTE[(i + 1) % len(PALETTE)])
        svg.polyline(pts.tolist(), closed=True, width=0.012)
        svg.save(args.plot)
    inputs = {"n": args.n, "tau": args.tau, "points": m}
    if args.format == "structured":
        results = {
            "closure_gap": gap,
            "perimeter": curve.perimeter(c),
            "area": curve.area(c),
            "caustic_angles": deltas,
            "polyline": [[a, float(x), float(y)] for a, (x, y) in zip(alpha, pts)],
        }
        out.write(_structured("table", inputs, results))
    else:
        if args.format == "text":
            out.write(f"# Omega_{{{args.n},{args.tau}}}: rho = 1 + {args.tau} sin({args.n} alpha)\n")
            out.write(f"# closure_gap={gap:.3e} caustic_angles={' '.join(f'{d:.15f}' for d in deltas)}\n")
        out.write(_csv(([_r(a), _r(x), _r(y)] for a, (x, y) in zip(alpha, pts)), ("alpha", "x", "y")))
    return EXIT_OK


def cmd_verify_caustic(args, out) -> int:
    c = load_curve(args.curve)
    delta = parse_angle(args.delta)
    if not 0 < delta < math.pi:
        raise UsageError(f"delta must lie in (0, pi), got {delta}")
    tol = args.tol if args.tol is not None else curve.CAUSTIC_TOL
    report = curve.has_constant_caustic(c, delta, tol)
    integral = curve.caustic_residual(c, delta)
    results = {
        "delta": delta,
        "exists": report.exists,
        "kernel_residual": report.residual,
        "integral_residual": integral,
        "offenders": list(report.offenders),
        "matched_n": report.matched_n,
    }
    ok = report.exists
    if report.exists:
        rng = np.random.default_rng(args.seed)
        one_step = 0.0
        for a in rng.uniform(0.0, 2 * math.pi, args.starts):
            q = billiard.billiard_step(c, billiard.PhasePoint(float(a), delta))
            one_step = max(one_step, abs(q.theta - delta))
        summary = billiard.iterate_on_caustic(c, delta, args.steps, tol=tol)
        results.update(
            one_step_max_drift=one_step,
            orbit_steps=summary.steps,
            orbit_max_drift=summary.max_theta_drift,
            rotation_estimate=summary.rotation_estimate,
            rotation_expected=delta / math.pi,
        )
        ok = max(one_step, summary.max_theta_drift) <= args.drift_tol
        results["verified"] = ok
        if args.plot:
            svg = SVG()
            recs = list(billiard.orbit(c, billiard.PhasePoint(0.0, delta), min(args.steps, 400)))
            svg.segments([((r0[3], r0[4]), (r1[3], r1[4])) for r0, r1 in zip(recs, recs[1:])], stroke=PALETTE[1])
            alpha = np.linspace(0, 2 * math.pi, 1024, endpoint=False)
            svg.polyline(curve.boundary_points(c, alpha).tolist(), closed=True, width=0.012)
            svg.save(args.plot)
    inputs = {"curve": curve.to_dict(c), "delta": delta, "steps": args.steps, "tol": tol, "seed": args.seed}
    if args.format == "structured":
        out.write(_structured("verify-caustic", inputs, results))
    elif args.format == "delimited":
        out.write(_csv(([k, json.dumps(results[k])] for k in sorted(results)), ("key", "value")))
    else:
        out.write(f"caustic at delta={delta:.17g}: {'EXISTS' if report.exists else 'ABSENT'}\n")
        out.write(f"kernel residual={report.residual:.3e} integral residual={integral:.3e}\n")
        if report.offenders:
            out.write(f"offending harmonics: {list(report.offenders)}\n")
        if report.exists:
            out.write(
                f"one-step drift={results['one_step_max_drift']:.3e} "
                f"orbit drift={results['orbit_max_drift']:.3e} over {args.steps} steps\n"
                f"rotation estimate={results['rotation_estimate']:.15f} (delta/pi={delta / math.pi:.15f})\n"
            )
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_poly(args, out) -> int:
    lowest = {"P": 1, "Q": 1, "R": 2, "S": 2, "Sred": 2}[args.family]
    if args.n < lowest:
        raise UsageError(f"{args.family}_n needs n >= {lowest}")
    p = polychain.family_poly(args.family, args.n)
    if args.format == "structured":
        out.write(_structured("poly", {"family": args.family, "n": args.n},
                              {"coeffs": list(p.coeffs), "degree": p.degree}))
    elif args.format == "delimited":
        out.write(_csv([[args.family, args.n, " ".join(str(v) for v in p.coeffs)]], ("family", "n", "coeffs")))
    else:
        out.write(polychain.export_line(args.family, args.n, p) + "\n")
    return EXIT_OK


def cmd_scan(args, out) -> int:
    if args.nmax < 2:
        raise UsageError("n_max must be >= 2")
    certs = conjecture.scan_disjointness(args.nmax)
    summ = conjecture.summarize(certs)
    special = [conjecture.special_angle_exclusion(d, max(args.nmax, 2)) for d in ("pi/4", "pi/3")]
    if args.ledger:
        conjecture.append_ledger(args.ledger, certs)
    all_ok = not summ["shared"] and all(s.exact_ok for s in special)
    if args.format == "structured":
        results = {
            "pairs": summ["pairs"],
            "disjoint": summ["disjoint"],
            "shared": [list(p) for p in summ["shared"]],
            "all_disjoint": not summ["shared"],
            "special_angles": [
                {
                    "delta": s.delta_name,
                    "min_residual": s.min_residual,
                    "argmin_n": s.argmin_n,
                    "min_scaled_residual": s.min_scaled_residual,
                    "classes_excluded": {str(k): v for k, v in s.classes.items()},
                }
                for s in special
            ],
        }
        out.write(_structured("scan", {"n_max": args.nmax}, results, [c.to_dict() for c in certs]))
    elif args.format == "delimited":
        out.write(_csv(([c.m, c.n, c.verdict, c.gcd.degree] for c in certs), ("m", "n", "verdict", "gcd_degree")))
    else:
        for c in certs:
            out.write(c.ledger_line() + "\n")
        for s in special:
            out.write(
                f"delta={s.delta_name}: every residue class excluded={s.exact_ok}, "
                f"min residual={s.min_residual:.3e} at n={s.argmin_n}\n"
            )
        if summ["shared"]:
            out.write(f"pairs with shared roots: {summ['shared']}\n")
        else:
            out.write(f"all pairs disjoint up to {args.nmax} ({summ['pairs']} certificates)\n")
    return EXIT_OK if all_ok else EXIT_NEGATIVE


def cmd_float(args, out) -> int:
    c = load_curve(args.curve)
    tol = args.tol if args.tol is not None else curve.CAUSTIC_TOL
    rep = curve.floating_report(c, args.nmax, tol)
    cls = conjecture.conditional_classification(c, min(args.nmax, conjecture.DEFAULT_EXACT_NMAX), tol)
    positive = rep.all_angles or bool(rep.contact_angles)
    inputs = {"curve": curve.to_dict(c), "n_max": args.nmax, "tol": tol}
    if args.format == "structured":
        results = {
            "contact_angles": curve.ALL_ANGLES if rep.all_angles else list(rep.contact_angles),
            "caustic_angles": list(rep.caustic_angles),
            "classification": {
                "kind": cls.kind, "n": cls.n, "tau": cls.tau, "deltas": list(cls.deltas),
                "constant_width": cls.constant_width, "certified": cls.certified, "label": cls.label,
            },
        }
        out.write(_structured("float", inputs, results, [x.to_dict() for x in cls.certificates]))
    elif args.format == "delimited":
        rows = [] if rep.all_angles else [[_r(g), _r(math.pi - g)] for g in rep.contact_angles]
        out.write(_csv(rows, ("contact_angle", "delta")))
    else:
        if rep.all_angles:
            out.write(f"contact angles: {curve.ALL_ANGLES}\n")
        elif rep.contact_angles:
            out.write("contact angles: " + " ".join(f"{g:.15f}" for g in rep.contact_angles) + "\n")
        else:
            out.write(f"contact angles: none with delta in A_n, n <= {args.nmax}\n")
        desc = cls.kind
        if cls.kind == "omega":
            desc = f"omega n={cls.n} tau={cls.tau:.15g}"
        out.write(f"class: {desc} ({cls.label})\n")
    return EXIT_OK if positive else EXIT_NEGATIVE


def cmd_orbit_dump(args, out) -> int:
    c = load_curve(args.curve)
    theta = parse_angle(args.delta)
    if not 0 < theta < math.pi:
        raise UsageError(f"delta must lie in (0, pi), got {theta}")
    start_alpha = parse_angle(args.alpha)
    recs = list(billiard.orbit(c, billiard.PhasePoint(start_alpha, theta), args.steps))
    if args.plot:
        svg = SVG()
        svg.polyline([(0, 0), (2 * math.pi, 0), (2 * math.pi, math.pi), (0, math.pi)], closed=True, width=0.01)
        svg.dots([(r[1] % (2 * math.pi), r[2]) for r in recs], r=0.012, fill=PALETTE[0])
        svg.save(args.plot)
    if args.format == "structured":
        out.write(_structured("orbit-dump", {"curve": curve.to_dict(c), "theta": theta, "steps": args.steps},
                              [list(r) for r in recs]))
    else:
        out.write(billiard.orbit_to_delimited(recs))
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured", "delimited"), default="text")
    common.add_argument("--tol", type=float, default=None, help="caustic decision tolerance (default 1e-9)")
    common.add_argument("--plot", metavar="PATH", default=None, help="write an SVG figure")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="capfloat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="roots of tan(nx) = n tan(x)")
    s.add_argument("n", help="n or lo..hi")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("table", parents=[common], help="boundary of Omega_{n,tau}")
    s.add_argument("n", type=int)
    s.add_argument("tau", type=float)
    s.add_argument("--points", type=int, default=1024)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("verify-caustic", parents=[common], help="decide and simulate a constant-angle caustic")
    s.add_argument("curve", help="curve file, JSON record, 'circle' or omega:n,tau")
    s.add_argument("delta", help="angle expression, e.g. 'atan(sqrt(5))'")
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--starts", type=int, default=1000, help="random one-step starts")
    s.add_argument("--drift-tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_verify_caustic)

    s = sub.add_parser("poly", parents=[common], help="exact coefficients of P, Q, R, S, Sred")
    s.add_argument("family", choices=polychain.FAMILIES)
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_poly)

    s = sub.add_parser("scan", parents=[common], help="exact gcd certificates for all pairs up to n_max")
    s.add_argument("nmax", type=int)
    s.add_argument("--ledger", metavar="PATH", default=None, help="append-only certificate ledger")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("float", parents=[common], help="contact angles of neutral floating")
    s.add_argument("curve")
    s.add_argument("--nmax", type=int, default=50)
    s.set_defaults(func=cmd_float)

    s = sub.add_parser("orbit-dump", parents=[common], help="billiard orbit records")
    s.add_argument("curve")
    s.add_argument("delta", help="initial angle theta")
    s.add_argument("--alpha", default="0", help="initial tangent direction")
    s.add_argument("--steps", type=int, default=200)
    s.set_defaults(func=cmd_orbit_dump)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "steps", 1) < 1:
        print("capfloat: error: --steps must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"capfloat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"capfloat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
