"""Command-line entry point ``rmlab``.

Field elements cross this boundary as integer encodings ``sum c_i p^i``.
Exit codes: 0 success, 2 invalid parameters, 3 unsupported configuration,
4 inconclusive equivalence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .codes import SCAN_COLUMNS, idealiser, norm_class_scan, parse_family
from .equiv import (BATTERY_COLUMNS, ENUMERATION_LIMIT, INCONCLUSIVE, decide_specs, delta_s_equivalent,
                    known_family_battery)
from .exceptions import InvalidParameter, UnsupportedConfiguration
from .fields import build_tower, find_nonsquare, find_normal_element, prime_power
from .geometry import (CurveParams, cafure_matera, coherence_check, crossover, curve_points,
                       dimension_witness_check, genus, hasse_weil_window, min_q,
                       smallest_odd_prime_power_above)

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_INCONCLUSIVE = 0, 2, 3, 4


# -- output ---------------------------------------------------------------------

def _csv_cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    return v


def render(rows: list[dict], columns, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r[c]) for c in columns])
    return buf.getvalue()


def emit(args, rows: list[dict], columns) -> None:
    text = render(rows, list(columns), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- parameter plumbing -------------------------------------------------------

def _context(args, n: int | None = None):
    p, e = None, None
    if args.q is not None:
        p, e = prime_power(args.q)
    if args.p is not None:
        p = args.p
    if args.e is not None:
        e = args.e
    if p is None:
        raise InvalidParameter("give --q or --p")
    return build_tower(p, 1 if e is None else e, args.n if n is None else n)


def _epsilons(args) -> list[int]:
    return [1, -1] if args.epsilon is None else [args.epsilon]


# -- subcommands --------------------------------------------------------------

def cmd_field(args) -> int:
    ctx = _context(args)
    row = {"p": ctx.p, "e": ctx.e, "n": ctx.n, "q": ctx.q, "order": ctx.order,
           "modulus": " ".join(map(str, ctx.modulus)),
           "generator": ctx.arith.generator if ctx.has_tables else "",
           "nonsquare_top": find_nonsquare(ctx, ctx.n).value if ctx.p != 2 else "",
           "normal_element_top": find_normal_element(ctx, ctx.n)[0].value}
    emit(args, [row], list(row))
    return EXIT_OK


def cmd_scan(args) -> int:
    ctx = _context(args)
    if args.with_curve:
        ctx.require_odd("the curve columns")
    classes = args.classes
    if args.alpha is not None:
        classes = f"alpha:{args.alpha}"
    table = norm_class_scan(ctx, args.s, classes, "decide" if args.early_exit else "exact",
                            args.threads, args.seed)
    rows = [r.as_dict() for r in table.rows]
    columns = list(SCAN_COLUMNS)
    if args.with_curve:
        columns += ["curve_points_eps_plus", "curve_points_eps_minus"]
        for row in rows:
            for eps, key in ((1, "curve_points_eps_plus"), (-1, "curve_points_eps_minus")):
                if row["alpha_encoding"] == 1:
                    row[key] = ""
                else:
                    cp = curve_points(CurveParams(ctx, row["alpha_encoding"], eps, args.s), True, False)
                    row[key] = cp.count_nonzero_z
    emit(args, rows, columns)
    return EXIT_OK


def cmd_curve(args) -> int:
    ctx = _context(args)
    ctx.require_odd("the curve")
    if args.alpha is None:
        raise InvalidParameter("--alpha is required")
    half = ctx.n // 2
    g = genus(ctx.q, args.s)
    lo, hi = hasse_weil_window(ctx.q ** half, g)
    rows = []
    for eps in _epsilons(args):
        P = CurveParams(ctx, args.alpha, eps, args.s)
        cp = curve_points(P, with_points=args.points)
        if args.points:
            rows += [{"epsilon": eps, "S": int(s), "Z": int(z)} for s, z in cp.points]
        else:
            rows.append({"epsilon": eps, "beta": P.beta.value, "eta": P.eta.value,
                         "affine_points": cp.count, "points_nonzero_z": cp.count_nonzero_z,
                         "genus": g, "hasse_weil_lower": lo, "hasse_weil_upper": hi})
    emit(args, rows, list(rows[0]) if rows else ["epsilon", "S", "Z"])
    return EXIT_OK


def cmd_variety(args) -> int:
    ctx = _context(args, n=8)
    ctx.require_odd("the varieties")
    if args.alpha is None:
        raise InvalidParameter("--alpha is required")
    rows = []
    for eps in _epsilons(args):
        P = CurveParams(ctx, args.alpha, eps, 1)
        rep = coherence_check(P)
        row = {"epsilon": eps, "beta": P.beta.value, "candidates": rep.candidates,
               "w_points": rep.w_points, "w_points_z3_nonzero": rep.z3_points,
               "lift_failures": rep.lift_failures, "v_failures": rep.v_failures,
               "bijection_failures": rep.bijection_failures}
        if args.dimension_witness:
            dw = dimension_witness_check(P)
            row.update({"discriminant": dw.discriminant, "three_space_disjoint": dw.disjoint,
                        "three_space_points": dw.exhaustive_points or "",
                        "three_space_hits": "" if dw.exhaustive_hits is None else dw.exhaustive_hits})
        rows.append(row)
    emit(args, rows, list(rows[0]))
    return EXIT_OK


def _family_from_args(args, ctx):
    if args.family:
        return parse_family(ctx, args.family)
    if args.delta is None:
        raise InvalidParameter("give --family or --delta")
    return parse_family(ctx, f"delta_s:{args.delta}:{args.s}")


def cmd_idealiser(args) -> int:
    ctx = _context(args)
    code = _family_from_args(args, ctx)
    sides = ["left", "right"] if args.side == "both" else [args.side]
    rows = []
    for side in sides:
        rep = idealiser(code, side)
        rows.append({"family": code.spec(), "side": side, "dimension": rep.dimension,
                     "is_field": "unknown" if rep.is_field is None else rep.is_field,
                     "closed": rep.closed, "commutative": rep.commutative,
                     "basis": " | ".join(b.serialize() for b in rep.basis)})
    emit(args, rows, list(rows[0]))
    return EXIT_OK


def cmd_equiv(args) -> int:
    ctx = _context(args)
    if args.battery:
        rows = known_family_battery(ctx, args.samples, args.seed)
    else:
        if not (args.left and args.right):
            raise InvalidParameter("give --left and --right, or --battery")
        rows = [decide_specs(ctx, args.left, args.right, limit=args.limit)]
    out = [r.as_dict() for r in rows]
    cols = list(BATTERY_COLUMNS)
    if not args.battery:
        a, b = parse_family(ctx, args.left), parse_family(ctx, args.right)
        if a.family == b.family == "delta_s":
            pred = delta_s_equivalent(ctx, a.param("delta"), a.param("s"), b.param("delta"), b.param("s"))
            out[0]["predicate"] = pred
            cols.append("predicate")
    emit(args, out, cols)
    return EXIT_INCONCLUSIVE if any(r.verdict == INCONCLUSIVE for r in rows) else EXIT_OK


def cmd_bound(args) -> int:
    rows = []
    qs = list(args.q_values or [])
    if args.q is not None:
        qs.append(args.q)
    for q in qs:
        b = cafure_matera(q, args.m, args.d)
        rows.append({"q": q, "m": args.m, "d": args.d, "positive": b.positive,
                     "non_positive": b.non_positive, "hypothesis": b.hypothesis,
                     "lower": float(b.lower), "upper": float(b.upper), "bits": b.bits})
    if args.solve_min_q:
        mq = min_q(args.m, args.d)
        b = cafure_matera(mq, args.m, args.d)
        rows.append({"q": mq, "m": args.m, "d": args.d, "positive": b.positive,
                     "non_positive": b.non_positive, "hypothesis": b.hypothesis,
                     "lower": float(b.lower), "upper": float(b.upper), "bits": b.bits,
                     "crossover": crossover(args.m, args.d),
                     "smallest_odd_prime_power": smallest_odd_prime_power_above(mq)})
    if not rows:
        raise InvalidParameter("give --q or --solve-min-q")
    cols = list(rows[-1])
    for r in rows:
        for c in cols:
            r.setdefault(c, "")
    emit(args, rows, cols)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmlab", description="Rank-metric code laboratory.")
    parser.add_argument("--version", action="version", version=f"rmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, need_field=True):
        if need_field:
            sp.add_argument("--q", type=int, help="field size p^e")
            sp.add_argument("--p", type=int, help="characteristic (overrides --q)")
            sp.add_argument("--e", type=int, help="extension degree of F_q over F_p (overrides --q)")
            sp.add_argument("--n", type=int, default=8)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("field", help="describe the field tower")
    common(sp)
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("scan", help="classify C_{delta,s} per norm class")
    common(sp)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--classes", default="all", help="all | sample:K | alpha:<enc>")
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--early-exit", action="store_true", help="stop each class at the first rank <= n-2")
    sp.add_argument("--with-curve", action="store_true", help="add curve point counts (odd q only)")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("curve", help="enumerate the curve attached to a norm class")
    common(sp)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--epsilon", type=int, choices=[1, -1])
    sp.add_argument("--points", action="store_true", help="dump the points instead of counts")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("variety", help="check W, the curve and V against each other (n = 8)")
    common(sp)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--epsilon", type=int, choices=[1, -1])
    sp.add_argument("--dimension-witness", action="store_true")
    sp.set_defaults(func=cmd_variety)

    sp = sub.add_parser("idealiser", help="left/right idealiser of a code")
    common(sp)
    sp.add_argument("--family", help="delta_s:<d>:<s> | gab:<r> | twisted:<eps>:<r> | quad:<h>:<r>")
    sp.add_argument("--delta", type=int)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--side", choices=["left", "right", "both"], default="both")
    sp.set_defaults(func=cmd_idealiser)

    sp = sub.add_parser("equiv", help="decide equivalence of two codes")
    common(sp)
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp.add_argument("--battery", action="store_true", help="run the known-family battery (n = 8)")
    sp.add_argument("--samples", type=int, default=2)
    sp.add_argument("--limit", type=int, default=ENUMERATION_LIMIT,
                    help="largest solution space searched exhaustively")
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("bound", help="Cafure-Matera lower bound")
    common(sp, need_field=False)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--d", type=int, default=16)
    sp.add_argument("--q", type=int)
    sp.add_argument("--q-values", type=int, nargs="*")
    sp.add_argument("--solve-min-q", action="store_true")
    sp.set_defaults(func=cmd_bound)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UnsupportedConfiguration as exc:
        print(f"rmlab: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidParameter, ValueError) as exc:
        print(f"rmlab: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
