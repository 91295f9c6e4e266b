"""Command-line front end.

Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import bettibounds as bb
from . import conductor as cd
from . import geometry as geo
from .curves import BadPoint, CurveSheafData, cc_coefficients, gos_chi
from .exactmath import format_rat, rat
from .verify import SUITES, run_suite

DEFAULT_CAP = 20


class InputError(Exception):
    pass


def decimal_str(q: Fraction, digits: int = 6) -> str:
    """Fixed-point rendering computed with integer arithmetic."""
    scale = 10**digits
    n = round(abs(q) * scale)
    sign = "-" if q < 0 and n else ""
    return f"{sign}{n // scale}.{n % scale:0{digits}d}"


def render_table(rows: Sequence[Sequence[str]]) -> str:
    if not rows:
        return ""
    widths = [max(len(r[k]) for r in rows if k < len(r)) for k in range(max(map(len, rows)))]
    lines = []
    for r in rows:
        cells = [c.ljust(widths[k]) for k, c in enumerate(r)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def _value_rows(pairs, decimal: bool):
    rows = []
    for label, rel, value in pairs:
        row = [label, rel, format_rat(value)]
        if decimal:
            row.append(f"~{decimal_str(value)}")
        rows.append(row)
    return rows


def emit(args, payload: dict, rows=None, text: str | None = None) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    elif rows is not None:
        print(render_table(rows))
    else:
        print(text)


def read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _need(args, attr: str, flag: str):
    value = getattr(args, attr, None)
    if value is None:
        raise InputError(f"missing required option {flag}")
    return value


# subcommands

def cmd_bn(args) -> int:
    if args.max < 0:
        raise InputError("--max must be nonnegative")
    if args.max > args.cap:
        raise InputError(f"--max {args.max} exceeds the cap {args.cap} (raise it with --cap)")
    fam = bb.b_family(args.max)
    payload = {"b": [{"n": i, "coeffs": p.to_json()} for i, p in enumerate(fam)]}
    emit(args, payload, text="\n".join(f"b_{i} = {p}" for i, p in enumerate(fam)))
    return 0


def cmd_bound(args) -> int:
    lc = rat(args.lc)
    if args.target == "curve":
        genus = _need(args, "genus", "--genus")
        points = _need(args, "points", "--points")
        values = [bb.curve_case_bound(genus, points, lc, args.rank, i) for i in range(3)]
        labels = [f"h^{i}" for i in range(3)]
        rels = ["<=", "<=", "="]
        params = {"genus": genus, "points": points}
    else:
        n = _need(args, "n", "--n")
        if n < 0:
            raise InputError("--n must be nonnegative")
        compact = args.target == "an-compact"
        values = bb.affine_bound_table(n, lc, args.rank, compact=compact)
        prefix = "h_c" if compact else "h"
        labels = [f"{prefix}^{j}" for j in range(2 * n + 1)]
        rels = ["<=" if v or (j >= n if compact else j <= n) else "=" for j, v in enumerate(values)]
        params = {"n": n}
    payload = {
        "target": args.target,
        **params,
        "lc": format_rat(lc),
        "rank": args.rank,
        "bounds": [{"degree": j, "bound": format_rat(v)} for j, v in enumerate(values)],
    }
    emit(args, payload, rows=_value_rows(zip(labels, rels, values), args.decimal))
    return 0


def _parse_point(spec: str, k: int) -> BadPoint:
    fields = {}
    for part in spec.split(","):
        if "=" not in part:
            raise InputError(f"bad --point {spec!r}: expected key=value pairs")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"dimtot", "rank", "label"}
    if unknown or "dimtot" not in fields:
        raise InputError(f"bad --point {spec!r}: need dimtot=..., optional rank=..., label=...")
    try:
        stalk = int(fields.get("rank", "0"))
    except ValueError as exc:
        raise InputError(f"bad stalk rank in --point {spec!r}") from exc
    return BadPoint(fields.get("label", f"x{k}"), rat(fields["dimtot"]), stalk)


def cmd_gos(args) -> int:
    if args.infile:
        data = CurveSheafData.from_json(read_json(args.infile))
    else:
        pts = tuple(_parse_point(s, k) for k, s in enumerate(args.point or []))
        data = CurveSheafData(args.genus, args.rank, pts)
    chi = gos_chi(data)
    zero, fibers = cc_coefficients(data)
    payload = {
        "chi": format_rat(chi),
        "cc": {
            "zero_section": format_rat(zero),
            "fibers": [{"label": lab, "coeff": format_rat(c)} for lab, c in fibers],
        },
    }
    lines = [f"chi = {format_rat(chi)}" + (f"  ~{decimal_str(chi)}" if args.decimal else "")]
    lines.append(f"CC zero section = {format_rat(zero)}")
    lines += [f"CC fiber {lab} = {format_rat(c)}" for lab, c in fibers]
    emit(args, payload, text="\n".join(lines))
    return 0


def _sandwich_output(args, lower, upper, extra: dict) -> int:
    payload = {**extra, "lower": format_rat(lower), "upper": format_rat(upper)}
    rows = _value_rows([("lower", "=", lower), ("upper", "=", upper)], args.decimal)
    emit(args, payload, rows=rows)
    return 0


def cmd_chi_bounds(args) -> int:
    lower, upper = bb.chi_sandwich(args.n, rat(args.lc), args.rank)
    return _sandwich_output(args, lower, upper, {"n": args.n, "lc": args.lc, "rank": args.rank})


def cmd_chi_twisted(args) -> int:
    lower, upper = bb.chi_twisted_sandwich(args.n, rat(args.m), args.rank)
    return _sandwich_output(args, lower, upper, {"n": args.n, "m": args.m, "rank": args.rank})


def _module(path: str) -> cd.GaloisModuleData:
    return cd.GaloisModuleData.from_json(read_json(path))


def _module_output(args, m: cd.GaloisModuleData) -> int:
    conds = cd.conductors(m)
    payload = {"module": m.to_json(), "sw": format_rat(cd.swan(m)), "lc": format_rat(conds.lc)}
    lines = [f"rank = {m.rank}", f"sw = {format_rat(cd.swan(m))}", f"lc = {format_rat(conds.lc)}"]
    if conds.c is not None:
        payload["c"] = format_rat(conds.c)
        payload["dimtot"] = format_rat(cd.dimtot(m))
        lines += [f"c = {format_rat(conds.c)}", f"dimtot = {format_rat(cd.dimtot(m))}"]
    else:
        lo, hi = conds.c_bounds
        payload["c_bounds"] = [format_rat(lo), format_rat(hi)]
        lines.append(f"c in [{format_rat(lo)}, {format_rat(hi)}]")
    lines.append("log pieces = " + ", ".join(f"({format_rat(s)}, {r})" for s, r in m.log.pieces))
    emit(args, payload, text="\n".join(lines))
    return 0


def cmd_slopes(args) -> int:
    op = args.op
    if op == "swan":
        m = _module(_need(args, "infile", "--in"))
        sw = cd.swan(m)
        emit(args, {"sw": format_rat(sw)}, text=f"sw = {format_rat(sw)}")
        return 0
    if op == "dimtot":
        m = _module(_need(args, "infile", "--in"))
        dt = cd.dimtot(m)
        emit(args, {"dimtot": format_rat(dt)}, text=f"dimtot = {format_rat(dt)}")
        return 0
    if op == "conductors":
        return _module_output(args, _module(_need(args, "infile", "--in")))
    if op == "dual":
        return _module_output(args, cd.dual(_module(_need(args, "infile", "--in"))))
    if op == "sum":
        a = _module(_need(args, "infile", "--in"))
        b = _module(_need(args, "other", "--other"))
        return _module_output(args, cd.direct_sum(a, b))
    if op == "tensor":
        a = _module(_need(args, "infile", "--in"))
        b = _module(_need(args, "other", "--other"))
        if args.bounds:
            if not args.non_cancellation:
                raise InputError("--bounds needs --non-cancellation (the hypothesis cannot be checked here)")
            res = cd.swan_tensor_bounds(a, b, non_cancellation=True)
            payload = {
                "lower": format_rat(res.lower),
                "upper": format_rat(res.upper),
                "exact": None if res.exact is None else format_rat(res.exact),
            }
            lines = [f"lower = {format_rat(res.lower)}", f"upper = {format_rat(res.upper)}"]
            lines.append("exact = " + ("undetermined" if res.exact is None else format_rat(res.exact)))
            emit(args, payload, text="\n".join(lines))
            return 0
        return _module_output(args, cd.tensor_isoclinic(a, b, args.mode))
    if op == "as":
        m = _need(args, "m", "--m")
        p = _need(args, "p", "--p")
        return _module_output(args, cd.artin_schreier_conductor(m, p))
    if op == "two-lines":
        c = cd.two_lines_curve_conductor(
            _need(args, "m", "--m"), _need(args, "p", "--p"), args.alpha, args.beta
        )
        emit(args, {"c": format_rat(c)}, text=f"c = {format_rat(c)}")
        return 0
    if op == "pushforward-bound":
        bound = cd.finite_direct_image_lc_bound(
            rat(_need(args, "lc_trivial", "--lc-trivial")),
            _need(args, "degree", "--degree"),
            rat(_need(args, "lc_e", "--lc-e")),
        )
        emit(args, {"lc_bound": format_rat(bound)}, text=f"lc <= {format_rat(bound)}")
        return 0
    raise InputError(f"unknown slopes operation {op!r}")


def cmd_mu(args) -> int:
    raw = read_json(args.infile)
    if isinstance(raw, dict) and "name" in raw:
        combo = geo.CoherentCombo.of(geo.CoherentToken.from_json(raw))
    else:
        combo = geo.CoherentCombo.from_json(raw)
    mu = geo.mu_f(combo)
    labels = [args.fiber] if args.fiber else list(combo.fiber_labels())
    divisors = {lab: geo.T_of(combo, lab) for lab in labels}
    payload = {"mu": format_rat(mu), "T": {lab: d.to_json() for lab, d in divisors.items()}}
    lines = [f"mu = {format_rat(mu)}"] + [f"T[{lab}] = {d}" for lab, d in divisors.items()]
    emit(args, payload, text="\n".join(lines))
    return 0


def cmd_assemble(args) -> int:
    alpha = args.alpha
    if args.lc_generic is not None:
        alpha = bb.alpha_from_conductor(rat(args.lc_generic))
    if alpha is None:
        raise InputError("give --alpha or --lc-generic")
    mu = None if args.mu is None else rat(args.mu)
    res = bb.assemble_bound_sequence(args.n, args.N, args.delta, alpha, mu)
    payload = {
        "n": args.n,
        "N": args.N,
        "delta": args.delta,
        "alpha": alpha,
        "P": res.P.to_json(),
        "P_prime": res.P_prime.to_json(),
    }
    lines = [f"P_{j} = {p}" for j, p in enumerate(res.P)]
    lines += [f"P'_{i} = {p}" for i, p in enumerate(res.P_prime)]
    if res.bounds is not None:
        payload["mu"] = format_rat(mu)
        payload["bounds"] = [format_rat(v) for v in res.bounds]
        lines += [
            f"h^{j} <= {format_rat(v)} * rank" + (f"  ~{decimal_str(v)}" if args.decimal else "")
            for j, v in enumerate(res.bounds)
        ]
    emit(args, payload, text="\n".join(lines))
    return 0


def cmd_perverse_fold(args) -> int:
    raw = read_json(args.infile)
    if not isinstance(raw, list):
        raise InputError("expected a JSON array of bound families")
    fams = [bb.BoundFamily.from_json(f) for f in raw]
    out = bb.perverse_fold(fams)
    emit(args, {"P": out.to_json()}, text="\n".join(f"P_{i} = {p}" for i, p in enumerate(out)))
    return 0


def cmd_verify(args) -> int:
    suite = args.suite_pos or args.suite
    report = run_suite(suite, n_max=args.max, seed=args.seed)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        rows = []
        for step in report.get("appendix", []):
            rows.append([f"appendix n={step['n']}", step["step"], "ok" if step["certified"] else "FAIL"])
        for c in report["checks"]:
            rows.append([c["check"], f"{c['cases']} cases", "ok" if c["passed"] else "FAIL"])
        print(render_table(rows))
        print("PASSED" if report["passed"] else "FAILED")
    return 0 if report["passed"] else 1


# parser

def _common(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("table", "json"), default=default if suppress else "table")
    p.add_argument("--decimal", action="store_true", default=default if suppress else False,
                   help="add a 6-digit decimal column to table output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramicalc", description="Exact wild-ramification and Betti-bound calculator.",
        parents=[_common(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common(True)]

    p = sub.add_parser("bn", parents=common, help="list the bounding polynomials b_0..b_max")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_bn)

    p = sub.add_parser("bound", parents=common, help="Betti bound tables")
    p.add_argument("target", choices=("an", "an-compact", "curve"))
    p.add_argument("--n", type=int)
    p.add_argument("--genus", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--lc", default="0")
    p.add_argument("--rank", type=int, default=1)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("gos", parents=common, help="Euler characteristic of a sheaf on a curve")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--rank", type=int, default=1, help="generic rank")
    p.add_argument("--point", action="append", help="dimtot=D,rank=R[,label=L]; repeatable")
    p.add_argument("--in", dest="infile")
    p.set_defaults(func=cmd_gos)

    p = sub.add_parser("chi-bounds", parents=common, help="Euler characteristic sandwich on A^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lc", default="0")
    p.add_argument("--rank", type=int, default=1)
    p.set_defaults(func=cmd_chi_bounds)

    p = sub.add_parser("chi-twisted", parents=common, help="sandwich after an Artin-Schreier twist")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--rank", type=int, default=1)
    p.set_defaults(func=cmd_chi_twisted)

    p = sub.add_parser("slopes", parents=common, help="local conductor calculus")
    p.add_argument(
        "op",
        choices=("swan", "dimtot", "conductors", "tensor", "dual", "sum", "as", "two-lines", "pushforward-bound"),
    )
    p.add_argument("--in", dest="infile")
    p.add_argument("--other", help="second module for tensor/sum")
    p.add_argument("--mode", choices=("log", "nonlog"), default="log")
    p.add_argument("--bounds", action="store_true", help="Swan bounds for a rank-one twist")
    p.add_argument("--non-cancellation", action="store_true")
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--lc-trivial", dest="lc_trivial")
    p.add_argument("--degree", type=int)
    p.add_argument("--lc-e", dest="lc_e")
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("mu", parents=common, help="admissible function mu_f and T of a combo")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--fiber")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("assemble", parents=common, help="bound sequence for a family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--alpha", type=int)
    p.add_argument("--lc-generic", dest="lc_generic", help="use alpha = ceil(lc)")
    p.add_argument("--mu")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("perverse-fold", parents=common, help="fold per-stratum bound families")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_perverse_fold)

    p = sub.add_parser("verify", parents=common, help="run self-verification suites")
    p.add_argument("suite_pos", nargs="?", choices=SUITES + ("all",), metavar="SUITE")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--max", type=int, default=8)
    p.add_argument("--seed", type=int, default=20240601)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, ZeroDivisionError, TypeError) as exc:
        print(f"ramicalc {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
