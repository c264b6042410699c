"""Command-line front end.

Exit codes: 0 success, 2 input or domain error, 3 failed identity (or an
exhausted search), 4 I/O error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import hesse
from .errors import DomainError, InconsistencyError, SearchExhausted
from .families import (
    build_family,
    fiber_genus,
    genus_base_change,
    prime_ceiling_from_env,
    target_slope,
)
from .geography import GeographyPoint, csv_text, format_decimal, svg_text
from .logchern import ArrangementSummary, blow_up_all, blow_up_class, log_chern_numbers
from .numtheory import c_coeff, dedekind_sum, dedekind_sum_naive, hj_expand, primes_from, resolve_cqs
from .params import NONSPIN, VARIANTS, FamilyParams
from .rootcover import (
    TRIVIAL,
    BranchSummary,
    chern_of_cover,
    dump_num,
    necessary_condition_report,
    node_type_table,
)

EXIT_OK, EXIT_DOMAIN, EXIT_IDENTITY, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage already; keep the message on stderr
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# formatting helpers
# ---------------------------------------------------------------------------


def fmt(x, decimal: Optional[int] = None) -> str:
    """Exact ``a/b`` form, or ``decimal`` correctly rounded digits."""
    x = Fraction(x)
    if decimal is not None:
        return format_decimal(x, decimal)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def exact(text: str) -> Fraction:
    """Parse ``2``, ``2.5``, ``71/26`` or ``2e-10`` without going through float."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}") from exc


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def int_list(text: str) -> List[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def read_json(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from exc


def write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def params_from_fields(fields: Sequence[str]) -> FamilyParams:
    if len(fields) != 5:
        raise DomainError(f"expected 'variant alpha beta d p', got {' '.join(fields)!r}")
    variant, *nums = fields
    try:
        alpha, beta, d, p = (int(v) for v in nums)
    except ValueError as exc:
        raise DomainError(f"non-integer parameter in {' '.join(fields)!r}") from exc
    return FamilyParams(variant, alpha, beta, d, p)


def print_checks(checks) -> None:
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_dedekind(args) -> int:
    fn = dedekind_sum_naive if args.naive else dedekind_sum
    print(fmt(fn(args.q, args.m), args.decimal))
    return EXIT_OK


def cmd_hj(args) -> int:
    chain = hj_expand(args.m, args.q)
    if args.json:
        emit_json({"m": args.m, "q": args.q, "coefficients": list(chain.coefficients), "length": chain.length})
    else:
        print(" ".join(str(e) for e in chain.coefficients))
    return EXIT_OK


def cmd_resolve(args) -> int:
    res = resolve_cqs(args.m, args.q)
    c = c_coeff(args.q, args.m)
    if args.json:
        emit_json({
            "m": res.m,
            "q": res.q,
            "chain": list(res.chain_self_intersections),
            "discrepancies": [dump_num(x) for x in res.discrepancies],
            "pullback_pairs": [list(pr) for pr in res.pullback_pairs],
            "c": dump_num(c),
            "l": res.length,
        })
        return EXIT_OK
    print("chain: " + " ".join(str(s) for s in res.chain_self_intersections))
    print("discrepancies: " + " ".join(fmt(x, args.decimal) for x in res.discrepancies))
    print("pullback pairs: " + " ".join(f"({a},{b})" for a, b in res.pullback_pairs))
    print(f"c = {fmt(c, args.decimal)}  l = {res.length}")
    return EXIT_OK


def cmd_logchern(args) -> int:
    arr = ArrangementSummary.from_dict(read_json(args.file))
    arr.check_double_counting()
    for label in args.blow_up or ():
        arr = blow_up_class(arr, label, arr.singularity(label).k, adjoin_exceptional=args.adjoin)
    if args.blow_up_all:
        arr = blow_up_all(arr, adjoin_exceptional=args.adjoin)
    c1, c2 = log_chern_numbers(arr)
    if args.json:
        emit_json({"log_c1sq": dump_num(c1), "log_c2": dump_num(c2), "arrangement": arr.to_dict()})
    else:
        print(f"c1bar^2 = {fmt(c1, args.decimal)}")
        print(f"c2bar = {fmt(c2, args.decimal)}")
    return EXIT_OK


def cmd_lattice_check(args) -> int:
    report = {"identities": hesse.hesse_identities(), "tuples": []}
    for fields in args.tuple or ():
        params = params_from_fields(fields.replace(",", " ").split())
        report["tuples"].append({"params": params.to_dict(), "checks": hesse.lattice_report(params)})
    ok = all(report["identities"].values()) and all(all(t["checks"].values()) for t in report["tuples"])
    if args.json:
        emit_json(report)
    else:
        print_checks(report["identities"])
        for t in report["tuples"]:
            pr = t["params"]
            print(f"# {pr['variant']} {pr['alpha']} {pr['beta']} {pr['d']} {pr['p']}")
            print_checks(t["checks"])
    return EXIT_OK if ok else EXIT_IDENTITY


def cmd_cover(args) -> int:
    branch = BranchSummary.from_dict(read_json(args.file))
    inv = chern_of_cover(branch, spin=args.spin, pi1=args.pi1)
    if args.json:
        emit_json(inv.to_dict())
        return EXIT_OK
    for (a, b), row in node_type_table(branch).items():
        print(f"nodes nu=({a},{b}): {row['count']} of type 1/{branch.degree}(1,{row['q']})")
    _print_invariants(inv, args.decimal)
    print_checks(necessary_condition_report(inv))
    return EXIT_OK


def _print_invariants(inv, decimal) -> None:
    print(f"c1^2 = {inv.c1sq}")
    print(f"c2 = {inv.c2}")
    print(f"chi = {fmt(inv.chi, decimal)}")
    print(f"signature = {fmt(inv.signature, decimal)}")
    if inv.c2:
        print(f"slope = {fmt(inv.slope, decimal)}")
    print(f"pi1 = {inv.pi1}")


def _family_params(args) -> FamilyParams:
    return FamilyParams(args.variant, args.alpha, args.beta, args.d, args.p)


def cmd_family(args) -> int:
    report = build_family(_family_params(args))
    if args.json:
        emit_json(report.to_dict())
        return EXIT_OK
    pr = report.params
    print(f"{pr.variant} alpha={pr.alpha} beta={pr.beta} d={pr.d} p={pr.p}  n={report.n}  m={pr.degree}")
    print(f"nodes t2 = {report.census.total}")
    for q, cnt in report.census.by_type.items():
        print(f"  type 1/{pr.degree}(1,{q}): {cnt}")
    _print_invariants(report.invariants, args.decimal)
    print(f"limit slope = {fmt(report.limit_slope, args.decimal)}")
    print(f"|slope - limit| = {fmt(report.slope_gap, args.decimal)}")
    if args.verbose:
        print_checks(report.checks)
    else:
        print(f"checks: {len(report.checks)} PASS")
    return EXIT_OK


def cmd_target(args) -> int:
    res = target_slope(
        args.variant,
        args.r,
        args.eps,
        d=args.d,
        prime_ceiling=args.prime_ceiling,
        max_denominator=args.max_denominator,
    )
    if args.json:
        emit_json({
            "target": dump_num(args.r),
            "eps": dump_num(args.eps),
            "params": res.params.to_dict(),
            "slope": dump_num(res.slope),
            "gap": dump_num(res.gap),
            "limit_slope": dump_num(res.inversion.achieved),
            "primes_tried": list(res.primes_tried),
            "invariants": res.report.invariants.to_dict(),
        })
        return EXIT_OK
    pr = res.params
    digits = 12 if args.decimal is None else args.decimal
    print(f"{pr.variant} alpha={pr.alpha} beta={pr.beta} d={pr.d} p={pr.p}")
    print(f"c1^2 = {res.report.invariants.c1sq}")
    print(f"c2 = {res.report.invariants.c2}")
    print(f"slope = {format_decimal(res.slope, digits)}")
    print(f"|slope - r| = {format_decimal(res.gap, digits)}")
    return EXIT_OK


def cmd_base_change(args) -> int:
    report = build_family(FamilyParams(NONSPIN, args.alpha, args.beta, args.d, args.p))
    inv = genus_base_change(report, args.q)
    checks = necessary_condition_report(inv)
    if args.json:
        out = inv.to_dict()
        out["fiber_genus"] = fiber_genus(report.params)
        out["params"] = report.params.to_dict()
        out["q"] = args.q
        emit_json(out)
    else:
        print(f"fibre genus g = {fiber_genus(report.params)}")
        _print_invariants(inv, args.decimal)
        print_checks(checks)
    if not all(checks.values()):
        bad = next(k for k, v in checks.items() if not v)
        raise InconsistencyError(bad, f"after base change q={args.q}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# grids: geography and sweep
# ---------------------------------------------------------------------------


def grid_from_args(args) -> List[FamilyParams]:
    """Explicit tuples, then tuples from a grid file, then the product flags."""
    out: List[FamilyParams] = []
    for t in args.tuple or ():
        out.append(params_from_fields(t.replace(",", " ").split()))
    if args.grid:
        for line in Path(args.grid).read_text().splitlines():
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if line:
                out.append(params_from_fields(line.split()))
    if args.variant:
        primes = list(args.p or [])
        if args.first_primes:
            primes += primes_from(5, args.first_primes)
        if not primes:
            raise DomainError("--variant needs --p or --first-primes")
        for variant, a, b, d, p in itertools.product(
            args.variant, args.alpha or [1], args.beta or [0], args.d or [None], primes
        ):
            if d is None:
                d = 1 if variant != NONSPIN else 2
            # skip the corners the non-spin constraint 3 <= 2d <= p rules out
            if variant == NONSPIN and not 3 <= 2 * d <= p:
                continue
            out.append(FamilyParams(variant, a, b, d, p))
    return out


def _point(params: FamilyParams) -> GeographyPoint:
    inv = build_family(params).invariants
    return GeographyPoint(params, inv.c1sq, inv.c2)


def compute_points(grid: Sequence[FamilyParams], jobs: int = 1) -> List[GeographyPoint]:
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_point, grid))
    return [_point(pr) for pr in grid]


def cmd_geography(args) -> int:
    points = compute_points(grid_from_args(args), args.jobs)
    svg, csv_ = svg_text(points, log=args.log), csv_text(points)
    if not args.out and not args.csv:
        sys.stdout.write(csv_)
    if args.out:
        write_text(args.out, svg)
    if args.csv:
        write_text(args.csv, csv_)
    return EXIT_OK


def cmd_sweep(args) -> int:
    points = compute_points(grid_from_args(args), args.jobs)
    if args.format == "csv":
        text = csv_text(points)
    else:
        text = json.dumps([
            {
                "params": pt.params.to_dict(),
                "c1sq": pt.c1sq,
                "c2": pt.c2,
                "slope": dump_num(pt.slope),
            }
            for pt in points
        ], indent=2) + "\n"
    write_text(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_family_args(p, with_variant=True) -> None:
    if with_variant:
        p.add_argument("variant", choices=VARIANTS)
    p.add_argument("alpha", type=positive_int)
    p.add_argument("beta", type=positive_int)
    p.add_argument("d", type=positive_int)
    p.add_argument("p", type=positive_int)


def _add_grid_args(p) -> None:
    g = p.add_argument_group("grid")
    g.add_argument("--tuple", action="append", metavar="V,A,B,D,P", help="one parameter tuple; repeatable")
    g.add_argument("--grid", metavar="FILE", help="file with one 'variant alpha beta d p' per line")
    g.add_argument("--variant", action="append", choices=VARIANTS, help="product grid: variants")
    g.add_argument("--alpha", type=int_list, help="product grid: e.g. 1,2")
    g.add_argument("--beta", type=int_list)
    g.add_argument("--d", type=int_list)
    g.add_argument("--p", type=int_list, help="explicit primes, e.g. 5,7,11")
    g.add_argument("--first-primes", type=positive_int, metavar="K", help="add the first K primes >= 5")
    p.add_argument("--jobs", type=positive_int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--decimal", type=positive_int, metavar="N", help="print N correctly rounded digits")
    common.add_argument("--json", action="store_true", help="emit JSON")

    ap = _Parser(prog="geolab", description="Exact Chern invariants of cyclic root-cover families.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dedekind", parents=[common], help="Dedekind sum s(q, m)")
    p.add_argument("q", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--naive", action="store_true", help="use the defining O(m) sum")
    p.set_defaults(func=cmd_dedekind)

    p = sub.add_parser("hj", parents=[common], help="Hirzebruch-Jung expansion of m/q")
    p.add_argument("m", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_hj)

    p = sub.add_parser("resolve", parents=[common], help="resolution of 1/m(1,q)")
    p.add_argument("m", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("logchern", parents=[common], help="log Chern numbers of an arrangement summary")
    p.add_argument("file", help="ArrangementSummary JSON, or - for stdin")
    p.add_argument("--blow-up", action="append", metavar="LABEL", help="blow up one singularity class; repeatable")
    p.add_argument("--blow-up-all", action="store_true", help="blow up every class of k-points, k > 2")
    p.add_argument("--adjoin", action="store_true", help="add exceptional curves to the arrangement")
    p.set_defaults(func=cmd_logchern)

    p = sub.add_parser("lattice-check", parents=[common], help="Picard lattice identities")
    p.add_argument("--tuple", action="append", metavar="V,A,B,D,P", help="also check one family tuple")
    p.set_defaults(func=cmd_lattice_check)

    p = sub.add_parser("cover", parents=[common], help="Chern numbers of a root cover")
    p.add_argument("file", help="BranchSummary JSON, or - for stdin")
    p.add_argument("--spin", action="store_true")
    p.add_argument("--pi1", default=TRIVIAL)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("family", parents=[common], help="full pipeline for one tuple")
    _add_family_args(p)
    p.add_argument("-v", "--verbose", action="store_true", help="list every check")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("target", parents=[common], help="find a tuple with slope near r")
    p.add_argument("variant", choices=VARIANTS)
    p.add_argument("r", type=exact)
    p.add_argument("eps", type=exact)
    p.add_argument("--d", type=positive_int)
    p.add_argument("--prime-ceiling", type=positive_int, help="overrides GEOLAB_PRIME_CEILING")
    p.add_argument("--max-denominator", type=positive_int, default=10**9)
    p.set_defaults(func=cmd_target)

    p = sub.add_parser("base-change", parents=[common], help="genus-q base change of a non-spin surface")
    _add_family_args(p, with_variant=False)
    p.add_argument("q", type=positive_int)
    p.set_defaults(func=cmd_base_change)

    p = sub.add_parser("geography", help="CSV and SVG of a grid in the (c2, c1^2) plane")
    _add_grid_args(p)
    p.add_argument("--out", metavar="SVG")
    p.add_argument("--csv", metavar="CSV")
    p.add_argument("--log", action="store_true", help="log-log axes")
    p.set_defaults(func=cmd_geography)

    p = sub.add_parser("sweep", help="invariants over a grid")
    _add_grid_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "target" and args.prime_ceiling is None:
        try:
            args.prime_ceiling = prime_ceiling_from_env()
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
    try:
        return args.func(args)
    except InconsistencyError as exc:
        print(f"identity failed: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
