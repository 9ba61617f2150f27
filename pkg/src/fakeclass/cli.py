"""Command-line entry point.

    fakeclass classify --all | --n N [--db PATH] [--precision D] [--out LEDGER.json]
    fakeclass lvalue --field NAME | --disc D --degree d  --at S [--over BASE]
    fakeclass covolume --n N --k K --l L [--local q:d ...] [--m M] [--r R]
    fakeclass bound EXPR ARG... [--lt C | --gt C]
    fakeclass verify-tables [--db PATH] [--precision D]

Exit codes: 0 success, 1 a table or claim fails, 2 usage or database error,
3 an inequality stays undecided, 4 a field outside the supported class.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import UndecidedError, UnsupportedField, __version__
from .analytic import DEFAULT_PRECISION, Verdict, certify_greater_than, certify_less_than
from .classifier import (BOUND_FUNCTIONS, CaseVerdict, Classifier, ClassifierConfig, compute_R,
                         covolume, euler_characteristic)
from .exactnum import format_rational
from .fieldsdb import DatabaseError, load_database, resolve_field
from .localfactors import LocalDatum, ParahoricType, SplitType
from .lvalues import dedekind_zeta_negative, hecke_L_relative
from .tables import Status, TableResult, run_tables

MIN_PRECISION = 20
EXIT_FAIL, EXIT_DB, EXIT_UNDECIDED, EXIT_UNSUPPORTED = 1, 2, 3, 4


def _precision(text: str) -> int:
    p = int(text)
    if p < MIN_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PRECISION} digits")
    return p


def _odd_n(text: str) -> int:
    n = int(text)
    if n < 5 or n % 2 == 0:
        raise argparse.ArgumentTypeError(f"n must be odd and at least 5, got {n}")
    return n


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _bound_arg(text: str):
    return int(text) if text.lstrip("-").isdigit() else _rational(text)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--db", metavar="PATH", help="field database (JSON Lines); default $FAKECLASS_DB or the bundled snapshot")
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION, metavar="DIGITS",
                   help=f"working precision in decimal digits (default {DEFAULT_PRECISION}, minimum {MIN_PRECISION})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fakeclass", description="Certified classification pipeline for arithmetic fake projective spaces and Grassmannians.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="run the elimination pipeline and write the ledger")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=_odd_n, help="a single odd n >= 5")
    g.add_argument("--all", action="store_true", help="every odd n >= 5, plus the existence checks")
    _common(p)
    p.add_argument("--out", metavar="PATH", help="write the JSON ledger here")

    p = sub.add_parser("lvalue", help="exact zeta or relative L-value at a non-positive integer")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--field", metavar="NAME", help='label or name such as "Q-sqrt5", "cubic-49", "Q-zeta15"')
    g.add_argument("--disc", type=int, metavar="D", help="signed discriminant (with --degree)")
    p.add_argument("--degree", type=int)
    p.add_argument("--over", metavar="BASE", help="print L_{field|BASE}(s) instead of the Dedekind zeta value")
    p.add_argument("--at", type=int, required=True, metavar="S")
    p.add_argument("--db", metavar="PATH")

    p = sub.add_parser("covolume", help="R, the covolume and the Euler characteristic of a datum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", required=True, metavar="FIELD")
    p.add_argument("--l", required=True, metavar="FIELD")
    p.add_argument("--local", action="append", default=[], metavar="q:d",
                   help="inner-form place with residue size q and division degree d (repeatable)")
    p.add_argument("--m", type=int, default=1, help="Grassmannian index (1: projective space)")
    p.add_argument("--r", type=int, default=1, help="number of noncompact factors")
    p.add_argument("--db", metavar="PATH")

    p = sub.add_parser("bound", help="certified enclosure of a bound function")
    p.add_argument("expr", choices=sorted(BOUND_FUNCTIONS))
    p.add_argument("args", nargs="+", type=_bound_arg)
    p.add_argument("--power", type=int, default=1)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lt", type=_rational, metavar="C", help="certify value < C")
    g.add_argument("--gt", type=_rational, metavar="C", help="certify value > C")
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION, metavar="DIGITS")

    p = sub.add_parser("verify-tables", aliases=["verify-paper"],
                       help="recompute every printed value and bound claim")
    _common(p)
    return ap


# ---------------------------------------------------------------------------

def _fmt_a(a: int) -> str:
    return f"Q(sqrt(-{a}))"


def _summary_n(c: Classifier, n: int) -> list[str]:
    lg = c.ledger
    out = []
    degree = [e for e in lg.stage("degree") if e.case_id.startswith(f"degree/n={n}/")]
    elim = [e.case_id.split("/")[2] for e in degree if e.case_id.count("/") == 2
            and e.verdict is CaseVerdict.ELIMINATED]
    k_q = all(e.verdict is CaseVerdict.ELIMINATED for e in degree if e.case_id.count("/") == 2
              and not e.case_id.endswith("/d=1"))
    out.append(f"n={n}: degree stage: {', '.join(elim)} eliminated; k=Q forced" if k_q
               else f"n={n}: degree stage: k=Q not forced")
    field = lg.get(f"field/n={n}")
    after = field.values.get("a_after_lambda", [])
    if after:
        out.append(f"n={n}: field stage: a in {{{','.join(map(str, field.values['a_after_dd']))}}} after dd; "
                   f"a in {{{','.join(map(str, after))}}} after lambda")
        surv = [e for e in lg.stage("cocompact") if e.case_id.startswith(f"cocompact/n={n}/")
                and e.verdict is CaseVerdict.SURVIVES]
        if surv:
            for e in surv:
                out.append(f"n={n}: cocompact stage: {e.case_id.split('=')[-1]} survives with T0={{{','.join(map(str, e.values['T0']))}}}")
        else:
            out.append(f"n={n}: cocompact stage: all eliminated")
        out.append(f"n={n}: k=Q forced; a in {{{','.join(map(str, after))}}} after lambda; "
                   + ("all eliminated" if not surv else f"{len(surv)} survivor(s)"))
    else:
        out.append(f"n={n}: field stage: no imaginary quadratic field fits; all eliminated")
    return out


def cmd_classify(args) -> int:
    db = load_database(args.db)
    c = Classifier(db, ClassifierConfig(args.precision))
    if args.all:
        survivors = c.run_all()
        existence = c.verify_existence()
        ns = range(5, 18, 2)
    else:
        survivors = c.run([args.n])
        existence = None
        ns = [args.n]
    lines = []
    for n in ns:
        lines += _summary_n(c, n)
    if args.all:
        lines.append("n>=19: dd(n,2) < 3, no field")
        for e in c.ledger.stage("existence"):
            v = e.values
            chi = v.get("chi") or f"{v.get('chi_P4')} (P4), {v.get('chi_Gr25')} (Gr(2,5))"
            lines.append(f"existence: {e.case_id.split('/', 1)[1]}: mu={v['mu']}, chi={chi}")
        lines.append(f"constructions: {existence['fake_P4']} fake P4, {existence['fake_Gr25']} fake Gr(2,5), "
                     f"{existence['fake_P2xP2']} fake P2xP2")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(c.ledger.dumps())
        lines.append(f"ledger: {len(c.ledger.entries)} entries written to {args.out}")
    if survivors:
        lines.append("Survivors: " + "; ".join(
            f"n={n}, l={_fmt_a(a)}, T0={{{','.join(map(str, T0))}}}" for n, a, T0 in survivors))
    else:
        lines.append("Survivors: none")
    print("\n".join(lines))
    return 0


def cmd_lvalue(args) -> int:
    db = load_database(args.db)
    if args.field:
        K = resolve_field(db, args.field)
    else:
        if args.degree is None:
            raise SystemExit("fakeclass lvalue: --disc needs --degree")
        cands = [r for r in db.fields_of_degree(args.degree) if r.disc == args.disc]
        if len(cands) != 1:
            raise KeyError(f"{len(cands)} fields of degree {args.degree} with discriminant {args.disc}")
        K = cands[0]
    if args.at > 0:
        raise SystemExit("fakeclass lvalue: --at must be a non-positive integer")
    if args.over:
        val = hecke_L_relative(resolve_field(db, args.over), K, args.at, db)
    else:
        val = dedekind_zeta_negative(K, args.at)
    print(format_rational(val))
    return 0


def cmd_covolume(args) -> int:
    db = load_database(args.db)
    k, ell = resolve_field(db, args.k), resolve_field(db, args.l)
    local = []
    for spec in args.local:
        q, d = (int(x) for x in spec.split(":"))
        local.append(LocalDatum(q, SplitType.SPLIT, d, ParahoricType.MAXIMAL_INNER))
    R = compute_R(args.n, k, ell)
    mu = covolume(args.n, k, ell, local)
    chi = euler_characteristic(mu, args.n, args.m, args.r)
    print(f"R = {format_rational(R)}")
    for v in local:
        print(f"e'(q={v.q}, d={v.inner_degree}) = {v.e_prime(args.n)}")
    print(f"mu = {format_rational(mu)}")
    print(f"chi = {format_rational(chi)}")
    return 0


def cmd_bound(args) -> int:
    x = BOUND_FUNCTIONS[args.expr](*args.args, precision=args.precision)
    if args.power != 1:
        x = x.ipow(args.power)
    print(f"[{x.lo_str(args.precision)}, {x.hi_str(args.precision)}]")
    if args.lt is None and args.gt is None:
        return 0
    rel, c = ("<", args.lt) if args.lt is not None else (">", args.gt)
    v = (certify_less_than if rel == "<" else certify_greater_than)(x, c)
    print(f"{args.expr} {rel} {format_rational(c)}: {v}")
    return {Verdict.CERTIFIED: 0, Verdict.REFUTED: EXIT_FAIL, Verdict.UNDECIDED: EXIT_UNDECIDED}[v]


def cmd_verify(args) -> int:
    db = load_database(args.db)

    def show(t: TableResult):
        print(f"[{t.status}] {t.name} ({len(t.rows)} rows)")
        for r in t.rows:
            if r.status is not Status.PASS:
                print(f"    {r.status}: {r.label}  {r.detail}")

    results = run_tables(db, args.precision, show)
    failed = [t for t in results if t.status is Status.FAIL]
    undecided = [t for t in results if t.status is Status.UNDECIDED]
    if not failed and not undecided:
        print(f"ALL {len(results)} TABLES PASS")
        return 0
    first = (failed or undecided)[0]
    print(f"{len(failed)} FAIL, {len(undecided)} UNDECIDED of {len(results)} tables; first: {first.name}")
    return EXIT_FAIL if failed else EXIT_UNDECIDED


COMMANDS = {"classify": cmd_classify, "lvalue": cmd_lvalue, "covolume": cmd_covolume,
            "bound": cmd_bound, "verify-tables": cmd_verify, "verify-paper": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except DatabaseError as e:
        print(f"fakeclass: database error: {e}", file=sys.stderr)
        return EXIT_DB
    except UndecidedError as e:
        print(f"fakeclass: undecided: {e}", file=sys.stderr)
        return EXIT_UNDECIDED
    except UnsupportedField as e:
        print(f"fakeclass: unsupported field: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (KeyError, ValueError) as e:
        print(f"fakeclass: error: {e}", file=sys.stderr)
        return EXIT_DB if isinstance(e, KeyError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
