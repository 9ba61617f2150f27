"""Acceptance criteria 1-9, one test each.

Every test records a "PASS/FAIL criterion k: ..." line; pytest prints them in
an "acceptance criteria" section at the end of the run, and running this file
directly prints them too.
"""
from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import properties  # noqa: E402
from fakeclass.analytic import DEFAULT_PRECISION, Verdict, certify_greater_than, certify_less_than  # noqa: E402
from fakeclass.bounds import d_bound, f_bound, lambda_bound  # noqa: E402
from fakeclass.classifier import (BOUND_FUNCTIONS, CaseVerdict, Classifier, compute_R, covolume,  # noqa: E402
                                  euler_characteristic, numerator_check, verify_ledger)
from fakeclass.fieldsdb import bundled_database, resolve_field  # noqa: E402
from fakeclass.localfactors import (LocalDatum, ParahoricType, SplitType,  # noqa: E402
                                    e_prime_inner_form)
from fakeclass.lvalues import dedekind_zeta_negative, hecke_L_relative  # noqa: E402
from fakeclass.tables import (DD_TABLE, F_TABLE, INLINE_CLAIMS, LAMBDA_TABLE,  # noqa: E402
                              PRINTED_LVALUES, QUARTIC_PAIRS)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = {}

F = Fraction
_RUN = {}


def record(k: int, ok: bool, detail: str) -> bool:
    ACCEPTANCE_LINES[k] = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    return ok


def _db():
    return bundled_database()


def _full_run():
    if "c" not in _RUN:
        c = Classifier(_db())
        _RUN["survivors"] = c.run_all()
        _RUN["existence"] = c.verify_existence()
        _RUN["c"] = c
    return _RUN["c"], _RUN["survivors"], _RUN["existence"]


def _prod(d: dict) -> int:
    out = 1
    for p, e in d.items():
        out *= p**e
    return out


# ---------------------------------------------------------------------------

def criterion_1() -> bool:
    db = _db()
    good = total = 0
    for kname, lname, _, zetas, Ls in PRINTED_LVALUES:
        k, ell = resolve_field(db, kname), resolve_field(db, lname)
        for j, want in enumerate(zetas, 1):
            good += dedekind_zeta_negative(k, 1 - 2 * j) == want
            total += 1
        for j, want in enumerate(Ls, 1):
            good += hecke_L_relative(k, ell, -2 * j) == want
            total += 1
    proof = (good, total)
    good = total = 0
    for kl, ll, printed, (num, den) in QUARTIC_PAIRS:
        k, ell = db.get(kl), db.get(ll)
        got = [dedekind_zeta_negative(k, -1), dedekind_zeta_negative(k, -3),
               hecke_L_relative(k, ell, -2), hecke_L_relative(k, ell, -4)]
        good += sum(g == w for g, w in zip(got, printed))
        good += compute_R(5, k, ell) == F(_prod(num), _prod(den))
        total += 5
    table = (good, total)
    ok = proof == (24, 24) and table == (40, 40)
    return record(1, ok, f"exact L-values: {proof[0]}/{proof[1]} proof values, "
                         f"{table[0]}/{table[1]} quartic-table values (zeta, L and R columns)")


def criterion_2() -> bool:
    db = _db()
    good = 0
    for kl, ll, _, (num, den) in QUARTIC_PAIRS:
        R = compute_R(5, db.get(kl), db.get(ll))
        chk = numerator_check(R, 5)
        witness = min(p for p in num if 5 % p)
        good += R == F(_prod(num), _prod(den)) and not chk.passed and chk.witness == witness
    return record(2, good == 8, f"{good}/8 table R values exact and failing the numerator check "
                                f"with the printed witness prime")


def criterion_3() -> bool:
    db = _db()
    v = LocalDatum(2, SplitType.SPLIT, 5, ParahoricType.MAXIMAL_INNER)
    e = v.e_prime(5)
    mu = covolume(5, resolve_field(db, "Q"), resolve_field(db, "Q-sqrt-7"), [v])
    return record(3, e == 315 and mu == 1, f"e' = {e}, covolume(5, Q, Q(sqrt-7), q=2 d=5) = {mu}")


def criterion_4() -> bool:
    db = _db()
    cases = [("Q-sqrt5", "Q-sqrt5-sqrt-3", 4, 3), ("Q-sqrt2", "4.0.1088.2", 2, 9),
             ("Q-sqrt6", "Q-sqrt6-sqrt-3", 3, 3)]
    got = []
    for kname, lname, q, _ in cases:
        R = compute_R(3, resolve_field(db, kname), resolve_field(db, lname))
        e = e_prime_inner_form(3, q, 3)
        assert e == (q - 1) ** 2 * (q + 1)
        got.append(euler_characteristic(R * e, 3, 1, 2))
    want = [c[3] for c in cases]
    return record(4, got == want, "chi = " + ", ".join(f"{g}" for g in got)
                  + " for the Q(sqrt5), Q(sqrt2), Q(sqrt6) pairs (want 3, 9, 3)")


def criterion_5() -> bool:
    p = DEFAULT_PRECISION
    verdicts = [certify_less_than(f_bound(n, d, delta, p), F(c)) for n, d, delta, c in F_TABLE]
    verdicts += [certify_less_than(d_bound(n, delta, p), F(c)) for n, delta, c in DD_TABLE]
    verdicts += [certify_less_than(lambda_bound(n, h, p), F(c)) for n, h, c in LAMBDA_TABLE]
    cert = sum(v is Verdict.CERTIFIED for v in verdicts)
    und = sum(v is Verdict.UNDECIDED for v in verdicts)
    return record(5, cert == len(verdicts), f"{cert}/{len(verdicts)} cells of the f, dd and lambda tables "
                                            f"certified at {p} digits, {und} undecided")


def criterion_6() -> bool:
    bad = []
    for expr, args, power, rel, rhs in INLINE_CLAIMS:
        x = BOUND_FUNCTIONS[expr](*[a if isinstance(a, int) else F(a) for a in args])
        x = x.ipow(power)
        v = (certify_less_than if rel == "<" else certify_greater_than)(x, F(rhs))
        if v is not Verdict.CERTIFIED:
            bad.append(f"{expr}({','.join(map(str, args))}) {rel} {rhs} is {v} (value {x.lo_str(8)})")
    n = len(INLINE_CLAIMS)
    return record(6, not bad, f"{n - len(bad)}/{n} inline claims certified"
                  + ("; " + "; ".join(bad) if bad else ""))


def criterion_7() -> bool:
    c, survivors, _ = _full_run()
    bad = verify_ledger(c.ledger, _db())
    elim = [e for e in c.ledger.entries if e.verdict is CaseVerdict.ELIMINATED]
    ok = survivors == [(5, 7, (2,))] and not bad and all(e.witness for e in elim)
    return record(7, ok, f"survivors {survivors}; {len(elim)} eliminations, "
                         f"{len(elim) - len(bad)} with re-checked witnesses")


def criterion_8() -> bool:
    c, _, _ = _full_run()
    with_R = [e for e in c.ledger.entries if "R" in e.values]
    checked = [e for e in with_R if "R_in_positive_side" in e.values]
    ok_entries = [e for e in checked
                  if e.values["R_in_positive_side"]
                  and F(e.values["R_positive_side"]["hi"]) - F(e.values["R_positive_side"]["lo"]) < F(1, 10**20)]
    # a pair is skipped when its quadratic extension is non-abelian: no certified
    # evaluator for its L-function at positive integers exists here
    skipped = [e.case_id for e in with_R if e not in checked]
    ok = len(ok_entries) == len(checked) and not skipped
    return record(8, ok, f"{len(ok_entries)}/{len(with_R)} pairs have R inside a positive-side interval "
                         f"of width < 1e-20; not computed: {', '.join(skipped) or 'none'}")


def criterion_9() -> bool:
    try:
        results = properties.run_all(_db())
    except AssertionError as e:
        return record(9, False, f"property suite failed: {e}")
    return record(9, True, f"{len(results)} property suites: " + "; ".join(name for name, _ in results))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k):
    ok = CRITERIA[k - 1]()
    print(ACCEPTANCE_LINES[k])
    assert ok, ACCEPTANCE_LINES[k]


if __name__ == "__main__":
    failed = 0
    for k, fn in enumerate(CRITERIA, 1):
        failed += not fn()
        print(ACCEPTANCE_LINES[k], flush=True)
    sys.exit(1 if failed else 0)
