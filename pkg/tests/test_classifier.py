import io
import json
from fractions import Fraction
from importlib import resources

import pytest

import oracles
from fakeclass.classifier import (CaseVerdict, Classifier, Ledger, LedgerEntry,
                                  compute_R, covolume, euler_characteristic, index_bound,
                                  lhs_cross_check, numerator_check, place_splits, ramified_places,
                                  residue_data, run_cocompact_stage, run_field_stage, StageError,
                                  verify_ledger)
from fakeclass.exactnum import factor
from fakeclass.fieldsdb import DatabaseError, load_database, resolve_field
from fakeclass.localfactors import LocalDatum, ParahoricType, SplitType, e_prime_inner_form
from fakeclass.tables import A_AFTER_DD, A_AFTER_LAMBDA, PRINTED_R, QUARTIC_PAIRS

F = Fraction


def inner(q, d=None, n=5):
    return LocalDatum(q, SplitType.SPLIT, d or n, ParahoricType.MAXIMAL_INNER)


def test_compute_R_examples(db):
    assert compute_R(5, resolve_field(db, "Q-sqrt3"), resolve_field(db, "Q-sqrt-1-sqrt3")) == F(23, 2**11 * 3**5)
    assert compute_R(5, resolve_field(db, "Q-sqrt2"), resolve_field(db, "Q-zeta8")) == F(11 * 19, 2**15)
    Q, l7 = resolve_field(db, "Q"), resolve_field(db, "Q-sqrt-7")
    R = compute_R(5, Q, l7)
    # independent route: Bernoulli oracle for zeta(-1), zeta(-3) and the Kronecker L-values
    want = F(1, 2**4)
    for j in (1, 2):
        want *= oracles.riemann_zeta_negative(1 - 2 * j) * oracles.quadratic_L_negative(-7, -2 * j)
    assert R == want == F(1, 315)


def test_numerator_check_examples():
    r = numerator_check(F(23, 497664), 5)
    assert not r.passed and r.witness == 23
    assert numerator_check(F(1, 315), 5).passed
    r = numerator_check(F(113, 63), 5)
    assert not r.passed and r.witness == 113
    assert numerator_check(F(5**3 * 25, 7), 5).passed


def _prod(d):
    out = 1
    for p, e in d.items():
        out *= p**e
    return out


@pytest.mark.parametrize("key", sorted(PRINTED_R))
def test_printed_R_fails_numerator_check(db, key):
    kname, lname, n = key
    num, den = PRINTED_R[key]
    R = compute_R(n, resolve_field(db, kname), resolve_field(db, lname))
    assert R == F(_prod(num), _prod(den))
    r = numerator_check(R, n)
    assert not r.passed and r.witness in num and n % r.witness


@pytest.mark.parametrize("kl,ll,printed,R", QUARTIC_PAIRS)
def test_quartic_R_fails_numerator_check(db, kl, ll, printed, R):
    num, den = R
    got = compute_R(5, db.get(kl), db.get(ll))
    assert got == F(_prod(num), _prod(den))
    # R from the printed values directly
    z1, z3, L2, L4 = printed
    assert got == F(1, 2**8) * z1 * z3 * L2 * L4
    r = numerator_check(got, 5)
    assert not r.passed and r.witness == min(p for p in num if p != 5)


def test_covolume_examples(db):
    Q, l7 = resolve_field(db, "Q"), resolve_field(db, "Q-sqrt-7")
    assert covolume(5, Q, l7, [inner(2)]) == 1
    assert covolume(5, Q, l7) == F(1, 315)
    k5 = resolve_field(db, "Q-sqrt5")
    l = resolve_field(db, "Q-sqrt5-sqrt-3")
    assert compute_R(3, k5, l) == F(1, 135)
    assert covolume(3, k5, l, [inner(4, 3, 3)]) == F(1, 3)
    with pytest.raises(ValueError):
        covolume(5, Q, l7, [LocalDatum(2, SplitType.SPLIT, 1, ParahoricType.OTHER)])


def test_euler_characteristic_examples():
    assert euler_characteristic(1, 5, 1, 1) == 5
    assert euler_characteristic(1, 5, 2, 1) == 10
    assert euler_characteristic(F(1, 3), 3, 1, 2) == 3
    assert euler_characteristic(1, 3, 1, 2) == 9


def test_index_bound_examples():
    assert index_bound(5, 1, 1, 1) == 25
    assert index_bound(3, 2, 0, 1) == 9
    assert index_bound(5, 1, 2, 3) == 375


def test_product_pairs_independently(db):
    """chi for the three real-quadratic pairs from the exact R and e' = (q-1)^2 (q+1)."""
    cases = [("Q-sqrt5", "Q-sqrt5-sqrt-3", 4, 3), ("Q-sqrt2", "4.0.1088.2", 2, 9),
             ("Q-sqrt6", "Q-sqrt6-sqrt-3", 3, 3)]
    for kname, lname, q, chi in cases:
        k, ell = resolve_field(db, kname), resolve_field(db, lname)
        R = compute_R(3, k, ell)
        e = e_prime_inner_form(3, q, 3)
        assert e == (q - 1) ** 2 * (q + 1)
        assert euler_characteristic(R * e, 3, 1, 2) == chi, kname
    # for Q(sqrt6) the residue field at the place above 3 has 3 elements (3 | D_k) and it splits
    k6, l6 = resolve_field(db, "Q-sqrt6"), resolve_field(db, "Q-sqrt6-sqrt-3")
    assert residue_data(k6, 3) == (3, 1) and place_splits(k6, l6, 3)
    assert ramified_places(k6, l6) == []
    assert compute_R(3, k6, l6) == F(1, 48)


def test_field_stage(db):
    assert sorted(run_field_stage(9, db)) == [1, 3, 7]
    assert run_field_stage(17, db) == []
    assert sorted(run_field_stage(5, db)) == [1, 2, 3, 7, 11, 15]


def test_cocompact_examples(db):
    c = Classifier(db)
    out = c.run_cocompact_stage([(5, 7), (5, 1), (15, 3)])
    assert out == [(5, 7, (2,))]
    e = c.ledger.get("cocompact/n=5/a=1")
    assert e.verdict is CaseVerdict.ELIMINATED and "L(5,5,5,1)" in e.values
    assert F(e.values["L(5,5,5,1)"]["hi"]) < 4
    assert run_cocompact_stage([(5, 2)], db) == []


@pytest.fixture(scope="module")
def full_run(db):
    c = Classifier(db)
    survivors = c.run_all()
    existence = c.verify_existence()
    return c, survivors, existence


def test_survivors(full_run):
    c, survivors, _ = full_run
    assert survivors == [(5, 7, (2,))]
    assert [e.case_id for e in c.ledger.survivors()] == ["cocompact/n=5/a=7"]


def test_existence(full_run):
    _, _, ex = full_run
    assert (ex["fake_P4"], ex["fake_Gr25"], ex["fake_P2xP2"]) == (4, 4, 5)
    assert [ex["2.2.5.1"], ex["2.2.8.1"], ex["2.2.24.1"]] == [3, 9, 3]
    e = full_run[0].ledger.get("existence/n=5/k=1.1.1.1/l=2.0.7.1")
    assert e.values["mu"] == "1" and e.values["chi_P4"] == "5" and e.values["chi_Gr25"] == "10"


def test_every_elimination_rechecks(full_run, db):
    c = full_run[0]
    assert all(e.witness for e in c.ledger.entries if e.verdict is CaseVerdict.ELIMINATED)
    assert verify_ledger(c.ledger, db) == []


def test_field_stage_lists(full_run):
    led = full_run[0].ledger
    for n, want in A_AFTER_DD.items():
        assert led.get(f"field/n={n}").values["a_after_dd"] == want
    for n, want in A_AFTER_LAMBDA.items():
        assert led.get(f"field/n={n}").values["a_after_lambda"] == want


def test_ledger_completeness(full_run):
    led = full_run[0].ledger
    ids = [e.case_id for e in led.entries]
    assert len(ids) == len(set(ids))
    # every (n, a) pair that passes the dd bound has exactly one verdict
    for n, alist in A_AFTER_DD.items():
        for a in alist:
            hits = [i for i in ids if i in (f"field/n={n}/a={a}", f"cocompact/n={n}/a={a}")]
            assert len(hits) == 1, (n, a, hits)
    # every odd n from 5 to 17 has a degree verdict for d = 1 and the larger-degree cases
    for n in range(5, 18, 2):
        assert f"degree/n={n}/d=1" in ids
        assert any(i.startswith(f"degree/n={n}/d>=") for i in ids)


def test_lhs_cross_check(full_run, db):
    led = full_run[0].ledger
    checked = [e for e in led.entries if "R_in_positive_side" in e.values]
    assert len(checked) >= 16
    for e in checked:
        assert e.values["R_in_positive_side"] is True, e.case_id
    ok, iv, R = lhs_cross_check(5, resolve_field(db, "Q"), resolve_field(db, "Q-sqrt-7"))
    assert ok and R == F(1, 315) and iv.width() < F(1, 10**20)


def test_ledger_round_trip_and_determinism(full_run, db):
    c = full_run[0]
    text = c.ledger.dumps()
    again = Ledger.from_json(json.loads(text))
    assert again.dumps() == text
    c2 = Classifier(db)
    c2.run_all()
    c2.verify_existence()
    assert c2.ledger.dumps() == text
    with pytest.raises(ValueError):
        Ledger.from_json({"schema_version": "other", "precision": 60, "entries": []})


def test_ledger_rejects_duplicates():
    led = Ledger(60)
    e = LedgerEntry("x", "degree", CaseVerdict.SURVIVES, "r", "c")
    led.add(e)
    with pytest.raises(ValueError):
        led.add(e)


def test_tampered_witness_detected(full_run, db):
    led = Ledger.from_json(json.loads(full_run[0].ledger.dumps()))
    entry = led.get("cocompact/n=5/a=1")
    for w in entry.witness:
        if w["kind"] == "bound":
            w["rhs"] = "1"
    assert verify_ledger(led, db) == ["cocompact/n=5/a=1"]


def test_missing_field_raises(db):
    text = resources.files("fakeclass").joinpath("data/fields.jsonl").read_text()
    lines = [ln for ln in text.splitlines() if json.loads(ln)["label"] != "2.0.7.1"]
    small = load_database(io.StringIO("\n".join(lines) + "\n"))
    with pytest.raises((KeyError, DatabaseError, StageError)):
        Classifier(small).run_all()


def test_factor_of_printed_denominators():
    # the printed denominators are products of small primes only
    for num, den in PRINTED_R.values():
        assert all(p <= 7 for p in den)
        assert factor(_prod(num)).primes == sorted(num)
