import dataclasses
import io
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fakeclass.exactnum import factor
from fakeclass.fieldsdb import (DatabaseError, FIELD_MINIMA_COMPLEX, FIELD_MINIMA_REAL,
                                load_database, regulator_ratio_bound, resolve_field, h_torsion)

# minimum |disc| per degree, copied from the published table
TABLE_REAL = {2: 5, 3: 49, 4: 725, 5: 14641, 6: 300125, 7: 20134393, 8: 282300416}
TABLE_COMPLEX = {2: 3, 4: 117, 6: 9747, 8: 1257728}


def test_minima_constants_match_table():
    assert {d: v for d, v in FIELD_MINIMA_REAL.items() if d > 1} == TABLE_REAL
    assert FIELD_MINIMA_COMPLEX == TABLE_COMPLEX


def test_record_invariants(db):
    for r in db:
        assert r.r1 + 2 * r.r2 == r.degree
        if r.degree > 1:
            assert r.abs_disc > 1
        assert r.class_number == (1 if not r.class_group else math.prod(r.class_group))
        if r.abelian:
            assert len(r.characters) == r.degree
        for s in r.subfields:
            k = db.get(s)
            assert r.degree % k.degree == 0 and k.degree < r.degree
            # a subfield discriminant divides into D_l with D_k^[l:k] | D_l
            assert r.abs_disc % k.abs_disc ** (r.degree // k.degree) == 0


def test_minima_attained(db):
    seen = set()
    for r in db:
        if r.degree == 1:
            continue
        table = TABLE_REAL if r.totally_real else TABLE_COMPLEX if r.totally_complex else None
        if table is None:
            continue
        assert r.abs_disc >= table[r.degree], r.label
        seen.add((r.totally_real, r.degree))
    for real, d in seen:
        sig = (d, 0) if real else (0, d // 2)
        table = TABLE_REAL if real else TABLE_COMPLEX
        assert min(r.abs_disc for r in db.fields_of_degree(d, sig)) == table[d]


def test_lookups(db):
    (l144,) = db.fields_with(4, (0, 2), 144)
    assert list(l144.poly) == [1, 0, -1, 0, 1]
    assert db.fields_with(4, (0, 2), 288) == []
    assert db.fields_with(4, (0, 2), 117)
    assert db.fields_with(4, (0, 2), 169) == [] and db.fields_with(4, (0, 2), 338) == []
    (k,) = db.fields_with(2, (2, 0), 5)
    assert k is resolve_field(db, "Q-sqrt5")


def test_quadratic_extensions(db):
    k = resolve_field(db, "quartic-1125")
    (ell,) = db.quadratic_extensions_of(k, True, 1576875)
    assert ell.abs_disc == 1265625 and ell is resolve_field(db, "Q-zeta15")
    sqrt5 = resolve_field(db, "Q-sqrt5")
    assert [r.abs_disc for r in db.quadratic_extensions_of(sqrt5, True, 400)] == [125, 225, 400]
    assert db.quadratic_extensions_of(resolve_field(db, "Q-sqrt2"), True, 200) == []


def test_h_torsion(db):
    Q = resolve_field(db, "Q")
    assert h_torsion(Q, 5) == 1
    rec = next(r for r in db if r.class_group == (3,))
    assert h_torsion(rec, 15) == 3 and h_torsion(rec, 5) == 1


@given(st.lists(st.integers(min_value=1, max_value=60), max_size=4), st.integers(min_value=1, max_value=60))
def test_h_torsion_is_gcd_product(db, cg, n):
    fake = dataclasses.replace(resolve_field(db, "Q"), class_group=tuple(cg))
    want = 1
    for m in cg:
        # count x in Z/m with n x = 0
        want *= sum(1 for x in range(m) if n * x % m == 0)
    assert h_torsion(fake, n) == want


def test_regulator_bounds():
    assert regulator_ratio_bound(4, 117) == Fraction("0.09058")
    assert regulator_ratio_bound(4, 400) == Fraction(1, 8)
    assert regulator_ratio_bound(6, -9747) == 0
    assert regulator_ratio_bound(6, -16807) == Fraction(1, 8)


def test_resolve_names(db):
    assert resolve_field(db, "Q").degree == 1
    assert resolve_field(db, "Q-sqrt-7").disc == -7
    assert resolve_field(db, "cubic-49").abs_disc == 49
    assert resolve_field(db, "Q-zeta5").abs_disc == 125
    with pytest.raises(KeyError):
        resolve_field(db, "Q-sqrt-9999991")


def test_load_errors_and_empty():
    assert len(load_database(io.StringIO(""))) == 0
    with pytest.raises(DatabaseError, match="line 1"):
        load_database(io.StringIO("{not json}\n"))
    bad = {"label": "x", "degree": 2, "r1": 2, "r2": 1, "disc": 5, "class_group": [], "poly": [-1, -1, 1],
           "abelian": False, "subfields": []}
    with pytest.raises(DatabaseError, match="line 1"):
        load_database(io.StringIO(json.dumps(bad) + "\n"))
    with pytest.raises(DatabaseError):
        load_database("/nonexistent/fields.jsonl")


def test_conductor_is_lcm_of_character_moduli(db):
    for r in db:
        if r.abelian and r.degree > 1:
            lcm = 1
            for c in r.characters:
                lcm = lcm * c.modulus // math.gcd(lcm, c.modulus)
            assert lcm == r.conductor, r.label
            # conductor-discriminant formula
            assert r.abs_disc == math.prod(c.modulus for c in r.characters), r.label
            assert all(p in factor(r.conductor).primes for p in factor(r.abs_disc).primes)
