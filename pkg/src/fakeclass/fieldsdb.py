"""Number-field knowledge base.

A database is a set of :class:`NumberFieldRecord` values loaded from JSON Lines
(one object per field).  The bundled snapshot covers every lookup the
classification pipeline performs; ``--db PATH`` or the ``FAKECLASS_DB``
environment variable substitute another file.  The module also carries the
tabulated discriminant minima, the degree thresholds derived from Odlyzko's
bounds and the regulator lower bounds of Friedman and Zimmert, all as data.
"""
from __future__ import annotations

import io
import json
import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Optional, Union

from .exactnum import euler_phi, is_squarefree

ENV_VAR = "FAKECLASS_DB"

# min |D_K| over totally real / totally complex fields of degree d
FIELD_MINIMA_REAL = {1: 1, 2: 5, 3: 49, 4: 725, 5: 14641, 6: 300125, 7: 20134393, 8: 282300416}
FIELD_MINIMA_COMPLEX = {2: 3, 4: 117, 6: 9747, 8: 1257728}

# D_k^{1/d} exceeds these constants for totally real k of degree >= key (k != Q)
DEGREE_THRESHOLDS = {2: Fraction("2.23"), 3: Fraction("3.65"), 4: Fraction("5.18"),
                     5: Fraction("6.8"), 9: Fraction("9.1")}

# R/w lower bounds
REG_GENERIC = Fraction(1, 8)
REG_EXCEPTIONS_SEXTIC = (-9747, -10051, -10571, -10816, -11691, -12167)
REG_EXCEPTIONS_QUARTIC = (117, 125, 144)
REG_QUARTIC_UNCONDITIONAL = Fraction("0.09058")
REG_OCTIC_QUOTED = Fraction("0.1482")  # totally complex octics, quoted from Friedman's table
ZIMMERT_FACTOR = Fraction("0.02")
ZIMMERT_EXPONENT = Fraction("0.1")


def regulator_ratio_bound(degree: int, disc: int) -> Fraction:
    """Lower bound for R/w of a field with the given degree and signed
    discriminant: 1/8 except at the nine tabulated exceptions, where the
    unconditional quartic bound is used for quartics and 0 is returned for the
    sextics (no generic bound is claimed there)."""
    if degree == 4 and disc in REG_EXCEPTIONS_QUARTIC:
        return REG_QUARTIC_UNCONDITIONAL
    if degree == 6 and disc in REG_EXCEPTIONS_SEXTIC:
        return Fraction(0)
    return REG_GENERIC


class DatabaseError(Exception):
    """Malformed or unreadable field database."""


@dataclass(frozen=True)
class CharacterRecord:
    """A primitive Dirichlet character: chi(g) = zeta_order^e for each stored
    generator g of (Z/modulus)^*."""

    modulus: int
    order: int
    generator_values: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class RelativeGenerator:
    """The field is base(sqrt(alpha)); alpha's coordinates are in the power
    basis of the base field's stored polynomial."""

    base: str
    alpha: tuple[int, ...]


@dataclass(frozen=True)
class NumberFieldRecord:
    label: str
    degree: int
    r1: int
    r2: int
    disc: int
    class_group: tuple[int, ...]
    poly: tuple[int, ...]
    abelian: bool
    conductor: Optional[int]
    characters: Optional[tuple[CharacterRecord, ...]]
    subfields: tuple[str, ...]
    relative: tuple[RelativeGenerator, ...] = ()

    @property
    def abs_disc(self) -> int:
        return abs(self.disc)

    @property
    def signature(self) -> tuple[int, int]:
        return (self.r1, self.r2)

    @property
    def class_number(self) -> int:
        return math.prod(self.class_group)

    @property
    def totally_real(self) -> bool:
        return self.r2 == 0

    @property
    def totally_complex(self) -> bool:
        return self.r1 == 0

    def __str__(self) -> str:
        return self.label


def h_torsion(record: NumberFieldRecord, n: int) -> int:
    """Order of the n-torsion of the class group: prod gcd(m, n)."""
    return math.prod(math.gcd(m, n) for m in record.class_group)


# ---------------------------------------------------------------------------
# parsing

_REQUIRED = ("label", "degree", "r1", "r2", "disc", "class_group", "poly", "abelian",
             "conductor", "characters", "subfields")


def _need(cond: bool, line: int, key: str, msg: str):
    if not cond:
        raise DatabaseError(f"line {line}: field '{key}': {msg}")


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _parse_record(obj, line: int) -> NumberFieldRecord:
    _need(isinstance(obj, dict), line, "<record>", "expected a JSON object")
    for k in _REQUIRED:
        _need(k in obj, line, k, "missing")
    _need(isinstance(obj["label"], str) and obj["label"], line, "label", "expected a non-empty string")
    for k in ("degree", "r1", "r2", "disc"):
        _need(_is_int(obj[k]), line, k, "expected an integer")
    d, r1, r2 = obj["degree"], obj["r1"], obj["r2"]
    _need(d >= 1, line, "degree", "must be positive")
    _need(r1 >= 0 and r2 >= 0 and r1 + 2 * r2 == d, line, "r2", "signature must satisfy r1 + 2 r2 = degree")
    _need(obj["disc"] != 0, line, "disc", "must be non-zero")
    _need(d == 1 or abs(obj["disc"]) > 1, line, "disc", "|disc| > 1 required for degree > 1")
    _need((-1) ** r2 * obj["disc"] > 0, line, "disc", "sign must be (-1)^r2")
    cg = obj["class_group"]
    _need(isinstance(cg, list) and all(_is_int(m) and m >= 1 for m in cg), line,
          "class_group", "expected a list of positive integers")
    poly = obj["poly"]
    _need(isinstance(poly, list) and len(poly) == d + 1 and all(_is_int(c) for c in poly),
          line, "poly", f"expected {d + 1} integer coefficients")
    _need(poly[-1] != 0, line, "poly", "leading coefficient must be non-zero")
    _need(isinstance(obj["abelian"], bool), line, "abelian", "expected true/false")
    chars = None
    if obj["abelian"]:
        _need(_is_int(obj["conductor"]) and obj["conductor"] >= 1, line, "conductor",
              "abelian fields need a positive conductor")
        raw = obj["characters"]
        _need(isinstance(raw, list) and len(raw) == d, line, "characters",
              f"abelian fields need exactly {d} characters")
        out = []
        for ch in raw:
            _need(isinstance(ch, dict) and _is_int(ch.get("modulus")) and ch["modulus"] >= 1,
                  line, "characters", "each character needs a positive modulus")
            gv = ch.get("generator_values")
            _need(isinstance(gv, list) and all(isinstance(p, list) and len(p) == 2
                                                and all(_is_int(v) for v in p) for p in gv),
                  line, "characters", "generator_values must be [generator, exponent] pairs")
            order = ch.get("order")
            if order is None:  # order omitted: only quadratic (or trivial) characters
                _need(all(e in (0, 1) for _, e in gv), line, "characters",
                      "without an order, exponents must be 0 or 1 (values of -1)")
                order = 2 if any(e for _, e in gv) else 1
            _need(_is_int(order) and order >= 1, line, "characters", "order must be a positive integer")
            out.append(CharacterRecord(ch["modulus"], order, tuple((g, e % order) for g, e in gv)))
        _need(math.lcm(*[c.modulus for c in out]) == obj["conductor"], line, "characters",
              "lcm of character moduli must equal the conductor")
        chars = tuple(out)
    else:
        _need(obj["characters"] is None, line, "characters", "must be null for non-abelian fields")
    subs = obj["subfields"]
    _need(isinstance(subs, list) and all(isinstance(s, str) for s in subs), line, "subfields",
          "expected a list of labels")
    rel = []
    for r in obj.get("relative", []) or []:
        _need(isinstance(r, dict) and isinstance(r.get("base"), str)
              and isinstance(r.get("alpha"), list) and all(_is_int(v) for v in r["alpha"]),
              line, "relative", "expected {base, alpha} objects")
        rel.append(RelativeGenerator(r["base"], tuple(r["alpha"])))
    return NumberFieldRecord(
        label=obj["label"], degree=d, r1=r1, r2=r2, disc=obj["disc"], class_group=tuple(cg),
        poly=tuple(poly), abelian=obj["abelian"], conductor=obj["conductor"], characters=chars,
        subfields=tuple(subs), relative=tuple(rel))


class FieldDatabase:
    """Immutable, indexed collection of field records."""

    def __init__(self, records: Iterable[NumberFieldRecord], source: str = "<memory>"):
        self.source = source
        self._records = tuple(records)
        self._by_label: dict[str, NumberFieldRecord] = {}
        self._by_key: dict[tuple[int, int, int, int], list[NumberFieldRecord]] = {}
        for r in self._records:
            if r.label in self._by_label:
                raise DatabaseError(f"duplicate label {r.label}")
            self._by_label[r.label] = r
            self._by_key.setdefault((r.degree, r.r1, r.r2, r.abs_disc), []).append(r)
        for r in self._records:
            for s in r.subfields:
                sub = self._by_label.get(s)
                if sub is not None and r.degree % sub.degree:
                    raise DatabaseError(f"{r.label}: subfield {s} has degree not dividing {r.degree}")

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def get(self, label: str) -> NumberFieldRecord:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"no field with label {label!r} in {self.source}") from None

    def fields_with(self, degree: int, signature: tuple[int, int], abs_disc: int) -> list[NumberFieldRecord]:
        r1, r2 = signature
        return list(self._by_key.get((degree, r1, r2, abs(abs_disc)), []))

    def fields_of_degree(self, degree: int, signature: Optional[tuple[int, int]] = None,
                         max_abs_disc: Optional[int] = None) -> list[NumberFieldRecord]:
        out = [r for r in self._records if r.degree == degree
               and (signature is None or r.signature == tuple(signature))
               and (max_abs_disc is None or r.abs_disc <= max_abs_disc)]
        return sorted(out, key=lambda r: (r.abs_disc, r.label))

    def contains_subfield(self, ell: NumberFieldRecord, k: NumberFieldRecord) -> bool:
        if k.degree == 1:
            return True
        return k.label in ell.subfields

    def quadratic_extensions_of(self, k: NumberFieldRecord, totally_complex: bool = True,
                                max_abs_disc: Optional[int] = None) -> list[NumberFieldRecord]:
        out = []
        for r in self._records:
            if r.degree != 2 * k.degree or not self.contains_subfield(r, k):
                continue
            if totally_complex and not r.totally_complex:
                continue
            if not totally_complex and not r.totally_real:
                continue
            if max_abs_disc is not None and r.abs_disc > max_abs_disc:
                continue
            out.append(r)
        return sorted(out, key=lambda r: (r.abs_disc, r.label))

    def resolve(self, name: str) -> NumberFieldRecord:
        return resolve_field(self, name)


def _parse_lines(fh: IO[str], source: str) -> FieldDatabase:
    recs = []
    for i, line in enumerate(fh, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise DatabaseError(f"line {i}: invalid JSON ({e.msg})") from None
        recs.append(_parse_record(obj, i))
    return FieldDatabase(recs, source)


def load_database(source: Union[None, str, Path, IO[str]] = None) -> FieldDatabase:
    """Load a JSON-Lines field database from a path or text stream.  With no
    source, FAKECLASS_DB is consulted, then the bundled snapshot."""
    if source is None:
        env = os.environ.get(ENV_VAR)
        if env:
            source = env
    if source is None:
        return bundled_database()
    if isinstance(source, (str, Path)):
        try:
            with open(source, encoding="utf-8") as fh:
                return _parse_lines(fh, str(source))
        except OSError as e:
            raise DatabaseError(f"cannot read {source}: {e.strerror}") from None
    return _parse_lines(source, getattr(source, "name", "<stream>"))


_BUNDLED: Optional[FieldDatabase] = None


def bundled_database() -> FieldDatabase:
    global _BUNDLED
    if _BUNDLED is None:
        text = resources.files("fakeclass").joinpath("data/fields.jsonl").read_text(encoding="utf-8")
        _BUNDLED = _parse_lines(io.StringIO(text), "bundled snapshot")
    return _BUNDLED


# ---------------------------------------------------------------------------
# human-friendly field names

_DEGREE_WORDS = {"quadratic": 2, "cubic": 3, "quartic": 4, "quintic": 5, "sextic": 6,
                 "septic": 7, "octic": 8}


def quadratic_disc(m: int) -> int:
    """Discriminant of Q(sqrt(m)) for square-free m != 1."""
    if m in (0, 1) or not is_squarefree(abs(m)):
        raise ValueError(f"{m} is not a square-free integer != 0, 1")
    return m if m % 4 == 1 else 4 * m


def _unique(cands: list[NumberFieldRecord], name: str) -> NumberFieldRecord:
    if not cands:
        raise KeyError(f"no field matching {name!r} in the database")
    if len(cands) > 1:
        raise KeyError(f"{name!r} is ambiguous: {', '.join(c.label for c in cands)}")
    return cands[0]


def resolve_field(db: FieldDatabase, name: str) -> NumberFieldRecord:
    """Accepts a label ("2.2.5.1"), "Q", "Q-sqrtM" (M square-free, may be
    negative), "Q-sqrtA-sqrtB" (biquadratic), "Q-zetaM" (cyclotomic) or
    "<degree word>-D[-i]" such as "cubic-49" or "quartic-1125"."""
    name = name.strip()
    if name in db:
        return db.get(name)
    if name in ("Q", "QQ", "Q-1"):
        return _unique(db.fields_of_degree(1), name)
    m = re.fullmatch(r"Q-sqrt(-?\d+)", name)
    if m:
        D = quadratic_disc(int(m.group(1)))
        sig = (2, 0) if D > 0 else (0, 1)
        return _unique(db.fields_with(2, sig, abs(D)), name)
    m = re.fullmatch(r"Q-sqrt(-?\d+)-sqrt(-?\d+)", name)
    if m:
        quads = [resolve_field(db, f"Q-sqrt{m.group(i)}") for i in (1, 2)]
        cands = [r for r in db.fields_of_degree(4)
                 if all(q.label in r.subfields for q in quads)]
        return _unique(cands, name)
    m = re.fullmatch(r"Q-zeta(\d+)", name)
    if m:
        c = int(m.group(1))
        if c % 4 == 2:
            c //= 2
        if c == 1:
            return resolve_field(db, "Q")
        deg = euler_phi(c)
        cands = [r for r in db.fields_of_degree(deg) if r.abelian and r.conductor == c
                 and r.totally_complex]
        return _unique(cands, name)
    m = re.fullmatch(r"([a-z]+)-(\d+)(?:-(\d+))?", name)
    if m and m.group(1) in _DEGREE_WORDS:
        deg = _DEGREE_WORDS[m.group(1)]
        cands = [r for r in db.fields_of_degree(deg) if r.abs_disc == int(m.group(2))]
        if m.group(3):
            i = int(m.group(3))
            if not 1 <= i <= len(cands):
                raise KeyError(f"no field matching {name!r} in the database")
            return cands[i - 1]
        return _unique(cands, name)
    raise KeyError(f"cannot interpret field name {name!r}")
