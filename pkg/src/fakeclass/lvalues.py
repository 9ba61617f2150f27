"""Exact special values of Dirichlet L-functions, Dedekind zeta functions of
abelian fields and relative L-functions L_{l|k} = zeta_l / zeta_k at
non-positive integers, plus interval enclosures on the positive side and the
functional-equation cross-check that links the two.

Exact values come from generalized Bernoulli numbers.  For a totally complex
quadratic extension l = k(sqrt(alpha)) of a real quadratic field k of narrow
class number one (l need not be abelian over Q), L_{l|k} at negative integers is
computed from Shintani's cone decomposition instead.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import UnsupportedField
from .analytic import (ComplexInterval, Interval, Verdict, hurwitz_interval, pi_interval,
                       root_of_unity, zeta_interval)
from .exactnum import (CyclotomicRational, bernoulli_polynomial, factor, is_prime, primes_up_to)
from .fieldsdb import CharacterRecord, FieldDatabase, NumberFieldRecord, bundled_database


# ---------------------------------------------------------------------------
# Dirichlet characters

class DirichletCharacter:
    """chi(g) = zeta_order^e on the listed generators g of (Z/modulus)^*,
    extended multiplicatively."""

    __slots__ = ("modulus", "order", "generator_values", "_table")

    def __init__(self, modulus: int, order: int, generator_values: Sequence[tuple[int, int]]):
        if modulus < 1 or order < 1:
            raise ValueError("modulus and order must be positive")
        self.modulus = modulus
        self.order = order
        self.generator_values = tuple((g % modulus, e % order) for g, e in generator_values)
        self._table = self._build_table()

    @classmethod
    def from_record(cls, rec: CharacterRecord) -> "DirichletCharacter":
        return cls(rec.modulus, rec.order, rec.generator_values)

    @classmethod
    def trivial(cls) -> "DirichletCharacter":
        return cls(1, 1, ())

    @classmethod
    def kronecker(cls, D: int) -> "DirichletCharacter":
        """The quadratic character a -> (D/a) of a fundamental discriminant D."""
        f = abs(D)
        if f == 1:
            return cls.trivial()
        gens = _unit_group_generators(f)
        return cls(f, 2, [(g, 0 if kronecker_symbol(D, g) == 1 else 1) for g in gens])

    def _build_table(self) -> dict[int, int]:
        f = self.modulus
        table = {1 % f: 0}
        queue = deque([1 % f])
        while queue:
            a = queue.popleft()
            for g, e in self.generator_values:
                b = a * g % f
                v = (table[a] + e) % self.order
                if b in table:
                    if table[b] != v:
                        raise ValueError(f"inconsistent character values mod {f} at {b}")
                else:
                    table[b] = v
                    queue.append(b)
        expected = sum(1 for a in range(f) if math.gcd(a, f) == 1) if f > 1 else 1
        if len(table) != expected:
            raise ValueError(f"generators do not generate (Z/{f})^*")
        return table

    def exponent(self, a: int) -> Optional[int]:
        """e with chi(a) = zeta_order^e, or None when gcd(a, modulus) > 1."""
        return self._table.get(a % self.modulus)

    def value(self, a: int) -> CyclotomicRational:
        e = self.exponent(a)
        if e is None:
            return CyclotomicRational.rational(self.order, 0)
        return CyclotomicRational.zeta_power(self.order, e)

    def key(self) -> tuple:
        """Canonical identity: modulus and exponents as fractions of a turn."""
        return (self.modulus, tuple(sorted((a, Fraction(e, self.order)) for a, e in self._table.items())))

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self._table.values())

    def is_even(self) -> bool:
        return self.exponent(-1) == 0

    def is_primitive(self) -> bool:
        f = self.modulus
        for p, _ in factor(f) if f > 1 else []:
            g = f // p
            # induced from modulus g iff trivial on residues = 1 mod g
            if all(self._table[a] == 0 for a in self._table if a % g == 1 % g):
                return False
        return True

    def complex_value(self, a: int, precision: int) -> ComplexInterval:
        e = self.exponent(a)
        if e is None:
            return ComplexInterval.real(Interval.exact(0, precision))
        return root_of_unity(e, self.order, precision)

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, order {self.order}, {list(self.generator_values)})"


def _unit_group_generators(f: int) -> list[int]:
    """A (not necessarily minimal) generating set of (Z/f)^*: all units."""
    return [a for a in range(1, f) if math.gcd(a, f) == 1] or [1]


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1, via quadratic reciprocity."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    return result * jacobi_symbol(D, n) if n > 1 else result


def jacobi_symbol(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def characters_of(K: NumberFieldRecord) -> list[DirichletCharacter]:
    if not K.abelian or K.characters is None:
        raise UnsupportedField(f"{K.label} is not abelian; no Dirichlet character data")
    return [DirichletCharacter.from_record(c) for c in K.characters]


# ---------------------------------------------------------------------------
# exact values at non-positive integers

@lru_cache(maxsize=None)
def _gen_bernoulli_cached(key: tuple, order: int, n: int) -> CyclotomicRational:
    f, table = key
    sums: dict[int, Fraction] = {}
    for a, turn in table:
        e = int(turn * order)
        x = Fraction(a if a else f, f)  # a runs over 1..f
        sums[e] = sums.get(e, Fraction(0)) + bernoulli_polynomial(n, x)
    coeffs = [Fraction(0)] * order
    for e, v in sums.items():
        coeffs[e] += v
    scale = Fraction(f) ** (n - 1)
    return CyclotomicRational(order, [c * scale for c in coeffs])


def generalized_bernoulli(chi: DirichletCharacter, n: int) -> CyclotomicRational:
    """B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f), exact in Q(zeta_order)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _gen_bernoulli_cached(chi.key(), chi.order, n)


def dirichlet_L_negative(chi: DirichletCharacter, s: int) -> CyclotomicRational:
    """L(1-n, chi) = -B_{n,chi}/n for a primitive chi and s = 1-n <= 0."""
    if s > 0:
        raise ValueError("s must be a non-positive integer")
    n = 1 - s
    return -generalized_bernoulli(chi, n) / n


def _product_rational(values: list[CyclotomicRational]) -> Fraction:
    M = math.lcm(*[v.m for v in values]) if values else 1
    out = CyclotomicRational.rational(M, 1)
    for v in values:
        out = out * v.embed(M)
    if not out.is_rational():
        raise ArithmeticError("product of L-values has non-zero irrational coordinates")
    return out.to_rational()


def dedekind_zeta_negative(K: NumberFieldRecord, s: int) -> Fraction:
    """zeta_K(s) for abelian K and integer s <= 0 (s = 0 included)."""
    if s > 0:
        raise ValueError("s must be a non-positive integer")
    return _product_rational([dirichlet_L_negative(chi, s) for chi in characters_of(K)])


def relative_characters(k: NumberFieldRecord, ell: NumberFieldRecord) -> list[DirichletCharacter]:
    """Characters of ell that do not factor through k (multiset difference)."""
    rest = characters_of(ell)
    for chi in characters_of(k):
        try:
            rest.remove(chi)
        except ValueError:
            raise ValueError(f"{k.label} is not a subfield of {ell.label} (character mismatch)") from None
    return rest


def hecke_L_relative(k: NumberFieldRecord, ell: NumberFieldRecord, s: int,
                     db: Optional[FieldDatabase] = None) -> Fraction:
    """L_{l|k}(s) = zeta_l(s)/zeta_k(s) at an integer s <= 0."""
    if s > 0:
        raise ValueError("s must be a non-positive integer")
    if ell.degree != 2 * k.degree:
        raise ValueError(f"{ell.label} is not a quadratic extension of {k.label}")
    if k.abelian and ell.abelian:
        return _product_rational([dirichlet_L_negative(chi, s) for chi in relative_characters(k, ell)])
    for rel in ell.relative:
        if rel.base == k.label:
            return RelativeQuadratic(k, rel.alpha).L_negative(s)
    raise UnsupportedField(f"no exact method for L_{{{ell.label}|{k.label}}}: non-abelian pair "
                           "without a relative quadratic description")


# ---------------------------------------------------------------------------
# real quadratic fields: exact arithmetic in Z[y], y^2 + p1 y + p0 = 0

@dataclass(frozen=True)
class _Quad:
    """a + b*y in Q(y) with y^2 = -p1*y - p0 (coefficients Fractions)."""

    a: Fraction
    b: Fraction
    p1: int
    p0: int

    def _mk(self, a, b):
        return _Quad(Fraction(a), Fraction(b), self.p1, self.p0)

    def __add__(self, o):
        return self._mk(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return self._mk(self.a - o.a, self.b - o.b)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return self._mk(self.a * o, self.b * o)
        bb = self.b * o.b  # coefficient of y^2
        return self._mk(self.a * o.a - bb * self.p0, self.a * o.b + self.b * o.a - bb * self.p1)

    def conj(self):
        # y -> -p1 - y
        return self._mk(self.a - self.p1 * self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.p1 * self.a * self.b + self.p0 * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a - self.p1 * self.b

    def inverse(self):
        n = self.norm()
        c = self.conj()
        return self._mk(c.a / n, c.b / n)

    def __pow__(self, e: int):
        out = self._mk(1, 0)
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def signs(self) -> tuple[int, int]:
        """Signs at the two real embeddings y = (-p1 +- sqrt(Delta))/2 (first: +)."""
        delta = self.p1 * self.p1 - 4 * self.p0
        u = 2 * self.a - self.p1 * self.b  # 2x = u +- b sqrt(Delta)
        return (_sign_surd(u, self.b, delta), _sign_surd(u, -self.b, delta))

    def totally_positive(self) -> bool:
        return self.signs() == (1, 1)


def _sign_surd(u: Fraction, v: Fraction, delta: int) -> int:
    """sign(u + v sqrt(delta)), delta > 0 not a square."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if su == sv or sv == 0:
        return su
    if su == 0:
        return sv
    return su if u * u > v * v * delta else sv


def _fundamental_unit(p1: int, p0: int) -> _Quad:
    """Fundamental unit > 1 at the first embedding, by increasing |b|."""
    for b in range(1, 10**6):
        # a^2 - p1*b*a + p0*b^2 = +-1
        for t in (-1, 1):
            disc = p1 * p1 * b * b - 4 * (p0 * b * b - t)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for num in (p1 * b + r, p1 * b - r):
                if num % 2 == 0:
                    for sb in (b, -b):
                        a = num // 2 if sb == b else -(num // 2)
                        u = _Quad(Fraction(a), Fraction(sb), p1, p0)
                        if u.norm() == t and u.signs()[0] == 1 and u.signs()[1] != 0:
                            # > 1 at the first embedding: u > 1 iff u - 1 > 0
                            if (u - _Quad(Fraction(1), Fraction(0), p1, p0)).signs()[0] == 1:
                                return u
    raise ArithmeticError("fundamental unit search failed")


def _legendre(a: int, p: int) -> int:
    return jacobi_symbol(a, p) if p > 2 else (1 if a % 2 else 0)


class RelativeQuadratic:
    """l = k(sqrt(alpha)) over a real quadratic k with narrow class number 1.

    The quadratic Hecke character psi of l/k is tabulated on totally positive
    residues modulo M = |N(alpha)| (requires N(alpha) odd, alpha square-free
    and a square modulo 4, so that l/k is unramified above 2 and the conductor
    is (alpha)).  L(1-m, psi) is then summed over a Shintani cone domain for
    the totally positive units and corrected by the Euler factors at the primes
    dividing M but not alpha.
    """

    def __init__(self, k: NumberFieldRecord, alpha: Sequence[int]):
        if k.degree != 2 or not k.totally_real:
            raise UnsupportedField("the Shintani route needs a real quadratic base field")
        c0, c1, c2 = k.poly
        if c2 != 1:
            raise UnsupportedField("base polynomial must be monic")
        self.k = k
        self.p1, self.p0 = c1, c0
        if self.p1 * self.p1 - 4 * self.p0 != k.disc:
            raise UnsupportedField("base polynomial does not generate the maximal order")
        if k.class_number != 1:
            raise UnsupportedField(f"{k.label} has class number {k.class_number}")
        self.eps = _fundamental_unit(self.p1, self.p0)
        if self.eps.norm() != -1:
            raise UnsupportedField(f"{k.label} has narrow class number 2 (unit of norm +1)")
        self.eps_plus = self.eps * self.eps
        self.alpha = self._q(*alpha)
        if self.alpha.signs() != (-1, -1):
            raise UnsupportedField("alpha must be totally negative (l totally complex)")
        N = abs(int(self.alpha.norm()))
        if N % 2 == 0:
            raise UnsupportedField("N(alpha) must be odd")
        if not self._square_mod4(self.alpha):
            raise UnsupportedField("alpha must be a square modulo 4 (l/k unramified above 2)")
        self.M = N
        self._psi: dict[tuple[int, int], int] = {}

    def _q(self, a, b=0) -> _Quad:
        return _Quad(Fraction(a), Fraction(b), self.p1, self.p0)

    def _square_mod4(self, x: _Quad) -> bool:
        a, b = int(x.a) % 4, int(x.b) % 4
        for u in range(4):
            for v in range(4):
                s = self._q(u, v) * self._q(u, v)
                if int(s.a) % 4 == a and int(s.b) % 4 == b:
                    return True
        return False

    # psi on residues -----------------------------------------------------
    def _psi_of_prime_element(self, x: _Quad) -> int:
        """psi((x)) for a totally positive x with N(x) = p prime, p not | 2M."""
        p = int(x.norm())
        u, v = int(x.a) % p, int(x.b) % p
        y0 = (-u * pow(v, -1, p)) % p  # x(y0) = 0 in O/(x) = F_p
        return _legendre(int(self.alpha.a) + int(self.alpha.b) * y0, p)

    def psi(self, r: tuple[int, int]) -> int:
        """psi on the class of a totally positive element = r mod M."""
        M = self.M
        r = (r[0] % M, r[1] % M)
        if r in self._psi:
            return self._psi[r]
        if math.gcd(int(self._q(*r).norm()), M) != 1:
            return 0
        found = []
        for radius in range(1, 200):
            for i in range(-radius, radius + 1):
                for j in range(-radius, radius + 1):
                    if max(abs(i), abs(j)) != radius:
                        continue
                    x = self._q(r[0] + M * i, r[1] + M * j)
                    nx = int(x.norm())
                    if nx > 2 and is_prime(nx) and M % nx and x.totally_positive():
                        found.append(self._psi_of_prime_element(x))
                        if len(found) == 2:
                            if found[0] != found[1]:
                                raise ArithmeticError("Hecke character is not well defined modulo M")
                            self._psi[r] = found[0]
                            return found[0]
        raise ArithmeticError(f"no prime representative found for class {r}")

    # Shintani ------------------------------------------------------------
    def _cone_points(self):
        """Totally positive x = M (x1 + x2 eps+) in O with (x1, x2) in (0,1] x [0,1)."""
        M = self.M
        ea, eb = self.eps_plus.a, self.eps_plus.b
        if eb <= 0:
            raise ArithmeticError("unexpected sign of the unit's y-coordinate")
        pts = []
        for v in range(0, int(M * eb)):
            t2 = Fraction(v) / eb
            base = t2 * ea
            u_lo = math.floor(base) + 1
            for u in range(u_lo, u_lo + M + 1):
                t1 = u - base
                if 0 < t1 <= M:
                    pts.append((u, v, t1 / M, t2 / M))
        assert len(pts) == M * M * int(eb)
        return pts

    @lru_cache(maxsize=None)
    def _trace_table(self, m: int) -> dict[tuple[int, int], Fraction]:
        """T(l1, l2) = Tr [rho^(m-1)] c1^(l1-1) c2^(l2-1), c1 = M(1+rho),
        c2 = M(e + rho e'), for l1 + l2 = 2m."""
        M = self.M
        e = self.eps_plus
        ratio = e.conj() * e.inverse()  # e'/e
        out = {}
        for l1 in range(0, 2 * m + 1):
            l2 = 2 * m - l1
            e1, e2 = l1 - 1, l2 - 1
            # coefficient of rho^(m-1) in (1+rho)^e1 (1 + ratio rho)^e2
            coeff = self._q(0)
            for i in range(m):
                j = m - 1 - i
                coeff = coeff + ratio ** j * (_gbinom(e1, i) * _gbinom(e2, j))
            coeff = coeff * (e ** e2) * (Fraction(M) ** (e1 + e2))
            out[(l1, l2)] = coeff.trace()
        return out

    def L_imprimitive(self, s: int) -> Fraction:
        m = 1 - s
        if m < 1:
            raise ValueError("s must be <= 0")
        T = self._trace_table(m)
        fact = [math.factorial(i) for i in range(2 * m + 1)]
        total = Fraction(0)
        for u, v, x1, x2 in self._cone_points():
            ps = self.psi((u, v))
            if ps == 0:
                continue
            b1 = [bernoulli_polynomial(l, x1) / fact[l] for l in range(2 * m + 1)]
            b2 = [bernoulli_polynomial(l, x2) / fact[l] for l in range(2 * m + 1)]
            z = sum((b1[l1] * b2[2 * m - l1] * T[(l1, 2 * m - l1)] for l1 in range(2 * m + 1)),
                    Fraction(0))
            total += ps * z
        return total * math.factorial(m - 1) ** 2 / 2

    # Euler product (positive side) -----------------------------------------
    def _totally_positive_generator(self, p: int, y0: Optional[int]) -> _Quad:
        """Totally positive generator of the prime (p, y - y0) of norm p, or of
        (p) itself when y0 is None."""
        if y0 is None:
            return self._q(p)
        for b in range(0, 10**5):
            for sb in ((b, -b) if b else (0,)):
                # a^2 - p1 a b + p0 b^2 = +-p
                for t in (p, -p):
                    disc = self.p1 * self.p1 * sb * sb - 4 * (self.p0 * sb * sb - t)
                    if disc < 0:
                        continue
                    r = math.isqrt(disc)
                    if r * r != disc or (self.p1 * sb + r) % 2:
                        continue
                    for a in ((self.p1 * sb + r) // 2, (self.p1 * sb - r) // 2):
                        if (a + sb * y0) % p:
                            continue
                        x = self._q(a, sb)
                        if x.norm() < 0:
                            x = x * self.eps
                        if x.signs()[0] < 0:
                            x = x * (-1)
                        return x
        raise ArithmeticError(f"no generator found for a prime over {p}")

    def psi_prime(self, p: int, y0: Optional[int]) -> int:
        """psi at the prime (p, y - y0) (degree one) or (p) (inert, y0 None)."""
        if y0 is not None:
            a_mod = (int(self.alpha.a) + int(self.alpha.b) * y0) % p
            if a_mod == 0:
                return 0
            if p > 2:
                return _legendre(a_mod, p)
        elif p > 2:
            # Euler's criterion in F_p[y]/(y^2 + p1 y + p0)
            f = [self.p0 % p, self.p1 % p, 1]
            w = _ppowmod(_poly_mod([int(self.alpha.a), int(self.alpha.b)], p), (p * p - 1) // 2, f, p)
            return 1 if w == [1] else -1
        x = self._totally_positive_generator(p, y0)
        return self.psi((int(x.a), int(x.b)))

    def L_euler_interval(self, s: int, prime_bound: int, precision: int = 30) -> Interval:
        """L(s, psi) for integer s >= 2 from the Euler product over the primes of
        k above p < P; the tail factor lies in exp([-B, B]) with
        B = 2 P^(1-s) / ((s-1)(1 - P^(-s)))."""
        one = Interval.exact(1, precision)
        acc = one
        for p in primes_up_to(prime_bound - 1):
            roots = [y for y in range(p) if (y * y + self.p1 * y + self.p0) % p == 0]
            if not roots:
                v = self.psi_prime(p, None)
                acc = acc / (one - Interval.exact(Fraction(v, p ** (2 * s)), precision))
                continue
            for y0 in roots:
                v = self.psi_prime(p, y0)
                if v:
                    acc = acc / (one - Interval.exact(Fraction(v, p ** s), precision))
        P = prime_bound
        B = Interval.exact(Fraction(2 * P, (s - 1) * P ** s) / (1 - Fraction(1, P ** s)), precision)
        return acc * Interval((-B).exp().lo, B.exp().hi, precision)

    def L_negative(self, s: int) -> Fraction:
        m = 1 - s
        val = self.L_imprimitive(s)
        # restore Euler factors at degree-one primes dividing M but not alpha
        for p, _ in factor(self.M):
            for y0 in range(p):
                if (y0 * y0 + self.p1 * y0 + self.p0) % p:
                    continue
                a_mod = (int(self.alpha.a) + int(self.alpha.b) * y0) % p
                if a_mod == 0:
                    continue
                val /= 1 - _legendre(a_mod, p) * Fraction(p) ** (m - 1)
        return val

    def place_splits(self, p: int) -> bool:
        """Whether the unique place v of k above p splits in l, i.e. alpha is a
        square in k_v.  Uses that gamma lies in v iff p | N(gamma) when v is the
        only place above p; for p = 2 squares are tested modulo 4v."""
        if len(factor_degrees_mod_p(self.k.poly, p)) > 1 and self.k.disc % p:
            raise ValueError(f"{p} splits in {self.k.label}: more than one place above it")
        if int(self.alpha.norm()) % p == 0:
            raise ValueError(f"alpha is not a unit at the place above {p}")
        in_v = lambda g: int(g.norm()) % p == 0  # noqa: E731
        mod = 8 if p == 2 else p
        for u in range(mod):
            for w in range(mod):
                diff = self._q(u, w) * self._q(u, w) - self.alpha
                if p != 2:
                    if in_v(diff):
                        return True
                    continue
                if diff.a % 4 == 0 and diff.b % 4 == 0 and in_v(diff * Fraction(1, 4)):
                    return True
        return False


def abelian_prime_data(K: NumberFieldRecord, p: int) -> tuple[int, int, int]:
    """(e, f, g) of the rational prime p in the abelian field K: the characters
    unramified at p number f*g, and f is the order of Frobenius on them."""
    chars = characters_of(K)
    turns = [Fraction(e, chi.order) for chi in chars if (e := chi.exponent(p)) is not None]
    f = math.lcm(*[t.denominator for t in turns])
    g = len(turns) // f
    return len(chars) // (f * g), f, g


def _gbinom(e: int, i: int) -> Fraction:
    """Generalized binomial coefficient C(e, i) for integer e (possibly negative)."""
    out = Fraction(1)
    for t in range(i):
        out = out * (e - t) / (t + 1)
    return out


def shintani_zeta_negative(k: NumberFieldRecord, s: int) -> Fraction:
    """zeta_k(s) for a real quadratic k of narrow class number 1 through the
    same cone decomposition with the trivial character (an independent route
    used for self-tests)."""
    rq = RelativeQuadratic.__new__(RelativeQuadratic)
    c0, c1, _ = k.poly
    rq.k, rq.p1, rq.p0 = k, c1, c0
    if k.class_number != 1:
        raise ValueError(f"{k.label} does not have class number 1")
    rq.eps = _fundamental_unit(c1, c0)
    if rq.eps.norm() != -1:
        raise ValueError(f"{k.label} has narrow class number 2 (fundamental unit of norm +1)")
    rq.eps_plus = rq.eps * rq.eps
    rq.M = 1
    rq._psi = {}
    rq.psi = lambda r: 1
    return RelativeQuadratic.L_imprimitive(rq, s)


# ---------------------------------------------------------------------------
# positive side: interval enclosures

def dirichlet_L_interval(chi: DirichletCharacter, s: int, precision: int) -> ComplexInterval:
    """L(s, chi) = f^(-s) sum_{a=1}^{f} chi(a) zeta(s, a/f) for integer s >= 2."""
    if s < 2:
        raise ValueError("s must be >= 2")
    f = chi.modulus
    if f == 1:
        return ComplexInterval.real(zeta_interval(s, precision))
    acc = ComplexInterval.real(Interval.exact(0, precision))
    for a in range(1, f + 1):
        if math.gcd(a, f) != 1:
            continue
        acc = acc + chi.complex_value(a, precision) * hurwitz_interval(s, Fraction(a, f), precision)
    return acc * Interval.exact(Fraction(1, f ** s), precision)


def _real_product(vals: list[ComplexInterval], precision: int) -> Interval:
    acc = ComplexInterval.real(Interval.exact(1, precision))
    for v in vals:
        acc = acc * v
    if not acc.im.contains(0):
        raise ArithmeticError("product of L-values is not real")
    return acc.re


def dedekind_zeta_interval(K: NumberFieldRecord, s: int, precision: int) -> Interval:
    return _real_product([dirichlet_L_interval(chi, s, precision) for chi in characters_of(K)], precision)


def relative_L_interval(k: NumberFieldRecord, ell: NumberFieldRecord, s: int, precision: int) -> Interval:
    return _real_product([dirichlet_L_interval(chi, s, precision)
                          for chi in relative_characters(k, ell)], precision)


def zeta_positive_from_negative(k: NumberFieldRecord, j: int, precision: int,
                                value: Optional[Fraction] = None) -> Interval:
    """Right side of zeta_k(2j) = D_k^(1/2-2j) ((-1)^j 2^(2j-1) pi^(2j)/(2j-1)!)^d zeta_k(1-2j)."""
    d, D = k.degree, k.abs_disc
    z = dedekind_zeta_negative(k, 1 - 2 * j) if value is None else value
    pi = pi_interval(precision)
    c = Fraction((-1) ** j * 2 ** (2 * j - 1), math.factorial(2 * j - 1)) ** d
    out = pi.ipow(2 * j * d) * (c * z)
    if D > 1:
        out = out * Interval.exact(D, precision).power(Fraction(1, 2) - 2 * j)
    return out


def relative_L_positive_from_negative(k: NumberFieldRecord, ell: NumberFieldRecord, j: int,
                                      precision: int, value: Optional[Fraction] = None) -> Interval:
    """Right side of L(2j+1) = (D_k/D_l)^(2j+1/2) ((-1)^j 2^(2j) pi^(2j+1)/(2j)!)^d L(-2j)."""
    d = k.degree
    L = hecke_L_relative(k, ell, -2 * j) if value is None else value
    pi = pi_interval(precision)
    c = Fraction((-1) ** j * 2 ** (2 * j), math.factorial(2 * j)) ** d
    ratio = Interval.exact(Fraction(k.abs_disc, ell.abs_disc), precision).power(2 * j + Fraction(1, 2))
    return ratio * pi.ipow((2 * j + 1) * d) * (c * L)


def _agree(a: Interval, b: Interval, precision: int) -> Verdict:
    if a.hi < b.lo or b.hi < a.lo:
        return Verdict.REFUTED
    tol = Interval.exact(Fraction(1, 10 ** max(precision - 15, 5)), precision)
    scale = max(abs(a.lo_fraction()), abs(a.hi_fraction()), 1)
    if a.width() <= tol.hi * scale and b.width() <= tol.hi * scale:
        return Verdict.CERTIFIED
    return Verdict.UNDECIDED


def functional_equation_check(k: NumberFieldRecord, ell: Optional[NumberFieldRecord], j: int,
                              precision: int = 60, flip_sign: bool = False) -> Verdict:
    """Compare positive-side enclosures (character sums of Hurwitz zeta values)
    with the exact negative-side values carried through the functional
    equations: zeta_k(2j), and L_{l|k}(2j+1) when l is given.  Certified when
    each pair of enclosures overlaps and both are narrower than
    10^(15-precision); Refuted when some pair is disjoint.  flip_sign negates
    the exact values (fault injection)."""
    sgn = -1 if flip_sign else 1
    verdicts = []
    zk = dedekind_zeta_negative(k, 1 - 2 * j) * sgn
    verdicts.append(_agree(dedekind_zeta_interval(k, 2 * j, precision),
                           zeta_positive_from_negative(k, j, precision, zk), precision))
    if ell is not None:
        lv = hecke_L_relative(k, ell, -2 * j) * sgn
        verdicts.append(_agree(relative_L_interval(k, ell, 2 * j + 1, precision),
                               relative_L_positive_from_negative(k, ell, j, precision, lv), precision))
    if Verdict.REFUTED in verdicts:
        return Verdict.REFUTED
    if Verdict.UNDECIDED in verdicts:
        return Verdict.UNDECIDED
    return Verdict.CERTIFIED


# ---------------------------------------------------------------------------
# Euler products (independent of the character data away from ramified primes)

def _poly_mod(c: Sequence[int], p: int) -> list[int]:
    out = [x % p for x in c]
    while out and out[-1] == 0:
        out.pop()
    return out


def _pmulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _prem(prod, f, p)


def _prem(a, f, p):
    a = _poly_mod(a, p)
    inv = pow(f[-1], -1, p)
    while len(a) >= len(f):
        c = a[-1] * inv % p
        shift = len(a) - len(f)
        for i, y in enumerate(f):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = _poly_mod(a, p)
    return a


def _pgcd(a, b, p):
    a, b = _poly_mod(a, p), _poly_mod(b, p)
    while b:
        a, b = b, _prem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _pdiv(a, b, p):
    a = _poly_mod(a, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = _poly_mod(a, p)
    return q


def _ppowmod(base, e, f, p):
    out = [1]
    while e:
        if e & 1:
            out = _pmulmod(out, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return out


def factor_degrees_mod_p(poly: Sequence[int], p: int) -> list[int]:
    """Degrees of the irreducible factors of a square-free poly mod p
    (distinct-degree factorization)."""
    f = _poly_mod(poly, p)
    degs = []
    h = [0, 1]
    i = 0
    while len(f) > 1:
        i += 1
        if 2 * i > len(f) - 1:
            degs.append(len(f) - 1)
            break
        h = _ppowmod(h, p, f, p)
        hx = h + [0] * (2 - len(h))
        hx[1] -= 1  # x^(p^i) - x
        g = _pgcd(f, hx, p)
        if len(g) > 1:
            degs += [i] * ((len(g) - 1) // i)
            f = _pdiv(f, g, p)
            h = _prem(h, f, p) if len(f) > 1 else h
    return sorted(degs)


def _poly_disc_primes(poly: Sequence[int]) -> set[int]:
    """Primes dividing the discriminant of poly (via the resultant with f')."""
    f = [Fraction(c) for c in poly]
    df = [i * c for i, c in enumerate(f)][1:]
    # Euclid over Q for the resultant is awkward; use the Sylvester determinant
    n, m = len(f) - 1, len(df) - 1
    size = n + m
    rows = []
    for i in range(m):
        rows.append([Fraction(0)] * i + f[::-1] + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + df[::-1] + [Fraction(0)] * (size - m - 1 - i))
    det = _det(rows)
    return set(factor(int(det)).primes) if det else set()


def _det(rows: list[list[Fraction]]) -> Fraction:
    a = [r[:] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            t = a[r][c] / a[c][c]
            if t:
                for j in range(c, n):
                    a[r][j] -= t * a[c][j]
    return det


def dedekind_zeta_euler_interval(K: NumberFieldRecord, s: int, prime_bound: int,
                                 precision: int = 30) -> Interval:
    """zeta_K(s) for integer s >= 2 from the Euler product over p < prime_bound.

    Unramified local factors come from factoring K's polynomial mod p; primes
    dividing the polynomial discriminant use the character data (abelian K).
    The tail over p >= P lies in [1, exp(d P^(1-s) / ((s-1)(1 - P^(-s))))]."""
    bad = _poly_disc_primes(K.poly)
    chars = characters_of(K) if bad else []
    acc = Interval.exact(1, precision)
    one = Interval.exact(1, precision)
    for p in primes_up_to(prime_bound - 1):
        if p in bad:
            # characters unramified at p take the values of Frobenius: f-th roots
            # of unity each repeated g times, giving (1 - p^(-fs))^(-g)
            turns = [Fraction(e, chi.order) for chi in chars if (e := chi.exponent(p)) is not None]
            f = math.lcm(*[t.denominator for t in turns])
            for _ in range(len(turns) // f):
                acc = acc / (one - Interval.exact(Fraction(1, p ** (f * s)), precision))
            continue
        for f in factor_degrees_mod_p(K.poly, p):
            acc = acc / (one - Interval.exact(Fraction(1, p ** (f * s)), precision))
    P = prime_bound
    tail = Interval.exact(Fraction(K.degree * P, (s - 1) * P ** s) / (1 - Fraction(1, P ** s)), precision).exp()
    return Interval(acc.lo, (acc * tail).hi, precision)


def dirichlet_L_euler_interval(chi: DirichletCharacter, s: int, prime_bound: int,
                               precision: int = 30) -> Interval:
    """L(s, chi) for a real character from its Euler product over p < P; the
    tail factor lies in exp([-B, B]) with B = P^(1-s)/((s-1)(1 - P^(-s)))."""
    if chi.order > 2:
        raise ValueError("only real characters")
    one = Interval.exact(1, precision)
    acc = one
    for p in primes_up_to(prime_bound - 1):
        e = chi.exponent(p)
        if e is None:
            continue
        v = 1 if e == 0 else -1
        acc = acc / (one - Interval.exact(Fraction(v, p ** s), precision))
    P = prime_bound
    B = Fraction(P, (s - 1) * P ** s) / (1 - Fraction(1, P ** s))
    return acc * Interval((-Interval.exact(B, precision)).exp().lo,
                          Interval.exact(B, precision).exp().hi, precision)


def default_db() -> FieldDatabase:
    return bundled_database()
