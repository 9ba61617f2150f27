"""Exact arithmetic: rationals, trial-division factorization, Bernoulli numbers
and polynomials, and elements of cyclotomic fields with rational coordinates.

Rationals are plain :class:`fractions.Fraction` values (always in lowest terms,
positive denominator).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Rational = Fraction

FACTOR_CAP = 10**14


def as_rational(x) -> Fraction:
    """Coerce int, Fraction, or a string such as "3/8", "-1.26" or "0.09058"."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} exactly; pass int, Fraction or str")


def format_rational(q: Fraction) -> str:
    """Lossless "p/q" text ("p" when the denominator is 1)."""
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# factorization

@dataclass(frozen=True)
class PrimeFactorization:
    """Sorted (prime, exponent) pairs of |n|."""

    pairs: tuple[tuple[int, int], ...]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        if isinstance(other, PrimeFactorization):
            return self.pairs == other.pairs
        if isinstance(other, (list, tuple)):
            return list(self.pairs) == [tuple(p) for p in other]
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.pairs)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def value(self) -> int:
        return math.prod(p**e for p, e in self.pairs)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)


def factor(n: int, cap: int = FACTOR_CAP) -> PrimeFactorization:
    """Factor |n| by trial division.  Rejects 0 and |n| > cap."""
    if not isinstance(n, int):
        raise TypeError("factor expects an int")
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    if n > cap:
        raise ValueError(f"{n} exceeds the trial-division cap {cap}")
    pairs = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            pairs.append((p, e))
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            if e:
                pairs.append((q, e))
        p += 6
    if n > 1:
        pairs.append((n, 1))
    return PrimeFactorization(tuple(pairs))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    p = 5
    while p * p <= n:
        if n % p == 0 or n % (p + 2) == 0:
            return False
        p += 6
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factor(n))


# ---------------------------------------------------------------------------
# Bernoulli numbers

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]
_at_row: list[Fraction] = [Fraction(1)]  # Akiyama-Tanigawa working row, seeded with m = 0


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2.  Memoized; the cache only grows under a lock."""
    if n < 0:
        raise ValueError("bernoulli index must be >= 0")
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        # Akiyama-Tanigawa: after feeding 1/(m+1) the leading entry is B_m with B_1 = +1/2
        while len(_bern) <= n:
            m = len(_at_row)
            _at_row.append(Fraction(1, m + 1))
            for j in range(m, 0, -1):
                _at_row[j - 1] = j * (_at_row[j - 1] - _at_row[j])
            _bern.append(-_at_row[0] if m == 1 else _at_row[0])
        return _bern[n]


def bernoulli_polynomial(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k), exact."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    x = as_rational(x)
    total = Fraction(0)
    xp = Fraction(1)
    # accumulate from k = n down to 0 so that x^(n-k) grows incrementally
    for k in range(n, -1, -1):
        b = bernoulli(k)
        if b:
            total += math.comb(n, k) * b * xp
        xp *= x
    return total


# ---------------------------------------------------------------------------
# cyclotomic rationals

def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    out = m
    for p, _ in factor(m):
        out = out // p * (p - 1)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first."""
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_divide(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        for j, b in enumerate(den):
            num[i + j] -= c * b
    assert not any(num), "non-exact polynomial division"
    return q


def _reduce(coeffs: list, m: int) -> tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_m modulo Phi_m (monic)."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    c = [Fraction(v) for v in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for j in range(deg + 1):
                c[i - deg + j] -= t * phi[j]
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(c)


class CyclotomicRational:
    """Element of Q(zeta_m), stored as phi(m) rational coordinates in the power
    basis 1, zeta_m, ..., zeta_m^(phi(m)-1)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Sequence):
        if m < 1:
            raise ValueError("conductor must be positive")
        n = euler_phi(m)
        if len(coeffs) > n:
            coeffs = _reduce(list(coeffs), m)
        elif len(coeffs) < n:
            coeffs = list(coeffs) + [0] * (n - len(coeffs))
        self.m = m
        self.coeffs = tuple(as_rational(c) if not isinstance(c, Fraction) else c
                            for c in coeffs)

    # constructors
    @classmethod
    def rational(cls, m: int, q) -> "CyclotomicRational":
        return cls(m, [as_rational(q)])

    @classmethod
    def zeta_power(cls, m: int, k: int) -> "CyclotomicRational":
        k %= m
        c = [0] * (k + 1)
        c[k] = 1
        return cls(m, _reduce(c, m))

    # predicates / projections
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element has non-zero irrational coordinates")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # arithmetic
    def _coerce(self, other) -> "CyclotomicRational":
        if isinstance(other, CyclotomicRational):
            if other.m != self.m:
                raise ValueError(f"conductor mismatch {self.m} vs {other.m}; embed explicitly")
            return other
        return CyclotomicRational.rational(self.m, other)

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicRational(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicRational(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicRational(self.m, [a * other for a in self.coeffs])
        o = self._coerce(other)
        prod = [Fraction(0)] * (2 * len(self.coeffs) - 1 if self.coeffs else 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicRational(self.m, _reduce(prod, self.m))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = CyclotomicRational.rational(self.m, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, q):
        q = as_rational(q)
        return CyclotomicRational(self.m, [a / q for a in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_rational() == other
        if isinstance(other, CyclotomicRational):
            return self.m == other.m and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self.coeffs))

    # Galois action and embeddings
    def conjugate(self, a: int) -> "CyclotomicRational":
        """Apply sigma_a : zeta_m -> zeta_m^a (gcd(a, m) = 1)."""
        if math.gcd(a, self.m) != 1:
            raise ValueError("a must be a unit modulo m")
        out = [Fraction(0)] * self.m
        for i, c in enumerate(self.coeffs):
            if c:
                out[(i * a) % self.m] += c
        return CyclotomicRational(self.m, _reduce(out, self.m))

    def embed(self, M: int) -> "CyclotomicRational":
        """Image in Q(zeta_M) for a multiple M of m (zeta_m = zeta_M^(M/m))."""
        if M % self.m:
            raise ValueError(f"{M} is not a multiple of {self.m}")
        step = M // self.m
        out = [Fraction(0)] * (step * len(self.coeffs) or 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return CyclotomicRational(M, _reduce(out, M))

    def trace(self) -> Fraction:
        """Trace down to Q."""
        total = CyclotomicRational.rational(self.m, 0)
        for a in range(1, self.m + 1):
            if math.gcd(a, self.m) == 1:
                total = total + self.conjugate(a)
        return total.to_rational()

    def __repr__(self):
        return f"CyclotomicRational({self.m}, {[format_rational(c) for c in self.coeffs]})"


def product(values: Iterable[CyclotomicRational], m: int) -> CyclotomicRational:
    out = CyclotomicRational.rational(m, 1)
    for v in values:
        out = out * v
    return out
