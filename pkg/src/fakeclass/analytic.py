"""Certified real-interval arithmetic and enclosures of Gamma, zeta and Hurwitz
zeta at real arguments.

Endpoints are MPFR numbers; every endpoint is computed with the MPFR rounding
mode pointing outward (lower ends rounded down, upper ends rounded up), so each
operation returns an enclosure of the exact real result.  MPFR only supplies
correctly rounded elementary operations (+, *, /, exp, log, cos, sqrt, pi).  The
Gamma and zeta enclosures are computed here from Stirling's series and the
Euler-Maclaurin formula with explicit remainder bounds.
"""
from __future__ import annotations

import enum
import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from . import UndecidedError
from .exactnum import as_rational, bernoulli

DEFAULT_PRECISION = 60
MIN_PRECISION = 20
_GUARD_BITS = 24

Number = Union[int, Fraction, "Interval"]


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10))) + _GUARD_BITS


@lru_cache(maxsize=None)
def _ctx(bits: int, up: bool):
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp if up else gmpy2.RoundDown)


def _frac_down(q: Fraction, bits: int):
    return _ctx(bits, False).div(mpz(q.numerator), mpz(q.denominator))


def _frac_up(q: Fraction, bits: int):
    return _ctx(bits, True).div(mpz(q.numerator), mpz(q.denominator))


def _to_fraction(x) -> Fraction:
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


class Interval:
    """Closed real interval [lo, hi] at a working precision given in decimal digits."""

    __slots__ = ("lo", "hi", "precision")

    def __init__(self, lo, hi, precision: int = DEFAULT_PRECISION):
        if not (lo <= hi):
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.precision = precision

    # construction ---------------------------------------------------------
    @classmethod
    def exact(cls, q, precision: int = DEFAULT_PRECISION) -> "Interval":
        q = as_rational(q)
        b = digits_to_bits(precision)
        return cls(_frac_down(q, b), _frac_up(q, b), precision)

    @classmethod
    def hull(cls, *xs: "Interval") -> "Interval":
        return cls(min(x.lo for x in xs), max(x.hi for x in xs), max(x.precision for x in xs))

    @property
    def bits(self) -> int:
        return digits_to_bits(self.precision)

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.exact(other, self.precision)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        b = max(self.bits, o.bits)
        return Interval(_ctx(b, False).add(self.lo, o.lo), _ctx(b, True).add(self.hi, o.hi),
                        max(self.precision, o.precision))

    __radd__ = __add__

    def __neg__(self):
        # bare unary minus would round to gmpy2's global (53-bit) context
        b = self.bits
        return Interval(_ctx(b, False).minus(self.hi), _ctx(b, True).minus(self.lo), self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        b = max(self.bits, o.bits)
        dn, up = _ctx(b, False), _ctx(b, True)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return Interval(min(dn.mul(x, y) for x, y in pairs), max(up.mul(x, y) for x, y in pairs),
                        max(self.precision, o.precision))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains 0")
        b = max(self.bits, o.bits)
        dn, up = _ctx(b, False), _ctx(b, True)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return Interval(min(dn.div(x, y) for x, y in pairs), max(up.div(x, y) for x, y in pairs),
                        max(self.precision, o.precision))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if isinstance(e, int):
            return self.ipow(e)
        return self.power(e)

    def ipow(self, k: int) -> "Interval":
        if k < 0:
            return Interval.exact(1, self.precision) / self.ipow(-k)
        if k == 0:
            return Interval.exact(1, self.precision)
        b = self.bits
        dn, up = _ctx(b, False), _ctx(b, True)
        if self.lo >= 0:
            return Interval(dn.pow(self.lo, k), up.pow(self.hi, k), self.precision)
        if self.hi <= 0:
            r = (-self).ipow(k)
            return r if k % 2 == 0 else -r
        m = up.pow(max(up.minus(self.lo), self.hi), k)
        if k % 2 == 0:
            return Interval(mpfr(0), m, self.precision)
        return Interval(dn.pow(self.lo, k), up.pow(self.hi, k), self.precision)

    def power(self, e) -> "Interval":
        """x**e for x > 0 and a real exponent (rational or interval)."""
        if isinstance(e, Fraction) and e.denominator == 1:
            return self.ipow(int(e))
        return (self.log() * e).exp()

    # elementary functions ------------------------------------------------
    def exp(self) -> "Interval":
        b = self.bits
        return Interval(_ctx(b, False).exp(self.lo), _ctx(b, True).exp(self.hi), self.precision)

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise ValueError("log of an interval not contained in (0, inf)")
        b = self.bits
        return Interval(_ctx(b, False).log(self.lo), _ctx(b, True).log(self.hi), self.precision)

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative part")
        b = self.bits
        return Interval(_ctx(b, False).sqrt(self.lo), _ctx(b, True).sqrt(self.hi), self.precision)

    def cos(self) -> "Interval":
        b = self.bits
        dn, up = _ctx(b, False), _ctx(b, True)
        lo = min(dn.cos(self.lo), dn.cos(self.hi))
        hi = max(up.cos(self.lo), up.cos(self.hi))
        p = pi_interval(self.precision)
        # interior extrema at multiples of pi
        k0 = int(gmpy2.floor(self.lo / p.hi)) - 1
        k1 = int(gmpy2.ceil(self.hi / p.lo)) + 1
        for k in range(k0, k1 + 1):
            kp = p * k
            if kp.hi >= self.lo and kp.lo <= self.hi:
                if k % 2 == 0:
                    hi = mpfr(1)
                else:
                    lo = mpfr(-1)
        return Interval(max(lo, mpfr(-1)), min(hi, mpfr(1)), self.precision)

    def sin(self) -> "Interval":
        return (self - pi_interval(self.precision) / 2).cos()

    # queries ---------------------------------------------------------------
    def contains(self, q) -> bool:
        if isinstance(q, Interval):
            return self.lo <= q.lo and q.hi <= self.hi
        q = as_rational(q)
        return self.lo <= mpq(q.numerator, q.denominator) <= self.hi

    def width(self):
        return _ctx(self.bits, True).sub(self.hi, self.lo)

    def mid(self):
        return (self.lo + self.hi) / 2

    def lo_fraction(self) -> Fraction:
        return _to_fraction(self.lo)

    def hi_fraction(self) -> Fraction:
        return _to_fraction(self.hi)

    def lo_str(self, digits: int = 30) -> str:
        return _directed_decimal(self.lo_fraction(), digits, ROUND_FLOOR)

    def hi_str(self, digits: int = 30) -> str:
        return _directed_decimal(self.hi_fraction(), digits, ROUND_CEILING)

    def __float__(self):
        return float(self.mid())

    def __repr__(self):
        return f"Interval[{self.lo_str(20)}, {self.hi_str(20)}]"


def _directed_decimal(q: Fraction, digits: int, rounding) -> str:
    ctx = Context(prec=digits, rounding=rounding)
    v = ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
    return format(v, "E") if v != 0 and (abs(v) < Decimal("1e-6") or abs(v) >= Decimal("1e12")) else format(v, "f")


# ---------------------------------------------------------------------------
# complex intervals (only the few operations the positive-side L-values need)

class ComplexInterval:
    __slots__ = ("re", "im")

    def __init__(self, re: Interval, im: Interval):
        self.re = re
        self.im = im

    @classmethod
    def real(cls, x: Interval) -> "ComplexInterval":
        return cls(x, Interval.exact(0, x.precision))

    def __add__(self, o):
        if not isinstance(o, ComplexInterval):
            o = ComplexInterval.real(self.re._coerce(o))
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __mul__(self, o):
        if not isinstance(o, ComplexInterval):
            o = self.re._coerce(o)
            return ComplexInterval(self.re * o, self.im * o)
        return ComplexInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def abs2(self) -> Interval:
        return self.re.ipow(2) + self.im.ipow(2)


def root_of_unity(k: int, order: int, precision: int) -> ComplexInterval:
    """Enclosure of exp(2 pi i k / order)."""
    k %= order
    if k == 0:
        return ComplexInterval.real(Interval.exact(1, precision))
    if 2 * k == order:
        return ComplexInterval.real(Interval.exact(-1, precision))
    theta = pi_interval(precision) * Fraction(2 * k, order)
    return ComplexInterval(theta.cos(), theta.sin())


# ---------------------------------------------------------------------------
# constants

@lru_cache(maxsize=None)
def pi_interval(precision: int = DEFAULT_PRECISION) -> Interval:
    b = digits_to_bits(precision)
    return Interval(_ctx(b, False).const_pi(), _ctx(b, True).const_pi(), precision)


@lru_cache(maxsize=None)
def two_pi(precision: int = DEFAULT_PRECISION) -> Interval:
    return pi_interval(precision) * 2


@lru_cache(maxsize=None)
def log_two_pi(precision: int = DEFAULT_PRECISION) -> Interval:
    return two_pi(precision).log()


@lru_cache(maxsize=None)
def e_interval(precision: int = DEFAULT_PRECISION) -> Interval:
    return Interval.exact(1, precision).exp()


def _rising(s: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= s + i
    return out


# ---------------------------------------------------------------------------
# Gamma

@lru_cache(maxsize=None)
def gamma_interval(s, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of Gamma(s) for rational s > 0.

    Shift to z = s + K with z large, evaluate Stirling's series for log Gamma(z)
    and bound the remainder by the first omitted term
    |B_{2M+2}| / ((2M+2)(2M+1) z^{2M+1}), valid for real z > 0.
    """
    s = as_rational(s)
    if s <= 0:
        raise ValueError("gamma_interval needs s > 0")
    work = precision + 10
    bits = digits_to_bits(work)
    K = max(0, math.ceil(Fraction(bits, 2) - s))
    z = s + K
    zi = Interval.exact(z, work)
    log_z = zi.log()
    acc = (zi - Fraction(1, 2)) * log_z - zi + log_two_pi(work) / 2
    eps = Fraction(1, 2 ** (bits + 8))
    k = 1
    while True:
        term = bernoulli(2 * k) / (2 * k * (2 * k - 1) * z ** (2 * k - 1))
        acc = acc + term
        nxt = abs(bernoulli(2 * k + 2)) / ((2 * k + 2) * (2 * k + 1) * z ** (2 * k + 1))
        if nxt < eps:
            acc = acc + Interval(_frac_down(-nxt, bits), _frac_up(nxt, bits), work)
            break
        k += 1
    g = acc.exp() / _rising(s, K)
    return Interval(g.lo, g.hi, precision)


# ---------------------------------------------------------------------------
# Hurwitz and Riemann zeta

@lru_cache(maxsize=None)
def hurwitz_interval(s, x, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of zeta(s, x) = sum_{k>=0} (x+k)^(-s) for rational s > 1, x > 0.

    Euler-Maclaurin after N explicit terms, with a = x + N:
        a^(1-s)/(s-1) + a^(-s)/2 + sum_{j=1}^{M} B_{2j}/(2j)! (s)_{2j-1} a^(-s-2j+1) + R,
        |R| <= |B_{2M}|/(2M)! (s)_{2M} a^(1-s-2M) / (s+2M-1).
    """
    s = as_rational(s)
    x = as_rational(x)
    if s <= 1:
        raise ValueError("hurwitz_interval needs s > 1")
    if x <= 0:
        raise ValueError("hurwitz_interval needs x > 0")
    work = precision + 10
    bits = digits_to_bits(work)
    N = max(12, bits // 4)
    integral_s = s.denominator == 1

    def neg_power(base: Fraction) -> Interval:
        if integral_s:
            return Interval.exact(Fraction(1) / base ** int(s), work)
        return Interval.exact(base, work).power(-s)

    head = Interval.exact(0, work)
    for k in range(N):
        head = head + neg_power(x + k)
    a = x + N
    a_s = neg_power(a)  # a^(-s)
    tail = a_s * (a / (s - 1)) + a_s / 2
    eps = Fraction(1, 2 ** (bits + 8))
    j = 1
    fact = Fraction(1)  # (2j)!
    while True:
        fact *= (2 * j - 1) * (2 * j)
        coeff = bernoulli(2 * j) / fact * _rising(s, 2 * j - 1) / a ** (2 * j - 1)
        tail = tail + a_s * coeff
        rem = abs(bernoulli(2 * j)) / fact * _rising(s, 2 * j) / (a ** (2 * j - 1) * (s + 2 * j - 1))
        # rem multiplies a^(-s) <= a_s.hi
        rem_iv = a_s * rem
        if rem_iv.hi < mpq(eps.numerator, eps.denominator) or j > 4 * N:
            tail = tail + Interval(_ctx(bits, False).minus(rem_iv.hi), rem_iv.hi, work)
            break
        j += 1
    out = head + tail
    return Interval(out.lo, out.hi, precision)


def zeta_interval(s, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of the Riemann zeta function at rational s > 1."""
    s = as_rational(s)
    if s <= 1:
        raise ValueError("zeta_interval needs s > 1")
    return hurwitz_interval(s, Fraction(1), precision)


# ---------------------------------------------------------------------------
# certified comparisons

class Verdict(enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    UNDECIDED = "Undecided"

    def __str__(self):
        return self.value


def certify_less_than(x: Interval, c) -> Verdict:
    """Certified iff hi(x) < c; Refuted iff lo(x) >= c; else Undecided."""
    c = as_rational(c)
    cq = mpq(c.numerator, c.denominator)
    if x.hi < cq:
        return Verdict.CERTIFIED
    if x.lo >= cq:
        return Verdict.REFUTED
    return Verdict.UNDECIDED


def certify_greater_than(x: Interval, c) -> Verdict:
    """Certified iff lo(x) > c; Refuted iff hi(x) <= c; else Undecided."""
    c = as_rational(c)
    cq = mpq(c.numerator, c.denominator)
    if x.lo > cq:
        return Verdict.CERTIFIED
    if x.hi <= cq:
        return Verdict.REFUTED
    return Verdict.UNDECIDED


def certify(evaluate: Callable[[int], Interval], c, relation: str = "<",
            precision: int = DEFAULT_PRECISION) -> tuple[Verdict, Interval]:
    """Evaluate at `precision`; an Undecided result is retried once at doubled
    precision and raises UndecidedError if it persists."""
    check = certify_less_than if relation == "<" else certify_greater_than
    x = evaluate(precision)
    v = check(x, c)
    if v is Verdict.UNDECIDED:
        x = evaluate(2 * precision)
        v = check(x, c)
        if v is Verdict.UNDECIDED:
            raise UndecidedError(f"comparison {relation} {c} undecided at {2 * precision} digits: {x!r}")
    return v, x
