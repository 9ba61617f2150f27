"""Local Euler factors e'(P_v) in the closed forms used by the classification,
and the splitting of rational primes in imaginary quadratic fields.

Only closed forms are modelled: the inner-form factor at a split place where
the group is anisotropic, the three e -> e' correction products, and e' = 1 for
hyperspecial parahorics and for special ones at ramified places.  That a
non-hyperspecial factor at a split place where the group splits exceeds n is an
assumption flag, not a computation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import factor, is_prime


class SplitType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"

    def __str__(self):
        return self.value


class ParahoricType(enum.Enum):
    HYPERSPECIAL = "hyperspecial"
    SPECIAL = "special"
    MAXIMAL_INNER = "maximal-inner"
    OTHER = "other"

    def __str__(self):
        return self.value


def _is_prime_power(q: int) -> bool:
    return q >= 2 and len(factor(q)) == 1


def e_prime_inner_form(n: int, q: int, d: int) -> int:
    """prod_{j=1}^{n} (q^j - 1) / prod_{j=1}^{n/d} (q^{jd} - 1), an integer."""
    if d <= 1:
        raise ValueError("inner degree d must exceed 1")
    if n % d:
        raise ValueError(f"d = {d} does not divide n = {n}")
    if not _is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    num = math.prod(q**j - 1 for j in range(1, n + 1))
    den = math.prod(q ** (j * d) - 1 for j in range(1, n // d + 1))
    val, rem = divmod(num, den)
    assert rem == 0, f"e'({n},{q},{d}) is not an integer"
    return val


def e_prime_lower_bound_check(n: int, q: int, d: int) -> bool:
    """e' > q^((n^2-2n)(d-1)/2d) > n, compared exactly after raising to the power 2d."""
    e = e_prime_inner_form(n, q, d)
    mid = q ** ((n * n - 2 * n) * (d - 1))  # (q^(...))^(2d)
    return e ** (2 * d) > mid and mid > n ** (2 * d)


def quadratic_field_disc(a: int) -> int:
    """|D| of Q(sqrt(-a)) for square-free a >= 1."""
    return a if a % 4 == 3 else 4 * a


def split_behavior(p: int, a: int) -> SplitType:
    """Splitting of the prime p in Q(sqrt(-a)), a square-free and positive."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if a < 1 or any(e > 1 for _, e in factor(a)):
        raise ValueError(f"{a} is not a positive square-free integer")
    if quadratic_field_disc(a) % p == 0:
        return SplitType.RAMIFIED
    if p == 2:
        return SplitType.SPLIT if a % 8 == 7 else SplitType.INERT
    return SplitType.SPLIT if pow(-a % p, (p - 1) // 2, p) == 1 else SplitType.INERT


def smallest_split_prime(a: int) -> int:
    p = 2
    while True:
        if is_prime(p) and split_behavior(p, a) is SplitType.SPLIT:
            return p
        p += 1


def e_prime_split_product(n: int, q: int, split_type: SplitType) -> Fraction:
    """The factor e'/e at a place with residue field of size q."""
    q = Fraction(q)
    out = Fraction(1)
    if split_type is SplitType.SPLIT:
        for j in range(1, n):
            out *= 1 - 1 / q ** (j + 1)
    elif split_type is SplitType.INERT:
        for j in range(1, (n - 1) // 2 + 1):
            out *= (1 - 1 / q ** (2 * j)) * (1 + 1 / q ** (2 * j + 1))
    else:
        for j in range(1, (n - 1) // 2 + 1):
            out *= 1 - 1 / q ** (2 * j)
    return out


@dataclass(frozen=True)
class LocalDatum:
    """A finite place v of k with residue size q, its behaviour in l, the
    degree d_v of the local division algebra (1 unless inner form) and the
    type of the chosen parahoric."""

    q: int
    split_type: SplitType
    inner_degree: int = 1
    parahoric: ParahoricType = ParahoricType.HYPERSPECIAL
    prime: Optional[int] = None  # rational prime below v, for display

    def __post_init__(self):
        if not _is_prime_power(self.q):
            raise ValueError(f"q = {self.q} is not a prime power")
        if self.inner_degree > 1 and self.split_type is not SplitType.SPLIT:
            raise ValueError("an inner form (d_v > 1) needs a place split in l")
        if self.inner_degree > 1 and self.parahoric is not ParahoricType.MAXIMAL_INNER:
            raise ValueError("inner-form places carry a maximal parahoric")
        if self.parahoric is ParahoricType.SPECIAL and self.split_type is not SplitType.RAMIFIED:
            raise ValueError("'special' is used only at places ramified in l")

    def e_prime(self, n: int) -> Optional[int]:
        """Exact e'(P_v), or None where only the lower bound e' > n is known."""
        if self.inner_degree > 1:
            return e_prime_inner_form(n, self.q, self.inner_degree)
        if self.parahoric in (ParahoricType.HYPERSPECIAL, ParahoricType.SPECIAL):
            return 1
        return None

    def in_T0(self) -> bool:
        return self.inner_degree > 1

    def in_T(self) -> bool:
        """v contributes a factor bounded below by n (non-minimal at a split place)."""
        return self.split_type is SplitType.SPLIT and self.parahoric is not ParahoricType.HYPERSPECIAL
