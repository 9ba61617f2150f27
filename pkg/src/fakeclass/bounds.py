"""The discriminant bound functions as certified interval enclosures.

Notation: s = 1 + delta, P(n) = prod_{j=1}^{n-1} (2 pi)^(j+1) / j!,
G(delta) = Gamma(s) zeta(s)^2 / (2 pi)^s and E0(n, d) = prod_{j=1}^{(n-1)/2} zeta(2dj)^(1/2).

    f(n,d,delta)   = [G e^-0.1 P (50 delta s)^(1/d)]^(2/(n^2-2delta-3))
    phi(n,d,R,delta) = [G P (delta s / (R E0))^(1/d)]^(2/(n^2-2delta-3))
    p1(n,d,Dk,delta) = [50 delta s / (E0 Dk^((n^2-2delta-3)/2)) (G e^-0.1 P)^d]^(4/(n^2+n-2delta-4))
    p2(n,d,Dk,R,delta) = [delta s / (R E0 Dk^((n^2-2delta-3)/2)) (G P)^d]^(4/(n^2+n-2delta-4))
    p3(n,d,Dk,h)   = [h / E0 P^d Dk^(-(n^2-1)/2)]^(4/((n-1)(n+2)))
    dd(n,delta)    = [50 delta s e^-0.1 G P]^(4/(n^2+n-2delta-4))
    lambda(n,h)    = [h P]^(4/((n-1)(n+2)))
    L(n,d,q,h)     = [n h prod_{j<=n/d}(q^(jd)-1) / prod_{j<=n}(q^j-1)
                      prod_{j<=(n-1)/2} zeta(2j+1)/zeta(2j) P]^(4/((n-1)(n+2)))

Every rational argument (delta, R, the constants 0.02, 0.1, 50) stays exact
until the single transcendental step.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .analytic import (DEFAULT_PRECISION, Interval, gamma_interval, log_two_pi,
                       two_pi, zeta_interval)
from .exactnum import as_rational
from .fieldsdb import ZIMMERT_EXPONENT, ZIMMERT_FACTOR

_EXTRA = 10  # guard digits for intermediate results
DELTA_GRID = tuple(Fraction(k, 50) for k in range(1, 501))  # 0.02, 0.04, ..., 10


def _check_n(n: int):
    if n < 5 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 5, got {n}")


def _trim(x: Interval, precision: int) -> Interval:
    return Interval(x.lo, x.hi, precision)


@lru_cache(maxsize=None)
def P_interval(n: int, precision: int) -> Interval:
    """prod_{j=1}^{n-1} (2 pi)^(j+1) / j!: exact factorials times one power of 2 pi."""
    expo = (n - 1) * (n + 2) // 2
    return two_pi(precision).ipow(expo) * Fraction(1, math.prod(math.factorial(j) for j in range(1, n)))


@lru_cache(maxsize=None)
def _G(delta: Fraction, precision: int) -> Interval:
    s = 1 + delta
    two_pi_s = (log_two_pi(precision) * s).exp()
    return gamma_interval(s, precision) * zeta_interval(s, precision).ipow(2) / two_pi_s


@lru_cache(maxsize=None)
def _exp_tenth(precision: int) -> Interval:
    return Interval.exact(ZIMMERT_EXPONENT, precision).exp()


@lru_cache(maxsize=None)
def _E0(n: int, d: int, precision: int) -> Interval:
    out = Interval.exact(1, precision)
    for j in range(1, (n - 1) // 2 + 1):
        out = out * zeta_interval(2 * d * j, precision)
    return out.sqrt()


def E0(n: int, d: int, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    return _trim(_E0(n, d, precision + _EXTRA), precision)


def f_bound(n: int, d: int, delta, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    delta = as_rational(delta)
    w = precision + _EXTRA
    inner = _G(delta, w) / _exp_tenth(w) * P_interval(n, w)
    inner = inner * Interval.exact(50 * delta * (1 + delta), w).power(Fraction(1, d))
    return _trim(inner.power(Fraction(2) / (n * n - 2 * delta - 3)), precision)


def phi_bound(n: int, d: int, reg_ratio, delta, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    delta, R = as_rational(delta), as_rational(reg_ratio)
    w = precision + _EXTRA
    inner = _G(delta, w) * P_interval(n, w)
    inner = inner * (Interval.exact(delta * (1 + delta) / R, w) / _E0(n, d, w)).power(Fraction(1, d))
    return _trim(inner.power(Fraction(2) / (n * n - 2 * delta - 3)), precision)


def _Dk_power(Dk: int, e: Fraction, w: int) -> Interval:
    if Dk == 1:
        return Interval.exact(1, w)
    return Interval.exact(Dk, w).power(e)


def p1(n: int, d: int, Dk: int, delta, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    delta = as_rational(delta)
    w = precision + _EXTRA
    base = (_G(delta, w) / _exp_tenth(w) * P_interval(n, w)).ipow(d)
    lead = Interval.exact(50 * delta * (1 + delta), w) / (_E0(n, d, w) * _Dk_power(Dk, (n * n - 2 * delta - 3) / 2, w))
    return _trim((lead * base).power(Fraction(4) / (n * n + n - 2 * delta - 4)), precision)


def p2(n: int, d: int, Dk: int, reg_ratio, delta, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    delta, R = as_rational(delta), as_rational(reg_ratio)
    w = precision + _EXTRA
    base = (_G(delta, w) * P_interval(n, w)).ipow(d)
    lead = Interval.exact(delta * (1 + delta) / R, w) / (_E0(n, d, w) * _Dk_power(Dk, (n * n - 2 * delta - 3) / 2, w))
    return _trim((lead * base).power(Fraction(4) / (n * n + n - 2 * delta - 4)), precision)


def p3(n: int, d: int, Dk: int, h: int, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    w = precision + _EXTRA
    inner = P_interval(n, w).ipow(d) * Fraction(h) / _E0(n, d, w) / _Dk_power(Dk, Fraction(n * n - 1, 2), w)
    return _trim(inner.power(Fraction(4, (n - 1) * (n + 2))), precision)


def d_bound(n: int, delta, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    delta = as_rational(delta)
    w = precision + _EXTRA
    inner = _G(delta, w) / _exp_tenth(w) * P_interval(n, w) * (50 * delta * (1 + delta))
    return _trim(inner.power(Fraction(4) / (n * n + n - 2 * delta - 4)), precision)


def lambda_bound(n: int, h: int, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    w = precision + _EXTRA
    return _trim((P_interval(n, w) * h).power(Fraction(4, (n - 1) * (n + 2))), precision)


def L_elimination(n: int, d: int, q: int, h: int, precision: int = DEFAULT_PRECISION) -> Interval:
    _check_n(n)
    if d < 1 or n % d:
        raise ValueError(f"d = {d} does not divide n = {n}")
    w = precision + _EXTRA
    ratio = Fraction(n * h * math.prod(q ** (j * d) - 1 for j in range(1, n // d + 1)),
                     math.prod(q**j - 1 for j in range(1, n + 1)))
    inner = P_interval(n, w) * ratio
    for j in range(1, (n - 1) // 2 + 1):
        inner = inner * zeta_interval(2 * j + 1, w) / zeta_interval(2 * j, w)
    return _trim(inner.power(Fraction(4, (n - 1) * (n + 2))), precision)


def class_number_bound(D_ell: int, d: int, delta, precision: int = DEFAULT_PRECISION) -> Interval:
    """Lower bound for 1/h_l from Brauer-Siegel with Zimmert's regulator bound:
    0.02/(s(s-1)) ((2 pi)^s e^0.1 / Gamma(s))^d / (D_l^(s/2) zeta(s)^(2d))."""
    delta = as_rational(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    s = 1 + delta
    w = precision + _EXTRA
    two_pi_s = (log_two_pi(w) * s).exp()
    local = (two_pi_s * _exp_tenth(w) / gamma_interval(s, w)).ipow(d)
    out = local * (ZIMMERT_FACTOR / (s * (s - 1)))
    out = out / (Interval.exact(D_ell, w).power(s / 2) * zeta_interval(s, w).ipow(2 * d))
    return _trim(out, precision)


def minimize_over_delta(fn: Callable[[Fraction], Interval],
                        grid: Iterable[Fraction] = DELTA_GRID,
                        valid: Optional[Callable[[Fraction], bool]] = None) -> tuple[Fraction, Interval]:
    """Grid search: the delta whose enclosure has the smallest upper end
    (ties broken by the smaller delta)."""
    best = None
    for delta in grid:
        if valid is not None and not valid(delta):
            continue
        x = fn(delta)
        if best is None or x.hi < best[1].hi:
            best = (delta, x)
    if best is None:
        raise ValueError("empty delta grid")
    return best


def zeta_times_L_euler(chi, j: int, prime_bound: int = 10**4, precision: int = 30) -> Interval:
    """zeta(j)^(1/2) L(j+1, chi) for k = Q and a real character chi, both from
    truncated Euler products with certified tails."""
    from .lvalues import DirichletCharacter, dirichlet_L_euler_interval
    z = dirichlet_L_euler_interval(DirichletCharacter.trivial(), j, prime_bound, precision)
    L = dirichlet_L_euler_interval(chi, j + 1, prime_bound, precision)
    return z.sqrt() * L
