"""Exact and certified computations behind the classification of arithmetic
fake projective spaces and fake Grassmannians.

Modules, bottom-up:

* exactnum     - rationals, factorization, Bernoulli numbers, cyclotomic rationals
* analytic     - directed-rounding intervals, Gamma / zeta / Hurwitz enclosures
* fieldsdb     - bundled number-field snapshot and discriminant / regulator data
* lvalues      - exact zeta and L-values at negative integers, positive-side enclosures
* localfactors - parahoric Euler factors and splitting of primes
* bounds       - the named discriminant bound functions as certified intervals
* classifier   - the elimination pipeline and its JSON ledger
* cli          - command-line entry point
"""

__version__ = "0.1.0"


class UnsupportedField(Exception):
    """Raised when an exact computation is requested for a field outside the
    supported class (non-abelian pairs without a usable relative description)."""


class UndecidedError(Exception):
    """Raised when a certified comparison stays undecided after the retry."""
