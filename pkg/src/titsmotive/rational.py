"""Small exact-arithmetic helpers built on :mod:`fractions` and sympy."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime

from .errors import ValidationError


def parse_rational(value) -> Fraction:
    """Parse ``"n/d"``, ``"n"``, an int or a Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=4096)
def prime_factors(n: int) -> dict[int, int]:
    n = abs(n)
    if n == 0:
        raise ValueError("0 has no factorisation")
    return dict(factorint(n)) if n > 1 else {}


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise ValidationError(f"not a prime: {p!r}")
    return p


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(x: Fraction, p: int) -> int:
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def squarefree_part(n: int) -> int:
    """Signed squarefree integer in the same square class as ``n``."""
    if n == 0:
        raise ValueError("0 has no square class")
    s = -1 if n < 0 else 1
    for p, e in prime_factors(n).items():
        if e % 2:
            s *= p
    return s


def square_class(x: Fraction) -> int:
    """Squarefree integer representative of the class of ``x`` in Q*/Q*^2."""
    x = Fraction(x)
    return squarefree_part(x.numerator * x.denominator)
