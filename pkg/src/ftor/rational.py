"""Exact rational scalars.

All rational arithmetic in the package goes through ``gmpy2.mpq``; this module
holds the conversions to and from the ``"p/q"`` strings used on the wire.
"""
from fractions import Fraction
from math import gcd

from gmpy2 import mpq

__all__ = ["Q", "to_q", "fmt_q", "lcm", "ZERO", "ONE"]

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def to_q(x) -> mpq:
    """Coerce ints, ``Fraction``s, ``mpq``s and ``"p/q"`` strings to ``mpq``.

    Floats are refused: a float on input almost always means a lost exact value.
    """
    if isinstance(x, bool):
        raise TypeError("refusing to read a bool as a rational")
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass 'p/q' instead")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        try:
            return mpq(s)
        except ValueError:
            raise ValueError(f"not a rational: {x!r}") from None
    return mpq(x)


def fmt_q(x) -> str:
    q = mpq(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)
