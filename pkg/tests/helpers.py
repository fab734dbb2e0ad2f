"""Conversions between package values and the plain dicts used by the oracles."""
from fractions import Fraction

from ftor.group import FgAbelianGroup
from ftor.novikov import GroupRingElement

Z1 = FgAbelianGroup(1)


def fr(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def lpoly_dict(p) -> dict:
    return {e[0]: fr(c) for e, c in p.terms.items()}


def rf_dicts(rf):
    return lpoly_dict(rf.num), lpoly_dict(rf.den)


def gre_dict(a: GroupRingElement) -> dict:
    return {k[0]: fr(c) for k, c in a.terms.items()}


def gre(d: dict, G=Z1) -> GroupRingElement:
    return GroupRingElement(G, {(e,): c for e, c in d.items() if c})


def series_coeffs(s, n_terms) -> list:
    """Coefficients of ``t^0 .. t^(n-1)`` of a series over ``Z``."""
    return [fr(s.coefficient((k,))) for k in range(n_terms)]
