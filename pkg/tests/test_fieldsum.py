from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftor.fieldsum import FieldSumElement, decompose, det_fraction_free, project
from ftor.group import FgAbelianGroup
from ftor.novikov import GroupRingElement
from ftor.polynomial import LPoly, RationalFunction, cyclotomic_poly

from helpers import lpoly_dict
from oracles import cofactor_det


def rfpoly(d):
    return RationalFunction.poly(LPoly(1, {(e,): c for e, c in d.items()}))


def test_decompose_by_divisors():
    assert [f.d for f in decompose(FgAbelianGroup(1, (6,)))] == [1, 2, 3, 6]
    assert [f.d for f in decompose(FgAbelianGroup(2))] == [1]


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


def test_project_sends_torsion_to_roots_of_unity():
    G = FgAbelianGroup(1, (3,))
    x = project(GroupRingElement(G, {(1, 1): 1, (0, 0): 1}))
    assert x.render() == "(1 + t in Q(t), 1 + z*t in Q(zeta_3)(t))"
    assert x * x.inverse() == FieldSumElement.one(x.factors)
    # s^3 = 1 in every factor
    s = project(GroupRingElement(G, {(0, 1): 1}))
    assert s ** 3 == FieldSumElement.one(s.factors)


def test_inverse_of_zero_divisor_fails():
    G = FgAbelianGroup(0, (2,))
    x = project(GroupRingElement(G, {(1,): 1, (0,): -1}))
    assert x.zero_mask() == (True, False)
    with pytest.raises(ZeroDivisionError):
        x.inverse()


def test_normalize_mod_units():
    G = FgAbelianGroup(1)
    a = project(GroupRingElement(G, {(2,): -3, (3,): 1}))
    b = project(GroupRingElement(G, {(0,): 3, (1,): -1}))
    assert a.normalize()[0] == b.normalize()[0]
    rep, (free, tor, sign) = a.normalize()
    assert a.times_unit(free, tor, sign) == rep


def test_rational_function_canonical_form():
    p = rfpoly({0: 1, 1: -1})
    q = rfpoly({0: 1, 2: -1})
    r = p / q
    assert lpoly_dict(r.num) == {0: 1}
    assert lpoly_dict(r.den) == {0: 1, 1: 1}
    assert (r * q) == p


small = st.dictionaries(st.integers(0, 2), st.integers(-3, 3).filter(bool), max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_fraction_free_matches_cofactor(M):
    got = det_fraction_free([[rfpoly(x) for x in row] for row in M])
    want = cofactor_det([[{e: Fraction(c) for e, c in x.items()} for x in row] for row in M])
    if not want:
        assert not got
    else:
        assert lpoly_dict(got.num) == want and lpoly_dict(got.den) == {0: 1}
