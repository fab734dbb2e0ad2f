from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftor.group import FgAbelianGroup, Weight
from ftor.novikov import (
    GroupRingElement,
    NotInNov,
    NotInvertible,
    NovikovSeries,
    degree,
    exp_series,
    include_i_N,
    invert,
    leading_term,
    log_series,
    normalize_mod_units,
)

from helpers import Z1, gre, gre_dict, series_coeffs
from oracles import exp_coefficients, log_coefficients, series_quotient

N1 = Weight(Z1, (1,))


def ser(d, cutoff=8):
    return NovikovSeries(N1, {(e,): c for e, c in d.items()}, cutoff)


def test_invert_one_minus_t():
    inv = invert(ser({0: 1, 1: -1}, 6))
    assert series_coeffs(inv, 6) == [1] * 6


def test_invert_one_minus_t_squared():
    inv = invert(ser({0: 1, 1: -1}, 7) ** 2)
    assert series_coeffs(inv, 7) == [k + 1 for k in range(7)]


def test_invert_two_plus_t():
    inv = invert(ser({0: 2, 1: 1}, 5))
    assert series_coeffs(inv, 5) == [Fraction((-1) ** k, 2 ** (k + 1)) for k in range(5)]


def test_invert_negative_degree_leading_term():
    a = ser({-1: 3, 0: 1}, 6)
    prod = a * invert(a)
    assert series_coeffs(prod, 3) == [1, 0, 0]


def test_invert_errors():
    with pytest.raises(NotInvertible):
        invert(NovikovSeries.zero(N1, 4))
    G = FgAbelianGroup(2)
    N = Weight(G, (1, 0))
    two_term_lt = NovikovSeries(N, {(0, 0): 1, (0, 1): 1}, 4)
    with pytest.raises(NotInvertible):
        invert(two_term_lt)
    with pytest.raises(TypeError):
        invert(gre({0: 1}))


def test_exp_example():
    e = exp_series(ser({1: 1, 2: Fraction(5, 2)}, 3))
    assert series_coeffs(e, 3) == [1, 1, 3]


def test_exp_log_errors():
    with pytest.raises(NotInNov):
        exp_series(ser({0: 1}))
    with pytest.raises(NotInNov):
        log_series(ser({0: 2, 1: 1}))
    with pytest.raises(NotInNov):
        log_series(NovikovSeries.zero(N1, 4))


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.integers(1, 5), st.integers(-4, 4), max_size=4))
def test_exp_log_against_oracle(c):
    cutoff = 7
    a = ser(c, cutoff)
    e = exp_series(a)
    assert series_coeffs(e, cutoff) == exp_coefficients({k: Fraction(v) for k, v in c.items()}, cutoff)
    back = log_series(e)
    assert series_coeffs(back, cutoff) == series_coeffs(a, cutoff)
    lo = log_coefficients(series_coeffs(e, cutoff), cutoff)
    assert lo[1:] == series_coeffs(a, cutoff)[1:]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_invert_against_long_division(c0, tail):
    cutoff = 6
    d = {0: c0}
    for i, v in enumerate(tail, start=1):
        if v:
            d[i] = v
    inv = invert(ser(d, cutoff))
    assert series_coeffs(inv, cutoff) == series_quotient({0: Fraction(1)}, {k: Fraction(v) for k, v in d.items()}, cutoff)


def test_include_drops_high_terms_and_degree():
    p = gre({0: 1, 2: 5, 9: 1})
    s = include_i_N(p, N1, 4)
    assert s.dropped == 1
    assert gre_dict(leading_term(s)) == {0: 1}
    assert degree(ser({3: 1, 5: 2})) == 3
    with pytest.raises(ValueError):
        degree(NovikovSeries.zero(N1, 3))


def test_group_ring_arithmetic():
    a = gre({0: 1, 1: -1})
    b = gre({0: 1, 1: 1})
    assert gre_dict(a * b) == {0: 1, 2: -1}
    assert gre_dict(a + b) == {0: 2}
    assert gre_dict(b - a) == {1: 2}


def test_series_cutoff_arithmetic():
    a = ser({1: 1}, 5)
    b = ser({0: 1}, 3)
    assert (a + b).cutoff == 3
    assert (a * a).cutoff == 5
    # a factor of negative degree lowers the trustworthy window
    assert (ser({-1: 1}, 5) * ser({0: 1}, 5)).cutoff == 4


def test_normalize_mod_units_examples():
    G = FgAbelianGroup(1)
    f = gre({3: -2, 4: 1}, G)
    g = gre({0: 2, 1: -1}, G)
    assert normalize_mod_units(f) == normalize_mod_units(g)
    nf = normalize_mod_units(f)
    assert gre_dict(nf.representative) == {0: 2, 1: -1}
    assert nf.sign == -1
    with pytest.raises(ValueError):
        normalize_mod_units(GroupRingElement.zero(G))


def test_normalize_mod_subgroup():
    G = FgAbelianGroup(2)
    a = GroupRingElement(G, {(1, 3): 1})
    b = GroupRingElement(G, {(1, 0): 1})
    units = [G.element((0, 1))]
    assert normalize_mod_units(a, units) == normalize_mod_units(b, units)
    c = GroupRingElement(G, {(0, 0): 1})
    assert normalize_mod_units(a, units) != normalize_mod_units(c, units)


def test_torsion_group_translates_normalize_together():
    G = FgAbelianGroup(1, (2,))
    a = GroupRingElement(G, {(0, 1): 1, (1, 0): 1})
    b = a.shift((0, 1))
    assert normalize_mod_units(a) == normalize_mod_units(b)
