from fractions import Fraction

import pytest

from ftor.embedding import embed_fraction, embed_group_ring, embed_series, prec_for_cutoff
from ftor.group import FgAbelianGroup, Weight, kernel_and_splitting
from ftor.novikov import GroupRingElement, NovikovSeries

from helpers import Z1, fr, gre

N1 = Weight(Z1, (1,))
SP1 = kernel_and_splitting(Z1, N1)


def test_prec_for_cutoff():
    assert prec_for_cutoff(5, 1) == 5
    assert prec_for_cutoff(Fraction(7, 2), 1) == 4
    assert isinstance(prec_for_cutoff(3, 1), int)


def test_embed_fraction_geometric():
    e = embed_fraction(gre({0: 1}), gre({0: 1, 1: -2}), SP1, 5)
    assert e.prec == 5
    assert {k[0]: fr(c) for k, c in e.to_group_terms().items()} == {0: 1, 1: 2, 2: 4, 3: 8, 4: 16}


def test_embed_fraction_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        embed_fraction(gre({0: 1}), gre({}), SP1, 3)


def test_series_inverse_round_trip():
    s = embed_series(NovikovSeries(N1, {(0,): 1, (1,): 1}, 4), SP1)
    assert s.inverse().render() == "1 - t + t^2 - t^3"
    assert (s * s.inverse()).render() == "1"


def test_weight_mismatch():
    other = Weight(Z1, (2,))
    with pytest.raises(ValueError):
        embed_series(NovikovSeries(other, {(0,): 1}, 4), SP1)


def test_two_variable_round_trip():
    G = FgAbelianGroup(2)
    N = Weight(G, (1, 1))
    sp = kernel_and_splitting(G, N)
    a = GroupRingElement(G, {(0, 0): 1, (1, 0): 2, (0, 1): -1, (2, 1): 5})
    e = embed_group_ring(a, sp, 4)
    assert e.to_group_terms() == a.terms
    assert e.degree() == 0
    assert e.leading_coefficient().render() == "1"
