from fractions import Fraction
from math import factorial

import pytest

from ftor.group import FgAbelianGroup, Weight, kernel_and_splitting
from ftor.invariant import (
    OrbitCounts,
    assemble_I,
    coefficient_at,
    extended_leading_term,
    field_sum_leading_term,
    log_I,
    zeta,
)
from ftor.novikov import NotInNov, NovikovSeries, include_i_N
from ftor.torsion import BasedChainComplex, floer_torsion, reidemeister_torsion

from helpers import Z1, gre, series_coeffs
from oracles import exp_coefficients, log_coefficients, series_quotient

N1 = Weight(Z1, (1,))


def circle_tau(novikov=True, cutoff=6):
    d = gre({1: 1, 0: -1})
    if novikov:
        return floer_torsion(BasedChainComplex("Z", [1, 1], [[[include_i_N(d, N1, cutoff)]]]))
    return reidemeister_torsion(BasedChainComplex("Z", [1, 1], [[[d]]]))


def test_orbit_counts_validation():
    with pytest.raises(ValueError):
        OrbitCounts(N1, {(0,): 1}, 4)
    with pytest.raises(ValueError):
        OrbitCounts(N1, {(-1,): 1}, 4)
    with pytest.raises(ValueError):
        OrbitCounts(N1, {}, 0)
    oc = OrbitCounts(N1, {(1,): 2, (9,): 1}, 4)
    assert oc.counts == {(1,): 2}
    assert (oc + OrbitCounts(N1, {(1,): -2}, 4)).counts == {}


def test_zeta_is_exp_of_counts():
    z = zeta(OrbitCounts(N1, {(1,): 1, (2,): Fraction(1, 2)}, 5))
    assert series_coeffs(z, 5) == exp_coefficients({1: Fraction(1), 2: Fraction(1, 2)}, 5)


def test_invariant_of_circle_with_one_orbit():
    I = assemble_I(circle_tau(), zeta(OrbitCounts(N1, {(1,): 1}, 6)))
    # exp(t) / (1 - t)
    want = [sum(Fraction(1, factorial(j)) for j in range(k + 1)) for k in range(6)]
    assert series_coeffs(log_I(I), 6)[1:] == log_coefficients(want, 6)[1:]
    assert coefficient_at(I, (1,)) == 2
    assert coefficient_at(I, (2,)) == Fraction(1, 2)


def test_group_ring_and_floer_torsion_agree():
    z = zeta(OrbitCounts(N1, {(1,): 1}, 6))
    assert assemble_I(circle_tau(True), z) == assemble_I(circle_tau(False), z)


def test_leading_terms():
    tv = circle_tau(False)
    assert field_sum_leading_term(tv.value, kernel_and_splitting(Z1, N1)).render() == "1"
    assert extended_leading_term(circle_tau(True)).render() == "1"


def test_log_requires_unit_leading_term():
    d = gre({0: 2, 1: -1})
    tv = floer_torsion(BasedChainComplex("Z", [1, 1], [[[include_i_N(d, N1, 5)]]]))
    I = assemble_I(tv, zeta(OrbitCounts(N1, {}, 5)))
    with pytest.raises(NotInNov):
        log_I(I)


def test_zero_torsion_is_absorbing():
    zero = include_i_N(gre({}), N1, 4)
    tv = floer_torsion(BasedChainComplex("Z", [1, 1], [[[zero]]]))
    I = assemble_I(tv, zeta(OrbitCounts(N1, {(1,): 3}, 4)))
    assert I.is_zero() and I.render() == "0"
    with pytest.raises(NotInNov):
        log_I(I)


def test_zero_weight_rejected():
    G = FgAbelianGroup(1)
    N0 = Weight(G, (0,))
    with pytest.raises(ValueError):
        assemble_I(circle_tau(False), zeta(OrbitCounts(N0, {}, 3)))


def test_invariant_expansion_matches_quotient_oracle():
    I = assemble_I(circle_tau(), zeta(OrbitCounts(N1, {}, 6)))
    want = series_quotient({0: Fraction(1)}, {0: Fraction(1), 1: Fraction(-1)}, 6)
    assert series_coeffs(_as_series(I), 6) == want


def _as_series(I):
    return NovikovSeries(N1, I.value.to_group_terms(), I.cutoff)
