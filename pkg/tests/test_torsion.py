import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftor.fieldsum import FieldSumElement, decompose
from ftor.group import FgAbelianGroup, Weight
from ftor.novikov import GroupRingElement, NovikovSeries, include_i_N
from ftor.torsion import (
    BasedChainComplex,
    ComplexError,
    floer_torsion,
    fold,
    reduce_to_Z2,
    reidemeister_torsion,
    torsion_over_field,
)

from helpers import Z1, gre, gre_dict, lpoly_dict
from oracles import equal_up_to_signed_monomial, subset_minor_torsion

Z2 = FgAbelianGroup(2)


def circle(G=Z1):
    t = GroupRingElement(G, {G.free_gen(0).key: 1})
    return BasedChainComplex("Z", [1, 1], [[[t - 1]]])


def torus():
    G = Z2
    t = GroupRingElement(G, {(1, 0): 1})
    s = GroupRingElement(G, {(0, 1): 1})
    one = GroupRingElement.one(G)
    d1 = [[t - one, s - one]]
    d2 = [[-(s - one)], [t - one]]
    return BasedChainComplex("Z", [1, 2, 1], [d1, d2])


def test_circle_torsion():
    tv = reidemeister_torsion(circle())
    assert tv.render() == "(1 - t)^-1"
    assert tv.unit_class == "+-G"
    (rf,) = tv.value.components
    assert lpoly_dict(rf.num) == {0: 1}
    assert lpoly_dict(rf.den) == {0: 1, 1: -1}


def test_torus_torsion_is_one():
    tv = reidemeister_torsion(torus())
    assert tv.value == FieldSumElement.one(decompose(Z2))


def test_point_and_empty():
    point = BasedChainComplex("Z", [1], [])
    assert reidemeister_torsion(point).is_zero()
    assert reidemeister_torsion(point).render() == "0"
    empty = BasedChainComplex("Z", [], [])
    assert reidemeister_torsion(empty).render() == "1"


def test_torsion_group_factors():
    G = FgAbelianGroup(1, (2,))
    d = GroupRingElement(G, {(1, 0): 1, (0, 1): -1})
    tv = reidemeister_torsion(BasedChainComplex("Z", [1, 1], [[[d]]]))
    assert len(tv.value.components) == 2
    assert tv.is_acyclic()
    assert tv.render() == "((1 - t)^-1 in Q(t), (1 + t)^-1 in Q(t))"


def test_partially_acyclic_component_is_zero():
    G = FgAbelianGroup(0, (2,))
    s = GroupRingElement(G, {(1,): 1})
    d = s - GroupRingElement.one(G)
    tv = reidemeister_torsion(BasedChainComplex("Z", [1, 1], [[[d]]]))
    # trivial character kills s - 1, the sign character sends it to -2
    assert tv.acyclic_mask() == (False, True)


def test_d_squared_and_shape_errors():
    t = gre({1: 1})
    with pytest.raises(ComplexError):
        BasedChainComplex("Z", [1, 1, 1], [[[t]], [[t]]])
    with pytest.raises(ComplexError):
        BasedChainComplex("Z", [1, 1], [])
    with pytest.raises(ComplexError):
        BasedChainComplex("Z", [1, 2], [[[t]]])
    with pytest.raises(ComplexError):
        BasedChainComplex("Q", [1], [])
    with pytest.raises(ComplexError):
        BasedChainComplex("Z", [1, 1], [[[1]]])


def test_reidemeister_rejects_novikov_entries():
    N = Weight(Z1, (1,))
    d = NovikovSeries(N, {(1,): 1, (0,): -1}, 4)
    with pytest.raises(ComplexError):
        reidemeister_torsion(BasedChainComplex("Z", [1, 1], [[[d]]]))


def test_fold_puts_even_degrees_first():
    n0, n1, de, do = fold(torus())
    assert (n0, n1) == (2, 2)
    assert len(de) == n1 and len(do) == n0


def test_reduce_to_Z2_periodic_window():
    # a 2-periodic window d: C1 -> C0 = (t-1), C2 -> C1 = 0 ... is the circle again
    t = gre({1: 1})
    one = gre({0: 1})
    zero = gre({})
    C = BasedChainComplex("Z", [1, 1, 1], [[[t - one]], [[zero]]])
    R = reduce_to_Z2(C, 2)
    assert R.grading == "Z2"
    assert R.ranks == (1, 1)


def test_torsion_over_field_rationals():
    from ftor.rational import to_q

    zero, one = to_q(0), to_q(1)
    # C0 = Q, C1 = Q, d_odd = [3], d_even = [0]
    t = torsion_over_field([[zero]], [[to_q(3)]], 1, 1, zero, one)
    assert t == to_q(1) / 3
    assert torsion_over_field([[zero]], [[zero]], 1, 1, zero, one) is None


def _random_acyclic(rng, ranks_pieces):
    """Direct sum of elementary ``d = p`` pieces, conjugated by a random transvection."""
    pieces = []
    for _ in range(ranks_pieces):
        e = rng.randint(0, 2)
        p = {0: rng.choice([1, -1, 2]), 1 + e: rng.choice([1, -1, 3])}
        pieces.append(p)
    n = len(pieces)
    one, zero = gre({0: 1}), gre({})
    D = [[gre(pieces[i]) if i == j else zero for j in range(n)] for i in range(n)]
    i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
    if i != j:
        a = gre({rng.randint(-1, 2): rng.choice([1, -1])})
        # row operation on the target basis
        D[i] = [x + a * y for x, y in zip(D[i], D[j])]
    return pieces, D


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.randoms(use_true_random=False))
def test_torsion_matches_subset_minor_oracle(k, rng):
    pieces, D = _random_acyclic(rng, k)
    C = BasedChainComplex("Z", [k, k], [D])
    tv = reidemeister_torsion(C, random.Random(1))
    (rf,) = tv.value.components
    on, od = subset_minor_torsion([k, k], [[[gre_dict(x) for x in row] for row in D]])
    assert equal_up_to_signed_monomial(lpoly_dict(rf.num), lpoly_dict(rf.den), on, od)


def test_direct_sum_multiplies():
    t = gre({1: 1})
    one = gre({0: 1})
    zero = gre({})
    c1 = BasedChainComplex("Z2", [1, 1], [[[zero]], [[t - one]]])
    c2 = BasedChainComplex("Z2", [1, 1], [[[zero]], [[t + one]]])
    s = c1.direct_sum(c2)
    assert s.ranks == (2, 2)
    prod = reidemeister_torsion(c1).raw * reidemeister_torsion(c2).raw
    tv = reidemeister_torsion(s)
    rep, _ = prod.normalize()
    assert tv.value == rep


def test_floer_torsion_circle():
    N = Weight(Z1, (1,))
    d = include_i_N(gre({1: 1, 0: -1}), N, 6)
    tv = floer_torsion(BasedChainComplex("Z", [1, 1], [[[d]]]))
    assert tv.unit_class == "+-ker psi"
    assert tv.value.cutoff == 6
    assert tv.render() == "1 + t + t^2 + t^3 + t^4 + t^5"


def test_floer_torsion_two_variables_matches_group_ring():
    G = Z2
    N = Weight(G, (1, 2))
    x = GroupRingElement(G, {(1, 0): 1, (0, 0): -1})
    y = GroupRingElement(G, {(0, 1): 2, (0, 0): 1})
    dn = [[include_i_N(x, N, 5), NovikovSeries.zero(N, 5)], [NovikovSeries.zero(N, 5), include_i_N(y, N, 5)]]
    tv = floer_torsion(BasedChainComplex("Z", [2, 2], [dn]))
    assert tv.is_acyclic()
    assert tv.value.cutoff >= 5


def test_floer_torsion_non_acyclic_is_zero():
    N = Weight(Z1, (1,))
    zero = NovikovSeries.zero(N, 4)
    tv = floer_torsion(BasedChainComplex("Z", [1, 1], [[[zero]]]))
    assert tv.is_zero()
    with pytest.raises(ComplexError):
        BasedChainComplex("Z", [1, 1], [[[zero]]], ring=("novikov", N))
