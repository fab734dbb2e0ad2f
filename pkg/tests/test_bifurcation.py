import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftor.bifurcation import (
    FloerState,
    Move,
    MoveError,
    apply_birth,
    apply_death,
    apply_handleslide,
    apply_move,
    apply_type_II,
    apply_unit_rescale,
    fuzz_invariance,
    inverse_move,
    random_move,
    random_state,
    replay,
    type_ii_exponent,
)
from ftor.group import FgAbelianGroup, Weight
from ftor.invariant import OrbitCounts
from ftor.novikov import NovikovSeries

G = FgAbelianGroup(2)
N = Weight(G, (1, 1))
CUT = 4


def ser(d, cutoff=2 * CUT):
    return NovikovSeries(N, d, cutoff)


def base_state():
    """Rank (1, 1) with ``d_odd = 1 - 2t`` and one orbit."""
    z = ser({})
    return FloerState(N, CUT, [[z]], [[ser({(0, 0): 1, (1, 0): -2})]], OrbitCounts(N, {(0, 1): 1}, CUT))


def test_type_ii_exponent_parity():
    assert type_ii_exponent(1) == 1
    assert type_ii_exponent(0) == -1


def test_type_ii_changes_torsion_and_zeta_but_not_invariant():
    s = base_state()
    t = apply_type_II(s, 1, 0, 3, (1, 0))
    assert t.torsion() != s.torsion()
    assert t.zeta() != s.zeta()
    assert t.invariant() == s.invariant()


def test_type_ii_inverse_is_opposite_sign():
    s = base_state()
    t = apply_type_II(s, 0, 0, 2, (0, 1))
    back = apply_type_II(t, 0, 0, 2, (0, 1), sign=-1)
    assert back.same_as(s)
    # flipping c instead of the sign gives a different state
    other = apply_type_II(t, 0, 0, -2, (0, 1))
    assert not other.same_as(s)


def test_type_ii_zero_coefficient_is_identity():
    s = base_state()
    assert apply_type_II(s, 0, 0, 0, (1, 0)).same_as(s)


def test_type_ii_errors():
    s = base_state()
    with pytest.raises(MoveError):
        apply_type_II(s, 0, 0, 1, (0, 0))
    with pytest.raises(MoveError):
        apply_type_II(s, 0, 0, 1, (1, -2))
    with pytest.raises(MoveError):
        apply_type_II(s, 0, 0, 1, (1, 0), sign=2)
    with pytest.raises(MoveError):
        apply_type_II(s, 0, 5, 1, (1, 0))


def test_handleslide_and_rescale_preserve_invariant():
    s = apply_birth(base_state(), 0)
    I = s.invariant()
    t = apply_handleslide(s, 0, 0, 1, ser({(1, 0): 1, (0, 2): 3}))
    assert t.invariant() == I
    u = apply_unit_rescale(t, 1, 1, sign=-1, g=(2, -1))
    assert u.invariant() == I
    with pytest.raises(MoveError):
        apply_handleslide(s, 0, 1, 1, ser({(1, 0): 1}))
    with pytest.raises(MoveError):
        apply_handleslide(s, 0, 0, 1, ser({(0, 0): 1, (0, 1): 1}) - ser({(1, -1): 1}))


def test_birth_then_death_round_trip():
    s = base_state()
    b = apply_birth(s, 1)
    assert b.ranks() == (2, 2)
    assert b.invariant() == s.invariant()
    d = apply_death(b, 1, 1, 1)
    assert d.same_as(s)


def test_death_needs_monomial_pivot():
    s = base_state()
    with pytest.raises(MoveError):
        apply_death(s, 1, 0, 0)


def test_inverse_moves():
    s = apply_birth(base_state(), 0)
    moves = [
        Move.make("handleslide", degree=1, i=0, j=1, a=ser({(1, 1): 2})),
        Move.make("unit_rescale", degree=0, i=1, sign=-1, g=(1, -1)),
        Move.make("type_II", degree=1, i=1, c=5, A=(0, 1), sign=1),
        Move.make("birth", degree=1),
    ]
    for m in moves:
        t = apply_move(s, m)
        back = apply_move(t, inverse_move(s, m))
        assert back.same_as(s), m.kind
    with pytest.raises(MoveError):
        inverse_move(s, Move.make("death", degree=0, i=0, j=0))


def test_unknown_move_kind():
    with pytest.raises(MoveError):
        Move.make("flip", degree=0)


def test_torsion_is_cached_per_state():
    s = base_state()
    assert s.torsion() is s.torsion()
    assert "_tau" not in s.copy().__dict__


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_sequences_preserve_invariant(seed):
    rng = random.Random(seed)
    s = random_state(rng, N, CUT, max_rank=4)
    I = s.invariant()
    for _ in range(4):
        s = apply_move(s, random_move(rng, s))
    assert s.invariant() == I


def test_fuzz_small_and_replay_deterministic():
    rep = fuzz_invariance(seed=3, n_sequences=5, max_len=4, max_rank=4, cutoff=CUT)
    assert rep.ok and rep.passed == 5
    assert rep.to_json()["failed"] == 0
    a = replay(3, 2, cutoff=CUT, max_len=4, max_rank=4)
    b = replay(3, 2, cutoff=CUT, max_len=4, max_rank=4)
    assert a[0].same_as(b[0]) and a[1] == b[1]
