import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftor.group import (
    FgAbelianGroup,
    GroupElement,
    Weight,
    coker,
    coker_map,
    int_det,
    kernel_and_splitting,
    mat_mul,
    smith_normal_form,
)

small = st.integers(-6, 6)


@st.composite
def int_matrices(draw, max_dim=4):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    return [[draw(small) for _ in range(n)] for _ in range(m)]


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_smith_form_factorization(M):
    U, D, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert abs(int_det(U)) == 1 and abs(int_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[: len(nz)] == nz


def test_coker_examples():
    assert coker([[2]]) == FgAbelianGroup(0, (2,))
    assert coker([[2, 0], [0, 3]]) == FgAbelianGroup(0, (6,))
    assert coker([[0]]) == FgAbelianGroup(1)
    assert coker([[1, 0], [0, 0]]) == FgAbelianGroup(1)
    assert coker([[2, 1], [1, 1]]) == FgAbelianGroup(0)


def test_coker_projection_kills_image():
    M = [[4, 3], [3, 1]]
    cm = coker_map(M)
    assert cm.group == FgAbelianGroup(0, (5,))
    for col in ([4, 3], [3, 1]):
        assert cm.project(col).is_identity()
    assert not cm.project([1, 0]).is_identity()


def test_group_validation():
    with pytest.raises(ValueError):
        FgAbelianGroup(1, (1,))
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (4, 6))
    with pytest.raises(ValueError):
        FgAbelianGroup(-1)


def test_element_arithmetic_and_primitivity():
    G = FgAbelianGroup(2, (2,))
    a = G.element((1, 2), (1,))
    assert (a + a).key == (2, 4, 0)
    assert (-a).key == (-1, -2, 1)
    assert G.element((2, 4)).is_primitive() is False
    assert G.element((1, 2)).is_primitive()
    assert not G.tor_gen(0).is_primitive()
    assert G.order_of(G.tor_gen(0).key) == 2
    assert G.order_of(a.key) is None


def test_weight_kills_torsion():
    G = FgAbelianGroup(1, (3,))
    N = Weight(G, ("1/2",))
    assert N(G.element((4,), (2,))) == 2
    assert (-N)(G.free_gen(0)) == -N(G.free_gen(0))
    with pytest.raises(ValueError):
        Weight(G, (1, 2))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=3), st.data())
def test_splitting_round_trip(ws, data):
    if not any(ws):
        ws[0] = 1
    G = FgAbelianGroup(len(ws), (2,))
    N = Weight(G, ws)
    sp = kernel_and_splitting(G, N)
    key = tuple(data.draw(st.integers(-5, 5)) for _ in ws) + (data.draw(st.integers(0, 1)),)
    coords, c = sp.decompose(key)
    assert sp.recompose(coords, c).key == G.reduce(key)
    assert N(key) == c * sp.step
    assert sp.step > 0
    for kb in sp.kernel_basis:
        assert N(kb) == 0


def test_splitting_shift_changes_complement_only():
    G = FgAbelianGroup(2)
    N = Weight(G, (1, 1))
    sp = kernel_and_splitting(G, N)
    other = sp.with_complement_shift((2,))
    key = (3, 1)
    assert N(sp.recompose(*sp.decompose(key))) == N(other.recompose(*other.decompose(key)))
    assert sp.decompose(key)[1] == other.decompose(key)[1]
