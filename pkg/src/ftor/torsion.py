"""Based chain complexes and their Reidemeister torsion.

Torsion over a field is computed from a chain contraction: with ``delta`` the
degree +1 map built from complements of the cycle spaces, the torsion is
``det(d + delta : C_odd -> C_even) ** -1``, defined up to sign.  Over a group
ring the computation runs in every field factor of ``Q(Q[G])``; over a Novikov
ring it runs on the Laurent-series embedding.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .embedding import EmbeddedSeries, TSeries, embed_series, prec_for_cutoff
from .fieldsum import FieldFactor, FieldSumElement, decompose
from .group import FgAbelianGroup, Weight, kernel_and_splitting
from .linalg import SingularMatrix, det, inverse, inv, mat_mul, rank_profile
from .novikov import GroupRingElement, NovikovSeries
from .polynomial import LPoly, RationalFunction
from .rational import Q

__all__ = [
    "BasedChainComplex",
    "ComplexError",
    "TorsionValue",
    "torsion_over_field",
    "reidemeister_torsion",
    "manifold_torsion",
    "reduce_to_Z2",
    "floer_torsion",
    "fold",
    "PrecisionExhausted",
]


class ComplexError(ValueError):
    pass


def _shape(M) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def _entry_zero(ring, like=None):
    kind = ring[0]
    if kind == "group":
        return GroupRingElement.zero(ring[1], "rationals")
    return NovikovSeries.zero(ring[1], ring[2])


def _ring_of(boundaries) -> tuple | None:
    for M in boundaries:
        for row in M:
            for x in row:
                if isinstance(x, NovikovSeries):
                    return ("novikov", x.weight, x.cutoff)
                if isinstance(x, GroupRingElement):
                    return ("group", x.group)
    return None


def _matmul_ring(A, B, zero):
    n, k = _shape(A)
    k2, m = _shape(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = zero
            for l in range(k):
                if A[i][l] and B[l][j]:
                    s = s + A[i][l] * B[l][j]
            row.append(s)
        out.append(row)
    return out


class BasedChainComplex:
    """A finite based free complex over ``Q[G]`` or ``Nov(G, N; Q)``.

    ``grading="Z"``: ``ranks[i]`` is the rank in degree ``min_degree + i`` and
    ``boundaries[i]`` is the matrix of ``d: C_(min_degree+i+1) -> C_(min_degree+i)``
    (rows index the target basis).  ``grading="Z2"``: ``ranks = [n0, n1]`` and
    ``boundaries = [d_even: C0 -> C1, d_odd: C1 -> C0]``.
    """

    def __init__(self, grading: str, ranks: Sequence[int], boundaries, labels=None, *,
                 ring=None, min_degree: int = 0, check: bool = True):
        if grading not in ("Z", "Z2"):
            raise ComplexError(f"grading must be 'Z' or 'Z2', got {grading!r}")
        self.grading = grading
        self.ranks = tuple(int(r) for r in ranks)
        if any(r < 0 for r in self.ranks):
            raise ComplexError("negative rank")
        self.boundaries = tuple(tuple(tuple(row) for row in M) for M in boundaries)
        self.min_degree = min_degree
        self.ring = ring or _ring_of(self.boundaries)
        if self.ring is not None and (self.ring[0] not in ("group", "novikov") or len(self.ring) != (2 if self.ring[0] == "group" else 3)):
            raise ComplexError("ring must be ('group', G) or ('novikov', N, cutoff)")
        if self.ring is None:
            # no entries at all; any base works, default to Q[1]
            self.ring = ("group", FgAbelianGroup(0, ()))
        if labels is None:
            if grading == "Z2":
                labels = [[f"e{i}" for i in range(self.ranks[0])], [f"f{i}" for i in range(self.ranks[1])]]
            else:
                labels = [[f"c{min_degree + k}_{i}" for i in range(r)] for k, r in enumerate(self.ranks)]
        self.labels = tuple(tuple(x) for x in labels)
        self._check_shapes()
        if check:
            self.check_d_squared()

    # -- validation

    def _maps(self):
        """(source degree index, target degree index, matrix) for every boundary."""
        if self.grading == "Z2":
            return [(0, 1, self.boundaries[0]), (1, 0, self.boundaries[1])]
        return [(i + 1, i, M) for i, M in enumerate(self.boundaries)]

    def _check_shapes(self):
        if self.grading == "Z2":
            if len(self.ranks) != 2 or len(self.boundaries) != 2:
                raise ComplexError("a Z2-graded complex has two ranks and two boundary maps")
        elif len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise ComplexError(
                f"{len(self.ranks)} degrees need {max(len(self.ranks) - 1, 0)} boundary maps, "
                f"got {len(self.boundaries)}"
            )
        if len(self.labels) != len(self.ranks) or any(len(l) != r for l, r in zip(self.labels, self.ranks)):
            raise ComplexError("basis labels do not match the ranks")
        for s, t, M in self._maps():
            rows, cols = len(M), (len(M[0]) if M else 0)
            want = (self.ranks[t], self.ranks[s])
            if rows != want[0] or (rows and cols != want[1]):
                raise ComplexError(f"boundary from degree {s} has shape {rows}x{cols}, expected {want[0]}x{want[1]}")
            for row in M:
                for x in row:
                    if self.ring[0] == "group" and not isinstance(x, GroupRingElement):
                        raise ComplexError(f"entry {x!r} is not a group ring element")
                    if self.ring[0] == "novikov" and not isinstance(x, NovikovSeries):
                        raise ComplexError(f"entry {x!r} is not a Novikov series")

    def check_d_squared(self):
        zero = _entry_zero(self.ring)
        maps = self._maps()
        if self.grading == "Z2":
            pairs = [(maps[0][2], maps[1][2], 1, 0), (maps[1][2], maps[0][2], 0, 1)]
        else:
            pairs = [(maps[i][2], maps[i + 1][2], i, i + 2) for i in range(len(maps) - 1)]
        for first, second, a, b in pairs:
            # second: C_b -> C_(b-1), first: C_(b-1) -> C_a ; composite must vanish
            if not first or not second or not first[0] or not second[0]:
                continue
            P = _matmul_ring(first, second, zero)
            for row in P:
                for x in row:
                    if x:
                        raise ComplexError(f"d^2 != 0: found nonzero entry {x} in a composite boundary")

    # -- folding

    def folded(self):
        """(n0, n1, d_even, d_odd) of the Z/2 folding (even degrees first)."""
        if self.grading == "Z2":
            return self.ranks[0], self.ranks[1], self.boundaries[0], self.boundaries[1]
        return fold(self)

    def total_rank(self) -> int:
        return sum(self.ranks)

    def direct_sum(self, other: "BasedChainComplex") -> "BasedChainComplex":
        if self.grading != "Z2" or other.grading != "Z2":
            raise ComplexError("direct sums are implemented for Z2-graded complexes")
        zero = _entry_zero(self.ring)
        n0, n1 = self.ranks[0] + other.ranks[0], self.ranks[1] + other.ranks[1]
        de = _block(self.boundaries[0], other.boundaries[0], self.ranks[1], self.ranks[0],
                    other.ranks[1], other.ranks[0], zero)
        do = _block(self.boundaries[1], other.boundaries[1], self.ranks[0], self.ranks[1],
                    other.ranks[0], other.ranks[1], zero)
        labels = [self.labels[0] + other.labels[0], self.labels[1] + other.labels[1]]
        return BasedChainComplex("Z2", [n0, n1], [de, do], _dedupe(labels), ring=self.ring)

    def __repr__(self):
        return f"BasedChainComplex({self.grading}, ranks={list(self.ranks)})"


def _dedupe(labels):
    out = []
    seen = set()
    for deg in labels:
        row = []
        for l in deg:
            x, k = l, 1
            while x in seen:
                x = f"{l}'{k}"
                k += 1
            seen.add(x)
            row.append(x)
        out.append(row)
    return out


def _block(A, B, ra, ca, rb, cb, zero):
    out = []
    for i in range(ra):
        out.append(list(A[i]) + [zero] * cb)
    for i in range(rb):
        out.append([zero] * ca + list(B[i]))
    return out


def fold(C: BasedChainComplex):
    """Sum even and odd degrees of a Z-graded complex."""
    zero = _entry_zero(C.ring)
    degs = [C.min_degree + k for k in range(len(C.ranks))]
    even = [k for k, d in enumerate(degs) if d % 2 == 0]
    odd = [k for k, d in enumerate(degs) if d % 2 != 0]
    off = {}
    for group in (even, odd):
        o = 0
        for k in group:
            off[k] = o
            o += C.ranks[k]
    n0 = sum(C.ranks[k] for k in even)
    n1 = sum(C.ranks[k] for k in odd)
    de = [[zero] * n0 for _ in range(n1)]
    do = [[zero] * n1 for _ in range(n0)]
    for k, M in enumerate(C.boundaries):
        s, t = k + 1, k  # d: C_s -> C_t
        tgt = do if degs[s] % 2 else de
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                tgt[off[t] + i][off[s] + j] = x
    return n0, n1, de, do


def reduce_to_Z2(C: BasedChainComplex, period: int) -> BasedChainComplex:
    """Fold one period of a ``period``-periodic Z-graded window into a Z2 complex.

    ``period`` is the even number ``2N``.  The window must contain at least
    ``period + 1`` degrees; the boundary into the lowest degree of the period
    wraps around to its top degree.
    """
    if C.grading != "Z":
        raise ComplexError("reduce_to_Z2 expects a Z-graded complex")
    if period <= 0 or period % 2:
        raise ComplexError(f"period must be a positive even number, got {period}")
    L = len(C.ranks)
    if L == 0 or all(r == 0 for r in C.ranks):
        return BasedChainComplex("Z2", [0, 0], [[], []], ring=C.ring)
    if L < period + 1:
        raise ComplexError(f"period mismatch: window of {L} degrees is shorter than one period plus one")
    for k in range(L - period):
        if C.ranks[k] != C.ranks[k + period]:
            raise ComplexError(f"period mismatch: rank in degree {C.min_degree + k} differs from degree "
                               f"{C.min_degree + k + period}")
    for k in range(len(C.boundaries) - period):
        if C.boundaries[k] != C.boundaries[k + period]:
            raise ComplexError(f"period mismatch: boundary out of degree {C.min_degree + k + 1} is not periodic")
    zero = _entry_zero(C.ring)
    # degrees base+1 .. base+period, with C_base identified with C_(base+period)
    idx = list(range(1, period + 1))
    degs = [C.min_degree + k for k in idx]
    off, n = {}, [0, 0]
    for k, d in zip(idx, degs):
        off[k] = n[d % 2]
        n[d % 2] += C.ranks[k]
    n0, n1 = n
    de = [[zero] * n0 for _ in range(n1)]
    do = [[zero] * n1 for _ in range(n0)]
    for k in idx:
        M = C.boundaries[k - 1]  # C_k -> C_(k-1)
        t = k - 1 if k - 1 >= 1 else period
        s_par = (C.min_degree + k) % 2
        tgt = do if s_par else de
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                tgt[off[t] + i][off[k] + j] = x
    labels = [[], []]
    for k, d in zip(idx, degs):
        labels[d % 2].extend(C.labels[k])
    return BasedChainComplex("Z2", [n0, n1], [de, do], labels, ring=C.ring)


# --------------------------------------------------------------------------
# torsion over a field


def _complement(M, nrows, ncols, pivots, rng, zero, one, key, tries=50):
    """Column indices (deterministic) or random column vectors spanning a complement.

    Returns a list of column vectors in the source space of ``M``.
    """
    if rng is None:
        return [[one if r == c else zero for r in range(ncols)] for c in pivots]
    k = len(pivots)
    for _ in range(tries):
        W = [[one * rng.randint(-3, 3) for _ in range(ncols)] for _ in range(k)]
        img = [[sum((M[r][c] * w[c] for c in range(ncols)), zero) for r in range(nrows)] for w in W]
        # columns img must be independent
        T = [[img[j][r] for j in range(k)] for r in range(nrows)]
        if len(rank_profile(T, k, key)) == k:
            return W
    raise SingularMatrix("could not draw a random complement")


def torsion_over_field(d_even, d_odd, n0: int, n1: int, zero, one, key=None, rng: random.Random | None = None):
    """Torsion of the Z/2-graded acyclic complex ``C0 <-> C1``, or ``None`` if not acyclic.

    ``d_odd`` is the ``n0 x n1`` matrix of ``C1 -> C0`` and ``d_even`` the
    ``n1 x n0`` matrix of ``C0 -> C1``.  The result is ``det(d_odd + delta)^-1``
    with ``delta : C1 -> C0`` the contraction built from column complements; the
    sign is not canonical.  With ``rng`` the complements are drawn at random,
    which exercises independence of the contraction.
    """
    key = key or (lambda x: 0)
    if n0 != n1:
        return None
    n = n0
    if n == 0:
        return one
    piv_odd = rank_profile(d_odd, n1, key)
    piv_even = rank_profile(d_even, n0, key)
    if len(piv_odd) + len(piv_even) != n:
        return None
    W0 = _complement(d_even, n1, n0, piv_even, rng, zero, one, key)  # vectors in C0
    W1 = _complement(d_odd, n0, n1, piv_odd, rng, zero, one, key)  # vectors in C1
    # P1 = [d_even W0 | W1], columns are vectors of C1
    cols = []
    for w in W0:
        cols.append([sum((d_even[r][c] * w[c] for c in range(n0) if w[c]), zero) for r in range(n1)])
    cols.extend(W1)
    P1 = [[cols[j][r] for j in range(n)] for r in range(n1)]
    try:
        P1inv = inverse(P1, zero, one, key)
    except SingularMatrix:
        if rng is not None:
            return torsion_over_field(d_even, d_odd, n0, n1, zero, one, key, rng)
        raise
    # delta = [W0 | 0] * P1^-1 : C1 -> C0
    k0 = len(W0)
    Wmat = [[W0[j][r] if j < k0 else zero for j in range(n)] for r in range(n0)]
    delta = mat_mul(Wmat, P1inv, zero)
    A = [[d_odd[r][c] + delta[r][c] for c in range(n1)] for r in range(n0)]
    dd = det(A, one, key)
    if not dd:
        return None
    return inv(dd)


# --------------------------------------------------------------------------
# torsion values


@dataclass(eq=False)
class TorsionValue:
    """A torsion normalized modulo units.

    ``value`` is a :class:`FieldSumElement` for group ring complexes or an
    :class:`EmbeddedSeries` for Novikov complexes; components that come from
    non-acyclic factors are 0.  ``raw`` keeps the value before normalization.
    """

    value: object
    unit_class: str
    raw: object = field(repr=False, default=None)

    @property
    def is_series(self) -> bool:
        return isinstance(self.value, EmbeddedSeries)

    def is_zero(self) -> bool:
        if self.is_series:
            return self.value.is_zero()
        return self.value.is_zero()

    def acyclic_mask(self) -> tuple[bool, ...]:
        comps = self.value.comps if self.is_series else self.value.components
        return tuple(bool(c) for c in comps)

    def is_acyclic(self) -> bool:
        return all(self.acyclic_mask())

    def __eq__(self, other):
        if not isinstance(other, TorsionValue):
            return NotImplemented
        return self.value == other.value

    def render(self) -> str:
        if self.is_zero():
            return "0"
        return self.value.render()

    def __str__(self):
        return self.render()


def _rf_key(x):
    return len(x.num.terms) + len(x.den.terms)


def _normalize_field_sum(x: FieldSumElement, G: FgAbelianGroup) -> FieldSumElement:
    m = G.torsion[0] if G.torsion else 1
    rep, _ = x.normalize(m)
    return rep


def field_sum_torsion(n0, n1, d_even, d_odd, G: FgAbelianGroup, rng=None) -> FieldSumElement:
    """Per-factor torsion of a Z/2 complex over ``Q[G]`` (not normalized)."""
    from .fieldsum import project

    factors = decompose(G)
    proj_e = [[project(x, factors).components for x in row] for row in d_even]
    proj_o = [[project(x, factors).components for x in row] for row in d_odd]
    comps = []
    for j, f in enumerate(factors):
        de = [[x[j] for x in row] for row in proj_e]
        do = [[x[j] for x in row] for row in proj_o]
        t = torsion_over_field(de, do, n0, n1, f.zero(), f.one(), _rf_key, rng)
        comps.append(t if t is not None else f.zero())
    return FieldSumElement(factors, comps)


def reidemeister_torsion(C: BasedChainComplex, rng=None) -> TorsionValue:
    """Torsion over ``Q(Q[G])``, normalized modulo ``+-G``."""
    if C.ring[0] != "group":
        raise ComplexError("reidemeister_torsion expects group ring entries; use floer_torsion for Novikov entries")
    G = C.ring[1]
    n0, n1, de, do = C.folded()
    raw = field_sum_torsion(n0, n1, de, do, G, rng)
    return TorsionValue(_normalize_field_sum(raw, G), "+-G", raw)


def manifold_torsion(C: BasedChainComplex, rng=None) -> TorsionValue:
    """Torsion of a cell complex given by equivariant boundaries over ``Z[H_1]``."""
    tv = reidemeister_torsion(C, rng)
    tv.unit_class = "+-H1"
    return tv


class PrecisionExhausted(ArithmeticError):
    """The series entries are not known far enough to certify the requested cutoff."""


def floer_torsion(C: BasedChainComplex, cutoff=None, rng=None) -> TorsionValue:
    """Torsion of a Z/2-graded complex over ``Nov(G, N; Q)`` via the Laurent embedding.

    ``cutoff`` is the weight below which the normalized torsion is wanted
    (default: the ring cutoff).  Entries are first used only slightly beyond
    it; if pivots of positive degree eat the margin, the working precision is
    raised as far as the entries allow.  The empty complex has torsion exactly 1.
    """
    if C.ring[0] != "novikov":
        raise ComplexError("floer_torsion expects Novikov series entries")
    _, N, c = C.ring
    cutoff = Q(c if cutoff is None else cutoff)
    split = kernel_and_splitting(N.group, N)
    if split.step == 0:
        raise ComplexError("the Novikov weight must be nonzero")
    n0, n1, de, do = C.folded()
    want = prec_for_cutoff(cutoff, split.step)
    cuts = [x.cutoff for M in (de, do) for row in M for x in row]
    avail = prec_for_cutoff(min(cuts), split.step) if cuts else want
    work = min(want + 2, avail)
    while True:
        raw, trouble = _floer_raw(split, n0, n1, de, do, work, rng)
        if raw is not None and not raw.is_zero():
            rep, _ = raw.normalize()
            if rep.prec >= want and not trouble:
                return TorsionValue(rep.truncate(want), "+-ker psi", raw)
            deficit = want - rep.prec
        else:
            deficit = 2
        if work >= avail:
            break
        work = min(avail, work + max(deficit, 2))
    if raw is None:
        raise PrecisionExhausted("series entries are too short to invert the contraction")
    if raw.is_zero():
        return TorsionValue(raw, "+-ker psi", raw)
    rep, _ = raw.normalize()
    return TorsionValue(rep, "+-ker psi", raw)


def _floer_raw(split, n0, n1, de, do, work: int, rng):
    cut = work * split.step
    emb = lambda x: embed_series(x.truncate(cut), split)  # noqa: E731
    E_e = [[emb(x).comps for x in row] for row in de]
    E_o = [[emb(x).comps for x in row] for row in do]
    one = EmbeddedSeries.one(split, work)
    comps = []
    trouble = False
    for j, f in enumerate(one.factors):
        z = TSeries(f, work, [], work)
        o = one.comps[j]
        mat_e = [[x[j] for x in row] for row in E_e]
        mat_o = [[x[j] for x in row] for row in E_o]
        try:
            t = torsion_over_field(mat_e, mat_o, n0, n1, z, o, TSeries.pivot_key, rng)
        except SingularMatrix:
            return None, True
        if t is None:
            trouble = True
        comps.append(t if t is not None else z)
    return EmbeddedSeries(split, comps), trouble
