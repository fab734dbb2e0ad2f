"""Finitely generated abelian groups, weights, splittings and integer Smith forms.

A group ``Z^r + Z/m_1 + ... + Z/m_k`` is stored in invariant-factor form, so two
groups are equal exactly when their ``(rank, torsion)`` pairs are equal.  Ring
elements elsewhere in the package key their terms by the raw exponent tuple
``free + tor`` of a group element; :class:`GroupElement` is the user-facing
wrapper around such a tuple.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .rational import Q, fmt_q, lcm, to_q

__all__ = [
    "FgAbelianGroup",
    "GroupElement",
    "Weight",
    "Splitting",
    "CokernelMap",
    "smith_normal_form",
    "hermite_rows",
    "integer_kernel",
    "kernel_and_splitting",
    "coker",
    "coker_map",
    "mat_mul",
    "identity_matrix",
    "int_det",
]

Matrix = list[list[int]]


# --------------------------------------------------------------------------
# integer linear algebra


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(B)
    ncols = len(B[0]) if B else 0
    return [
        [sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(ncols)]
        for i in range(len(A))
    ]


def int_det(M: Matrix) -> int:
    """Exact integer determinant by Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular and the diagonal of ``D`` is non-negative
    with each entry dividing the next.  Pivots are chosen by minimal nonzero
    absolute value.  ``ncols`` is only needed for matrices with no rows.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for s in range(min(m, n)):
        while True:
            best = None
            for i in range(s, m):
                for j in range(s, n):
                    v = A[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(s, i)
            swap_cols(s, j)
            p = A[s][s]
            clean = True
            for i in range(s + 1, m):
                if A[i][s]:
                    add_row(i, s, -(A[i][s] // p))
                    clean = clean and A[i][s] == 0
            for j in range(s + 1, n):
                if A[s][j]:
                    add_col(j, s, -(A[s][j] // p))
                    clean = clean and A[s][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, m) for j in range(s + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(s, bad, 1)
        if A[s][s] < 0:
            A[s] = [-a for a in A[s]]
            U[s] = [-a for a in U[s]]
        if best is None:
            break
    return U, A, V


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped, pivots are positive and entries above a pivot lie
    in ``[0, pivot)``.  The result depends only on the lattice.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    out: Matrix = []
    for col in range(ncols):
        while True:
            nz = [i for i, r in enumerate(A) if r[col]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda i: abs(A[i][col]))
            for i in nz:
                if i != p:
                    q = A[i][col] // A[p][col]
                    A[i] = [a - q * b for a, b in zip(A[i], A[p])]
        if nz:
            piv = A.pop(nz[0])
            out.append(piv if piv[col] > 0 else [-a for a in piv])
        A = [r for r in A if any(r)]
    # reduce above pivots
    for i, r in enumerate(out):
        pc = next(c for c in range(ncols) if r[c])
        for k in range(i):
            q = out[k][pc] // r[pc]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], r)]
    return out


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (as rows, Hermite-reduced) of ``{x in Z^ncols : M x = 0}``."""
    if not M:
        return identity_matrix(ncols)
    _, D, V = smith_normal_form(M, ncols)
    rank = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    basis = [[V[r][c] for r in range(ncols)] for c in range(rank, ncols)]
    return hermite_rows(basis, ncols)


# --------------------------------------------------------------------------
# groups and elements


@dataclass(frozen=True)
class FgAbelianGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        for i, m in enumerate(self.torsion):
            if m < 2:
                raise ValueError(f"torsion orders must be >= 2, got {m}")
            if i + 1 < len(self.torsion) and self.torsion[i + 1] % m:
                raise ValueError(f"torsion {self.torsion} is not in invariant-factor form")

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion

    def reduce(self, key: Sequence[int]) -> tuple[int, ...]:
        r = self.rank
        if len(key) != self.ngens:
            raise ValueError(f"element {tuple(key)} has wrong length for {self}")
        if not self.torsion:
            return tuple(int(x) for x in key)
        return tuple(int(x) for x in key[:r]) + tuple(
            int(x) % m for x, m in zip(key[r:], self.torsion)
        )

    def add(self, a: tuple, b: tuple) -> tuple:
        if not self.torsion:
            return tuple(x + y for x, y in zip(a, b))
        r = self.rank
        return tuple(x + y for x, y in zip(a[:r], b[:r])) + tuple(
            (x + y) % m for x, y, m in zip(a[r:], b[r:], self.torsion)
        )

    def neg(self, a: tuple) -> tuple:
        if not self.torsion:
            return tuple(-x for x in a)
        r = self.rank
        return tuple(-x for x in a[:r]) + tuple((-x) % m for x, m in zip(a[r:], self.torsion))

    def scale(self, n: int, a: tuple) -> tuple:
        return self.reduce(tuple(n * x for x in a))

    @property
    def zero_key(self) -> tuple:
        return (0,) * self.ngens

    def identity(self) -> "GroupElement":
        return GroupElement(self, self.zero_key)

    def element(self, free: Sequence[int] = (), tor: Sequence[int] = ()) -> "GroupElement":
        free = tuple(free) or (0,) * self.rank
        tor = tuple(tor) or (0,) * len(self.torsion)
        return GroupElement(self, free + tor)

    def free_gen(self, i: int) -> "GroupElement":
        key = [0] * self.ngens
        key[i] = 1
        return GroupElement(self, tuple(key))

    def tor_gen(self, i: int) -> "GroupElement":
        key = [0] * self.ngens
        key[self.rank + i] = 1
        return GroupElement(self, tuple(key))

    def order_of(self, key: tuple) -> int | None:
        """Order of an element, ``None`` for infinite order."""
        if any(key[: self.rank]):
            return None
        o = 1
        for x, m in zip(key[self.rank:], self.torsion):
            o = lcm(o, m // gcd(x, m))
        return o

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, d: dict) -> "FgAbelianGroup":
        return cls(int(d["rank"]), tuple(int(m) for m in d.get("torsion", [])))

    def __str__(self):
        parts = ["Z^%d" % self.rank] if self.rank else []
        parts += [f"Z/{m}" for m in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class GroupElement:
    """An element of ``group`` given by its exponent tuple ``free + tor``."""

    group: FgAbelianGroup
    key: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "key", self.group.reduce(self.key))

    @property
    def free(self) -> tuple[int, ...]:
        return self.key[: self.group.rank]

    @property
    def tor(self) -> tuple[int, ...]:
        return self.key[self.group.rank:]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _check_same(self.group, other.group)
        return GroupElement(self.group, self.group.add(self.key, other.key))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, self.group.neg(self.key))

    def __mul__(self, n: int) -> "GroupElement":
        return GroupElement(self.group, self.group.scale(int(n), self.key))

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return not any(self.key)

    def is_primitive(self) -> bool:
        """Infinite order and not a proper multiple of another element."""
        f = self.free
        if not any(f):
            return False
        g = 0
        for x in f:
            g = gcd(g, x)
        return g == 1

    def to_json(self) -> dict:
        return {"free": list(self.free), "tor": list(self.tor)}

    @classmethod
    def from_json(cls, group: FgAbelianGroup, d: dict) -> "GroupElement":
        free = tuple(int(x) for x in d.get("free", []))
        tor = tuple(int(x) for x in d.get("tor", []))
        if len(free) != group.rank or len(tor) != len(group.torsion):
            raise ValueError(f"element {d} does not fit group {group}")
        return cls(group, free + tor)


def _check_same(g1: FgAbelianGroup, g2: FgAbelianGroup) -> None:
    if g1 != g2:
        raise ValueError(f"group mismatch: {g1} vs {g2}")


@dataclass(frozen=True)
class Weight:
    """A homomorphism ``G -> Q``; it kills torsion, so only free weights are kept."""

    group: FgAbelianGroup
    free_weights: tuple

    def __post_init__(self):
        w = tuple(to_q(x) for x in self.free_weights)
        if len(w) != self.group.rank:
            raise ValueError(f"need {self.group.rank} free weights, got {len(w)}")
        object.__setattr__(self, "free_weights", w)

    def __call__(self, g) -> Q:
        key = g.key if isinstance(g, GroupElement) else g
        total = Q(0)
        for w, x in zip(self.free_weights, key):
            if x:
                total += w * x
        return total

    def __neg__(self) -> "Weight":
        return Weight(self.group, tuple(-w for w in self.free_weights))

    def is_zero(self) -> bool:
        return not any(self.free_weights)

    def integral_direction(self) -> tuple[int, ...]:
        """Primitive integer vector positively proportional to the weights."""
        den = 1
        for w in self.free_weights:
            den = lcm(den, int(w.denominator))
        ints = [int(w * den) for w in self.free_weights]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g == 0:
            return tuple(ints)
        return tuple(x // g for x in ints)

    def to_json(self) -> dict:
        return {"free_weights": [fmt_q(w) for w in self.free_weights]}

    @classmethod
    def from_json(cls, group: FgAbelianGroup, d: dict) -> "Weight":
        return cls(group, tuple(to_q(x) for x in d["free_weights"]))


# --------------------------------------------------------------------------
# splittings


@dataclass(frozen=True)
class Splitting:
    """A splitting ``G = ker N + G/ker N``.

    ``kernel_basis`` lists free kernel generators followed by the torsion
    generators of ``G``; ``complement_basis`` has one element (or none when
    ``N`` vanishes).  ``kernel_group`` is ``ker N`` as an abstract group whose
    exponent tuples are coordinates in ``kernel_basis``, and ``step`` is the
    weight of the complement generator, the positive generator of ``N(G)``.
    """

    group: FgAbelianGroup
    weight: Weight
    kernel_basis: tuple[GroupElement, ...]
    complement_basis: tuple[GroupElement, ...]
    kernel_group: FgAbelianGroup
    step: Q
    _direction: tuple = field(repr=False, compare=False, default=())
    _kernel_rows: tuple = field(repr=False, compare=False, default=())

    def decompose(self, g) -> tuple[tuple[int, ...], int]:
        """Split ``g`` into (kernel coordinates, complement exponent)."""
        key = g.key if isinstance(g, GroupElement) else g
        r = self.group.rank
        free = list(key[:r])
        c = 0
        if self.complement_basis:
            c = sum(a * x for a, x in zip(self._direction, free))
            v1 = self.complement_basis[0].free
            free = [x - c * y for x, y in zip(free, v1)]
        coords = []
        for row in self._kernel_rows:
            pc = next(i for i, x in enumerate(row) if x)
            y, rem = divmod(free[pc], row[pc])
            if rem:
                raise ArithmeticError("kernel part is not in the kernel lattice")
            coords.append(y)
            if y:
                free = [a - y * b for a, b in zip(free, row)]
        if any(free):
            raise ArithmeticError("decomposition failed; kernel basis is not a lattice basis")
        return tuple(coords) + tuple(key[r:]), c

    def recompose(self, kernel_coords: Sequence[int], c: int) -> GroupElement:
        r = self.group.rank
        nk = len(self._kernel_rows)
        free = [0] * r
        for y, row in zip(kernel_coords[:nk], self._kernel_rows):
            free = [a + y * b for a, b in zip(free, row)]
        if self.complement_basis:
            free = [a + c * b for a, b in zip(free, self.complement_basis[0].free)]
        elif c:
            raise ValueError("no complement direction for a zero weight")
        return GroupElement(self.group, tuple(free) + tuple(kernel_coords[nk:]))

    def with_complement_shift(self, h: Sequence[int]) -> "Splitting":
        """The splitting whose complement generator is moved by kernel element ``h``.

        ``h`` is given in kernel coordinates (free part only).  Different
        splittings of the same weight are exactly these shifts.
        """
        if not self.complement_basis:
            return self
        shift = self.recompose(tuple(h) + (0,) * len(self.group.torsion), 0)
        v1 = self.complement_basis[0] + shift
        return Splitting(
            self.group, self.weight, self.kernel_basis, (v1,), self.kernel_group,
            self.step, self._direction, self._kernel_rows,
        )


def kernel_and_splitting(G: FgAbelianGroup, N: Weight) -> Splitting:
    """Canonical splitting of ``G`` along ``ker N``.

    The free kernel basis is Hermite-reduced, and the complement generator
    ``v`` (with ``N(v) > 0`` generating ``N(G)``) is reduced modulo the kernel.
    """
    _check_same(G, N.group)
    r = G.rank
    a = N.integral_direction()
    tor_gens = tuple(G.tor_gen(i) for i in range(len(G.torsion)))
    if not any(a):
        rows = identity_matrix(r)
        kb = tuple(GroupElement(G, tuple(row) + (0,) * len(G.torsion)) for row in rows)
        return Splitting(
            G, N, kb + tor_gens, (), FgAbelianGroup(r, G.torsion), Q(0), a, tuple(map(tuple, rows))
        )
    rows = integer_kernel([list(a)], r)
    # a is primitive, so some integer v has a.v = 1; read it off the Smith form.
    U, D, V = smith_normal_form([list(a)], r)
    v1 = [V[i][0] * U[0][0] for i in range(r)]
    assert sum(x * y for x, y in zip(a, v1)) == 1
    for row in rows:
        pc = next(i for i, x in enumerate(row) if x)
        q = v1[pc] // row[pc]
        if q:
            v1 = [x - q * y for x, y in zip(v1, row)]
    kb = tuple(GroupElement(G, tuple(row) + (0,) * len(G.torsion)) for row in rows)
    comp = GroupElement(G, tuple(v1) + (0,) * len(G.torsion))
    return Splitting(
        G, N, kb + tor_gens, (comp,), FgAbelianGroup(r - 1, G.torsion), N(comp), a,
        tuple(map(tuple, rows)),
    )


# --------------------------------------------------------------------------
# cokernels


@dataclass(frozen=True)
class CokernelMap:
    """``Z^rows / M Z^cols`` together with the projection onto it."""

    group: FgAbelianGroup
    _rows: tuple  # rows of U picking out the surviving coordinates
    _mods: tuple  # modulus per surviving coordinate, 0 for free ones

    def project(self, v: Sequence[int]) -> GroupElement:
        tor, free = [], []
        for row, m in zip(self._rows, self._mods):
            x = sum(a * b for a, b in zip(row, v))
            if m:
                tor.append(x % m)
            else:
                free.append(x)
        return GroupElement(self.group, tuple(free) + tuple(tor))


def coker_map(M: Sequence[Sequence[int]], ncols: int | None = None) -> CokernelMap:
    nrows = len(M)
    U, D, _ = smith_normal_form(M, ncols)
    diag = [D[i][i] if i < len(D[0] if D else []) else 0 for i in range(nrows)]
    tor_idx = [i for i, d in enumerate(diag) if d > 1]
    free_idx = [i for i, d in enumerate(diag) if d == 0]
    G = FgAbelianGroup(len(free_idx), tuple(diag[i] for i in tor_idx))
    rows = tuple(tuple(U[i]) for i in tor_idx + free_idx)
    mods = tuple(diag[i] for i in tor_idx) + (0,) * len(free_idx)
    # project() emits torsion then free coordinates; reorder to free + tor keys
    return _reorder(G, rows, mods, len(tor_idx))


def _reorder(G, rows, mods, ntor):
    rows = rows[ntor:] + rows[:ntor]
    mods = mods[ntor:] + mods[:ntor]
    return CokernelMap(G, rows, mods)


def coker(M: Sequence[Sequence[int]], ncols: int | None = None) -> FgAbelianGroup:
    """Invariant-factor form of ``Z^rows / M Z^cols``."""
    return coker_map(M, ncols).group
