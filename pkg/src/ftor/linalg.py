"""Dense linear algebra over an arbitrary field-like element type.

Elements need ``+ - *``, truthiness for zero tests and either an
``inverse()`` method or ``1 / x``.  ``key`` ranks candidate pivots (smaller is
preferred); truncated series use it to pick minimal-valuation pivots.
"""
from __future__ import annotations

from typing import Callable, Sequence

__all__ = ["inv", "rank_profile", "det", "inverse", "mat_mul", "SingularMatrix"]


class SingularMatrix(ArithmeticError):
    pass


def inv(x):
    f = getattr(x, "inverse", None)
    return f() if f is not None else 1 / x


def _default_key(x):
    return 0


def rank_profile(M: Sequence[Sequence], ncols: int, key: Callable = _default_key) -> list[int]:
    """Pivot columns of a column-pivoted row reduction of ``M``.

    Column ``c`` is a pivot iff it is independent of the earlier pivot columns,
    so the pivots index a set of columns spanning the column space.
    """
    A = [list(r) for r in M]
    nrows = len(A)
    pivots = []
    row = 0
    for c in range(ncols):
        if row == nrows:
            break
        cands = [i for i in range(row, nrows) if A[i][c]]
        if not cands:
            continue
        p = min(cands, key=lambda i: key(A[i][c]))
        A[row], A[p] = A[p], A[row]
        pv = inv(A[row][c])
        for i in range(row + 1, nrows):
            if A[i][c]:
                f = A[i][c] * pv
                Ai, Ar = A[i], A[row]
                for j in range(c, ncols):
                    Ai[j] = Ai[j] - f * Ar[j]
        pivots.append(c)
        row += 1
    return pivots


def det(M: Sequence[Sequence], one, key: Callable = _default_key):
    n = len(M)
    A = [list(r) for r in M]
    d = one
    for c in range(n):
        cands = [i for i in range(c, n) if A[i][c]]
        if not cands:
            return one - one
        p = min(cands, key=lambda i: key(A[i][c]))
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        piv = A[c][c]
        d = d * piv
        pv = inv(piv)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * pv
                Ai, Ac = A[i], A[c]
                for j in range(c + 1, n):
                    Ai[j] = Ai[j] - f * Ac[j]
    return d


def inverse(M: Sequence[Sequence], zero, one, key: Callable = _default_key) -> list[list]:
    n = len(M)
    A = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        cands = [i for i in range(c, n) if A[i][c]]
        if not cands:
            raise SingularMatrix("matrix is singular")
        p = min(cands, key=lambda i: key(A[i][c]))
        A[c], A[p] = A[p], A[c]
        pv = inv(A[c][c])
        A[c] = [x * pv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                Ai, Ac = A[i], A[c]
                A[i] = [a - f * b for a, b in zip(Ai, Ac)]
    return [row[n:] for row in A]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence], zero) -> list[list]:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        r = []
        for j in range(ncols):
            s = zero
            for k in range(inner):
                if row[k] and B[k][j]:
                    s = s + row[k] * B[k][j]
            r.append(s)
        out.append(r)
    return out
