"""Slow, independent reference computations used by the test suite.

Nothing here imports the package's algebra: polynomials are dicts
``{exponent: Fraction}`` in one Laurent variable, determinants are cofactor
expansions and torsions come from the subset-minor formula.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product


# -- univariate Laurent polynomials as {exp: Fraction}


def padd(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
        if not out[e]:
            del out[e]
    return out


def pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def pconst(c):
    return {0: Fraction(c)} if c else {}


def cofactor_det(M):
    """Laplace expansion along the first row; entries are polynomial dicts."""
    n = len(M)
    if n == 0:
        return pconst(1)
    if n == 1:
        return dict(M[0][0])
    total = {}
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = pmul(M[0][j], cofactor_det(minor))
        total = padd(total, term, 1 if j % 2 == 0 else -1)
    return total


def series_quotient(num, den, n_terms):
    """First ``n_terms`` coefficients of ``num/den`` in ``Q[[t]]`` by long division (den(0) != 0)."""
    lo = min(min(num, default=0), min(den))
    if lo < 0:
        num = {e - lo: c for e, c in num.items()}
        den = {e - lo: c for e, c in den.items()}
    d0 = den.get(0, 0)
    if not d0:
        raise ZeroDivisionError("den(0) = 0")
    out = []
    for k in range(n_terms):
        s = Fraction(num.get(k, 0)) - sum(den.get(j, 0) * out[k - j] for j in range(1, k + 1))
        out.append(s / d0)
    return out


def equal_up_to_signed_monomial(n1, d1, n2, d2):
    """Is ``n1/d1 = +-t^k n2/d2`` for some ``k``?"""
    left = pmul(n1, d2)
    right = pmul(n2, d1)
    if not left or not right:
        return not left and not right
    shift = min(left) - min(right)
    for sign in (1, -1):
        if all(left.get(e + shift, 0) == sign * c for e, c in right.items()) and len(left) == len(right):
            return True
    return False


# -- torsion by the subset-minor formula


def _submatrix(M, rows, cols):
    return [[M[i][j] for j in cols] for i in rows]


def subset_minor_torsion(ranks, boundaries):
    """Torsion of an acyclic complex ``C_m -> ... -> C_0`` over ``Q(t)``.

    ``boundaries[i]`` is the matrix of ``d: C_(i+1) -> C_i`` with polynomial-dict
    entries.  Runs over all choices of column subsets ``S_i`` of ``C_i`` of the
    forced sizes and returns ``prod det(d_i[rows not in S_(i-1), cols S_i])^((-1)^i)``
    for the first choice with all minors nonzero, as ``(num, den)``.
    """
    m = len(ranks) - 1
    sizes = [0] * (m + 1)
    # |S_i| = rank of d_i = n_(i-1) - |S_(i-1)|
    for i in range(1, m + 1):
        sizes[i] = ranks[i - 1] - sizes[i - 1]
        if sizes[i] < 0 or sizes[i] > ranks[i]:
            raise ValueError("ranks do not allow an acyclic complex")
    if ranks[m] != sizes[m]:
        raise ValueError("ranks do not allow an acyclic complex")
    choices = [list(combinations(range(ranks[i]), sizes[i])) for i in range(m + 1)]
    for S in product(*choices):
        num, den = pconst(1), pconst(1)
        ok = True
        for i in range(1, m + 1):
            rows = [r for r in range(ranks[i - 1]) if r not in S[i - 1]]
            D = cofactor_det(_submatrix(boundaries[i - 1], rows, S[i]))
            if not D:
                ok = False
                break
            if i % 2:
                den = pmul(den, D)
            else:
                num = pmul(num, D)
        if ok:
            return num, den
    return None


# -- toral fixed points


def toral_fixed_points(M):
    """All ``x`` in ``[0,1)^2`` with ``M x`` integral, by exhaustive search over ``(1/|det|) Z^2``."""
    d = abs(M[0][0] * M[1][1] - M[0][1] * M[1][0])
    pts = []
    for a in range(d):
        for b in range(d):
            x = (Fraction(a, d), Fraction(b, d))
            v = (M[0][0] * x[0] + M[0][1] * x[1], M[1][0] * x[0] + M[1][1] * x[1])
            if v[0].denominator == 1 and v[1].denominator == 1:
                pts.append(x)
    return pts


def same_translation_class(M, x, y):
    """``M x - M y`` lies in ``M Z^2`` iff ``x - y`` is integral."""
    return all((a - b).denominator == 1 for a, b in zip(x, y))


def mat_pow(A, k):
    n = len(A)
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        P = [[sum(P[i][l] * A[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    return P


# -- zeta functions


def char_poly_one_minus_tM(M):
    """``det(I - t M)`` via cofactor expansion."""
    n = len(M)
    E = [[padd(pconst(int(i == j)), {1: Fraction(-M[i][j])} if M[i][j] else {}) for j in range(n)] for i in range(n)]
    return cofactor_det(E)


def closed_form_coefficients(matrices, n_terms):
    """Coefficients of ``prod det(I - t M_i)^((-1)^(i+1))``."""
    num, den = pconst(1), pconst(1)
    for M, i in matrices:
        p = char_poly_one_minus_tM(M)
        if i % 2:
            num = pmul(num, p)
        else:
            den = pmul(den, p)
    return series_quotient(num, den, n_terms)


def exp_coefficients(c, n_terms):
    """``exp(sum_{k>=1} c[k] t^k)`` via the recurrence ``n a_n = sum_k k c_k a_(n-k)``."""
    a = [Fraction(1)]
    for n in range(1, n_terms):
        s = sum(k * c.get(k, 0) * a[n - k] for k in range(1, n + 1))
        a.append(Fraction(s) / n)
    return a


def log_coefficients(a, n_terms):
    """``log`` of a power series with ``a[0] = 1`` via ``n b_n = n a_n - sum k b_k a_(n-k)``."""
    b = [Fraction(0)] * n_terms
    for n in range(1, n_terms):
        s = n * Fraction(a[n] if n < len(a) else 0)
        s -= sum(k * b[k] * (a[n - k] if n - k < len(a) else 0) for k in range(1, n))
        b[n] = s / n
    return b

