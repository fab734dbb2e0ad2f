"""Worked examples: Lefschetz zeta functions, Seifert matrices, surgery torsion,
toral fixed-point classes, the Type F check and the capacity bound."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .embedding import embed_field_sum
from .fieldsum import FieldSumElement, decompose, det_fraction_free, project
from .group import (
    FgAbelianGroup,
    GroupElement,
    Weight,
    coker_map,
    int_det,
    kernel_and_splitting,
    smith_normal_form,
)
from .invariant import extended_leading_term, log_I
from .novikov import GroupRingElement, NotInNov, NovikovSeries, exp_series
from .polynomial import LPoly, RationalFunction
from .rational import Q, fmt_q, to_q
from .torsion import TorsionValue

__all__ = [
    "LefschetzData",
    "lefschetz_counts",
    "lefschetz_zeta",
    "closed_form_zeta",
    "SeifertMatrix",
    "random_seifert",
    "alexander_from_seifert",
    "twist_knot_alexander",
    "TREFOIL_SEIFERT",
    "surgery_torsion",
    "ToralFixedClasses",
    "toral_fixed_classes",
    "TypeFVerdict",
    "typef_check",
    "duality_companion",
    "capacity_bound",
    "circle_group",
]

TREFOIL_SEIFERT = ((-1, 1), (0, -1))


def circle_group() -> FgAbelianGroup:
    return FgAbelianGroup(1)


def _t_weight(sign: int = 1) -> Weight:
    return Weight(circle_group(), (sign,))


# --------------------------------------------------------------------------
# Lefschetz zeta functions


def _imat_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _check_square(M, what="matrix"):
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError(f"{what} must be square")
    return [[int(x) for x in r] for r in M]


@dataclass
class LefschetzData:
    """Either integer matrices ``(M_i, i)`` for the action on ``H_i`` or direct
    fixed-point counts ``k -> #Fix(f^k)``.

    Matrix data only becomes fixed-point counts when ``sign_coherent`` is set:
    then ``#Fix(f^k) = |L(f^k)|``.  Without the flag matrices can only be used in
    the signed ``"lefschetz"`` mode.
    """

    matrices: list = field(default_factory=list)
    counts: dict | None = None
    sign_coherent: bool = False

    def __post_init__(self):
        self.matrices = [(_check_square(M), int(i)) for M, i in self.matrices]
        if self.counts is not None:
            out = {}
            for k, c in self.counts.items():
                k = int(k)
                if k < 1:
                    raise ValueError("counts are indexed by k >= 1")
                c = to_q(c)
                if c < 0:
                    raise ValueError(f"fixed-point count for k = {k} is negative")
                out[k] = c
            self.counts = out
        if self.counts is None and not self.matrices:
            self.counts = {}

    def lefschetz_numbers(self, kmax: int) -> list[int]:
        """``L(f^k) = sum_i (-1)^i tr(M_i^k)`` for ``k = 1..kmax``."""
        out = [0] * kmax
        for M, i in self.matrices:
            P = M
            for k in range(kmax):
                tr = sum(P[j][j] for j in range(len(P)))
                out[k] += (-1) ** i * tr
                if k + 1 < kmax:
                    P = _imat_mul(P, M)
        return out


def lefschetz_counts(data: LefschetzData, kmax: int, mode: str = "fixed_points") -> dict:
    """Counts ``k -> c_k`` for ``k <= kmax`` feeding ``exp(sum c_k t^k / k)``."""
    if mode not in ("fixed_points", "lefschetz"):
        raise ValueError(f"unknown mode {mode!r}")
    if data.counts is not None and mode == "fixed_points":
        missing = [k for k in range(1, kmax + 1) if k not in data.counts]
        if missing:
            raise ValueError(f"missing fixed-point count for k = {missing[0]}")
        return {k: data.counts[k] for k in range(1, kmax + 1)}
    if not data.matrices:
        raise ValueError("signed Lefschetz numbers need matrix data")
    L = data.lefschetz_numbers(kmax)
    if mode == "lefschetz":
        return {k + 1: Q(x) for k, x in enumerate(L)}
    if not data.sign_coherent:
        raise ValueError(
            "matrix data gives signed Lefschetz numbers; pass sign_coherent=True to use "
            "|L(f^k)| as fixed-point counts, or use mode='lefschetz'"
        )
    if any(x > 0 for x in L) and any(x < 0 for x in L):
        raise ValueError("Lefschetz numbers change sign, so they are not sign-coherent")
    return {k + 1: Q(abs(x)) for k, x in enumerate(L)}


def _kmax(cutoff) -> int:
    c = to_q(cutoff)
    if c <= 0:
        raise ValueError("cutoff must be positive")
    # classes t^k with k < cutoff
    n = int(c)
    return n - 1 if n == c else n


def lefschetz_zeta(data: LefschetzData, cutoff, mode: str = "fixed_points") -> NovikovSeries:
    """``exp(sum_k c_k t^k / k)`` over ``Z[t]`` with ``N(t) = 1``, below ``cutoff``."""
    kmax = _kmax(cutoff)
    counts = lefschetz_counts(data, kmax, mode) if kmax else {}
    terms = {(k,): c / k for k, c in counts.items() if c}
    return exp_series(NovikovSeries(_t_weight(), terms, cutoff))


def _char_poly_at(M) -> LPoly:
    """``det(I - t M)`` as a polynomial in ``t``."""
    n = len(M)
    if n == 0:
        return LPoly.const(Q(1), 1)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            p = {(1,): Q(-M[i][j])} if M[i][j] else {}
            if i == j:
                p[(0,)] = Q(1)
            row.append(RationalFunction.poly(LPoly(1, p)))
        rows.append(row)
    d = det_fraction_free(rows)
    return d.num


def closed_form_zeta(data: LefschetzData, cutoff) -> NovikovSeries:
    """``prod_i det(I - t M_i)^((-1)^(i+1))`` expanded below ``cutoff``."""
    num = LPoly.const(Q(1), 1)
    den = LPoly.const(Q(1), 1)
    for M, i in data.matrices:
        p = _char_poly_at(M)
        if i % 2:
            num = num * p
        else:
            den = den * p
    return _power_series_quotient(num, den, cutoff)


def _power_series_quotient(num: LPoly, den: LPoly, cutoff) -> NovikovSeries:
    # plain long division in Q[[t]]; den(0) = 1 here
    kmax = _kmax(cutoff)
    a = [num.terms.get((k,), Q(0)) for k in range(kmax + 1)]
    b = [den.terms.get((k,), Q(0)) for k in range(kmax + 1)]
    if not b[0]:
        raise ZeroDivisionError("denominator vanishes at t = 0")
    out = []
    for k in range(kmax + 1):
        s = a[k] - sum(b[j] * out[k - j] for j in range(1, k + 1))
        out.append(s / b[0])
    return NovikovSeries(_t_weight(), {(k,): c for k, c in enumerate(out) if c}, cutoff)


# --------------------------------------------------------------------------
# Seifert matrices and Alexander polynomials


class SeifertMatrix:
    """A ``2g x 2g`` integer matrix with ``det(V - V^T) = 1``."""

    __slots__ = ("V",)

    def __init__(self, V: Sequence[Sequence[int]]):
        V = [[int(x) for x in r] for r in V]
        n = len(V)
        if any(len(r) != n for r in V):
            raise ValueError("Seifert matrix must be square")
        if n % 2:
            raise ValueError("Seifert matrix must have even size 2g")
        S = [[V[i][j] - V[j][i] for j in range(n)] for i in range(n)]
        if int_det(S) != 1:
            raise ValueError("det(V - V^T) must be 1")
        self.V = V

    @property
    def genus(self) -> int:
        return len(self.V) // 2

    def to_json(self):
        return {"V": self.V}

    def __repr__(self):
        return f"SeifertMatrix({self.V})"


def random_seifert(rng: random.Random, genus: int, bound: int = 2) -> SeifertMatrix:
    """``J + S`` with ``J`` the upper half of the standard symplectic form and ``S`` symmetric."""
    n = 2 * genus
    V = [[0] * n for _ in range(n)]
    for i in range(genus):
        V[2 * i][2 * i + 1] = 1
    for i in range(n):
        for j in range(i, n):
            s = rng.randint(-bound, bound)
            V[i][j] += s
            if j != i:
                V[j][i] += s
    return SeifertMatrix(V)


def _normalize_laurent(p: LPoly) -> LPoly:
    lo = min(e for (e,) in p.terms)
    p = p.shift((-lo,))
    if p.terms[(0,)] < 0:
        p = -p
    return p


def alexander_from_seifert(V) -> GroupRingElement:
    """``det(V - t V^T)`` over ``Z[t^+-1]`` with lowest degree 0 and positive constant term."""
    if not isinstance(V, SeifertMatrix):
        V = SeifertMatrix(V)
    M = V.V
    n = len(M)
    G = circle_group()
    if n == 0:
        return GroupRingElement.one(G)
    rows = [
        [RationalFunction.poly(LPoly(1, {k: Q(c) for k, c in (((0,), M[i][j]), ((1,), -M[j][i])) if c}))
         for j in range(n)]
        for i in range(n)
    ]
    d = det_fraction_free(rows)
    assert d.den.is_one()
    p = _normalize_laurent(d.num)
    return GroupRingElement(G, {e: c for e, c in p.terms.items()}, coeff_ring="integers")


def twist_knot_alexander(k: int) -> GroupRingElement:
    """``k - (2k + 1) t + k t^2``."""
    G = circle_group()
    return GroupRingElement(G, {(0,): k, (1,): -(2 * k + 1), (2,): k}, coeff_ring="integers")


def surgery_torsion(alex: GroupRingElement) -> TorsionValue:
    """``Alex / (1 - t)^2`` in ``Q(Z[t^+-1])`` modulo ``+-t^Z``."""
    if not isinstance(alex, GroupRingElement):
        raise TypeError("surgery_torsion expects a group ring element over Z")
    G = alex.group
    if G != circle_group():
        raise ValueError(f"the Alexander polynomial must live over Z[Z], got {G}")
    if not alex:
        raise ValueError("the Alexander polynomial must be nonzero")
    factors = decompose(G)
    a = project(alex, factors)
    one_minus_t = project(GroupRingElement(G, {(0,): 1, (1,): -1}), factors)
    raw = a * (one_minus_t * one_minus_t).inverse()
    rep, _ = raw.normalize(1)
    return TorsionValue(rep, "+-G", raw)


# --------------------------------------------------------------------------
# fixed points of hyperbolic toral maps


@dataclass
class ToralFixedClasses:
    """Fixed points of ``A^k`` on ``T^n`` sorted into classes of ``coker(A^k - I)``."""

    matrix: list
    power: int
    group: FgAbelianGroup
    counts: dict  # class key -> number of fixed points in it
    sign: int  # sign(det(I - A^k)), the local index of every fixed point
    points: list  # (coordinates in [0, 1)^n as Fractions, class key)

    def signed_counts(self) -> dict:
        return {k: self.sign * c for k, c in self.counts.items()}

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "sign": self.sign,
            "classes": [
                {"class": GroupElement(self.group, k).to_json(), "count": c}
                for k, c in sorted(self.counts.items())
            ],
            "total": self.total,
        }


def toral_fixed_classes(A: Sequence[Sequence[int]], k: int = 1) -> ToralFixedClasses:
    """Classes of fixed points of the linear map ``A^k`` on the torus.

    A fixed point ``x`` solves ``(A^k - I) x = v`` with ``v`` integral; its class is
    ``[v]`` in ``coker(A^k - I)``.
    """
    A = _check_square(A, "toral matrix")
    if k < 1:
        raise ValueError("the power k must be >= 1")
    n = len(A)
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        P = _imat_mul(P, A)
    M = [[P[i][j] - (i == j) for j in range(n)] for i in range(n)]
    d = int_det(M)
    if d == 0:
        raise ValueError("degenerate map: det(A^k - I) = 0")
    sign = 1 if (-1) ** n * d > 0 else -1
    cm = coker_map(M)
    U, D, Vm = smith_normal_form(M)
    diag = [D[i][i] for i in range(n)]
    # M^-1 Z^n = V D^-1 Z^n, so the fixed points are V D^-1 w for w in prod [0, d_i)
    counts: dict = {}
    points = []
    ws = [()]
    for m in diag:
        ws = [w + (j,) for w in ws for j in range(m)]
    for w in ws:
        y = [Fraction(w[i], diag[i]) for i in range(n)]
        x = [sum(Vm[i][j] * y[j] for j in range(n)) % 1 for i in range(n)]
        v = [sum(M[i][j] * x[j] for j in range(n)) for i in range(n)]
        assert all(c.denominator == 1 for c in v)
        cls = cm.project([int(c) for c in v]).key
        counts[cls] = counts.get(cls, 0) + 1
        points.append((tuple(x), cls))
    points.sort()
    return ToralFixedClasses(A, k, cm.group, counts, sign, points)


# --------------------------------------------------------------------------
# Type F and the capacity bound


@dataclass
class TypeFVerdict:
    g_essential: bool
    theta_b: Q
    ln_coefficient: Q | None
    in_Nov1: bool
    lt: str

    def to_json(self) -> dict:
        return {
            "g_essential": self.g_essential,
            "theta_b": fmt_q(self.theta_b),
            "ln_coefficient": None if self.ln_coefficient is None else fmt_q(self.ln_coefficient),
            "in_Nov1": self.in_Nov1,
            "lt": self.lt,
        }


def typef_check(tau, theta: Weight, b: GroupElement, cutoff=None) -> TypeFVerdict:
    """Expand ``tau`` along ``theta``, test ``lt = 1`` and read ``ln`` at ``b``.

    ``g``-essential means ``theta(b) > 0`` and a nonzero coefficient of the
    logarithm at ``b``.
    """
    if isinstance(tau, TorsionValue):
        if tau.is_series:
            raise TypeError("typef_check expects a torsion over Q(Z[H_1])")
        x = tau.value
    elif isinstance(tau, FieldSumElement):
        x = tau
    else:
        raise TypeError(f"cannot check {type(tau).__name__}")
    G = theta.group
    if b.group != G:
        raise ValueError("b and theta live on different groups")
    if not b.is_primitive():
        raise ValueError("b must be a primitive element of infinite order")
    if theta.is_zero():
        raise ValueError("theta must be nonzero")
    if x.is_zero():
        raise ValueError("the torsion is 0 (non-acyclic); there is nothing to expand")
    tb = theta(b)
    if cutoff is None:
        cutoff = max(tb, Q(0)) + 1
    cutoff = to_q(cutoff)
    if tb > 0 and cutoff <= tb:
        raise ValueError(f"cutoff {fmt_q(cutoff)} does not reach theta(b) = {fmt_q(tb)}")
    split = kernel_and_splitting(G, theta)
    lt = extended_leading_term(x, theta)
    one = FieldSumElement.one(lt.factors)
    if lt != one:
        return TypeFVerdict(False, tb, None, False, lt.render())
    s = embed_field_sum(x, split, cutoff)
    rep, _ = s.normalize()
    try:
        ln = log_I(rep)
    except NotInNov:
        return TypeFVerdict(False, tb, None, False, lt.render())
    c = ln.coefficient(b) if tb < ln.cutoff else Q(0)
    return TypeFVerdict(bool(tb > 0 and c != 0), tb, c, True, lt.render())


def duality_companion(theta: Weight, b: GroupElement) -> tuple[Weight, GroupElement]:
    return -theta, -b


def capacity_bound(m, mu) -> Q:
    """Upper end ``m / mu`` of the interval of guaranteed periods."""
    m, mu = to_q(m), to_q(mu)
    if m <= 0 or mu <= 0:
        raise ValueError("m and mu must be positive")
    return m / mu

