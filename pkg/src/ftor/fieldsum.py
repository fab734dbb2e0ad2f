"""The total ring of fractions ``Q(Q[G])`` as a finite sum of fields.

For ``G = Z^r + Z/m`` the group algebra splits as a sum over the divisors ``d``
of ``m`` of ``Q(zeta_d)[t1^+-1..tr^+-1]``, obtained by sending the torsion
generator to ``zeta_d``.  Each factor is a field of rational functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .group import FgAbelianGroup, GroupElement
from .polynomial import Cyclo, LPoly, RationalFunction, default_names, euler_phi, zeta_power
from .rational import Q

__all__ = [
    "FieldFactor",
    "FieldSumElement",
    "UnsupportedGroup",
    "decompose",
    "project",
    "project_key",
    "det_fraction_free",
]


class UnsupportedGroup(ValueError):
    pass


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@dataclass(frozen=True)
class FieldFactor:
    cyclotomic_index: int
    num_vars: int

    @property
    def d(self) -> int:
        return self.cyclotomic_index

    def zero(self) -> RationalFunction:
        return RationalFunction.const(Q(0), self.num_vars)

    def one(self) -> RationalFunction:
        return RationalFunction.const(Q(1), self.num_vars)

    def zeta(self, k: int):
        return zeta_power(self.d, k)

    def monomial(self, free: Sequence[int], tor: int = 0, c=1) -> RationalFunction:
        coeff = self.zeta(tor) * Q(c) if self.d > 2 else zeta_power(self.d, tor) * Q(c)
        return RationalFunction.poly(LPoly.monomial(tuple(free), coeff)) if self.num_vars else \
            RationalFunction.const(coeff, 0)

    def name(self) -> str:
        base = "Q" if self.d <= 2 else f"Q(zeta_{self.d})"
        if not self.num_vars:
            return base
        return f"{base}({','.join(default_names(self.num_vars))})"

    def __str__(self):
        return self.name()


def decompose(G: FgAbelianGroup) -> list[FieldFactor]:
    if len(G.torsion) > 1:
        raise UnsupportedGroup(
            f"unsupported group {G}: torsion with more than one invariant factor"
        )
    if not G.torsion:
        return [FieldFactor(1, G.rank)]
    return [FieldFactor(d, G.rank) for d in _divisors(G.torsion[0])]


def _coeff_key(c, d: int) -> tuple:
    if d > 2:
        if not isinstance(c, Cyclo):
            c = Cyclo(d, [c])
        return c.c
    return (Q(c),)


class FieldSumElement:
    """One rational function per field factor; zero components are allowed."""

    __slots__ = ("factors", "components")

    def __init__(self, factors: Sequence[FieldFactor], components: Sequence[RationalFunction]):
        if len(factors) != len(components):
            raise ValueError("one component per field factor is required")
        self.factors = tuple(factors)
        self.components = tuple(components)

    @classmethod
    def one(cls, factors) -> "FieldSumElement":
        return cls(factors, [f.one() for f in factors])

    @classmethod
    def zero(cls, factors) -> "FieldSumElement":
        return cls(factors, [f.zero() for f in factors])

    @classmethod
    def scalar(cls, factors, c) -> "FieldSumElement":
        return cls(factors, [RationalFunction.const(Q(c), f.num_vars) for f in factors])

    def _coerce(self, other) -> "FieldSumElement":
        if isinstance(other, FieldSumElement):
            if other.factors != self.factors:
                raise ValueError("field sums over different decompositions")
            return other
        return FieldSumElement.scalar(self.factors, other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldSumElement(self.factors, [a + b for a, b in zip(self.components, o.components)])

    __radd__ = __add__

    def __neg__(self):
        return FieldSumElement(self.factors, [-a for a in self.components])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldSumElement(self.factors, [a * b for a, b in zip(self.components, o.components)])

    __rmul__ = __mul__

    def inverse(self) -> "FieldSumElement":
        if not self.is_unit():
            raise ZeroDivisionError("field-sum element has a zero component")
        return FieldSumElement(self.factors, [a.inverse() for a in self.components])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        return FieldSumElement(self.factors, [a ** n for a in self.components])

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.components == o.components

    def __hash__(self):
        return hash(self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def is_unit(self) -> bool:
        return all(self.components)

    def zero_mask(self) -> tuple[bool, ...]:
        return tuple(not c for c in self.components)

    # -- units of Q[G]: +-t^f * s^a acts on factor d by t^f * zeta_d^a

    def times_unit(self, free: Sequence[int], tor: int = 0, sign: int = 1) -> "FieldSumElement":
        comps = []
        for f, c in zip(self.factors, self.components):
            z = zeta_power(f.d, tor) * sign
            c2 = c.shift(tuple(free)) if f.num_vars else c
            comps.append(c2.scale(z) if c2 else c2)
        return FieldSumElement(self.factors, comps)

    def normalize(self, torsion_order: int = 1, allow_free: bool = True):
        """Canonical representative modulo ``+-G``; returns ``(rep, (free, tor, sign))``.

        The free shift is read off the first nonzero component (its lowest
        exponent becomes zero); then over all torsion residues and both signs
        the representative with the largest tuple of low coefficient ratios is
        kept, with the rendering as final tie-break.
        """
        nz = [c for c in self.components if c]
        if not nz:
            return self, ((0,) * (self.factors[0].num_vars if self.factors else 0), 0, 1)
        nv = self.factors[0].num_vars
        free = tuple(-x for x in nz[0].unit_shift()) if (allow_free and nv) else (0,) * nv
        shifted = self.times_unit(free)
        best = None
        for a in range(torsion_order):
            for sign in (1, -1):
                cand = shifted.times_unit((0,) * nv, a, sign)
                key = (
                    tuple(_coeff_key(c.low_ratio(), f.d) if c else () for f, c in zip(self.factors, cand.components)),
                    cand.render(),
                )
                if best is None or key > best[0]:
                    best = (key, cand, (free, a, sign))
        return best[1], best[2]

    def render(self) -> str:
        parts = []
        for f, c in zip(self.factors, self.components):
            s = c.render()
            if len(self.factors) == 1:
                return s
            parts.append(f"{s} in {f}")
        return "(" + ", ".join(parts) + ")"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"FieldSumElement({self.render()})"


def project_key(factors: Sequence[FieldFactor], key: tuple, coeff, rank: int) -> list[RationalFunction]:
    """Image of the single term ``coeff * g`` in every factor."""
    free, tor = key[:rank], key[rank:]
    return [f.monomial(free, tor[0] if tor else 0, coeff) for f in factors]


def project(a, factors: Sequence[FieldFactor] | None = None) -> FieldSumElement:
    """Send a group ring element to ``Q(Q[G])``, torsion generator to ``zeta_d``."""
    G: FgAbelianGroup = a.group
    factors = factors or decompose(G)
    r = G.rank
    comps = []
    for f in factors:
        terms: dict = {}
        for k, c in a.terms.items():
            free = k[:r]
            z = zeta_power(f.d, k[r] if len(k) > r else 0) * c
            v = terms.get(free)
            terms[free] = z if v is None else v + z
        p = LPoly(r, {e: c for e, c in terms.items() if c}, _clean=True)
        comps.append(RationalFunction.poly(p))
    return FieldSumElement(factors, comps)


# --------------------------------------------------------------------------
# determinants


def _bareiss(M: list[list[LPoly]], nvars: int):
    n = len(M)
    A = [row[:] for row in M]
    sign = 1
    prev = LPoly.const(Q(1), nvars)
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return LPoly(nvars, {}, _clean=True)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        p = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * p - A[i][k] * A[k][j]).exact_div(prev)
        prev = p
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def det_fraction_free(M: Sequence[Sequence[RationalFunction]]) -> RationalFunction:
    """Determinant of a square matrix of rational functions.

    Rows are cleared of denominators (one common multiple per row), Bareiss
    elimination runs on the resulting Laurent polynomials with exact division,
    and the row multipliers are divided back out at the end.
    """
    n = len(M)
    if n == 0:
        return RationalFunction.const(Q(1), 0)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    nvars = M[0][0].nvars
    rows = []
    mult = LPoly.const(Q(1), nvars)
    for row in M:
        den = LPoly.const(Q(1), nvars)
        for x in row:
            if x and not x.den.is_one():
                if nvars <= 1:
                    g = den.gcd(x.den)
                    den = den * x.den.exact_div(g)
                elif not _divides(x.den, den):
                    den = den * x.den
        mult = mult * den
        lifted = []
        for x in row:
            if not x:
                lifted.append(LPoly(nvars, {}, _clean=True))
            else:
                lifted.append((x.num * den).exact_div(x.den))
        rows.append(lifted)
    d = _bareiss(rows, nvars)
    return RationalFunction(d, mult)


def _divides(a: LPoly, b: LPoly) -> bool:
    try:
        b.exact_div(a)
        return True
    except ArithmeticError:
        return False
