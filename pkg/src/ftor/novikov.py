"""Group rings ``R[G]`` and degree-truncated Novikov series ``Nov(G, N; R)``.

A :class:`NovikovSeries` only knows its terms of weight below ``cutoff``; every
operation returns a cutoff that is sound for the result.  For factors of
non-negative degree this is just the smaller of the two cutoffs, while negative
degrees and inversion of positive-degree elements pull the cutoff down.
Equality of series means agreement below the smaller cutoff.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

from .group import FgAbelianGroup, GroupElement, Weight, hermite_rows
from .polynomial import _join_terms, _term_str
from .rational import Q, fmt_q, to_q

__all__ = [
    "GroupRingElement",
    "NovikovSeries",
    "UnitNormalForm",
    "degree",
    "leading_term",
    "leading_term_normalized",
    "include_i_N",
    "invert",
    "exp_series",
    "log_series",
    "normalize_mod_units",
    "NotInvertible",
    "NotInNov",
    "generator_names",
]


class NotInvertible(ArithmeticError):
    pass


class NotInNov(ValueError):
    """Raised when exp/log is applied outside ``Nov+`` / ``Nov1``."""


def generator_names(group: FgAbelianGroup) -> list[str]:
    free = ["t"] if group.rank == 1 else [f"t{i + 1}" for i in range(group.rank)]
    tor = ["s"] if len(group.torsion) == 1 else [f"s{i + 1}" for i in range(len(group.torsion))]
    return free + tor


def _render_terms(terms: dict, group: FgAbelianGroup, order) -> str:
    names = generator_names(group)
    parts = []
    for k in sorted(terms, key=order):
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, k) if e)
        parts.append(_term_str(terms[k], mono))
    return _join_terms(parts)


def _mul_terms(group: FgAbelianGroup, a: dict, b: dict) -> dict:
    out: dict = {}
    if not a or not b:
        return out
    add = group.add
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = add(ka, kb)
            v = out.get(k)
            out[k] = ca * cb if v is None else v + ca * cb
    return {k: v for k, v in out.items() if v}


def _add_terms(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + (c if sign > 0 else -c)
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


# --------------------------------------------------------------------------
# group ring


class GroupRingElement:
    """Finite sum ``sum a_g g`` with rational (or integral) coefficients."""

    __slots__ = ("group", "terms", "coeff_ring")

    def __init__(self, group: FgAbelianGroup, terms: dict | None = None, coeff_ring: str = "rationals"):
        if coeff_ring not in ("integers", "rationals"):
            raise ValueError(f"unknown coefficient ring {coeff_ring!r}")
        self.group = group
        t = {}
        for k, c in (terms or {}).items():
            k = k.key if isinstance(k, GroupElement) else group.reduce(k)
            c = to_q(c)
            if c:
                t[k] = t.get(k, 0) + c
                if not t[k]:
                    del t[k]
        if coeff_ring == "integers" and any(c.denominator != 1 for c in t.values()):
            raise ValueError("non-integral coefficient in an integral group ring element")
        self.terms = t
        self.coeff_ring = coeff_ring

    @classmethod
    def _raw(cls, group, terms, coeff_ring="rationals"):
        obj = cls.__new__(cls)
        obj.group, obj.terms, obj.coeff_ring = group, terms, coeff_ring
        return obj

    @classmethod
    def one(cls, group: FgAbelianGroup, coeff_ring="integers") -> "GroupRingElement":
        return cls._raw(group, {group.zero_key: Q(1)}, coeff_ring)

    @classmethod
    def zero(cls, group: FgAbelianGroup, coeff_ring="integers") -> "GroupRingElement":
        return cls._raw(group, {}, coeff_ring)

    @classmethod
    def monomial(cls, g: GroupElement, c=1, coeff_ring=None) -> "GroupRingElement":
        c = to_q(c)
        ring = coeff_ring or ("integers" if c.denominator == 1 else "rationals")
        return cls(g.group, {g.key: c}, ring)

    def _ring(self, other) -> str:
        return "integers" if self.coeff_ring == other.coeff_ring == "integers" else "rationals"

    def _coerce(self, other) -> "GroupRingElement":
        if isinstance(other, GroupRingElement):
            if other.group != self.group:
                raise ValueError(f"group mismatch: {self.group} vs {other.group}")
            return other
        c = to_q(other)
        ring = "integers" if c.denominator == 1 else "rationals"
        return GroupRingElement._raw(self.group, {self.group.zero_key: c} if c else {}, ring)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        o = self._coerce(other)
        return GroupRingElement._raw(self.group, _add_terms(self.terms, o.terms), self._ring(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GroupRingElement._raw(self.group, _add_terms(self.terms, o.terms, -1), self._ring(o))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return GroupRingElement._raw(self.group, {k: -c for k, c in self.terms.items()}, self.coeff_ring)

    def __mul__(self, other):
        o = self._coerce(other)
        return GroupRingElement._raw(self.group, _mul_terms(self.group, self.terms, o.terms), self._ring(o))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers live in the fraction field")
        out = GroupRingElement.one(self.group, self.coeff_ring)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.group == other.group and self.terms == other.terms
        try:
            return self.terms == self._coerce(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.group, frozenset(self.terms.items())))

    def shift(self, key) -> "GroupRingElement":
        key = key.key if isinstance(key, GroupElement) else key
        add = self.group.add
        return GroupRingElement._raw(self.group, {add(k, key): c for k, c in self.terms.items()},
                                     self.coeff_ring)

    def scale(self, c) -> "GroupRingElement":
        c = to_q(c)
        ring = self.coeff_ring if c.denominator == 1 else "rationals"
        return GroupRingElement._raw(self.group, {k: v * c for k, v in self.terms.items()} if c else {},
                                     ring)

    def coefficient(self, g) -> Q:
        key = g.key if isinstance(g, GroupElement) else self.group.reduce(g)
        return self.terms.get(key, Q(0))

    def support(self) -> list[GroupElement]:
        return [GroupElement(self.group, k) for k in sorted(self.terms)]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __repr__(self):
        return f"GroupRingElement({self})"

    def __str__(self):
        return _render_terms(self.terms, self.group, lambda k: k)

    def to_json(self) -> dict:
        return {"terms": _terms_json(self.group, self.terms, lambda k: k)}


def _terms_json(group, terms, order) -> list:
    r = group.rank
    return [
        {"coeff": fmt_q(terms[k]), "elem": {"free": list(k[:r]), "tor": list(k[r:])}}
        for k in sorted(terms, key=order)
    ]


# --------------------------------------------------------------------------
# Novikov series


class NovikovSeries:
    """An element of ``Nov(G, N; Q)`` known below weight ``cutoff``."""

    __slots__ = ("weight", "cutoff", "terms", "dropped")
    __hash__ = None  # equality is only "up to cutoff"

    def __init__(self, weight: Weight, terms: dict | None = None, cutoff=8, *, dropped: int = 0):
        self.weight = weight
        self.cutoff = to_q(cutoff)
        G = weight.group
        t: dict = {}
        for k, c in (terms or {}).items():
            k = k.key if isinstance(k, GroupElement) else G.reduce(k)
            c = to_q(c)
            if c and weight(k) < self.cutoff:
                t[k] = t.get(k, 0) + c
                if not t[k]:
                    del t[k]
        self.terms = t
        self.dropped = dropped

    @classmethod
    def _raw(cls, weight, terms, cutoff):
        obj = cls.__new__(cls)
        obj.weight, obj.terms, obj.cutoff, obj.dropped = weight, terms, cutoff, 0
        return obj

    @property
    def group(self) -> FgAbelianGroup:
        return self.weight.group

    @classmethod
    def one(cls, weight: Weight, cutoff) -> "NovikovSeries":
        return cls(weight, {weight.group.zero_key: 1}, cutoff)

    @classmethod
    def zero(cls, weight: Weight, cutoff) -> "NovikovSeries":
        return cls(weight, {}, cutoff)

    @classmethod
    def monomial(cls, weight: Weight, g, c=1, cutoff=8) -> "NovikovSeries":
        key = g.key if isinstance(g, GroupElement) else g
        return cls(weight, {key: c}, cutoff)

    def _coerce(self, other) -> "NovikovSeries":
        if isinstance(other, NovikovSeries):
            if other.weight != self.weight:
                raise ValueError("Novikov series over different weights")
            return other
        if isinstance(other, GroupRingElement):
            return include_i_N(other, self.weight, self.cutoff)
        c = to_q(other)
        return NovikovSeries._raw(self.weight, {self.group.zero_key: c} if c else {}, self.cutoff)

    def __bool__(self):
        return bool(self.terms)

    def _min_weight(self):
        if not self.terms:
            return None
        N = self.weight
        return min(N(k) for k in self.terms)

    def __add__(self, other):
        o = self._coerce(other)
        c = min(self.cutoff, o.cutoff)
        return NovikovSeries._raw(self.weight, _truncate(_add_terms(self.terms, o.terms), self.weight, c), c)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        c = min(self.cutoff, o.cutoff)
        return NovikovSeries._raw(self.weight, _truncate(_add_terms(self.terms, o.terms, -1), self.weight, c), c)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return NovikovSeries._raw(self.weight, {k: -c for k, c in self.terms.items()}, self.cutoff)

    def __mul__(self, other):
        o = self._coerce(other)
        da, db = self._min_weight(), o._min_weight()
        ca = self.cutoff + min(db, 0) if db is not None else self.cutoff
        cb = o.cutoff + min(da, 0) if da is not None else o.cutoff
        c = min(ca, cb)
        return NovikovSeries._raw(self.weight, _series_mul(self.weight, self.terms, o.terms, c), c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        out = NovikovSeries.one(self.weight, self.cutoff)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (NovikovSeries, GroupRingElement)):
            return self * invert(self._coerce(other))
        return self.scale(1 / to_q(other))

    def scale(self, c) -> "NovikovSeries":
        c = to_q(c)
        return NovikovSeries._raw(self.weight, {k: v * c for k, v in self.terms.items()} if c else {},
                                  self.cutoff)

    def shift(self, key) -> "NovikovSeries":
        """Multiply by the group element ``key``; the cutoff moves with it."""
        key = key.key if isinstance(key, GroupElement) else key
        add = self.group.add
        return NovikovSeries._raw(
            self.weight, {add(k, key): c for k, c in self.terms.items()}, self.cutoff + self.weight(key)
        )

    def truncate(self, cutoff) -> "NovikovSeries":
        c = min(self.cutoff, to_q(cutoff))
        return NovikovSeries._raw(self.weight, _truncate(self.terms, self.weight, c), c)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        c = min(self.cutoff, o.cutoff)
        N = self.weight
        a = {k: v for k, v in self.terms.items() if N(k) < c}
        b = {k: v for k, v in o.terms.items() if N(k) < c}
        return a == b

    def coefficient(self, g) -> Q:
        key = g.key if isinstance(g, GroupElement) else self.group.reduce(g)
        if self.weight(key) >= self.cutoff:
            raise ValueError(f"coefficient at weight {self.weight(key)} is beyond cutoff {self.cutoff}")
        return self.terms.get(key, Q(0))

    def order_key(self, k):
        r = self.group.rank
        return (self.weight(k), k[:r], k[r:])

    def __repr__(self):
        return f"NovikovSeries({self} + O({fmt_q(self.cutoff)}))"

    def __str__(self):
        return _render_terms(self.terms, self.group, self.order_key)

    def to_json(self) -> dict:
        return {"terms": _terms_json(self.group, self.terms, self.order_key), "cutoff": fmt_q(self.cutoff)}


def _truncate(terms: dict, N: Weight, c) -> dict:
    return {k: v for k, v in terms.items() if N(k) < c}


def _series_mul(N: Weight, a: dict, b: dict, cutoff) -> dict:
    if not a or not b:
        return {}
    G = N.group
    wa = sorted(((N(k), k, v) for k, v in a.items()), key=lambda x: x[0])
    wb = sorted(((N(k), k, v) for k, v in b.items()), key=lambda x: x[0])
    add = G.add
    out: dict = {}
    for w1, k1, c1 in wa:
        lim = cutoff - w1
        for w2, k2, c2 in wb:
            if w2 >= lim:
                break
            k = add(k1, k2)
            v = out.get(k)
            out[k] = c1 * c2 if v is None else v + c1 * c2
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# operations


def _nonzero(a):
    if not a.terms:
        raise ValueError("degree undefined for the zero element")


def degree(a) -> Q:
    """Minimal weight among the terms of ``a`` (weight 0 for group ring elements)."""
    _nonzero(a)
    if isinstance(a, GroupRingElement):
        return Q(0)
    return a._min_weight()


def leading_term(a, weight: Weight | None = None) -> GroupRingElement:
    """The slice of ``a`` at minimal weight, as a group ring element."""
    _nonzero(a)
    N = weight or getattr(a, "weight", None)
    if N is None:
        return GroupRingElement._raw(a.group, dict(a.terms))
    d = min(N(k) for k in a.terms)
    return GroupRingElement._raw(a.group, {k: c for k, c in a.terms.items() if N(k) == d})


def leading_term_normalized(a, weight: Weight | None = None) -> "UnitNormalForm":
    """Leading term moved into ``R[ker N]`` and normalized modulo ``+-ker N``."""
    return normalize_mod_units(leading_term(a, weight))


def include_i_N(a: GroupRingElement, N: Weight, cutoff) -> NovikovSeries:
    cutoff = to_q(cutoff)
    kept = {k: c for k, c in a.terms.items() if N(k) < cutoff}
    return NovikovSeries(N, kept, cutoff, dropped=len(a.terms) - len(kept))


def invert(a: NovikovSeries) -> NovikovSeries:
    """Inverse of a series whose leading term is a single monomial.

    A leading term with several terms is not a unit of ``Q[ker N]``; such
    elements are inverted through :func:`ftor.embedding.embed_fraction`.
    """
    if isinstance(a, GroupRingElement):
        raise TypeError("include the group ring element with include_i_N first")
    if not a.terms:
        raise NotInvertible("zero is not invertible")
    lt = leading_term(a)
    if len(lt.terms) != 1:
        raise NotInvertible(f"leading term {lt} is not a unit of Q[ker N]")
    (g, c), = lt.terms.items()
    d = a.weight(g)
    G = a.group
    # a = c*g*(1 + h), deg h > 0
    u = a.shift(G.neg(g)).scale(1 / c)
    h = u - 1
    rel_cut = u.cutoff
    s = NovikovSeries.one(a.weight, rel_cut)
    if h.terms:
        dh = h._min_weight()
        term = NovikovSeries.one(a.weight, rel_cut)
        n = 1
        while n * dh < rel_cut:
            term = -(term * h)
            s = s + term
            n += 1
    return s.shift(G.neg(g)).scale(1 / c).truncate(a.cutoff - 2 * d)


def exp_series(a: NovikovSeries) -> NovikovSeries:
    if not a.terms:
        return NovikovSeries.one(a.weight, a.cutoff)
    d = a._min_weight()
    if d <= 0:
        raise NotInNov(f"exp: argument of degree {d} is not in Nov+")
    out = NovikovSeries.one(a.weight, a.cutoff)
    term = NovikovSeries.one(a.weight, a.cutoff)
    n = 1
    while n * d < a.cutoff:
        term = term * a
        out = out + term.scale(Q(1, factorial(n)))
        n += 1
    return out


def log_series(a: NovikovSeries) -> NovikovSeries:
    one_key = a.group.zero_key
    if not a.terms:
        raise NotInNov("log: zero is not in Nov1")
    lt = leading_term(a)
    if lt.terms != {one_key: 1}:
        raise NotInNov(f"log: leading term {lt} is not 1, so the argument is not in Nov1")
    c = a - 1
    if not c.terms:
        return NovikovSeries.zero(a.weight, a.cutoff)
    d = c._min_weight()
    out = NovikovSeries.zero(a.weight, a.cutoff)
    power = NovikovSeries.one(a.weight, a.cutoff)
    n = 1
    while n * d < a.cutoff:
        power = power * c
        out = out + power.scale(Q((-1) ** (n + 1), n))
        n += 1
    return out


# --------------------------------------------------------------------------
# normal forms modulo units


@dataclass(frozen=True)
class UnitNormalForm:
    """``representative = sign * unit * original``."""

    representative: object
    sign: int
    unit: GroupElement

    def __eq__(self, other):
        if not isinstance(other, UnitNormalForm):
            return NotImplemented
        return self.representative == other.representative

    __hash__ = None


class _CosetReducer:
    """Canonical coset representatives of ``G / U`` for a subgroup ``U``."""

    def __init__(self, group: FgAbelianGroup, units: Sequence[GroupElement] | None):
        self.group = group
        self.everything = units is None
        if not self.everything:
            n = group.ngens
            gens = [list(u.key) for u in units]
            for i, m in enumerate(group.torsion):
                row = [0] * n
                row[group.rank + i] = m
                gens.append(row)
            self.rows = hermite_rows(gens, n)

    def reduce(self, key: tuple) -> tuple:
        if self.everything:
            return self.group.zero_key
        v = list(key)
        for row in self.rows:
            pc = next(i for i, x in enumerate(row) if x)
            q = v[pc] // row[pc]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return self.group.reduce(v)


def normalize_mod_units(a, units: Sequence[GroupElement] | None = None) -> UnitNormalForm:
    """Canonical representative of ``a`` modulo ``+-U``.

    ``units=None`` means all of ``+-G``.  The minimal term under the order
    (weight, free exponents, torsion residues) is moved to its canonical coset
    representative (the identity when ``U = G``) with a positive coefficient;
    ties between torsion-translates are broken by the smallest resulting term
    list, so the answer is constant on unit orbits.
    """
    if not a.terms:
        raise ValueError("cannot normalize zero modulo units")
    G = a.group
    N = getattr(a, "weight", None)
    r = G.rank
    if N is not None:
        key = lambda k: (N(k), k[:r], k[r:])  # noqa: E731
    else:
        key = lambda k: (Q(0), k[:r], k[r:])  # noqa: E731
    red = _CosetReducer(G, units)
    lowest = min(key(k)[:2] for k in a.terms)
    candidates = [k for k in a.terms if key(k)[:2] == lowest]
    best = None
    for g0 in candidates:
        target = red.reduce(g0)
        u = G.add(target, G.neg(g0))
        sign = 1 if a.terms[g0] > 0 else -1
        cand = a.shift(u)
        if sign < 0:
            cand = -cand
        serial = tuple(sorted((key(k), c) for k, c in cand.terms.items()))
        if best is None or serial < best[0]:
            best = (serial, cand, sign, u)
    _, rep, sign, u = best
    return UnitNormalForm(rep, sign, GroupElement(G, u))
