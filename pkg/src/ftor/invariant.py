"""Orbit-count zeta functions and the product invariant ``I = zeta * tau``."""
from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import EmbeddedSeries, TSeries, embed_field_sum, embed_series, prec_for_cutoff
from .fieldsum import FieldSumElement
from .group import GroupElement, Splitting, Weight, kernel_and_splitting
from .novikov import NotInNov, NovikovSeries, exp_series
from .polynomial import LPoly, RationalFunction
from .rational import Q, fmt_q, to_q
from .torsion import TorsionValue

__all__ = [
    "OrbitCounts",
    "InvariantValue",
    "zeta",
    "assemble_I",
    "extended_leading_term",
    "field_sum_leading_term",
    "log_I",
    "coefficient_at",
    "tseries_log",
]


class OrbitCounts:
    """Rational counts of closed orbits per class ``A`` with ``0 < N(A) < cutoff``."""

    __slots__ = ("weight", "counts", "cutoff")

    def __init__(self, weight: Weight, counts: dict | None = None, cutoff=8):
        self.weight = weight
        self.cutoff = to_q(cutoff)
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        G = weight.group
        out = {}
        for k, c in (counts or {}).items():
            key = k.key if isinstance(k, GroupElement) else G.reduce(k)
            w = weight(key)
            if w <= 0:
                raise ValueError(
                    f"orbit class {GroupElement(G, key).to_json()} has weight {fmt_q(w)} <= 0; "
                    "closed orbits must have positive energy"
                )
            c = to_q(c)
            if c and w < self.cutoff:
                out[key] = out.get(key, 0) + c
        self.counts = {k: v for k, v in out.items() if v}

    @property
    def group(self):
        return self.weight.group

    def series(self) -> NovikovSeries:
        return NovikovSeries(self.weight, self.counts, self.cutoff)

    def __add__(self, other: "OrbitCounts") -> "OrbitCounts":
        if other.weight != self.weight:
            raise ValueError("orbit counts over different weights")
        merged = dict(self.counts)
        for k, v in other.counts.items():
            merged[k] = merged.get(k, 0) + v
        return OrbitCounts(self.weight, merged, min(self.cutoff, other.cutoff))

    def __eq__(self, other):
        if not isinstance(other, OrbitCounts):
            return NotImplemented
        return self.weight == other.weight and self.counts == other.counts and self.cutoff == other.cutoff

    def __repr__(self):
        return f"OrbitCounts({self.series()})"


def zeta(counts: OrbitCounts) -> NovikovSeries:
    """``exp(sum counts(A) A)``."""
    return exp_series(counts.series())


@dataclass(eq=False)
class InvariantValue:
    """``I = zeta * tau`` as a normalized embedded series (or the 0 marker)."""

    value: EmbeddedSeries
    unit_class: str = "+-ker psi"
    raw: EmbeddedSeries | None = field(default=None, repr=False)

    def is_zero(self) -> bool:
        return self.value.is_zero()

    @property
    def cutoff(self) -> Q:
        return self.value.cutoff

    def __eq__(self, other):
        if not isinstance(other, InvariantValue):
            return NotImplemented
        return self.value == other.value

    def render(self) -> str:
        return "0" if self.is_zero() else self.value.render()

    def __str__(self):
        return self.render()


def _embed_tau(tau, split: Splitting, cutoff) -> EmbeddedSeries:
    if isinstance(tau, TorsionValue):
        tau = tau.raw if tau.raw is not None else tau.value
    if isinstance(tau, EmbeddedSeries):
        if tau.split.weight != split.weight:
            raise ValueError("torsion and zeta function live over different weights")
        return tau
    if isinstance(tau, FieldSumElement):
        return embed_field_sum(tau, split, cutoff)
    if isinstance(tau, NovikovSeries):
        return embed_series(tau, split)
    prec = prec_for_cutoff(cutoff, split.step)
    return EmbeddedSeries.one(split, prec) * to_q(tau)


def assemble_I(tau, z: NovikovSeries) -> InvariantValue:
    """Normalized product of a torsion and a zeta function; a 0 torsion is absorbing."""
    N = z.weight
    if N.is_zero():
        raise ValueError("the invariant needs a nonzero weight")
    split = tau.value.split if isinstance(tau, TorsionValue) and tau.is_series else kernel_and_splitting(N.group, N)
    if isinstance(tau, TorsionValue) and tau.is_series and tau.value.split.weight != N:
        raise ValueError("torsion and zeta function live over different weights")
    t = _embed_tau(tau, split, z.cutoff)
    prod = t * embed_series(z, split)
    if prod.is_zero():
        return InvariantValue(prod, raw=prod)
    rep, _ = prod.normalize()
    return InvariantValue(rep, raw=prod)


def field_sum_leading_term(x: FieldSumElement, split: Splitting) -> FieldSumElement:
    """Leading coefficient of the expansion of ``x`` along ``split``, computed exactly."""
    from .embedding import _accumulate, _kernel_factors

    factors = _kernel_factors(split)
    ntor = len(split.group.torsion)
    per = []
    for f, rf in zip(factors, x.components):
        if not rf:
            per.append(None)
            continue
        out = []
        for p in (rf.num, rf.den):
            items = [(tuple(k) + (0,) * ntor, c) for k, c in p.terms.items()]
            es = [split.decompose(k)[1] for k, _ in items]
            s = _accumulate(split, [f], items, max(es) + 1)[0]
            out.append((s.lo, s.c[0]))
        (vn, cn), (vd, cd) = out
        per.append((vn - vd, cn / cd))
    vals = [p[0] for p in per if p is not None]
    if not vals:
        raise ValueError("leading term of zero")
    v = min(vals)
    comps = [p[1] if p is not None and p[0] == v else f.zero() for f, p in zip(factors, per)]
    return FieldSumElement(factors, comps)


def extended_leading_term(v, weight: Weight | None = None) -> FieldSumElement:
    """Leading slice of a value of ``Q(Nov)``, normalized modulo ``+-ker N``."""
    if isinstance(v, InvariantValue):
        s = v.value
    elif isinstance(v, TorsionValue):
        s = v.value
    else:
        s = v
    if isinstance(s, EmbeddedSeries):
        if s.is_zero():
            raise ValueError("extended leading term of the 0 marker")
        lt = s.leading_coefficient()
        split = s.split
    elif isinstance(s, FieldSumElement):
        if weight is None:
            raise ValueError("a weight is needed to expand an element of Q(Q[G])")
        if s.is_zero():
            raise ValueError("extended leading term of the 0 marker")
        split = kernel_and_splitting(weight.group, weight)
        lt = field_sum_leading_term(s, split)
    else:
        raise TypeError(f"cannot take the leading term of {type(s).__name__}")
    m = split.kernel_group.torsion[0] if split.kernel_group.torsion else 1
    rep, _ = lt.normalize(m)
    return rep


def tseries_log(s: TSeries) -> TSeries:
    one = TSeries.constant(s.factor, 1, s.prec)
    c = s - one
    if c and c.lo <= 0:
        raise NotInNov("log: leading term is not 1")
    out = TSeries(s.factor, s.prec, [], s.prec)
    if not c:
        return out
    power = one
    n = 1
    while n * c.lo < s.prec:
        power = power * c
        term = power * RationalFunction.const(Q((-1) ** (n + 1), n), s.factor.num_vars)
        out = out + term
        n += 1
    return out


def _series_of(v) -> EmbeddedSeries:
    if isinstance(v, (InvariantValue, TorsionValue)):
        return v.value
    return v


def log_I(v) -> NovikovSeries:
    """``ln I`` as a series over ``G``; needs ``lt(I) = 1`` after normalization."""
    s = _series_of(v)
    if not isinstance(s, EmbeddedSeries):
        raise TypeError("log_I expects an embedded value")
    if s.is_zero():
        raise NotInNov("log: the 0 marker is not in Nov1")
    lt = s.leading_coefficient()
    if s.valuation() != 0 or lt != FieldSumElement.one(lt.factors):
        raise NotInNov(f"not in Nov1: leading term is {lt.render()} at degree {fmt_q(s.degree())}")
    logs = EmbeddedSeries(s.split, [tseries_log(c) for c in s.comps])
    terms = logs.to_group_terms()
    return NovikovSeries(s.split.weight, terms, logs.cutoff)


def coefficient_at(v, A) -> Q:
    return log_I(v).coefficient(A)
