"""The embedding ``Q(Nov(G, N)) -> Nov(G/ker N, N; Q(Q[ker N]))``.

After a splitting ``G = ker N + Z*v`` every element becomes a Laurent series in
``T = v`` whose coefficients live in the fraction field of ``Q[ker N]``, one
series per field factor.  Exponents of ``T`` are integers and a series is
known for exponents below ``prec``; the weight of ``T^e`` is ``e * step``.
"""
from __future__ import annotations

import math
from typing import Sequence

from .fieldsum import FieldFactor, FieldSumElement, decompose
from .group import FgAbelianGroup, GroupElement, Splitting
from .polynomial import LPoly, RationalFunction, default_names, zeta_power
from .rational import Q, to_q

__all__ = [
    "TSeries",
    "EmbeddedSeries",
    "prec_for_cutoff",
    "embed_series",
    "embed_group_ring",
    "embed_fraction",
    "embed_field_sum",
]


def prec_for_cutoff(cutoff, step) -> int:
    """Smallest integer ``p`` with ``{e : e*step < cutoff} = {e < p}``."""
    q = to_q(cutoff) / step
    return int(math.ceil(q))


class TSeries:
    """Truncated Laurent series ``sum c[i] T^(lo+i)`` over one field factor."""

    __slots__ = ("lo", "c", "prec", "factor")

    def __init__(self, factor: FieldFactor, lo: int, coeffs: list, prec: int):
        self.factor = factor
        self.prec = prec
        n = max(prec - lo, 0)
        coeffs = coeffs[:n]
        i = 0
        while i < len(coeffs) and not coeffs[i]:
            i += 1
        if i == len(coeffs):
            self.lo, self.c = prec, []
        else:
            self.lo, self.c = lo + i, list(coeffs[i:])

    @classmethod
    def from_dict(cls, factor, terms: dict, prec: int) -> "TSeries":
        keep = {e: v for e, v in terms.items() if e < prec and v}
        if not keep:
            return cls(factor, prec, [], prec)
        lo = min(keep)
        z = factor.zero()
        return cls(factor, lo, [keep.get(lo + i, z) for i in range(prec - lo)], prec)

    @classmethod
    def constant(cls, factor, value, prec: int) -> "TSeries":
        if not isinstance(value, RationalFunction):
            value = RationalFunction.const(Q(value), factor.num_vars)
        return cls(factor, 0, [value], prec)

    def __bool__(self):
        return bool(self.c)

    @property
    def valuation(self) -> int:
        return self.lo

    def coeff(self, e: int):
        if e >= self.prec:
            raise ValueError(f"exponent {e} is beyond the known precision {self.prec}")
        i = e - self.lo
        if 0 <= i < len(self.c):
            return self.c[i]
        return self.factor.zero()

    def items(self):
        for i, v in enumerate(self.c):
            if v:
                yield self.lo + i, v

    def _lift(self, other) -> "TSeries":
        if isinstance(other, TSeries):
            return other
        return TSeries.constant(self.factor, other, self.prec)

    def _combine(self, other, sign):
        o = self._lift(other)
        prec = min(self.prec, o.prec)
        if not o.c:
            return TSeries(self.factor, self.lo, self.c, prec)
        if not self.c:
            return TSeries(self.factor, o.lo, o.c if sign > 0 else [-x for x in o.c], prec)
        lo = min(self.lo, o.lo)
        z = self.factor.zero()
        out = [z] * (prec - lo)
        for i, v in enumerate(self.c):
            if self.lo + i - lo < len(out):
                out[self.lo + i - lo] = v
        for i, v in enumerate(o.c):
            k = o.lo + i - lo
            if k < len(out):
                out[k] = out[k] + v if sign > 0 else out[k] - v
        return TSeries(self.factor, lo, out, prec)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TSeries(self.factor, self.lo, [-x for x in self.c], self.prec)

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            if isinstance(other, RationalFunction) or not isinstance(other, EmbeddedSeries):
                if not other:
                    return TSeries(self.factor, self.prec, [], self.prec)
                return TSeries(self.factor, self.lo, [x * other for x in self.c], self.prec)
            return NotImplemented
        o = other
        prec = min(self.prec + o.lo, o.prec + self.lo)
        if not self.c or not o.c:
            return TSeries(self.factor, prec, [], prec)
        lo = self.lo + o.lo
        n = prec - lo
        z = self.factor.zero()
        out = [z] * max(n, 0)
        a, b = self.c, o.c
        for i in range(min(len(a), n)):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b), n - i)):
                if b[j]:
                    out[i + j] = out[i + j] + ai * b[j]
        return TSeries(self.factor, lo, out, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TSeries":
        return TSeries(self.factor, self.lo + k, self.c, self.prec + k)

    def inverse(self) -> "TSeries":
        if not self.c:
            raise ZeroDivisionError("series is zero to the known precision")
        v = self.lo
        L = len(self.c)  # relative length = prec - v
        a = self.c
        inv0 = a[0].inverse()
        b = [inv0]
        for n in range(1, L):
            s = None
            for k in range(1, n + 1):
                if a[k]:
                    t = a[k] * b[n - k]
                    s = t if s is None else s + t
            b.append(-(s * inv0) if s is not None else self.factor.zero())
        return TSeries(self.factor, -v, b, self.prec - 2 * v)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = TSeries.constant(self.factor, 1, self.prec)
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, prec: int) -> "TSeries":
        p = min(prec, self.prec)
        return TSeries(self.factor, self.lo, self.c, p)

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            other = self._lift(other)
        p = min(self.prec, other.prec)
        a, b = self.truncate(p), other.truncate(p)
        return a.lo == b.lo and a.c == b.c

    __hash__ = None

    def pivot_key(self):
        # minimal valuation first; then prefer a unit leading coefficient,
        # which keeps denominators out of the elimination, then small entries
        if not self.c:
            return (self.lo, 2, 0)
        a = self.c[0]
        unit = a.num.is_monomial() and a.den.is_one()
        return (self.lo, 0 if unit else 1, sum(len(x.num.terms) + len(x.den.terms) for x in self.c))

    def __repr__(self):
        return f"TSeries({self.render()} + O(T^{self.prec}))"

    def render(self, names=None) -> str:
        names = names or [f"u{i + 1}" for i in range(self.factor.num_vars)]
        if self.factor.num_vars == 1 and names == ["u1"]:
            names = ["u"]
        parts = []
        for e, v in self.items():
            s = v.render(names)
            mono = "" if e == 0 else ("T" if e == 1 else f"T^{e}")
            if not mono:
                parts.append(s)
            elif s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({s})*{mono}")
        return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------


class EmbeddedSeries:
    """An element of ``Nov(G/ker N; Q(Q[ker N]))``, one :class:`TSeries` per factor."""

    __slots__ = ("split", "factors", "comps")
    __hash__ = None

    def __init__(self, split: Splitting, comps: Sequence[TSeries]):
        self.split = split
        self.comps = tuple(comps)
        self.factors = tuple(c.factor for c in self.comps)

    @classmethod
    def one(cls, split: Splitting, prec: int) -> "EmbeddedSeries":
        fs = decompose(split.kernel_group)
        return cls(split, [TSeries.constant(f, 1, prec) for f in fs])

    @classmethod
    def zero(cls, split: Splitting, prec: int) -> "EmbeddedSeries":
        fs = decompose(split.kernel_group)
        return cls(split, [TSeries(f, prec, [], prec) for f in fs])

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.comps)

    @property
    def cutoff(self) -> Q:
        return self.prec * self.split.step

    def _lift(self, other) -> "EmbeddedSeries":
        if isinstance(other, EmbeddedSeries):
            return other
        return EmbeddedSeries(self.split, [TSeries.constant(c.factor, other, c.prec) for c in self.comps])

    def __add__(self, other):
        o = self._lift(other)
        return EmbeddedSeries(self.split, [a + b for a, b in zip(self.comps, o.comps)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return EmbeddedSeries(self.split, [a - b for a, b in zip(self.comps, o.comps)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return EmbeddedSeries(self.split, [-a for a in self.comps])

    def __mul__(self, other):
        o = self._lift(other)
        return EmbeddedSeries(self.split, [a * b for a, b in zip(self.comps, o.comps)])

    __rmul__ = __mul__

    def inverse(self) -> "EmbeddedSeries":
        return EmbeddedSeries(self.split, [a.inverse() for a in self.comps])

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __pow__(self, n: int):
        return EmbeddedSeries(self.split, [a ** n for a in self.comps])

    def truncate(self, prec: int) -> "EmbeddedSeries":
        return EmbeddedSeries(self.split, [a.truncate(prec) for a in self.comps])

    def shift(self, k: int) -> "EmbeddedSeries":
        return EmbeddedSeries(self.split, [a.shift(k) for a in self.comps])

    def __eq__(self, other):
        o = self._lift(other)
        return all(a == b for a, b in zip(self.comps, o.comps))

    def is_zero(self) -> bool:
        return not any(self.comps)

    def __bool__(self):
        return not self.is_zero()

    def valuation(self) -> int:
        vals = [c.lo for c in self.comps if c]
        if not vals:
            raise ValueError("degree undefined for the zero element")
        return min(vals)

    def degree(self) -> Q:
        return self.valuation() * self.split.step

    def leading_coefficient(self) -> FieldSumElement:
        v = self.valuation()
        return FieldSumElement(self.factors, [c.coeff(v) if v < c.prec else c.factor.zero() for c in self.comps])

    def normalize(self) -> tuple["EmbeddedSeries", tuple]:
        """Representative modulo ``+-G``; returns ``(rep, (T shift, kernel unit))``."""
        v = self.valuation()
        shifted = self.shift(-v)
        lt = shifted.leading_coefficient()
        m = self.split.kernel_group.torsion[0] if self.split.kernel_group.torsion else 1
        _, (free, a, sign) = lt.normalize(m)
        comps = []
        for c in shifted.comps:
            f = c.factor
            z = zeta_power(f.d, a) * sign
            mono = RationalFunction.poly(LPoly.monomial(free, z)) if f.num_vars else RationalFunction.const(z, 0)
            comps.append(c * mono)
        return EmbeddedSeries(self.split, comps), (-v, free, a, sign)

    def map(self, fn) -> "EmbeddedSeries":
        return EmbeddedSeries(self.split, [fn(c) for c in self.comps])

    # -- back to G

    def to_group_terms(self) -> dict:
        """``{G-key: rational}`` when the series comes from ``Nov(G, N; Q)`` directly.

        Needs a single field factor and Laurent-polynomial coefficients.
        """
        if len(self.comps) != 1:
            raise ValueError("reading G-coefficients needs a torsion-free group")
        c = self.comps[0]
        out = {}
        ntor = len(self.split.group.torsion)
        for e, v in c.items():
            if not v.den.is_one():
                raise ValueError(
                    f"coefficient {v} at T^{e} is a genuine fraction of Q[ker N]; "
                    "it has no expansion in G-coordinates"
                )
            for k, q in v.num.terms.items():
                g = self.split.recompose(tuple(k) + (0,) * ntor, e)
                out[g.key] = q
        return out

    def render(self) -> str:
        try:
            from .novikov import NovikovSeries

            terms = self.to_group_terms()
            return str(NovikovSeries(self.split.weight, terms, self.cutoff))
        except ValueError:
            pass
        if len(self.comps) == 1:
            return self.comps[0].render()
        return "(" + ", ".join(f"{c.render()} in {c.factor}" for c in self.comps) + ")"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"EmbeddedSeries({self.render()} + O(T^{self.prec}))"


# --------------------------------------------------------------------------
# constructors


def _kernel_factors(split: Splitting) -> list[FieldFactor]:
    return decompose(split.kernel_group)


def _accumulate(split: Splitting, factors, items, prec: int) -> list[TSeries]:
    """``items`` yields (G-key, coefficient) pairs; coefficient may be field-valued per factor."""
    nk = split.kernel_group.rank
    per = [dict() for _ in factors]
    for key, coeff in items:
        coords, e = split.decompose(key)
        if e >= prec:
            continue
        free = coords[:nk]
        tor = coords[nk] if len(coords) > nk else 0
        for j, f in enumerate(factors):
            c = coeff[j] if isinstance(coeff, list) else coeff
            z = zeta_power(f.d, tor) * c
            d = per[j].setdefault(e, {})
            d[free] = d.get(free, 0) + z
    out = []
    for f, d in zip(factors, per):
        terms = {}
        for e, polyterms in d.items():
            p = LPoly(nk, {k: v for k, v in polyterms.items() if v}, _clean=True)
            if p:
                terms[e] = RationalFunction.poly(p) if nk else RationalFunction.const(p.constant_term(), 0)
        out.append(TSeries.from_dict(f, terms, prec))
    return out


def embed_series(a, split: Splitting) -> EmbeddedSeries:
    """Embed a :class:`~ftor.novikov.NovikovSeries` over ``G``."""
    if a.weight != split.weight:
        raise ValueError("series weight and splitting weight differ")
    prec = prec_for_cutoff(a.cutoff, split.step)
    factors = _kernel_factors(split)
    return EmbeddedSeries(split, _accumulate(split, factors, a.terms.items(), prec))


def embed_group_ring(a, split: Splitting, prec: int) -> EmbeddedSeries:
    """Embed an exact group ring element, keeping exponents below ``prec``."""
    factors = _kernel_factors(split)
    return EmbeddedSeries(split, _accumulate(split, factors, a.terms.items(), prec))


def _exact_valuations(a, split: Splitting) -> tuple[int, int]:
    es = [split.decompose(k)[1] for k in a.terms]
    return min(es), max(es)


def embed_fraction(num, den, split: Splitting, cutoff) -> EmbeddedSeries:
    """Expand ``num / den`` (exact group ring elements) below ``cutoff``.

    Both inputs are exact, so they are embedded with enough headroom that the
    quotient is known up to the requested cutoff.
    """
    if not den.terms:
        raise ZeroDivisionError("zero denominator")
    prec = prec_for_cutoff(cutoff, split.step)
    if not num.terms:
        return EmbeddedSeries.zero(split, prec)
    vn_lo, vn_hi = _exact_valuations(num, split)
    vd_lo, vd_hi = _exact_valuations(den, split)
    work = max(prec + 2 * vd_hi + 1, prec - vn_lo + vd_hi + 1, vn_hi + 1, vd_hi + 1)
    while True:
        n = embed_group_ring(num, split, work)
        d = embed_group_ring(den, split, work)
        if not all(d.comps):
            raise ZeroDivisionError(f"denominator {den} is a zero divisor")
        q = n / d
        if q.prec >= prec:
            return q.truncate(prec)
        work += prec - q.prec


def embed_field_sum(x: FieldSumElement, split: Splitting, cutoff) -> EmbeddedSeries:
    """Embed an element of ``Q(Q[G])`` given as rational functions in G's free coordinates."""
    G: FgAbelianGroup = split.group
    prec = prec_for_cutoff(cutoff, split.step)
    factors = _kernel_factors(split)
    if len(factors) != len(x.factors):
        raise ValueError("factor decompositions of G and ker N differ")
    ntor = len(G.torsion)
    comps = []
    for j, (f, rf) in enumerate(zip(factors, x.components)):
        if not rf:
            comps.append(TSeries(f, prec, [], prec))
            continue
        num, den = rf.num, rf.den
        items_n = [(tuple(k) + (0,) * ntor, c) for k, c in num.terms.items()]
        items_d = [(tuple(k) + (0,) * ntor, c) for k, c in den.terms.items()]
        en = [split.decompose(k)[1] for k, _ in items_n]
        ed = [split.decompose(k)[1] for k, _ in items_d]
        work = max(prec + 2 * max(ed) + 1, prec - min(en) + max(ed) + 1, max(en) + 1, max(ed) + 1)
        while True:
            sn = _accumulate(split, [f], items_n, work)[0]
            sd = _accumulate(split, [f], items_d, work)[0]
            q = sn / sd
            if q.prec >= prec:
                comps.append(q.truncate(prec))
                break
            work += prec - q.prec
    return EmbeddedSeries(split, comps)
