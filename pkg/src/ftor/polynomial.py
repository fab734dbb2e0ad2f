"""Exact polynomial arithmetic behind the fraction-field module.

* :class:`Cyclo` -- elements of ``Q(zeta_d) = Q[x]/Phi_d`` for ``d > 2`` as dense
  coefficient vectors (``d = 1, 2`` use plain rationals, ``zeta_2 = -1``).
* :class:`LPoly` -- sparse multivariate Laurent polynomials over ``Q`` or
  ``Q(zeta_d)``.
* :class:`RationalFunction` -- quotients of :class:`LPoly`.  In one variable the
  fraction is kept gcd-reduced with ``den(0) = 1``; with two or more variables
  only monomial and scalar content is removed and equality is tested by
  cross-multiplication.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .rational import Q

__all__ = [
    "cyclotomic_poly",
    "euler_phi",
    "Cyclo",
    "zeta_power",
    "LPoly",
    "RationalFunction",
    "NotExactDivision",
    "coeff_key",
]

MAX_CYCLOTOMIC_INDEX = 1 << 16


class NotExactDivision(ArithmeticError):
    pass


# --------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, lowest degree first)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _dmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _trim(out)


def _ddivmod(a: list, b: list) -> tuple[list, list]:
    """Division with remainder over a field; ``b`` must be nonzero."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _trim(a)
    lead = b[-1]
    inv_lead = 1 / lead if not isinstance(lead, int) else Q(1, lead)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c:
            c = c * inv_lead
            q[k] = c
            for j, y in enumerate(b):
                if y:
                    a[k + j] -= c * y
    return _trim(q), _trim(a[:db])


def _dmonic(a: list) -> list:
    lead = a[-1]
    if lead == 1:
        return a
    inv = 1 / lead
    return [x * inv for x in a]


def _dgcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _ddivmod(a, b)
        a, b = b, r
    return _dmonic(a) if a else a


# --------------------------------------------------------------------------
# cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Integer coefficients of ``Phi_d``, lowest degree first."""
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if d > MAX_CYCLOTOMIC_INDEX:
        raise ValueError(f"cyclotomic index {d} exceeds guard {MAX_CYCLOTOMIC_INDEX}")
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num, rem = _int_divmod(num, list(cyclotomic_poly(e)))
            assert not any(rem)
    return tuple(num)


def _int_divmod(a: list, b: list) -> tuple[list, list]:
    # b monic with integer coefficients
    a = list(a)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return q, a[:db]


def euler_phi(d: int) -> int:
    return len(cyclotomic_poly(d)) - 1


class Cyclo:
    """An element of ``Q(zeta_d)``, ``d > 2``, in the power basis ``1, x, ..., x^(phi-1)``."""

    __slots__ = ("d", "c")

    def __init__(self, d: int, coeffs: Iterable):
        self.d = d
        phi = cyclotomic_poly(d)
        c = [Q(x) for x in coeffs]
        n = len(phi) - 1
        if len(c) > n:
            for k in range(len(c) - 1, n - 1, -1):
                top = c[k]
                if top:
                    for j in range(n + 1):
                        if phi[j]:
                            c[k - n + j] -= top * phi[j]
            c = c[:n]
        c += [Q(0)] * (n - len(c))
        self.c = tuple(c)

    @classmethod
    def zeta(cls, d: int, power: int = 1) -> "Cyclo":
        power %= d
        return cls(d, [0] * power + [1])

    def _lift(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            if other.d != self.d:
                raise ValueError("mixing different cyclotomic fields")
            return other
        return Cyclo(self.d, [other])

    def __add__(self, other):
        o = self._lift(other)
        return Cyclo(self.d, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.d, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Cyclo):
            other = Q(other)
            return Cyclo(self.d, [a * other for a in self.c])
        return Cyclo(self.d, _dmul(list(self.c), list(self._lift(other).c)))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        # extended Euclid: u*a + v*phi = 1
        a = _trim(list(self.c))
        b = [Q(x) for x in cyclotomic_poly(self.d)]
        u0, u1 = [Q(1)], []
        while b:
            q, r = _ddivmod(a, b)
            a, b = b, r
            u0, u1 = u1, _dsub(u0, _dmul(q, u1))
        # a is a nonzero constant now
        inv = 1 / a[0]
        return Cyclo(self.d, [x * inv for x in u0])

    def __truediv__(self, other):
        if isinstance(other, Cyclo):
            return self * other.inverse()
        return self * (1 / Q(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.d == other.d and self.c == other.c
        try:
            o = Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.c[0] == o and not any(self.c[1:])

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash((self.d, self.c))

    def key(self) -> tuple:
        return self.c

    def __repr__(self):
        return f"Cyclo({self.d}, {[str(x) for x in self.c]})"

    def __str__(self):
        parts = []
        for k, a in enumerate(self.c):
            if not a:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            parts.append(_term_str(a, mono))
        return _join_terms(parts)


def _dsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def zeta_power(d: int, k: int):
    """``zeta_d ** k`` in the coefficient type used for factor ``d``."""
    if d == 1:
        return Q(1)
    if d == 2:
        return Q(-1) if k % 2 else Q(1)
    return Cyclo.zeta(d, k)


def coeff_key(c) -> tuple:
    """Total-order key on coefficients; larger is preferred in normal forms."""
    if isinstance(c, Cyclo):
        return c.c
    return (c,)


def _term_str(coeff, mono: str) -> str:
    if isinstance(coeff, Cyclo):
        s = str(coeff)
        if mono and len([a for a in coeff.c if a]) > 1:
            s = f"({s})"
        if mono and s == "1":
            return mono
        if mono and s == "-1":
            return "-" + mono
        return s + ("*" + mono if mono else "")
    q = Q(coeff)
    if not mono:
        return _qs(q)
    if q == 1:
        return mono
    if q == -1:
        return "-" + mono
    return f"{_qs(q)}*{mono}"


def _qs(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# --------------------------------------------------------------------------
# Laurent polynomials


class LPoly:
    """Sparse Laurent polynomial ``{exponent tuple: coefficient}`` in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None, _clean: bool = False):
        self.nvars = nvars
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {tuple(e): (c if isinstance(c, Cyclo) else Q(c)) for e, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    @classmethod
    def const(cls, c, nvars: int) -> "LPoly":
        return cls(nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def monomial(cls, exp, c=1) -> "LPoly":
        exp = tuple(exp)
        if not isinstance(c, Cyclo):
            c = Q(c)
        return cls(len(exp), {exp: c} if c else {}, _clean=True)

    # -- predicates
    def __bool__(self):
        return bool(self.terms)

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        (e, c), = self.terms.items()
        return c == 1 and not any(e)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, LPoly):
            other = LPoly.const(other, self.nvars)
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return LPoly(self.nvars, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return LPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, LPoly):
            other = LPoly.const(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LPoly):
            if not other:
                return LPoly(self.nvars)
            return LPoly(self.nvars, {e: c * other for e, c in self.terms.items()}, _clean=True)
        a, b = self.terms, other.terms
        if not a or not b:
            return LPoly(self.nvars)
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return LPoly(self.nvars, {e: c * cb for e, c in a.items()}, _clean=True)
        t: dict = {}
        if self.nvars == 1:
            for (ea,), ca in a.items():
                for (eb,), cb in b.items():
                    k = (ea + eb,)
                    v = t.get(k)
                    t[k] = ca * cb if v is None else v + ca * cb
        else:
            for ea, ca in a.items():
                for eb, cb in b.items():
                    k = tuple(x + y for x, y in zip(ea, eb))
                    v = t.get(k)
                    t[k] = ca * cb if v is None else v + ca * cb
        return LPoly(self.nvars, {e: c for e, c in t.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            return LPoly.monomial(tuple(n * x for x in e), (1 / c) ** (-n))
        out = LPoly.const(Q(1), self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if not other:
            return not self.terms
        return self.terms == {(0,) * self.nvars: other}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- structure
    def shift(self, exp) -> "LPoly":
        if not any(exp):
            return self
        return LPoly(
            self.nvars,
            {tuple(x + y for x, y in zip(e, exp)): c for e, c in self.terms.items()},
            _clean=True,
        )

    def low_exp(self) -> tuple:
        """Lex-minimal exponent; multiplicative, so well-defined on fractions."""
        return min(self.terms)

    def high_exp(self) -> tuple:
        return max(self.terms)

    def low_coeff(self):
        return self.terms[min(self.terms)]

    def min_exps(self) -> tuple:
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def map_coeffs(self, f) -> "LPoly":
        return LPoly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def to_dense(self) -> tuple[int, list]:
        """Univariate only: ``(shift, coeffs)`` with ``self = x^shift * sum coeffs[i] x^i``."""
        assert self.nvars == 1
        if not self.terms:
            return 0, []
        lo = min(e for (e,) in self.terms)
        hi = max(e for (e,) in self.terms)
        out = [0] * (hi - lo + 1)
        for (e,), c in self.terms.items():
            out[e - lo] = c
        return lo, out

    @classmethod
    def from_dense(cls, coeffs: list, shift: int = 0) -> "LPoly":
        return cls(1, {(i + shift,): c for i, c in enumerate(coeffs) if c}, _clean=True)

    def exact_div(self, other: "LPoly") -> "LPoly":
        """Quotient in the Laurent ring; raises :class:`NotExactDivision` otherwise."""
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return LPoly(self.nvars)
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            inv = 1 / c
            neg = tuple(-x for x in e)
            return LPoly(
                self.nvars,
                {tuple(x + y for x, y in zip(k, neg)): v * inv for k, v in self.terms.items()},
                _clean=True,
            )
        if self.nvars == 1:
            sa, da = self.to_dense()
            sb, db = other.to_dense()
            q, r = _ddivmod(da, db)
            if r:
                raise NotExactDivision("remainder is nonzero")
            return LPoly.from_dense(q, sa - sb)
        # shift both to genuine polynomials; per-variable minimal degrees are
        # additive, so an exact quotient is then a polynomial too
        sa, sb = self.min_exps(), other.min_exps()
        a = self.shift(tuple(-x for x in sa))
        b = other.shift(tuple(-x for x in sb))
        lead_b = b.high_exp()
        inv = 1 / b.terms[lead_b]
        q: dict = {}
        r = a
        while r.terms:
            lr = r.high_exp()
            m = tuple(x - y for x, y in zip(lr, lead_b))
            if any(x < 0 for x in m):
                raise NotExactDivision("remainder is nonzero")
            c = r.terms[lr] * inv
            q[m] = c
            r = r - LPoly(self.nvars, {m: c}, _clean=True) * b
        q = {tuple(x + y - z for x, y, z in zip(e, sa, sb)): c for e, c in q.items()}
        return LPoly(self.nvars, q, _clean=True)

    def gcd(self, other: "LPoly") -> "LPoly":
        """Univariate monic gcd of the polynomial parts (units ``x^k`` dropped)."""
        assert self.nvars == 1
        _, a = self.to_dense()
        _, b = other.to_dense()
        if not a:
            return LPoly.from_dense(_dmonic(b)) if b else LPoly(1)
        if not b:
            return LPoly.from_dense(_dmonic(a))
        return LPoly.from_dense(_dgcd(a, b))

    def evaluate(self, point):
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                v = v * (x ** k if k >= 0 else 1 / x ** (-k))
            total = total + v
        return total

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def render(self, names: list[str]) -> str:
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            parts.append(_term_str(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"LPoly({self.render(default_names(self.nvars))})"


def default_names(n: int) -> list[str]:
    if n == 1:
        return ["t"]
    return [f"t{i + 1}" for i in range(n)]


# --------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """``num / den`` with Laurent polynomial parts over one coefficient field."""

    __slots__ = ("num", "den", "nvars")

    def __init__(self, num: LPoly, den: LPoly | None = None, _canonical: bool = False):
        self.nvars = num.nvars
        if den is None:
            den = LPoly.const(Q(1), num.nvars)
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c, nvars: int) -> "RationalFunction":
        return cls(LPoly.const(c, nvars), LPoly.const(Q(1), nvars), _canonical=True)

    @classmethod
    def poly(cls, p: LPoly) -> "RationalFunction":
        return cls(p, LPoly.const(Q(1), p.nvars), _canonical=True)

    @property
    def is_poly(self) -> bool:
        return self.den.is_one()

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other, self.nvars)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num + other.num, self.den, _canonical=True)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            if isinstance(other, LPoly):
                other = RationalFunction.poly(other)
            else:
                if not other:
                    return RationalFunction.const(Q(0), self.nvars)
                return RationalFunction(self.num * other, self.den, _canonical=True)
        if not self.num or not other.num:
            return RationalFunction.const(Q(0), self.nvars)
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num * other.num, self.den, _canonical=True)
        if self.nvars == 1:
            return _mul_reduced(self, other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        if self.num.is_monomial():
            (e, c), = self.num.terms.items()
            inv = 1 / c
            neg = tuple(-x for x in e)
            num = LPoly(self.nvars, {tuple(x + y for x, y in zip(k, neg)): v * inv
                                     for k, v in self.den.terms.items()}, _clean=True)
            return RationalFunction(num, LPoly.const(Q(1), self.nvars), _canonical=True)
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other, self.nvars)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, _canonical=self.nvars <= 1)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            if isinstance(other, LPoly):
                other = RationalFunction.poly(other)
            else:
                try:
                    other = RationalFunction.const(other, self.nvars)
                except TypeError:
                    return NotImplemented
        if self.nvars <= 1 or (self.den.is_one() and other.den.is_one()):
            return self.num == other.num and self.den == other.den
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self.nvars <= 1 or self.den.is_one():
            return hash((self.num, self.den))
        return hash(("rf", self.nvars))

    def unit_shift(self) -> tuple:
        """Exponent of the monomial part, ``low(num) - low(den)``."""
        return tuple(x - y for x, y in zip(self.num.low_exp(), self.den.low_exp()))

    def low_ratio(self):
        """Ratio of lex-lowest coefficients; invariant of the representation."""
        return self.num.low_coeff() / self.den.low_coeff()

    def shift(self, exp) -> "RationalFunction":
        return RationalFunction(self.num.shift(exp), self.den, _canonical=True)

    def scale(self, c) -> "RationalFunction":
        if not c:
            return RationalFunction.const(Q(0), self.nvars)
        return RationalFunction(self.num * c, self.den, _canonical=True)

    def map_coeffs(self, f) -> "RationalFunction":
        return RationalFunction(self.num.map_coeffs(f), self.den.map_coeffs(f))

    def constant_value(self):
        """The scalar value when the function is constant, else ``None``."""
        if self.den.is_one() and self.num.is_constant():
            return self.num.constant_term()
        return None

    def render(self, names: list[str] | None = None) -> str:
        names = names or default_names(self.nvars)
        n = self.num.render(names)
        if self.den.is_one():
            return n
        d = self.den.render(names)
        if self.num.is_one():
            return f"({d})^-1"
        wrap = f"({n})" if len(self.num.terms) > 1 else n
        return f"{wrap}/({d})"

    def __repr__(self):
        return f"RationalFunction({self.render()})"

    __str__ = render


def _mul_reduced(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    # univariate, both canonical: cancel across before multiplying
    g1 = a.num.gcd(b.den) if not b.den.is_one() else None
    g2 = b.num.gcd(a.den) if not a.den.is_one() else None
    an, bd = a.num, b.den
    if g1 is not None and not g1.is_one():
        an, bd = an.exact_div(g1), bd.exact_div(g1)
    bn, ad = b.num, a.den
    if g2 is not None and not g2.is_one():
        bn, ad = bn.exact_div(g2), ad.exact_div(g2)
    num, den = an * bn, ad * bd
    return RationalFunction(*_normalize_den(num, den), _canonical=True)


def _normalize_den(num: LPoly, den: LPoly) -> tuple[LPoly, LPoly]:
    lo = den.min_exps()
    if any(lo):
        neg = tuple(-x for x in lo)
        num, den = num.shift(neg), den.shift(neg)
    c = den.low_coeff()
    if c != 1:
        inv = 1 / c
        num, den = num * inv, den * inv
    return num, den


def _canonicalize(num: LPoly, den: LPoly) -> tuple[LPoly, LPoly]:
    n = num.nvars
    if not den.terms:
        raise ZeroDivisionError("zero denominator")
    if not num.terms:
        return num, LPoly.const(Q(1), n)
    if den.is_monomial():
        (e, c), = den.terms.items()
        inv = 1 / c
        neg = tuple(-x for x in e)
        return (
            LPoly(n, {tuple(x + y for x, y in zip(k, neg)): v * inv for k, v in num.terms.items()},
                  _clean=True),
            LPoly.const(Q(1), n),
        )
    if n == 1:
        g = num.gcd(den)
        if not g.is_one():
            num, den = num.exact_div(g), den.exact_div(g)
    elif n >= 2:
        try:
            q = num.exact_div(den)
        except NotExactDivision:
            pass
        else:
            return q, LPoly.const(Q(1), n)
    return _normalize_den(num, den)
