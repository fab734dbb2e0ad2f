"""Chain-level bifurcation moves on Floer data and an invariance fuzzer.

A :class:`FloerState` is a Z/2-graded complex over ``Nov(G, N; Q)`` together
with closed-orbit counts.  Handleslides, unit rescalings and birth/death change
the complex by simple homotopy and leave the orbit counts alone.  A type II move
rescales one generator by ``(1 + cA)^(+-1)`` and compensates in the orbit counts,
so torsion and zeta function both move while their product stays fixed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .group import FgAbelianGroup, GroupElement, Weight
from .invariant import InvariantValue, OrbitCounts, assemble_I, zeta
from .novikov import NovikovSeries, degree, invert
from .rational import Q, fmt_q, to_q
from .torsion import BasedChainComplex, TorsionValue, floer_torsion

__all__ = [
    "FloerState",
    "Move",
    "MoveError",
    "apply_move",
    "apply_handleslide",
    "apply_unit_rescale",
    "apply_birth",
    "apply_death",
    "apply_type_II",
    "inverse_move",
    "type_ii_exponent",
    "random_state",
    "random_move",
    "fuzz_invariance",
    "FuzzReport",
    "replay",
]

KINDS = ("handleslide", "unit_rescale", "birth", "death", "type_II")


class MoveError(ValueError):
    pass


def type_ii_exponent(deg: int) -> int:
    """Exponent of ``(1 + cA)`` on a generator of Z/2-degree ``deg``: +1 odd, -1 even."""
    return 1 if deg % 2 else -1


@dataclass
class FloerState:
    """Boundary matrices ``d_even: C0 -> C1`` (n1 x n0) and ``d_odd: C1 -> C0`` (n0 x n1)."""

    weight: Weight
    cutoff: Q
    d_even: list
    d_odd: list
    orbits: OrbitCounts
    labels: list = field(default_factory=lambda: [[], []])
    work_cutoff: Q | None = None

    def __post_init__(self):
        self.cutoff = to_q(self.cutoff)
        # boundary entries carry extra headroom: monomial basis changes of
        # negative weight lower the known cutoff of a whole row or column
        self.work_cutoff = 2 * self.cutoff if self.work_cutoff is None else to_q(self.work_cutoff)
        if not self.labels or len(self.labels) != 2 or len(self.labels[0]) != self.n0 or len(self.labels[1]) != self.n1:
            self.labels = [[f"x{i}" for i in range(self.n0)], [f"y{i}" for i in range(self.n1)]]

    @property
    def n0(self) -> int:
        return len(self.d_odd)

    @property
    def n1(self) -> int:
        return len(self.d_even)

    def ranks(self) -> tuple[int, int]:
        return self.n0, self.n1

    def zero(self) -> NovikovSeries:
        return NovikovSeries.zero(self.weight, self.work_cutoff)

    def complex(self, check: bool = True) -> BasedChainComplex:
        return BasedChainComplex(
            "Z2", [self.n0, self.n1], [self.d_even, self.d_odd], self.labels,
            ring=("novikov", self.weight, self.work_cutoff), check=check,
        )

    def torsion(self) -> TorsionValue:
        # moves build new states, so the value can be kept once computed
        tau = self.__dict__.get("_tau")
        if tau is None:
            tau = floer_torsion(self.complex(check=False), self.cutoff)
            self.__dict__["_tau"] = tau
        return tau

    def zeta(self) -> NovikovSeries:
        return zeta(self.orbits)

    def invariant(self) -> InvariantValue:
        return assemble_I(self.torsion(), self.zeta())

    def copy(self) -> "FloerState":
        return FloerState(
            self.weight, self.cutoff, [list(r) for r in self.d_even], [list(r) for r in self.d_odd],
            self.orbits, [list(self.labels[0]), list(self.labels[1])], self.work_cutoff,
        )

    def same_as(self, other: "FloerState") -> bool:
        """Equality of boundaries (up to cutoff) and orbit counts."""
        if self.ranks() != other.ranks():
            return False
        for A, B in ((self.d_even, other.d_even), (self.d_odd, other.d_odd)):
            for ra, rb in zip(A, B):
                if any(not (x == y) for x, y in zip(ra, rb)):
                    return False
        return self.orbits.counts == other.orbits.counts


@dataclass(frozen=True)
class Move:
    """One bifurcation move; ``params`` depends on ``kind``.

    handleslide: ``degree, i, j, a`` (a a :class:`NovikovSeries`)
    unit_rescale: ``degree, i, sign, g`` (g a group element key)
    birth: ``degree``
    death: ``degree, i, j`` (generator i of ``degree``, generator j of the other degree)
    type_II: ``degree, i, c, A, sign``
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MoveError(f"unknown move kind {self.kind!r}")

    def get(self, name, default=None):
        return dict(self.params).get(name, default)

    @classmethod
    def make(cls, kind: str, **params) -> "Move":
        return cls(kind, tuple(sorted(params.items())))


# --------------------------------------------------------------------------
# matrix helpers: "out" is the boundary leaving degree k, "in" the one entering it


def _out_in(state: FloerState, k: int):
    return (state.d_odd, state.d_even) if k % 2 else (state.d_even, state.d_odd)


def _check_index(state, k, i):
    n = state.n1 if k % 2 else state.n0
    if not 0 <= i < n:
        raise MoveError(f"generator index {i} out of range for degree {k % 2} (rank {n})")


def _is_pm_monomial(a: NovikovSeries) -> bool:
    return len(a.terms) == 1 and abs(next(iter(a.terms.values()))) == 1


def apply_handleslide(state: FloerState, k: int, i: int, j: int, a: NovikovSeries) -> FloerState:
    """Basis change ``e_i -> e_i + a e_j`` inside degree ``k``."""
    if i == j:
        raise MoveError("handleslide needs i != j; a self-slide is a type_II move")
    _check_index(state, k, i)
    _check_index(state, k, j)
    if a.terms:
        d = degree(a)
        if d < 0 or (d == 0 and not _is_pm_monomial(a)):
            raise MoveError(f"handleslide coefficient must have positive degree or be a +-monomial, got {a}")
    s = state.copy()
    out_m, in_m = _out_in(s, k)
    if not a.terms:
        return s
    for row in out_m:  # column i += a * column j
        row[i] = row[i] + a * row[j]
    in_m[j] = [y - a * x for x, y in zip(in_m[i], in_m[j])]  # row j -= a * row i
    return s


def _rescale(state: FloerState, k: int, i: int, u: NovikovSeries, u_inv: NovikovSeries) -> FloerState:
    s = state.copy()
    out_m, in_m = _out_in(s, k)
    for row in out_m:
        row[i] = row[i] * u
    in_m[i] = [x * u_inv for x in in_m[i]]
    return s


def apply_unit_rescale(state: FloerState, k: int, i: int, sign: int = 1, g=None) -> FloerState:
    """``e_i -> (+-g) e_i``."""
    _check_index(state, k, i)
    if sign not in (1, -1):
        raise MoveError("unit sign must be +1 or -1")
    G = state.weight.group
    key = G.zero_key if g is None else (g.key if isinstance(g, GroupElement) else G.reduce(g))
    s = state.copy()
    out_m, in_m = _out_in(s, k)
    neg = G.neg(key)
    for row in out_m:
        row[i] = row[i].shift(key).scale(sign)
    in_m[i] = [x.shift(neg).scale(sign) for x in in_m[i]]
    return s


def apply_birth(state: FloerState, k: int) -> FloerState:
    """Add generators ``e`` in degree ``k`` and ``f`` in the other degree with ``d e = f``."""
    s = state.copy()
    z = s.zero()
    one = NovikovSeries.one(s.weight, s.work_cutoff)
    # append a new generator to C0 and C1
    s.d_even = [row + [z] for row in s.d_even] + [[z] * (s.n0 + 1)]
    s.d_odd = [row + [z] for row in s.d_odd] + [[z] * (len(s.d_even))]
    n0, n1 = len(s.d_odd), len(s.d_even)
    if k % 2:
        s.d_odd[n0 - 1][n1 - 1] = one
    else:
        s.d_even[n1 - 1][n0 - 1] = one
    used = set(s.labels[0]) | set(s.labels[1])
    b = 0
    while f"b{b}" in used or f"b{b}'" in used:
        b += 1
    s.labels[0].append(f"b{b}" if k % 2 == 0 else f"b{b}'")
    s.labels[1].append(f"b{b}" if k % 2 else f"b{b}'")
    return s


def apply_death(state: FloerState, k: int, i: int, j: int) -> FloerState:
    """Cancel ``e_i`` in degree ``k`` against ``f_j`` in the other degree.

    The coefficient of ``f_j`` in ``d e_i`` must be ``+-g``.  The remaining
    boundary is ``A22 - a21 u^-1 a12`` (Gaussian elimination).
    """
    _check_index(state, k, i)
    _check_index(state, k + 1, j)
    s = state.copy()
    out_m, in_m = _out_in(s, k)
    u = out_m[j][i]
    if not _is_pm_monomial(u):
        raise MoveError(f"death needs a unit pivot +-g, got {u}")
    u_inv = invert(u)
    rows = [r for r in range(len(out_m)) if r != j]
    cols = [c for c in range(len(out_m[0])) if c != i] if out_m else []
    new_out = []
    for r in rows:
        f = out_m[r][i] * u_inv if out_m[r][i] else None
        new_out.append([out_m[r][c] - f * out_m[j][c] if f is not None and out_m[j][c] else out_m[r][c]
                        for c in cols])
    # incoming map C_(k-1) -> C_k: drop row i (target e_i) and column j (source f_j)
    new_in = [[x for c, x in enumerate(row) if c != j] for r, row in enumerate(in_m) if r != i]
    if k % 2:
        s.d_odd, s.d_even = new_out, new_in
    else:
        s.d_even, s.d_odd = new_out, new_in
    # repair shapes when a side becomes empty
    n0 = len(s.d_odd)
    n1 = len(s.d_even)
    if n0 == 0:
        s.d_even = [[] for _ in range(n1)]
    if n1 == 0:
        s.d_odd = [[] for _ in range(n0)]
    lk = s.labels[k % 2]
    lo = s.labels[(k + 1) % 2]
    del lk[i]
    del lo[j]
    return s


def apply_type_II(state: FloerState, k: int, i: int, c, A, sign: int = 1) -> FloerState:
    """Rescale ``e_i`` by ``(1 + cA)^(sign * eps)`` and multiply ``zeta`` by ``(1 + cA)^sign``."""
    _check_index(state, k, i)
    c = to_q(c)
    G = state.weight.group
    key = A.key if isinstance(A, GroupElement) else G.reduce(A)
    w = state.weight(key)
    if w <= 0:
        raise MoveError(f"type_II class must have positive weight, got {fmt_q(w)}")
    if sign not in (1, -1):
        raise MoveError("type_II sign must be +1 or -1")
    if not c:
        return state.copy()
    base = NovikovSeries(state.weight, {G.zero_key: 1, key: c}, state.work_cutoff)
    binv = invert(base)
    eps = type_ii_exponent(k) * sign
    u, u_inv = (base, binv) if eps > 0 else (binv, base)
    s = _rescale(state, k, i, u, u_inv)
    counts = dict(state.orbits.counts)
    n = 1
    while n * w < state.cutoff:
        kk = G.scale(n, key)
        counts[kk] = counts.get(kk, 0) + sign * Q((-1) ** (n + 1)) * c ** n / n
        n += 1
    s.orbits = OrbitCounts(state.weight, {k2: v for k2, v in counts.items() if v}, state.orbits.cutoff)
    return s


def apply_move(state: FloerState, move: Move) -> FloerState:
    p = dict(move.params)
    if move.kind == "handleslide":
        return apply_handleslide(state, p["degree"], p["i"], p["j"], p["a"])
    if move.kind == "unit_rescale":
        return apply_unit_rescale(state, p["degree"], p["i"], p.get("sign", 1), p.get("g"))
    if move.kind == "birth":
        return apply_birth(state, p["degree"])
    if move.kind == "death":
        return apply_death(state, p["degree"], p["i"], p["j"])
    return apply_type_II(state, p["degree"], p["i"], p["c"], p["A"], p.get("sign", 1))


def inverse_move(state: FloerState, move: Move) -> Move:
    """A move undoing ``move`` when applied to ``apply_move(state, move)``."""
    p = dict(move.params)
    if move.kind == "handleslide":
        return Move.make("handleslide", degree=p["degree"], i=p["i"], j=p["j"], a=-p["a"])
    if move.kind == "unit_rescale":
        G = state.weight.group
        g = p.get("g")
        key = G.zero_key if g is None else (g.key if isinstance(g, GroupElement) else G.reduce(g))
        return Move.make("unit_rescale", degree=p["degree"], i=p["i"], sign=p.get("sign", 1), g=G.neg(key))
    if move.kind == "birth":
        k = p["degree"]
        n_k = (state.n1 if k % 2 else state.n0) + 1
        n_o = (state.n0 if k % 2 else state.n1) + 1
        return Move.make("death", degree=k, i=n_k - 1, j=n_o - 1)
    if move.kind == "type_II":
        return Move.make("type_II", degree=p["degree"], i=p["i"], c=p["c"], A=p["A"], sign=-p.get("sign", 1))
    raise MoveError("a death has no single inverse move; a birth followed by handleslides undoes it")


# --------------------------------------------------------------------------
# random generation


def _random_poly(rng: random.Random, N: Weight, cutoff, min_deg=0, max_deg=2, max_terms=3, unit_lead=False):
    """Random Laurent polynomial over ``Z^r`` with all terms of degree in [min_deg, max_deg]."""
    G = N.group
    terms = {}
    nterms = rng.randint(1, max_terms)
    for _ in range(nterms * 4):
        if len(terms) >= nterms:
            break
        key = tuple(rng.randint(-2, 2) for _ in range(G.rank)) + (0,) * len(G.torsion)
        if min_deg <= N(key) <= max_deg:
            terms[key] = rng.choice([-3, -2, -1, 1, 2, 3])
    if not terms:
        terms[G.zero_key] = 1
    if unit_lead:
        d = min(N(k) for k in terms)
        low = [k for k in terms if N(k) == d]
        for k in low[1:]:
            del terms[k]
        terms[low[0]] = rng.choice([-1, 1])
    return NovikovSeries(N, terms, cutoff)


def random_state(rng: random.Random, weight: Weight, cutoff=8, max_rank: int = 6,
                 n_mix: int = 3, n_orbits: int = 3, work_cutoff=None) -> FloerState:
    """Acyclic state: a diagonal seed conjugated by random transvections."""
    cutoff = to_q(cutoff)
    wc = 2 * cutoff if work_cutoff is None else to_q(work_cutoff)
    n = rng.randint(0, max_rank // 2)
    q = rng.randint(0, n)
    z = NovikovSeries.zero(weight, wc)
    d_even = [[z] * n for _ in range(n)]
    d_odd = [[z] * n for _ in range(n)]
    for l in range(n):
        p = _random_poly(rng, weight, wc, 0, 1, 2)
        if l < q:
            d_odd[l][l] = p
        else:
            d_even[l][l] = p
    counts = {}
    G = weight.group
    for _ in range(rng.randint(0, n_orbits)):
        key = tuple(rng.randint(-1, 3) for _ in range(G.rank)) + (0,) * len(G.torsion)
        if 0 < weight(key) < cutoff:
            counts[key] = Q(rng.randint(-4, 4), rng.randint(1, 3))
    state = FloerState(weight, cutoff, d_even, d_odd, OrbitCounts(weight, counts, cutoff), work_cutoff=wc)
    for _ in range(n_mix if n >= 2 else 0):
        k = rng.randint(0, 1)
        i, j = rng.sample(range(n), 2)
        a = _random_poly(rng, weight, wc, 1, 2, 2)
        state = apply_handleslide(state, k, i, j, a)
    return state


def random_move(rng: random.Random, state: FloerState, max_total_rank: int = 8) -> Move:
    N, cut = state.weight, state.work_cutoff
    G = N.group
    kinds = list(KINDS)
    while True:
        kind = rng.choice(kinds)
        k = rng.randint(0, 1)
        nk = state.n1 if k else state.n0
        if kind == "handleslide":
            if nk < 2:
                continue
            i, j = rng.sample(range(nk), 2)
            if rng.random() < 0.3:
                key = tuple(rng.randint(-2, 2) for _ in range(G.rank)) + (0,) * len(G.torsion)
                a = NovikovSeries(N, {key: rng.choice([-1, 1])}, cut) if N(key) == 0 else \
                    _random_poly(rng, N, cut, 1, 2, 2)
            else:
                a = _random_poly(rng, N, cut, 1, 2, 2)
            return Move.make("handleslide", degree=k, i=i, j=j, a=a)
        if kind == "unit_rescale":
            if nk == 0:
                continue
            key = tuple(rng.randint(-2, 2) for _ in range(G.rank)) + (0,) * len(G.torsion)
            if abs(N(key)) > 1:
                continue
            return Move.make("unit_rescale", degree=k, i=rng.randrange(nk), sign=rng.choice([-1, 1]), g=key)
        if kind == "birth":
            if state.n0 + state.n1 + 2 > max_total_rank:
                continue
            return Move.make("birth", degree=k)
        if kind == "death":
            out_m, _ = _out_in(state, k)
            pairs = [(i, j) for j, row in enumerate(out_m) for i, x in enumerate(row) if _is_pm_monomial(x)]
            if not pairs:
                continue
            i, j = rng.choice(pairs)
            return Move.make("death", degree=k, i=i, j=j)
        if kind == "type_II":
            if nk == 0:
                continue
            for _ in range(20):
                key = tuple(rng.randint(-1, 2) for _ in range(G.rank)) + (0,) * len(G.torsion)
                if 0 < N(key) <= 2:
                    break
            else:
                continue
            c = Q(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
            return Move.make("type_II", degree=k, i=rng.randrange(nk), c=c, A=key, sign=rng.choice([-1, 1]))


# --------------------------------------------------------------------------
# fuzzing


@dataclass
class FuzzReport:
    seed: int
    n_sequences: int
    passed: int = 0
    failures: list = field(default_factory=list)
    type_ii_checks: int = 0
    moves_applied: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "n_sequences": self.n_sequences,
            "passed": self.passed,
            "failed": len(self.failures),
            "type_II_checks": self.type_ii_checks,
            "moves_applied": self.moves_applied,
            "ok": self.ok,
            "failures": self.failures,
        }


def _sequence_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"ftor-fuzz:{seed}:{index}")


def _generate(seed, index, weight, cutoff, max_len, max_rank):
    rng = _sequence_rng(seed, index)
    state = random_state(rng, weight, cutoff, max_rank)
    length = rng.randint(0, max_len)
    return rng, state, length


def replay(seed: int, index: int, weight: Weight | None = None, cutoff=8, max_len: int = 10,
           max_rank: int = 6) -> tuple[FloerState, list[Move]]:
    """Regenerate the start state and move list of one fuzz sequence."""
    weight = weight or _default_weight()
    rng, state, length = _generate(seed, index, weight, to_q(cutoff), max_len, max_rank)
    moves = []
    s = state
    for _ in range(length):
        m = random_move(rng, s)
        moves.append(m)
        s = apply_move(s, m)
    return state, moves


def _default_weight() -> Weight:
    G = FgAbelianGroup(2, ())
    return Weight(G, [1, 1])


def fuzz_invariance(seed: int = 0, n_sequences: int = 500, max_len: int = 10, max_rank: int = 6,
                    cutoff=8, weight: Weight | None = None, check_type_ii: bool = True) -> FuzzReport:
    """Run random move sequences and compare the normalized invariant before and after.

    Every type II move with ``c != 0`` is also checked to change the torsion and
    the zeta function individually.
    """
    weight = weight or _default_weight()
    cutoff = to_q(cutoff)
    report = FuzzReport(seed, n_sequences)
    for idx in range(n_sequences):
        rng, state, length = _generate(seed, idx, weight, cutoff, max_len, max_rank)
        start = state
        problems = []
        moves = []
        I0 = I1 = None
        try:
            I0 = state.invariant()
            for _ in range(length):
                m = random_move(rng, state)
                moves.append(m)
                new = apply_move(state, m)
                report.moves_applied += 1
                if check_type_ii and m.kind == "type_II" and m.get("c"):
                    report.type_ii_checks += 1
                    if new.torsion() == state.torsion():
                        problems.append(f"type_II move {len(moves) - 1} left the torsion unchanged")
                    if new.zeta() == state.zeta():
                        problems.append(f"type_II move {len(moves) - 1} left the zeta function unchanged")
                state = new
            I1 = state.invariant()
            for name, I in (("before", I0), ("after", I1)):
                if not I.is_zero() and I.cutoff < cutoff:
                    problems.append(f"invariant {name} is only known below {fmt_q(I.cutoff)}")
            if not (I0 == I1):
                problems.append("normalized invariant changed")
        except ArithmeticError as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
        if problems:
            report.failures.append({
                "index": idx,
                "replay": {"seed": seed, "index": idx},
                "moves": [_move_summary(m) for m in moves],
                "problems": problems,
                "before": I0.render() if I0 is not None else None,
                "after": I1.render() if I1 is not None else None,
                "start_ranks": list(start.ranks()),
            })
        else:
            report.passed += 1
    return report


def _move_summary(m: Move) -> dict:
    out = {"kind": m.kind}
    for k, v in m.params:
        if isinstance(v, NovikovSeries):
            out[k] = str(v)
        elif isinstance(v, tuple):
            out[k] = list(v)
        elif not isinstance(v, int):
            out[k] = fmt_q(v)
        else:
            out[k] = v
    return out
