"""JSON encoding of inputs, values and reports.

Every document carries a ``"schema"`` tag; rationals are ``"p/q"`` strings.
Decoders raise :class:`SchemaError` on malformed input.
"""
from __future__ import annotations

import json
from typing import Any

from .bifurcation import FloerState, FuzzReport, Move
from .embedding import EmbeddedSeries, TSeries
from .fieldsum import FieldFactor, FieldSumElement
from .group import FgAbelianGroup, GroupElement, Weight, kernel_and_splitting
from .invariant import InvariantValue, OrbitCounts
from .novikov import GroupRingElement, NovikovSeries
from .polynomial import Cyclo, LPoly, RationalFunction
from .rational import fmt_q, to_q
from .torsion import BasedChainComplex, TorsionValue

SCHEMA_VERSION = 1
SCHEMAS = {
    "complex": f"ftor.complex/{SCHEMA_VERSION}",
    "orbits": f"ftor.orbits/{SCHEMA_VERSION}",
    "state": f"ftor.state/{SCHEMA_VERSION}",
    "moves": f"ftor.moves/{SCHEMA_VERSION}",
    "report": f"ftor.report/{SCHEMA_VERSION}",
}


class SchemaError(ValueError):
    pass


def _need(d, key, what):
    if not isinstance(d, dict):
        raise SchemaError(f"{what} must be a JSON object")
    if key not in d:
        raise SchemaError(f"{what} is missing field {key!r}")
    return d[key]


def check_schema(doc, kind: str):
    want = SCHEMAS[kind]
    got = doc.get("schema") if isinstance(doc, dict) else None
    if got != want:
        raise SchemaError(f"expected schema {want!r}, got {got!r}")


def q_from_json(x):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"rational must be an integer or a 'p/q' string, got {x!r}")
    try:
        return to_q(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {x!r}") from exc


def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{what} must be an integer, got {x!r}")
    return x


# -- groups


def group_from_json(d) -> FgAbelianGroup:
    try:
        return FgAbelianGroup(_int(_need(d, "rank", "group"), "rank"),
                              tuple(_int(m, "torsion order") for m in d.get("torsion", [])))
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc)) from exc


def element_from_json(G: FgAbelianGroup, d) -> GroupElement:
    if isinstance(d, list):
        d = {"free": d[: G.rank], "tor": d[G.rank:]}
    try:
        return GroupElement.from_json(G, d)
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError(f"bad group element {d!r}: {exc}") from exc


def weight_from_json(G: FgAbelianGroup, d) -> Weight:
    if isinstance(d, list):
        d = {"free_weights": d}
    ws = _need(d, "free_weights", "weight")
    try:
        return Weight(G, tuple(q_from_json(x) for x in ws))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# -- ring elements


def _terms_from_json(G, data, what) -> dict:
    """``{"terms": [{"coeff", "elem"}]}`` or the compact ``[[coeff, [exponents]], ...]``."""
    if isinstance(data, dict):
        data = _need(data, "terms", what)
    if not isinstance(data, list):
        raise SchemaError(f"{what} must be a list of terms")
    out: dict = {}
    for t in data:
        if isinstance(t, dict):
            c = q_from_json(_need(t, "coeff", "term"))
            g = element_from_json(G, _need(t, "elem", "term"))
        elif isinstance(t, list) and len(t) == 2:
            c = q_from_json(t[0])
            g = element_from_json(G, t[1])
        else:
            raise SchemaError(f"bad term {t!r} in {what}")
        out[g.key] = out.get(g.key, 0) + c
    return out


def group_ring_from_json(G, data) -> GroupRingElement:
    return GroupRingElement(G, _terms_from_json(G, data, "group ring element"))


def series_from_json(N: Weight, data, cutoff=None) -> NovikovSeries:
    c = data.get("cutoff") if isinstance(data, dict) else None
    c = q_from_json(c) if c is not None else cutoff
    if c is None:
        raise SchemaError("series needs a cutoff")
    return NovikovSeries(N, _terms_from_json(N.group, data, "series"), c)


def _coeff_to_json(c):
    if isinstance(c, Cyclo):
        return {"d": c.d, "c": [fmt_q(x) for x in c.c]}
    return fmt_q(c)


def _coeff_from_json(x, d):
    if isinstance(x, dict):
        if x.get("d") != d:
            raise SchemaError("cyclotomic coefficient does not match its field")
        return Cyclo(d, [q_from_json(v) for v in _need(x, "c", "cyclotomic coefficient")])
    return q_from_json(x)


def lpoly_to_json(p: LPoly) -> list:
    return [[_coeff_to_json(c), list(e)] for e, c in p.sorted_terms()]


def lpoly_from_json(data, nvars: int, d: int) -> LPoly:
    if not isinstance(data, list):
        raise SchemaError("polynomial must be a list of [coeff, exponents]")
    terms: dict = {}
    for t in data:
        if not (isinstance(t, list) and len(t) == 2 and isinstance(t[1], list) and len(t[1]) == nvars):
            raise SchemaError(f"bad polynomial term {t!r}")
        e = tuple(_int(x, "exponent") for x in t[1])
        c = _coeff_from_json(t[0], d)
        terms[e] = terms[e] + c if e in terms else c
    return LPoly(nvars, terms)


def rf_to_json(x: RationalFunction) -> dict:
    return {"num": lpoly_to_json(x.num), "den": lpoly_to_json(x.den)}


def rf_from_json(data, f: FieldFactor) -> RationalFunction:
    num = lpoly_from_json(_need(data, "num", "rational function"), f.num_vars, f.d)
    den = lpoly_from_json(_need(data, "den", "rational function"), f.num_vars, f.d)
    if not den.terms:
        raise SchemaError("zero denominator")
    return RationalFunction(num, den)


def _factor_to_json(f: FieldFactor) -> dict:
    return {"d": f.d, "vars": f.num_vars}


def _factor_from_json(d) -> FieldFactor:
    return FieldFactor(_int(_need(d, "d", "factor"), "d"), _int(_need(d, "vars", "factor"), "vars"))


def field_sum_to_json(x: FieldSumElement) -> dict:
    return {
        "factors": [_factor_to_json(f) for f in x.factors],
        "components": [rf_to_json(c) for c in x.components],
    }


def field_sum_from_json(data) -> FieldSumElement:
    fs = [_factor_from_json(f) for f in _need(data, "factors", "field sum element")]
    cs = _need(data, "components", "field sum element")
    if len(cs) != len(fs):
        raise SchemaError("one component per factor is required")
    return FieldSumElement(fs, [rf_from_json(c, f) for c, f in zip(cs, fs)])


def embedded_to_json(s: EmbeddedSeries) -> dict:
    return {
        "group": s.split.group.to_json(),
        "weight": s.split.weight.to_json(),
        "comps": [
            {"factor": _factor_to_json(c.factor), "lo": c.lo, "prec": c.prec,
             "coeffs": [rf_to_json(v) for v in c.c]}
            for c in s.comps
        ],
    }


def embedded_from_json(data) -> EmbeddedSeries:
    G = group_from_json(_need(data, "group", "embedded series"))
    N = weight_from_json(G, _need(data, "weight", "embedded series"))
    split = kernel_and_splitting(G, N)
    comps = []
    for c in _need(data, "comps", "embedded series"):
        f = _factor_from_json(_need(c, "factor", "component"))
        coeffs = [rf_from_json(v, f) for v in _need(c, "coeffs", "component")]
        comps.append(TSeries(f, _int(_need(c, "lo", "component"), "lo"), coeffs,
                             _int(_need(c, "prec", "component"), "prec")))
    return EmbeddedSeries(split, comps)


def torsion_to_json(t: TorsionValue) -> dict:
    out = {"unit_class": t.unit_class, "text": t.render(), "acyclic": t.is_acyclic()}
    if t.is_series:
        out["kind"] = "series"
        out["value"] = embedded_to_json(t.value)
    else:
        out["kind"] = "field_sum"
        out["value"] = field_sum_to_json(t.value)
    return out


def torsion_from_json(data) -> TorsionValue:
    kind = _need(data, "kind", "torsion")
    v = _need(data, "value", "torsion")
    if kind == "series":
        value = embedded_from_json(v)
    elif kind == "field_sum":
        value = field_sum_from_json(v)
    else:
        raise SchemaError(f"unknown torsion kind {kind!r}")
    return TorsionValue(value, _need(data, "unit_class", "torsion"), value)


def invariant_to_json(v: InvariantValue) -> dict:
    return {"unit_class": v.unit_class, "text": v.render(), "value": embedded_to_json(v.value)}


def invariant_from_json(data) -> InvariantValue:
    value = embedded_from_json(_need(data, "value", "invariant"))
    return InvariantValue(value, _need(data, "unit_class", "invariant"), value)


def series_to_json(s: NovikovSeries) -> dict:
    return {"group": s.group.to_json(), "weight": s.weight.to_json(), "text": str(s), **s.to_json()}


def series_doc_from_json(data) -> NovikovSeries:
    G = group_from_json(_need(data, "group", "series"))
    N = weight_from_json(G, _need(data, "weight", "series"))
    return series_from_json(N, data)


# -- input documents


def complex_from_json(doc) -> BasedChainComplex:
    """Parse a ``ftor.complex/1`` document.

    ``ring`` is ``"group"`` (entries in ``Q[G]``) or ``"novikov"`` (needs
    ``weight`` and ``cutoff``).
    """
    check_schema(doc, "complex")
    G = group_from_json(_need(doc, "group", "complex"))
    ring_kind = doc.get("ring", "group")
    grading = doc.get("grading", "Z")
    ranks = _need(doc, "ranks", "complex")
    if not isinstance(ranks, list):
        raise SchemaError("ranks must be a list")
    ranks = [_int(r, "rank") for r in ranks]
    bds = _need(doc, "boundaries", "complex")
    if not isinstance(bds, list) or any(not isinstance(M, list) or any(not isinstance(r, list) for r in M)
                                        for M in bds):
        raise SchemaError("boundaries must be a list of matrices (lists of rows)")
    if ring_kind == "group":
        ring = ("group", G)
        parse = lambda x: group_ring_from_json(G, x)  # noqa: E731
    elif ring_kind == "novikov":
        N = weight_from_json(G, _need(doc, "weight", "complex"))
        c = q_from_json(_need(doc, "cutoff", "complex"))
        if c <= 0:
            raise SchemaError("cutoff must be positive")
        ring = ("novikov", N, c)
        parse = lambda x: series_from_json(N, x, c)  # noqa: E731
    else:
        raise SchemaError(f"unknown ring {ring_kind!r}")
    mats = [[[parse(x) for x in row] for row in M] for M in bds]
    return BasedChainComplex(grading, ranks, mats, doc.get("labels"), ring=ring,
                             min_degree=_int(doc.get("min_degree", 0), "min_degree"))


def complex_to_json(C: BasedChainComplex) -> dict:
    G = C.ring[1].group if C.ring[0] == "novikov" else C.ring[1]
    doc = {"schema": SCHEMAS["complex"], "group": G.to_json(), "ring": C.ring[0], "grading": C.grading,
           "ranks": list(C.ranks), "min_degree": C.min_degree,
           "labels": [list(x) for x in C.labels]}
    if C.ring[0] == "novikov":
        doc["weight"] = C.ring[1].to_json()
        doc["cutoff"] = fmt_q(C.ring[2])
    doc["boundaries"] = [[[x.to_json()["terms"] for x in row] for row in M] for M in C.boundaries]
    return doc


def orbits_from_json(doc, weight: Weight | None = None, cutoff=None) -> OrbitCounts:
    check_schema(doc, "orbits")
    G = group_from_json(_need(doc, "group", "orbits")) if "group" in doc else weight.group
    N = weight_from_json(G, doc["weight"]) if "weight" in doc else weight
    if N is None:
        raise SchemaError("orbits need a weight")
    if weight is not None and N != weight:
        raise SchemaError("orbit weight differs from the complex weight")
    c = q_from_json(doc["cutoff"]) if "cutoff" in doc else cutoff
    if c is None:
        raise SchemaError("orbits need a cutoff")
    counts = {}
    for e in _need(doc, "counts", "orbits"):
        g = element_from_json(G, _need(e, "class", "orbit count"))
        counts[g.key] = counts.get(g.key, 0) + q_from_json(_need(e, "count", "orbit count"))
    try:
        return OrbitCounts(N, counts, c)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def orbits_to_json(o: OrbitCounts) -> dict:
    G = o.group
    return {
        "schema": SCHEMAS["orbits"], "group": G.to_json(), "weight": o.weight.to_json(),
        "cutoff": fmt_q(o.cutoff),
        "counts": [{"class": GroupElement(G, k).to_json(), "count": fmt_q(v)} for k, v in sorted(o.counts.items())],
    }


def state_to_json(s: FloerState) -> dict:
    G = s.weight.group
    return {
        "schema": SCHEMAS["state"], "group": G.to_json(), "weight": s.weight.to_json(),
        "cutoff": fmt_q(s.cutoff), "work_cutoff": fmt_q(s.work_cutoff),
        "labels": [list(s.labels[0]), list(s.labels[1])],
        "d_even": [[x.to_json()["terms"] for x in row] for row in s.d_even],
        "d_odd": [[x.to_json()["terms"] for x in row] for row in s.d_odd],
        "orbits": [{"class": GroupElement(G, k).to_json(), "count": fmt_q(v)}
                   for k, v in sorted(s.orbits.counts.items())],
    }


def state_from_json(doc) -> FloerState:
    check_schema(doc, "state")
    G = group_from_json(_need(doc, "group", "state"))
    N = weight_from_json(G, _need(doc, "weight", "state"))
    c = q_from_json(_need(doc, "cutoff", "state"))
    if c <= 0:
        raise SchemaError("cutoff must be positive")
    wc = q_from_json(doc.get("work_cutoff", fmt_q(2 * c)))
    de = [[series_from_json(N, x, wc) for x in row] for row in _need(doc, "d_even", "state")]
    do = [[series_from_json(N, x, wc) for x in row] for row in _need(doc, "d_odd", "state")]
    n1, n0 = len(de), len(do)
    if any(len(r) != n0 for r in de) or any(len(r) != n1 for r in do):
        raise SchemaError("d_even must be n1 x n0 and d_odd n0 x n1")
    counts = {}
    for e in doc.get("orbits", []):
        g = element_from_json(G, _need(e, "class", "orbit count"))
        counts[g.key] = counts.get(g.key, 0) + q_from_json(_need(e, "count", "orbit count"))
    try:
        orbits = OrbitCounts(N, counts, c)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return FloerState(N, c, de, do, orbits, doc.get("labels") or [[], []], wc)


_MOVE_FIELDS = {
    "handleslide": ("degree", "i", "j", "a"),
    "unit_rescale": ("degree", "i", "sign", "g"),
    "birth": ("degree",),
    "death": ("degree", "i", "j"),
    "type_II": ("degree", "i", "c", "A", "sign"),
}


def move_to_json(m: Move) -> dict:
    out: dict[str, Any] = {"kind": m.kind}
    for k, v in m.params:
        if v is None:
            continue
        if isinstance(v, NovikovSeries):
            out[k] = v.to_json()["terms"]
        elif k in ("g", "A"):
            # compact element form: free exponents then torsion residues
            out[k] = list(v)
        elif k == "c":
            out[k] = fmt_q(v)
        else:
            out[k] = int(v)
    return out


def move_from_json(d, state: FloerState) -> Move:
    kind = _need(d, "kind", "move")
    if kind not in _MOVE_FIELDS:
        raise SchemaError(f"unknown move kind {kind!r}")
    params = {}
    G = state.weight.group
    for name in _MOVE_FIELDS[kind]:
        if name == "sign" and kind == "type_II" and name not in d:
            params[name] = 1
            continue
        if name == "g" and name not in d:
            params[name] = G.zero_key
            continue
        v = _need(d, name, f"{kind} move")
        if name == "a":
            v = series_from_json(state.weight, v, state.work_cutoff)
        elif name in ("g", "A"):
            v = element_from_json(G, v).key
        elif name == "c":
            v = q_from_json(v)
        else:
            v = _int(v, name)
        params[name] = v
    return Move.make(kind, **params)


def moves_from_json(doc, state: FloerState) -> list[Move]:
    check_schema(doc, "moves")
    ms = _need(doc, "moves", "move script")
    if not isinstance(ms, list):
        raise SchemaError("moves must be a list")
    return [move_from_json(m, state) for m in ms]


def report(command: str, result: dict, **extra) -> dict:
    return {"schema": SCHEMAS["report"], "command": command, **extra, "result": result}


def fuzz_report_to_json(r: FuzzReport) -> dict:
    return r.to_json()


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
