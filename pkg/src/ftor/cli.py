"""Command line front end: ``ftor <command> [options]``.

Exit codes: 0 success, 2 input error, 3 domain error, 4 fuzz failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import applications as apps
from .bifurcation import MoveError, apply_move, fuzz_invariance, replay
from .embedding import embed_field_sum
from .fieldsum import FieldSumElement
from .group import FgAbelianGroup, GroupElement, Weight, kernel_and_splitting
from .invariant import OrbitCounts, assemble_I, log_I, zeta
from .novikov import GroupRingElement, NotInNov
from .rational import Q, fmt_q, to_q
from . import serialize as ser
from .torsion import BasedChainComplex, ComplexError, floer_torsion, reidemeister_torsion

log = logging.getLogger("ftor")

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_FUZZ = 0, 2, 3, 4


class InputError(Exception):
    pass


class DomainError(Exception):
    pass


@dataclass
class RunConfig:
    cutoff: Q | None
    seed: int
    output_format: str = "json"
    verbosity: int = 0


# --------------------------------------------------------------------------
# helpers


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})")


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc})")


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers")


def _q_list(text: str, what: str) -> list:
    try:
        return [to_q(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what} must be a comma-separated list of rationals")


def _parse_q(text: str) -> Q:
    try:
        return to_q(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FTOR_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"FTOR_SEED must be an integer, got {env!r}")


def _config(args) -> RunConfig:
    c = args.cutoff
    if c is not None and c <= 0:
        raise InputError("cutoff must be positive")
    return RunConfig(c, _seed(args), args.format, args.verbose)


def _emit(cfg: RunConfig, doc: dict, text: str):
    if cfg.output_format == "json":
        sys.stdout.write(ser.dumps(doc))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# --------------------------------------------------------------------------
# commands


def _read_complex(path: str) -> BasedChainComplex:
    try:
        return ser.complex_from_json(_load_json(path))
    except ser.SchemaError as exc:
        raise InputError(f"{path}: {exc}")
    except ComplexError as exc:
        raise InputError(f"{path}: {exc}")


def _torsion_of(C: BasedChainComplex, cfg: RunConfig):
    import random

    rng = random.Random(cfg.seed)
    if C.ring[0] == "group":
        return reidemeister_torsion(C, rng)
    return floer_torsion(C, cfg.cutoff, rng)


def cmd_torsion(args, cfg: RunConfig) -> int:
    if not args.input:
        raise InputError("torsion needs --input")
    C = _read_complex(args.input)
    tau = _torsion_of(C, cfg)
    result = ser.torsion_to_json(tau)
    text = tau.render()
    if args.theta and not tau.is_series:
        G = C.ring[1]
        theta = _weight_arg(G, args.theta)
        cutoff = cfg.cutoff if cfg.cutoff is not None else Q(10)
        if tau.is_zero():
            raise DomainError("the torsion is 0; it has no expansion")
        s = embed_field_sum(tau.value, kernel_and_splitting(G, theta), cutoff)
        result["expansion"] = {"weight": theta.to_json(), "cutoff": fmt_q(cutoff), "text": s.render(),
                               "value": ser.embedded_to_json(s)}
        text += f"\nexpansion along {args.theta}: {s.render()}"
    _emit(cfg, ser.report("torsion", result), text)
    return EXIT_OK


def _weight_arg(G: FgAbelianGroup, text: str) -> Weight:
    ws = _q_list(text, "--theta")
    if len(ws) != G.rank:
        raise InputError(f"--theta needs {G.rank} weights")
    w = Weight(G, ws)
    if w.is_zero():
        raise InputError("--theta must be nonzero")
    return w


def cmd_invariant(args, cfg: RunConfig) -> int:
    if not args.input:
        raise InputError("invariant needs --input")
    C = _read_complex(args.input)
    if C.ring[0] != "novikov":
        raise InputError("the invariant needs a complex over a Novikov ring (ring: novikov)")
    N, c = C.ring[1], C.ring[2]
    cutoff = cfg.cutoff if cfg.cutoff is not None else c
    if args.orbits:
        try:
            orbits = ser.orbits_from_json(_load_json(args.orbits), N, cutoff)
        except ser.SchemaError as exc:
            raise InputError(f"{args.orbits}: {exc}")
    else:
        orbits = OrbitCounts(N, {}, cutoff)
    tau = _torsion_of(C, RunConfig(cutoff, cfg.seed))
    I = assemble_I(tau, zeta(orbits))
    result = ser.invariant_to_json(I)
    text = I.render()
    if args.log:
        try:
            ln = log_I(I)
        except NotInNov as exc:
            raise DomainError(str(exc))
        except ValueError as exc:
            raise DomainError(f"log is not available here: {exc}")
        result["log"] = ser.series_to_json(ln)
        text += f"\nln I = {ln}"
    _emit(cfg, ser.report("invariant", result), text)
    return EXIT_OK


def cmd_fuzz(args, cfg: RunConfig) -> int:
    cutoff = cfg.cutoff if cfg.cutoff is not None else Q(8)
    if args.replay is not None:
        state, moves = replay(cfg.seed, args.replay, cutoff=cutoff, max_len=args.max_len,
                              max_rank=args.max_rank)
        doc = {"seed": cfg.seed, "index": args.replay, "start": ser.state_to_json(state),
               "moves": {"schema": ser.SCHEMAS["moves"], "moves": [ser.move_to_json(m) for m in moves]}}
        _emit(cfg, ser.report("fuzz-replay", doc),
              f"seed {cfg.seed} index {args.replay}: ranks {state.ranks()}, {len(moves)} moves\n"
              + "\n".join(json.dumps(ser.move_to_json(m), sort_keys=True) for m in moves))
        return EXIT_OK
    rep = fuzz_invariance(cfg.seed, args.n, args.max_len, args.max_rank, cutoff,
                          check_type_ii=not args.no_type_ii_check)
    doc = rep.to_json()
    lines = [f"{rep.passed}/{rep.n_sequences} sequences passed (seed {rep.seed}, "
             f"{rep.moves_applied} moves, {rep.type_ii_checks} type_II checks)"]
    for f in rep.failures:
        lines.append(f"FAIL index {f['index']}: {'; '.join(f['problems'])} "
                     f"(replay: ftor fuzz --seed {f['replay']['seed']} --replay {f['replay']['index']})")
    _emit(cfg, ser.report("fuzz", doc), "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FUZZ


def cmd_apply_moves(args, cfg: RunConfig) -> int:
    if not args.input or not args.moves:
        raise InputError("apply-moves needs --input (a state) and --moves")
    try:
        state = ser.state_from_json(_load_json(args.input))
        moves = ser.moves_from_json(_load_json(args.moves), state)
    except ser.SchemaError as exc:
        raise InputError(str(exc))
    I0 = state.invariant()
    s = state
    for n, m in enumerate(moves):
        try:
            s = apply_move(s, m)
        except MoveError as exc:
            raise DomainError(f"move {n} ({m.kind}): {exc}")
    I1 = s.invariant()
    same = I0 == I1
    doc = {"before": ser.invariant_to_json(I0), "after": ser.invariant_to_json(I1), "invariant_equal": same,
           "final_state": ser.state_to_json(s)}
    _emit(cfg, ser.report("apply-moves", doc),
          f"before: {I0.render()}\nafter:  {I1.render()}\nequal: {same}")
    return EXIT_OK


# -- apps


def _knot_alex(args) -> GroupRingElement:
    if getattr(args, "seifert", None):
        try:
            return apps.alexander_from_seifert(_json_arg(args.seifert, "--seifert"))
        except ValueError as exc:
            raise InputError(str(exc))
    if getattr(args, "alex", None):
        cs = _int_list(args.alex, "--alex")
        if not any(cs):
            raise DomainError("the Alexander polynomial must be nonzero")
        return GroupRingElement(apps.circle_group(), {(i,): c for i, c in enumerate(cs) if c}, "integers")
    knot = getattr(args, "knot", None)
    k = getattr(args, "k", None)
    if knot == "trefoil":
        return apps.alexander_from_seifert(apps.TREFOIL_SEIFERT)
    if knot == "unknot":
        return GroupRingElement.one(apps.circle_group())
    if k is not None or knot == "twist":
        if k is None:
            raise InputError("a twist knot needs --k")
        return apps.twist_knot_alexander(k)
    raise InputError("choose a knot with --knot, --k, --alex or --seifert")


def cmd_apps(args, cfg: RunConfig) -> int:
    sub = args.app
    if sub == "capacity":
        try:
            m, mu = to_q(args.m), to_q(args.mu)
        except (ValueError, ZeroDivisionError):
            raise InputError("capacity needs two rationals m and mu")
        try:
            v = apps.capacity_bound(m, mu)
        except ValueError as exc:
            raise InputError(str(exc))
        _emit(cfg, ser.report("apps capacity", {"m": fmt_q(m), "mu": fmt_q(mu), "bound": fmt_q(v)}), fmt_q(v))
        return EXIT_OK
    if sub == "alexander":
        a = _knot_alex(args)
        _emit(cfg, ser.report("apps alexander", {"alexander": a.to_json(), "text": str(a)}), str(a))
        return EXIT_OK
    if sub == "surgery":
        a = _knot_alex(args)
        tau = apps.surgery_torsion(a)
        G = apps.circle_group()
        from .invariant import extended_leading_term

        lts = {}
        for th in (1, -1):
            lts[str(th)] = extended_leading_term(tau, Weight(G, (th,))).render()
        res = {"alexander": a.to_json(), "torsion": ser.torsion_to_json(tau), "lt": lts}
        _emit(cfg, ser.report("apps surgery", res),
              f"torsion: {tau.render()}\nlt (theta = 1): {lts['1']}\nlt (theta = -1): {lts['-1']}")
        return EXIT_OK
    if sub == "zeta":
        return _apps_zeta(args, cfg)
    if sub == "toral-fix":
        A = _json_arg(args.matrix, "--matrix")
        if not (isinstance(A, list) and A and all(isinstance(r, list) for r in A)):
            raise InputError("--matrix must be a square integer matrix")
        try:
            r = apps.toral_fixed_classes(A, args.k)
        except ValueError as exc:
            if "degenerate" in str(exc):
                raise DomainError(str(exc))
            raise InputError(str(exc))
        lines = [f"coker(A^{args.k} - I) = {r.group}; sign {r.sign:+d}; {r.total} fixed points"]
        for key, c in sorted(r.counts.items()):
            lines.append(f"  class {list(key)}: {c}")
        _emit(cfg, ser.report("apps toral-fix", r.to_json()), "\n".join(lines))
        return EXIT_OK
    if sub == "typef":
        return _apps_typef(args, cfg)
    raise InputError(f"unknown apps subcommand {sub!r}")


def _apps_zeta(args, cfg: RunConfig) -> int:
    cutoff = cfg.cutoff if cfg.cutoff is not None else Q(8)
    if args.input:
        doc = _load_json(args.input)
        try:
            mats = [(m["matrix"], m["degree"]) for m in doc.get("matrices", [])]
            counts = doc.get("counts")
            data = apps.LefschetzData(mats, counts, bool(doc.get("sign_coherent", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.input}: {exc}")
    elif args.counts:
        data = apps.LefschetzData(counts={i + 1: c for i, c in enumerate(_q_list(args.counts, "--counts"))})
    elif args.toral:
        A = _json_arg(args.toral, "--toral")
        try:
            n = len(A)
            if n != 2:
                raise ValueError("--toral expects a 2x2 matrix")
            det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
            data = apps.LefschetzData([([[1]], 0), (A, 1), ([[det]], 2)], sign_coherent=args.sign_coherent)
        except (TypeError, ValueError, IndexError) as exc:
            raise InputError(str(exc))
    else:
        raise InputError("zeta needs --input, --counts or --toral")
    try:
        z = apps.lefschetz_zeta(data, cutoff, args.mode)
    except ValueError as exc:
        raise DomainError(str(exc))
    res = {"zeta": ser.series_to_json(z)}
    text = f"zeta = {z}"
    if data.matrices:
        cf = apps.closed_form_zeta(data, cutoff)
        res["closed_form"] = ser.series_to_json(cf)
        text += f"\nprod det(I - t M_i)^((-1)^(i+1)) = {cf}"
    _emit(cfg, ser.report("apps zeta", res), text)
    return EXIT_OK


def _apps_typef(args, cfg: RunConfig) -> int:
    if args.torus:
        G = FgAbelianGroup(args.torus)
        from .fieldsum import decompose

        tau = FieldSumElement.one(decompose(G))
    elif args.input:
        C = _read_complex(args.input)
        if C.ring[0] != "group":
            raise InputError("typef needs a complex over Z[H_1]")
        tau = reidemeister_torsion(C)
        G = C.ring[1]
    else:
        tau = apps.surgery_torsion(_knot_alex(args))
        G = apps.circle_group()
    theta = _weight_arg(G, args.theta) if args.theta else Weight(G, (1,) + (0,) * (G.rank - 1))
    b_key = _int_list(args.b, "--b") if args.b else [1] + [0] * (G.rank - 1)
    if len(b_key) != G.ngens:
        raise InputError(f"--b needs {G.ngens} coordinates")
    b = GroupElement(G, tuple(b_key))
    if args.dual:
        theta, b = apps.duality_companion(theta, b)
    try:
        v = apps.typef_check(tau, theta, b, cfg.cutoff)
    except ValueError as exc:
        raise DomainError(str(exc))
    res = v.to_json()
    res.update({"theta": theta.to_json(), "b": b.to_json()})
    text = (f"in_Nov1: {v.in_Nov1}\nlt: {v.lt}\ntheta(b): {fmt_q(v.theta_b)}\n"
            f"ln coefficient at b: {'-' if v.ln_coefficient is None else fmt_q(v.ln_coefficient)}\n"
            f"g-essential: {v.g_essential}")
    _emit(cfg, ser.report("apps typef", res), text)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=_parse_q, default=None, help="weight cutoff p/q")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $FTOR_SEED or 0)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="ftor", description="Torsion and Novikov-ring invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("torsion", parents=[common], help="torsion of a based complex")
    t.add_argument("--input", help="complex JSON file")
    t.add_argument("--theta", help="also expand along this weight, e.g. '1'")

    i = sub.add_parser("invariant", parents=[common], help="I = zeta * tau of a Novikov complex")
    i.add_argument("--input", help="complex JSON file")
    i.add_argument("--orbits", help="orbit counts JSON file")
    i.add_argument("--log", action="store_true", help="also print ln I")

    f = sub.add_parser("fuzz", parents=[common], help="invariance fuzzing under random moves")
    f.add_argument("--n", type=int, default=500)
    f.add_argument("--max-len", type=int, default=10)
    f.add_argument("--max-rank", type=int, default=6)
    f.add_argument("--replay", type=int, default=None, metavar="INDEX",
                   help="print the start state and moves of one sequence")
    f.add_argument("--no-type-ii-check", action="store_true")

    m = sub.add_parser("apply-moves", parents=[common], help="apply a move script to a state")
    m.add_argument("--input", help="state JSON file")
    m.add_argument("--moves", help="move script JSON file")

    a = sub.add_parser("apps", help="worked examples")
    asub = a.add_subparsers(dest="app", required=True)
    z = asub.add_parser("zeta", parents=[common])
    z.add_argument("--input")
    z.add_argument("--counts", help="#Fix(f^k) for k = 1, 2, ...")
    z.add_argument("--toral", help="2x2 integer matrix of a toral map, as JSON")
    z.add_argument("--mode", choices=("fixed_points", "lefschetz"), default="fixed_points")
    z.add_argument("--sign-coherent", action="store_true")
    for name in ("alexander", "surgery", "typef"):
        k = asub.add_parser(name, parents=[common])
        k.add_argument("--knot", choices=("trefoil", "unknot", "twist"))
        k.add_argument("--k", type=int, help="twist knot parameter")
        k.add_argument("--alex", help="Alexander polynomial coefficients, lowest degree first")
        k.add_argument("--seifert", help="Seifert matrix as JSON")
        if name == "typef":
            k.add_argument("--torus", type=int, help="torsion of T^n (= 1)")
            k.add_argument("--input", help="complex JSON over Z[H_1]")
            k.add_argument("--theta", help="comma-separated weights")
            k.add_argument("--b", help="comma-separated coordinates of b")
            k.add_argument("--dual", action="store_true", help="check the duality companion (-theta, -b)")
    x = asub.add_parser("toral-fix", parents=[common])
    x.add_argument("--matrix", required=True, help="integer matrix as JSON")
    x.add_argument("--k", type=int, default=1)
    c = asub.add_parser("capacity", parents=[common])
    c.add_argument("m")
    c.add_argument("mu")
    return p


COMMANDS = {
    "torsion": cmd_torsion,
    "invariant": cmd_invariant,
    "fuzz": cmd_fuzz,
    "apply-moves": cmd_apply_moves,
    "apps": cmd_apps,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.WARNING - 10 * min(getattr(args, "verbose", 0), 2),
                        format="%(levelname)s: %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except InputError as exc:
        print(f"ftor: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ComplexError as exc:
        print(f"ftor: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"ftor: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, ArithmeticError) as exc:
        print(f"ftor: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
