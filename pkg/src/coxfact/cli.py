"""Command-line interface.

Root indices on the command line are the 0-based positive-root indices
printed by ``coxfact rootsys``.  A root may also be given by coordinates,
e.g. ``1,-1,0`` or ``0,4,0`` or ``-1+1*r5,-1-1*r5,-2``; it is matched to
the positive root spanning the same ray up to sign.

Exit codes: 0 success, 1 verification disagreement, 2 budget exceeded,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import circuits, classify, dihedral, hurwitz
from .hurwitz import DEFAULT_BUDGET, BudgetExceeded
from .rootsys import RootSystem, RootSystemError, build
from .scalar import Q5

EXIT_OK, EXIT_DISAGREE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


_Q5_RE = re.compile(r"^([+-]?[\d/]+)?(?:([+-])([\d/]*)\*?r5)?$")


def parse_scalar(text: str):
    text = text.strip().replace(" ", "")
    if "r5" not in text:
        v = Fraction(text)
        return v.numerator if v.denominator == 1 else v
    m = _Q5_RE.match(text)
    if not m:
        if text.startswith("r5") or text.startswith("-r5"):
            return Q5(0, -1 if text.startswith("-") else 1)
        m2 = re.match(r"^([+-]?[\d/]+)\*?r5$", text)
        if m2:
            return Q5(0, Fraction(m2.group(1)))
        raise InputError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group(1)) if m.group(1) else 0
    b = Fraction(m.group(3) or "1")
    if m.group(2) == "-":
        b = -b
    return Q5(a, b)


def parse_root(rs: RootSystem, token: str) -> int:
    token = token.strip()
    if "," not in token:
        try:
            idx = int(token)
        except ValueError as exc:
            raise InputError(f"not a root index: {token!r}") from exc
        if not 0 <= idx < rs.N:
            raise InputError(f"root index {idx} out of range 0..{rs.N - 1}")
        return idx
    parts = [parse_scalar(p) for p in token.split(",")]
    if rs.field == "q5":
        parts = [p if isinstance(p, Q5) else Q5(p) if isinstance(p, int) else Q5(p, 0) for p in parts]
    try:
        return rs.find_line(parts)
    except RootSystemError as exc:
        raise InputError(str(exc)) from exc


def _emit(obj, fmt: str, text: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        print(text if text is not None else json.dumps(obj, sort_keys=True))


# -- subcommands ------------------------------------------------------------------------

def cmd_rootsys(args) -> int:
    rs = build(args.type)
    data = rs.to_json()
    if args.format == "text":
        lines = [f"type {rs.tag}, rank {rs.rank}, {rs.N} positive roots, |W| = {rs.order()}"]
        for i in range(rs.N):
            lines.append(f"  {i}: {rs.root_label(i)}")
        lines.append(f"simple: {rs.simple}")
        lines.append(f"classes: {[list(c) for c in rs.reflection_classes()]}")
        print("\n".join(lines))
    else:
        _emit(data, "json")
    return EXIT_OK


def cmd_classify(args) -> int:
    rs = build(args.type)
    if rs.tag.family == "I":
        raise InputError("classification needs a system with coordinates of rank >= 3")
    rep = classify.classify(rs, args.budget, args.long_running, args.checkpoint)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{rs.tag}.jsonl").write_text("\n".join(rep.jsonl_lines()) + "\n")
        (out / f"{rs.tag}.dot").write_text(classify.dot_atlas(rs, rep))
    if args.format == "dot":
        sys.stdout.write(classify.dot_atlas(rs, rep))
    elif args.format == "json":
        _emit(rep.summary(), "json")
    else:
        print(f"bases: {rep.basis_orbit_count}, full circuits: {rep.full_circuit_orbit_count}")
        print(f"total bases: {rep.total_bases}")
        print("stabilizers: " + ", ".join(f"{k}^{v}" for k, v in rep.stabilizer_profile().items()))
        print(f"disconnected acuteness graphs: {len(rep.circuits) - len(rep.violations)}/{len(rep.circuits)}")
    if rep.violations:
        for v in rep.violations:
            print(f"connected acuteness graph for circuit {list(v)}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def _coxeter(rs: RootSystem, order: str | None):
    if order is None:
        return rs.coxeter_element()
    try:
        ordering = [int(x) for x in order.split(",")]
    except ValueError as exc:
        raise InputError(f"bad ordering {order!r}") from exc
    try:
        return rs.coxeter_element(ordering)
    except RootSystemError as exc:
        raise InputError(str(exc)) from exc


def cmd_verify(args) -> int:
    rs = build(args.type)
    c = _coxeter(rs, args.coxeter_order)
    report = hurwitz.verify_theorem(rs, c, args.length, args.budget)
    if args.format == "json":
        _emit(report, "json")
    else:
        print(f"{rs.tag}, length {args.length}: {report['total_factorizations']} factorizations, "
              f"{len(report['orbits'])} orbits")
        for o in report["orbits"]:
            print(f"  orbit of size {o['size']}, classes {o['multiset']}, witness {o['witness']}")
        print(f"agreement: {str(report['agreement']).lower()}")
    return EXIT_OK if report["agreement"] else EXIT_DISAGREE


def cmd_orbit(args) -> int:
    rs = build(args.type)
    t = tuple(parse_root(rs, x) for x in args.factors)
    orb = hurwitz.hurwitz_orbit(rs, t, args.budget, with_traces=args.traces)
    data = {
        "type": str(rs.tag),
        "size": len(orb),
        "complete": orb.complete,
        "multiset": [list(p) for p in hurwitz.class_multiset(rs, t)],
        "elements": [list(x) for x in orb.elements],
    }
    if args.traces:
        data["traces"] = [orb.trace_to(x) for x in orb.elements]
    text = f"orbit size {len(orb)}" + ("" if orb.complete else " (truncated)")
    if args.format == "text":
        text += "\n" + "\n".join(" ".join(map(str, x)) for x in orb.elements)
    _emit(data, args.format, text)
    return EXIT_OK if orb.complete else EXIT_BUDGET


def cmd_standard_form(args) -> int:
    rs = build(args.type)
    if args.random:
        return _standard_form_sweep(rs, args)
    if not args.factors:
        raise InputError("give a factor list or --random")
    t = tuple(parse_root(rs, x) for x in args.factors)
    try:
        out, trace = hurwitz.standard_form(rs, t)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ell = hurwitz.reflection_length(rs, rs.product(t))
    data = {"input": list(t), "output": list(out), "trace": trace, "reflection_length": ell}
    text = (f"input:  {' '.join(map(str, t))}\noutput: {' '.join(map(str, out))}\n"
            f"trace:  {' '.join(map(str, trace))}\nreflection length: {ell}")
    _emit(data, args.format, text)
    return EXIT_OK


def _standard_form_sweep(rs: RootSystem, args) -> int:
    rng = random.Random(args.seed)
    ok = 0
    for _ in range(args.random):
        m = args.length if args.length is not None else rng.randint(0, rs.rank + 4)
        t = tuple(rng.randrange(rs.N) for _ in range(m))
        out, trace = hurwitz.standard_form(rs, t)
        if hurwitz.replay(rs, t, trace) == out and hurwitz.is_standard_form(rs, out):
            ok += 1
        else:
            print(f"failure on {list(t)}", file=sys.stderr)
            return EXIT_DISAGREE
    _emit({"checked": ok, "seed": args.seed}, args.format, f"checked {ok} random factorizations")
    return EXIT_OK


def cmd_dihedral(args) -> int:
    final, trace, steps = dihedral.reduce_triple((args.a, args.b, args.c))
    data = {
        "steps": [{"triple": list(s.triple), "move": s.move, "spread": dihedral.spread(s.triple)} for s in steps],
        "trace": trace,
        "final": list(final),
    }
    text = dihedral.format_reduction(steps).rstrip("\n")
    if args.project:
        proj = [dihedral.project(n, args.project) for n in final]
        data["projected"] = proj
        text += f"\nin I2({args.project}): {proj}"
    _emit(data, args.format, text)
    return EXIT_OK


def cmd_circuits(args) -> int:
    rs = build(args.type)
    if args.roots:
        roots = [parse_root(rs, x) for x in args.roots]
        try:
            c = circuits.as_circuit(rs, roots)
        except (circuits.DependenceError, circuits.NotACircuitError) as exc:
            dep = None
            try:
                dep = circuits.find_dependence(rs, roots)
            except circuits.NotACircuitError:
                pass
            _emit({"circuit": False, "dependence": None if dep is None else [str(x) for x in dep]},
                  args.format, f"not a circuit ({exc})")
            return EXIT_OK
        g = circuits.acuteness_graph(rs, c)
        if args.format == "dot":
            sys.stdout.write(circuits.to_dot(g))
            return EXIT_OK
        data = {"circuit": True, "full": circuits.is_full(rs, c), **c.to_json(), "acuteness": g.summary()}
        text = (f"circuit {list(c.members)} coefficients {[str(x) for x in c.coeffs]}\n"
                f"full: {data['full']}, acute edges: {len(g.acute)}, disconnected: {g.summary()['disconnected']}")
        _emit(data, args.format, text)
        return EXIT_OK
    total = full = violations = 0
    for c in circuits.enumerate_circuits(rs):
        total += 1
        if circuits.is_full(rs, c):
            full += 1
        if not circuits.gamma_disconnected(circuits.acuteness_graph(rs, c)):
            violations += 1
            print(f"connected acuteness graph: {list(c.members)}", file=sys.stderr)
        if total > args.budget:
            raise BudgetExceeded("circuit enumeration budget exceeded")
    data = {"type": str(rs.tag), "circuits": total, "full": full, "violations": violations}
    _emit(data, args.format, f"circuits: {total}, full: {full}, connected acuteness graphs: {violations}")
    return EXIT_DISAGREE if violations else EXIT_OK


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                        help="maximum number of enumerated states")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="worker threads (results do not depend on it)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    common.add_argument("--long-running", action="store_true",
                        help="allow the streaming E7/E8 enumeration")
    common.add_argument("--format", choices=("json", "dot", "text"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="coxfact", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rootsys", parents=[common], help="dump a root system")
    s.add_argument("type")
    s.set_defaults(func=cmd_rootsys)

    s = sub.add_parser("classify", parents=[common], help="orbits of bases and full circuits")
    s.add_argument("type")
    s.add_argument("--out", help="directory for <type>.jsonl and <type>.dot")
    s.add_argument("--checkpoint", type=Path, help="resume file for --long-running")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", parents=[common], help="Hurwitz orbits against class multisets")
    s.add_argument("type")
    s.add_argument("--length", "-m", type=int, required=True)
    s.add_argument("--coxeter-order", help="comma-separated ordering of the simple roots")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("orbit", parents=[common], help="Hurwitz orbit of a factorization")
    s.add_argument("type")
    s.add_argument("factors", nargs="+")
    s.add_argument("--traces", action="store_true")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("standard-form", parents=[common], help="rewrite to leading equal pairs")
    s.add_argument("type")
    s.add_argument("factors", nargs="*")
    s.add_argument("--random", type=int, default=0, help="check this many random factorizations")
    s.add_argument("--length", "-m", type=int)
    s.set_defaults(func=cmd_standard_form)

    s = sub.add_parser("dihedral", parents=[common], help="reduce an integer triple")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int)
    s.add_argument("--project", type=int, help="also project to I2(m)")
    s.set_defaults(func=cmd_dihedral)

    s = sub.add_parser("circuits", parents=[common], help="analyze a root set or enumerate circuits")
    s.add_argument("type")
    s.add_argument("roots", nargs="*")
    s.set_defaults(func=cmd_circuits)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, RootSystemError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
