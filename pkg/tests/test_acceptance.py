"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py`` (add ``--extended`` for the H4 closure).
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from fractions import Fraction

import pytest

from coxfact import circuits as cz
from coxfact import classify as cl
from coxfact import dihedral
from coxfact import hurwitz as hz
from coxfact.circuits import MDependence
from coxfact.rootsys import build

RESULTS: dict[str, tuple[bool, str]] = {}

CONNECTED_QUADRUPLE = [(-6, -3, 0), (-1, 1, 0), (1, 2, 2), (6, 0, -2)]
TABLE = {"H3": (11, 15), "F4": (35, 22), "E6": (39, 17), "H4": (96, 416)}
DESK_LIMIT = {"H3": 600, "F4": 600, "E6": 600, "H4": 7200}

_reports: dict[str, cl.ClassificationReport] = {}


def report(tag: str) -> cl.ClassificationReport:
    if tag not in _reports:
        _reports[tag] = cl.classify(build(tag))
    return _reports[tag]


def record(name: str, ok: bool, detail: str) -> None:
    RESULTS[name] = (ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


# -- 1 ---------------------------------------------------------------------------------

def check_table() -> None:
    parts, ok = [], True
    for tag, expected in TABLE.items():
        t0 = time.monotonic()
        rep = report(tag)
        elapsed = time.monotonic() - t0
        got = (rep.basis_orbit_count, rep.full_circuit_orbit_count)
        good = got == expected and elapsed < DESK_LIMIT[tag]
        ok &= good
        parts.append(f"{tag} {got[0]}/{got[1]} in {elapsed:.1f}s")
    record("1 orbit table", ok, ", ".join(parts))


# -- 2 ---------------------------------------------------------------------------------

def check_disconnected_acuteness() -> None:
    checked, bad = 0, []
    for tag in ("H3", "H4", "F4", "E6"):
        for r in report(tag).circuits:
            checked += 1
            if not r.acuteness["disconnected"]:
                bad.append((tag, r.members))
    exhaustive = [f"A{n}" for n in range(2, 6)] + [f"C{n}" for n in range(2, 5)] \
        + [f"D{n}" for n in range(3, 6)] + [f"I2({m})" for m in range(3, 9)]
    for tag in exhaustive:
        rs = build(tag)
        for c in cz.enumerate_circuits(rs):
            checked += 1
            if not cz.gamma_disconnected(cz.acuteness_graph(rs, c)):
                bad.append((tag, c.members))
    control = cz.vector_acuteness_graph(CONNECTED_QUADRUPLE, [1, 1, 1, 1])
    control_ok = not cz.gamma_disconnected(control)
    record("2 disconnected acuteness graphs", not bad and control_ok,
           f"{checked} circuits, {len(bad)} connected; control connected={control_ok}")


# -- 3 ---------------------------------------------------------------------------------

MULTISET_CASES = {"A2": 6, "A3": 5, "B2": 6, "B3": 5, "I2(5)": 6, "I2(6)": 6, "H3": 4}


def check_orbits_match_multisets() -> None:
    ok, parts = True, []
    for tag, top in MULTISET_CASES.items():
        rs = build(tag)
        c = rs.coxeter_element()
        for m in range(rs.rank, top + 1):
            t0 = time.monotonic()
            rep = hz.verify_theorem(rs, c, m)
            elapsed = time.monotonic() - t0
            ok &= rep["agreement"] and elapsed < 900
            parts.append(f"{tag}/m={m}:{len(rep['orbits'])}")
    record("3 orbits match class multisets", ok, " ".join(parts))


# -- 4 ---------------------------------------------------------------------------------

def check_single_shortest_orbit() -> None:
    tags = ["A2", "A3", "B2", "B3", "D4", "H3"] + [f"I2({m})" for m in range(3, 9)]
    ok, parts = True, []
    for tag in tags:
        rs = build(tag)
        facts = hz.shortest_factorizations(rs, rs.coxeter_element())
        orb = hz.hurwitz_orbit(rs, facts[0], strict=True)
        single = set(orb.elements) == set(facts)
        ok &= single
        parts.append(f"{tag}:{len(facts)}")
    record("4 shortest factorizations form one orbit", ok, " ".join(parts))


# -- 5 ---------------------------------------------------------------------------------

def check_standard_form(samples: int = 1000) -> None:
    ok, parts = True, []
    for tag in ("A3", "B3", "H3"):
        rs = build(tag)
        rng = random.Random(2024)
        done = 0
        while done < samples:
            t = tuple(rng.randrange(rs.N) for _ in range(rng.randint(0, rs.rank + 4)))
            ell = hz.reflection_length(rs, rs.product(t))
            if len(t) > ell + 4:
                continue
            out, trace = hz.standard_form(rs, t)
            k = len(t) - ell
            suffix = out[k:]
            good = (hz.replay(rs, t, trace) == out
                    and all(out[p] == out[p + 1] for p in range(0, k, 2))
                    and len(suffix) == ell
                    and hz.reflection_length(rs, rs.product(suffix)) == len(suffix))
            ok &= good
            done += 1
        parts.append(f"{tag}:{done}")
    record("5 standard form", ok, " ".join(parts))


# -- 6 ---------------------------------------------------------------------------------

WEIGHT_TYPES = ("A3", "C3", "D4", "F4", "H3")


def _full_dependences(rs):
    return [c for c in cz.enumerate_circuits(rs) if len(c) == rs.rank + 1 and cz.is_full(rs, c)]


def _random_dependence(rs, full, rng) -> MDependence:
    c = rng.choice(full)
    order = list(range(len(c)))
    rng.shuffle(order)
    scale = rng.choice([1, 2, -3, Fraction(1, 2)])
    if rs.field == "q5":
        scale = rng.choice([1, -2])
    d = MDependence(tuple(c.members[k] for k in order), tuple(scale * c.coeffs[k] for k in order))
    for i in range(1, len(d) + 1):
        if rng.random() < 0.5:
            d = hz.epsilon(rs, d, i)
    for _ in range(rng.randint(0, 4)):
        k = rng.randint(1, len(d) - 1)
        d = hz.lifted_move(rs, d, rng.choice((k, -k)))
    return d


def check_weight(samples: int = 10_000) -> None:
    rng = random.Random(99)
    systems = [(build(t), _full_dependences(build(t))) for t in WEIGHT_TYPES]
    moves = bad = 0
    while moves < samples:
        rs, full = rng.choice(systems)
        d = _random_dependence(rs, full, rng)
        i = rng.randint(1, len(d) - 1)
        a, b = d.roots[i - 1], d.roots[i]
        if rs.line(a) == rs.line(b) or not (d.coeffs[i - 1] and d.coeffs[i]):
            continue
        s = hz.pair_sign(rs, d, i - 1, i)
        w = d.weight()
        changes = [hz.lifted_move(rs, d, mv).weight() - w for mv in (i, -i)]
        if s == 0:
            good = all(x == 0 for x in changes)
        elif s > 0:
            good = all(x > 0 for x in changes)
        else:
            good = any(x < 0 for x in changes)
        bad += not good
        moves += 1
    # every full circuit in its sorted order, then random orderings, signs and scalings
    pending = [(rs, cz.dependence_of(c)) for rs, full in systems for c in full]
    while len(pending) < 10_000:
        rs, full = rng.choice(systems)
        d = _random_dependence(rs, full, rng)
        if all(d.coeffs):
            pending.append((rs, d))
    failures = 0
    for rs, d in pending:
        try:
            for _ in range(10_000):
                if not all(d.coeffs):
                    break
                d2, _ = hz.reduce_weight_step(rs, d)
                if not d2.weight() < d.weight():
                    raise hz.LemmaViolation("weight did not drop")
                d = d2
            else:
                raise hz.LemmaViolation("no vanishing coefficient")
        except hz.LemmaViolation:
            failures += 1
    reduced = len(pending)
    record("6 weight monotonicity and reduction", bad == 0 and failures == 0,
           f"{moves} moves, {bad} trichotomy failures; {reduced} full-circuit dependences reduced, {failures} failures")


# -- 7 ---------------------------------------------------------------------------------

# some H4 full circuits reach over 10^7 root tuples across their orderings
H4_CLOSURE_BUDGET = 10**8


def check_closure(tags=("H3",), literal: bool = True, budget: int = hz.DEFAULT_BUDGET) -> None:
    """Finite lifted closure of every full-circuit representative.

    The batched check decides finiteness; with ``literal`` the closure is also
    enumerated state by state and its size must equal the batched count.
    """
    parts, ok = [], True
    for tag in tags:
        rs = build(tag)
        t0 = time.monotonic()
        sizes, finite = [], 0
        try:
            for r in report(tag).circuits:
                chk = hz.circuit_closure_check(rs, r.members, budget)
                finite += chk.finite
                ok &= chk.finite
                if literal:
                    ok &= len(hz.circuit_lifted_closure(rs, r.members)) == chk.states
                sizes.append(chk.states)
        except hz.BudgetExceeded:
            ok = False
        mode = "batched+literal" if literal else "batched"
        parts.append(f"{tag}: {finite}/{len(sizes)} finite ({mode}), largest closure {max(sizes, default=0)}, "
                     f"{time.monotonic() - t0:.0f}s")
    record(f"7 finite lifted closure ({'/'.join(tags)})", ok, "; ".join(parts))


# -- 8 ---------------------------------------------------------------------------------

def check_dihedral() -> None:
    ok, count = True, 0
    for t in itertools.product(range(-10, 11), repeat=3):
        final, trace, steps = dihedral.reduce_triple(t)
        count += 1
        ok &= len(set(final)) < 3 and dihedral.replay(t, trace) == final
        for before, after in zip(steps, steps[1:]):
            if after.reflecting:
                ok &= dihedral.spread(after.triple) < dihedral.spread(before.triple)
    _, _, steps = dihedral.reduce_triple((3, 7, 5))
    figure = [s.triple for s in steps[1:]] == [(-1, 3, 5), (-1, 1, 3), (1, 3, 3)]
    record("8 dihedral reduction", ok and figure, f"{count} triples; reference run matches={figure}")


# -- 9 ---------------------------------------------------------------------------------

def check_oracles() -> None:
    mismatches, elements = 0, 0
    for tag in ["A3", "B3", "H3"] + [f"I2({m})" for m in range(3, 9)]:
        rs = build(tag)
        for g, d in hz.reflection_length_table(rs).items():
            elements += 1
            mismatches += hz.reflection_length(rs, g) != d
    subsets = disagreements = 0
    for tag in ("C4", "D4"):
        rs = build(tag)
        for k in range(1, 8):
            for s in itertools.combinations(range(rs.N), k):
                subsets += 1
                z = cz.zaslavsky_is_circuit(cz.to_signed_graph(rs, s))
                disagreements += z != cz.is_circuit(rs, s)
    record("9 oracle equivalences", mismatches == 0 and disagreements == 0,
           f"{elements} elements, {mismatches} length mismatches; {subsets} subsets, {disagreements} disagreements")


# -- 10 --------------------------------------------------------------------------------

def check_classical() -> None:
    from collections import Counter

    ok, parts = True, []
    for tag in ("D4", "D5", "D6", "C3", "C4"):
        rs = build(tag)
        keys = Counter(cz.classical_canonical_form(rs, r.members).key for r in report(tag).circuits)
        predicted = Counter(cz.classical_orbit_prediction(rs.tag.family, rs.rank))
        ok &= keys == predicted
        parts.append(f"{tag}:{sum(keys.values())}/{sum(predicted.values())}")
    record("10 classical orbit counts", ok, " ".join(parts))


# -- pytest entry points ---------------------------------------------------------------

def test_criterion_01_table():
    check_table()


def test_criterion_02_disconnected_acuteness():
    check_disconnected_acuteness()


def test_criterion_03_orbits_and_multisets():
    check_orbits_match_multisets()


def test_criterion_04_single_shortest_orbit():
    check_single_shortest_orbit()


def test_criterion_05_standard_form():
    check_standard_form()


def test_criterion_06_weight():
    check_weight()


def test_criterion_07_finite_closure_h3():
    check_closure(("H3",))


@pytest.mark.extended
def test_criterion_07_finite_closure_h4():
    check_closure(("H4",), literal=False, budget=H4_CLOSURE_BUDGET)


def test_criterion_08_dihedral():
    check_dihedral()


def test_criterion_09_oracles():
    check_oracles()


def test_criterion_10_classical():
    check_classical()


if __name__ == "__main__":
    checks = [check_table, check_disconnected_acuteness, check_orbits_match_multisets, check_single_shortest_orbit, check_standard_form,
              check_weight, lambda: check_closure(("H3",)), check_dihedral, check_oracles, check_classical]
    if "--extended" in sys.argv:
        checks.append(lambda: check_closure(("H4",), literal=False, budget=H4_CLOSURE_BUDGET))
    failed = 0
    for check in checks:
        try:
            check()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
