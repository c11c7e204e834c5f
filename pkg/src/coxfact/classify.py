"""Orbit representatives of bases and of full circuits under the Weyl group.

Subsets of positive roots are encoded as bitmasks over positive-root indices.
The group acts on them through the simple reflections, which permute the
positive lines.  Orbit representatives are the lexicographically smallest
sorted index tuples in their orbits.

Two engines are used:

* For desk-scale types (``N <= 64`` and a manageable number of subsets) every
  ``n``-subset is listed in lexicographic order, the simple reflections become
  edges between subset indices, and orbits are the connected components of
  that graph.  Independence is tested on representatives only, since it is
  invariant under the group.
* For the largest types a streaming search walks the bases in lexicographic
  order and keeps those that are minimal in their orbit.  It checkpoints its
  position and is only run on request.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field
from itertools import chain, combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import linalg
from .circuits import (Circuit, acuteness_graph, gamma_disconnected, is_full,
                       obtuseness_connected, to_dot, unique_circuit_in)
from .hurwitz import DEFAULT_BUDGET, BudgetExceeded
from .rootsys import RootSystem

log = logging.getLogger(__name__)

_REV8 = np.array([int(f"{b:08b}"[::-1], 2) for b in range(256)], dtype=np.uint8)


@dataclass
class OrbitRep:
    members: tuple[int, ...]
    orbit_size: int
    stabilizer_size: int
    circuit: Circuit | None = None
    acuteness: dict | None = None

    def to_json(self) -> dict:
        out = {
            "members": list(self.members),
            "orbit_size": self.orbit_size,
            "stabilizer_size": self.stabilizer_size,
        }
        if self.circuit is not None:
            out["coeffs"] = self.circuit.to_json()["coeffs"]
        if self.acuteness is not None:
            out["acuteness"] = self.acuteness
        return out


@dataclass
class ClassificationReport:
    type_tag: str
    bases: list[OrbitRep]
    circuits: list[OrbitRep]
    violations: list[tuple[int, ...]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def basis_orbit_count(self) -> int:
        return len(self.bases)

    @property
    def full_circuit_orbit_count(self) -> int:
        return len(self.circuits)

    @property
    def total_bases(self) -> int:
        return sum(r.orbit_size for r in self.bases)

    def summary_line(self) -> str:
        return f"{self.type_tag}: bases: {self.basis_orbit_count}, full circuits: {self.full_circuit_orbit_count}"

    def stabilizer_profile(self) -> dict[int, int]:
        prof: dict[int, int] = {}
        for r in self.bases:
            prof[r.stabilizer_size] = prof.get(r.stabilizer_size, 0) + 1
        return dict(sorted(prof.items()))

    def jsonl_lines(self) -> list[str]:
        lines = [json.dumps({"kind": "basis", **r.to_json()}, sort_keys=True) for r in self.bases]
        lines += [json.dumps({"kind": "full_circuit", **r.to_json()}, sort_keys=True) for r in self.circuits]
        return lines

    def summary(self) -> dict:
        return {
            "type": self.type_tag,
            "basis_orbits": self.basis_orbit_count,
            "full_circuit_orbits": self.full_circuit_orbit_count,
            "total_bases": self.total_bases,
            "stabilizers": {str(k): v for k, v in self.stabilizer_profile().items()},
            "lemma_violations": [list(v) for v in self.violations],
        }


# -- bitmask helpers --------------------------------------------------------------------

def _mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def _members(mask: int) -> tuple[int, ...]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def _lex_less(a: int, b: int) -> bool:
    """Sorted-tuple lexicographic order on equal-size sets given as masks."""
    d = a ^ b
    return bool(d) and bool(d & -d & a)


class _MaskAction:
    """Simple reflections acting on subsets of positive lines."""

    def __init__(self, rs: RootSystem) -> None:
        self.rs = rs
        self.N = rs.N
        self.perms = [rs.line_refl[s] for s in rs.simple]
        self.nbytes = (self.N + 7) // 8
        # tables[g][byte position][byte value] -> image bits, as python ints
        self.tables = []
        for p in self.perms:
            tab = []
            for pos in range(self.nbytes):
                row = []
                for val in range(256):
                    bits = 0
                    for k in range(8):
                        x = pos * 8 + k
                        if val >> k & 1 and x < self.N:
                            bits |= 1 << p[x]
                    row.append(bits)
                tab.append(row)
            self.tables.append(tab)
        if self.N <= 64:
            self.np_tables = [np.array(tab, dtype=np.uint64) for tab in self.tables]

    def image(self, g: int, mask: int) -> int:
        out = 0
        tab = self.tables[g]
        pos = 0
        while mask:
            out |= tab[pos][mask & 0xFF]
            mask >>= 8
            pos += 1
        return out

    def np_image(self, g: int, masks: np.ndarray) -> np.ndarray:
        tab = self.np_tables[g]
        by = masks.astype("<u8").view(np.uint8).reshape(-1, 8)[:, : self.nbytes]
        out = np.zeros(len(masks), dtype=np.uint64)
        for pos in range(self.nbytes):
            out |= tab[pos][by[:, pos]]
        return out

    def orbit(self, mask: int, budget: int = DEFAULT_BUDGET) -> np.ndarray | list[int]:
        """All images of a subset, as a sorted array (or a list for N > 64)."""
        if self.N <= 64:
            seen = np.array([mask], dtype=np.uint64)
            frontier = seen
            while len(frontier):
                imgs = np.unique(np.concatenate([self.np_image(g, frontier) for g in range(len(self.perms))]))
                frontier = imgs[~np.isin(imgs, seen, assume_unique=True)]
                seen = np.union1d(seen, frontier)
                if len(seen) > budget:
                    raise BudgetExceeded("orbit budget exceeded")
            return seen
        seen_set = {mask}
        stack = [mask]
        while stack:
            x = stack.pop()
            for g in range(len(self.perms)):
                y = self.image(g, x)
                if y not in seen_set:
                    seen_set.add(y)
                    stack.append(y)
                    if len(seen_set) > budget:
                        raise BudgetExceeded("orbit budget exceeded")
        return sorted(seen_set)

    def canonical(self, members: Iterable[int], budget: int = DEFAULT_BUDGET) -> tuple[tuple[int, ...], int]:
        """Lexicographically minimal image and orbit size."""
        orb = self.orbit(_mask(members), budget)
        if isinstance(orb, np.ndarray):
            rev = _REV8[orb.astype("<u8").view(np.uint8)].reshape(-1, 8)[:, ::-1].copy().view("<u8").ravel()
            best = int(orb[int(np.argmax(rev))])
        else:
            best = orb[0]
            for x in orb:
                if _lex_less(x, best):
                    best = x
        return _members(best), len(orb)


def canonical_form(rs: RootSystem, members: Iterable[int], budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    return _MaskAction(rs).canonical(members, budget)[0]


# -- basis orbits --------------------------------------------------------------------------

def _independent(rs: RootSystem, members: Sequence[int]) -> bool:
    return linalg.rank([rs.coords[x] for x in members]) == len(members)


def _subset_orbits(rs: RootSystem, k: int, budget: int):
    """Orbits of all k-subsets of positive lines: (combos, labels, first index, sizes)."""
    N = rs.N
    total = math.comb(N, k)
    if total > budget or N > 64:
        raise BudgetExceeded(f"{total} subsets of size {k} exceed the budget of {budget}")
    flat = np.fromiter(chain.from_iterable(combinations(range(N), k)), dtype=np.int16, count=total * k)
    combos = flat.reshape(total, k)
    one = np.uint64(1)
    masks = np.zeros(total, dtype=np.uint64)
    for c in range(k):
        masks |= one << combos[:, c].astype(np.uint64)
    order = np.argsort(masks, kind="stable")
    sorted_masks = masks[order]
    rows, cols = [], []
    for perm in (np.array(p, dtype=np.int16) for p in (rs.line_refl[s] for s in rs.simple)):
        img = np.zeros(total, dtype=np.uint64)
        for c in range(k):
            img |= one << perm[combos[:, c]].astype(np.uint64)
        target = order[np.searchsorted(sorted_masks, img)]
        rows.append(np.arange(total, dtype=np.int32))
        cols.append(target.astype(np.int32))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(total, total))
    _, labels = connected_components(graph, directed=False)
    _, first = np.unique(labels, return_index=True)
    sizes = np.bincount(labels)
    return combos, labels, first, sizes


def enumerate_basis_orbits(rs: RootSystem, budget: int = DEFAULT_BUDGET, long_running: bool = False,
                           checkpoint: Path | None = None) -> list[OrbitRep]:
    """Orbit representatives of bases of positive roots with their stabilizer sizes."""
    n = rs.rank
    order = rs.order()
    try:
        combos, labels, first, sizes = _subset_orbits(rs, n, budget)
    except BudgetExceeded:
        if not long_running:
            raise
        return _stream_basis_orbits(rs, checkpoint)
    reps = []
    for comp, idx in enumerate(first):
        members = tuple(int(x) for x in combos[idx])
        if _independent(rs, members):
            size = int(sizes[comp])
            reps.append(OrbitRep(members, size, order // size))
    reps.sort(key=lambda r: r.members)
    return reps


def _stream_basis_orbits(rs: RootSystem, checkpoint: Path | None) -> list[OrbitRep]:
    """Lexicographic walk over bases keeping the orbit-minimal ones; resumable."""
    action = _MaskAction(rs)
    n, N = rs.rank, rs.N
    state = {"position": None, "reps": []}
    if checkpoint is not None and Path(checkpoint).exists():
        state = json.loads(Path(checkpoint).read_text())
    resume = tuple(state["position"]) if state["position"] else None
    reps = [OrbitRep(tuple(r["members"]), r["orbit_size"], r["stabilizer_size"]) for r in state["reps"]]
    last_save = time.monotonic()

    def is_orbit_min(mask: int) -> bool:
        # depth-first over the orbit, stopping at the first smaller image
        seen = {mask}
        stack = [mask]
        while stack:
            x = stack.pop()
            for g in range(n):
                y = action.image(g, x)
                if y not in seen:
                    if _lex_less(y, mask):
                        return False
                    seen.add(y)
                    stack.append(y)
        return True

    def save(pos) -> None:
        if checkpoint is None:
            return
        data = {"position": list(pos), "reps": [r.to_json() for r in reps]}
        Path(checkpoint).write_text(json.dumps(data))

    for combo in combinations(range(N), n):
        if resume is not None and combo <= resume:
            continue
        if not _independent(rs, combo):
            continue
        mask = _mask(combo)
        if is_orbit_min(mask):
            size = len(action.orbit(mask))
            reps.append(OrbitRep(combo, size, rs.order() // size))
            log.info("basis orbit %d: %s", len(reps), combo)
        if time.monotonic() - last_save > 60:
            save(combo)
            last_save = time.monotonic()
    save(tuple(range(N - n, N)))
    return reps


# -- full circuits ---------------------------------------------------------------------------

def enumerate_full_circuit_orbits(rs: RootSystem, bases: Sequence[OrbitRep] | None = None,
                                  budget: int = DEFAULT_BUDGET, long_running: bool = False) -> list[OrbitRep]:
    """Full circuits found inside ``B + {alpha}`` for basis representatives ``B``."""
    if bases is None:
        bases = enumerate_basis_orbits(rs, budget, long_running)
    action = _MaskAction(rs)
    order = rs.order()
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    reps: dict[tuple[int, ...], OrbitRep] = {}
    for b in bases:
        in_b = set(b.members)
        for alpha in range(rs.N):
            if alpha in in_b:
                continue
            c = unique_circuit_in(rs, list(b.members) + [alpha])
            if len(c.members) != rs.rank + 1 or c.members in seen:
                continue
            if not is_full(rs, c):
                seen[c.members] = ()
                continue
            canon, size = action.canonical(c.members, budget)
            seen[c.members] = canon
            if canon not in reps:
                circ = unique_circuit_in(rs, canon)
                reps[canon] = OrbitRep(canon, size, order // size, circ)
    return sorted(reps.values(), key=lambda r: r.members)


def verify_acuteness_lemma(rs: RootSystem, circuits: Sequence[OrbitRep]) -> tuple[list[dict], list[tuple[int, ...]]]:
    """Acuteness summaries per representative and the list of violations."""
    rows, bad = [], []
    for rep in circuits:
        circ = rep.circuit or unique_circuit_in(rs, rep.members)
        g = acuteness_graph(rs, circ)
        summ = g.summary()
        summ["obtuseness_connected"] = obtuseness_connected(g)
        rep.acuteness = summ
        rows.append({"members": list(rep.members), **summ})
        if not gamma_disconnected(g):
            bad.append(rep.members)
    return rows, bad


def classify(rs: RootSystem, budget: int = DEFAULT_BUDGET, long_running: bool = False,
             checkpoint: Path | None = None) -> ClassificationReport:
    t0 = time.monotonic()
    bases = enumerate_basis_orbits(rs, budget, long_running, checkpoint)
    circuits = enumerate_full_circuit_orbits(rs, bases, budget, long_running)
    _, bad = verify_acuteness_lemma(rs, circuits)
    return ClassificationReport(str(rs.tag), bases, circuits, bad, time.monotonic() - t0)


def dot_atlas(rs: RootSystem, report: ClassificationReport) -> str:
    parts = []
    for k, rep in enumerate(report.circuits):
        circ = rep.circuit or unique_circuit_in(rs, rep.members)
        parts.append(to_dot(acuteness_graph(rs, circ), name=f"{report.type_tag} circuit {k}"))
    return "".join(parts)
