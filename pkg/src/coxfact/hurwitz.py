"""Hurwitz moves on reflection factorizations and on m-dependences.

A factorization is a tuple of positive-root indices ``(t_1, ..., t_m)`` whose
product ``t_1 t_2 ... t_m`` is taken with the convention of
:mod:`coxfact.rootsys` (rightmost factor acts first).  Positions are
1-based in every public function here, as in move traces: ``+i`` stands for
``sigma_i`` and ``-i`` for its inverse, where

* ``sigma_i``: ``(t_i, t_{i+1}) -> (t_{i+1}, t_i^{t_{i+1}})``
* ``sigma_i^-1``: ``(t_i, t_{i+1}) -> (t_{i+1}^{t_i^-1}, t_i)`` (reflections are involutions)

with ``a^b = b^-1 a b``.  Both preserve the product.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import dihedral, linalg
from .circuits import MDependence, NotACircuitError, acuteness_graph, find_dependence
from .rootsys import GroupElement, RootSystem
from .scalar import GoldenInt

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7
Factorization = tuple  # tuple of positive-root indices


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, partial=None) -> None:
        super().__init__(message)
        self.partial = partial


class LemmaViolation(AssertionError):
    """A guarantee of the reduction argument failed: this is a bug."""


# -- moves on factorizations ---------------------------------------------------

def _check_position(t: Sequence, i: int) -> None:
    if not 1 <= i < len(t):
        raise IndexError(f"position {i} out of range for a factorization of length {len(t)}")


def sigma(rs: RootSystem, t: Sequence[int], i: int) -> Factorization:
    _check_position(t, i)
    a, b = t[i - 1], t[i]
    return tuple(t[: i - 1]) + (b, rs.line_refl[b][a]) + tuple(t[i + 1:])


def sigma_inv(rs: RootSystem, t: Sequence[int], i: int) -> Factorization:
    _check_position(t, i)
    a, b = t[i - 1], t[i]
    return tuple(t[: i - 1]) + (rs.line_refl[a][b], a) + tuple(t[i + 1:])


def apply_move(rs: RootSystem, t: Sequence[int], move: int) -> Factorization:
    return sigma(rs, t, move) if move > 0 else sigma_inv(rs, t, -move)


def replay(rs: RootSystem, t: Sequence[int], trace: Iterable[int]) -> Factorization:
    t = tuple(t)
    for mv in trace:
        t = apply_move(rs, t, mv)
    return t


def product(rs: RootSystem, t: Sequence[int]) -> GroupElement:
    return rs.product(t)


def class_multiset(rs: RootSystem, t: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Sorted ``(class id, count)`` pairs."""
    return tuple(sorted(Counter(rs.class_of(a) for a in t).items()))


def _shift(trace: Iterable[int], offset: int) -> list[int]:
    return [mv + offset if mv > 0 else mv - offset for mv in trace]


def move_to_prefix(rs: RootSystem, t: Sequence[int], positions: Sequence[int]) -> tuple[Factorization, list[int]]:
    """Bring the factors at ``positions`` (1-based, increasing) to the front in order."""
    positions = list(positions)
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise ValueError("positions must be strictly increasing")
    if positions and not (1 <= positions[0] and positions[-1] <= len(t)):
        raise IndexError("position out of range")
    t = tuple(t)
    trace: list[int] = []
    for target, p in enumerate(positions, start=1):
        # earlier moves leave later selected factors in place
        for k in range(p - 1, target - 1, -1):
            t = sigma(rs, t, k)
            trace.append(k)
    return t, trace


# -- reflection length ------------------------------------------------------------

def reflection_length(rs: RootSystem, w: GroupElement) -> int:
    """Rank of ``1 - w`` on the simple-root basis."""
    if w == rs.identity:
        return 0
    if not rs.has_coordinates:
        return 1 if rs.reflection_of(w) is not None else 2
    n = rs.rank
    cols = [rs.simple_coefficients(w[s]) for s in rs.simple]
    rows = [[(1 if r == c else 0) - cols[c][r] for c in range(n)] for r in range(n)]
    return linalg.rank(rows)


def reflection_length_table(rs: RootSystem, budget: int = DEFAULT_BUDGET) -> dict:
    """Word length in the reflections for every group element, by BFS."""
    dist = {rs.identity: 0}
    queue = deque([rs.identity])
    refl = rs.refl
    while queue:
        g = queue.popleft()
        d = dist[g]
        for r in refl:
            h = tuple(g[x] for x in r)
            if h not in dist:
                dist[h] = d + 1
                if len(dist) > budget:
                    raise BudgetExceeded("group too large for BFS")
                queue.append(h)
    return dist


def first_dependent_prefix(rs: RootSystem, t: Sequence[int]) -> int | None:
    """Smallest ``j`` with ``alpha_1, ..., alpha_j`` dependent (1-based)."""
    if not rs.has_coordinates:
        seen = []
        for j, a in enumerate(t, start=1):
            if a in seen or len(seen) == 2:
                return j
            seen.append(a)
        return None
    rows: list[list] = []
    for j, a in enumerate(t, start=1):
        rows.append(list(rs.coords[a]))
        if linalg.rank(rows) < j:
            return j
    return None


# -- lifted moves on m-dependences ----------------------------------------------------

def lifted_sigma(rs: RootSystem, d: MDependence, i: int) -> MDependence:
    _check_position(d.roots, i)
    a, b = d.roots[i - 1], d.roots[i]
    ca, cb = d.coeffs[i - 1], d.coeffs[i]
    roots = d.roots[: i - 1] + (b, rs.refl[rs.line(b)][a]) + d.roots[i + 1:]
    coeffs = d.coeffs[: i - 1] + (cb + rs.cartan(a, b) * ca, ca) + d.coeffs[i + 1:]
    return MDependence(roots, coeffs)


def lifted_sigma_inv(rs: RootSystem, d: MDependence, i: int) -> MDependence:
    _check_position(d.roots, i)
    a, b = d.roots[i - 1], d.roots[i]
    ca, cb = d.coeffs[i - 1], d.coeffs[i]
    roots = d.roots[: i - 1] + (rs.refl[rs.line(a)][b], a) + d.roots[i + 1:]
    coeffs = d.coeffs[: i - 1] + (cb, ca + rs.cartan(b, a) * cb) + d.coeffs[i + 1:]
    return MDependence(roots, coeffs)


def lifted_move(rs: RootSystem, d: MDependence, move: int) -> MDependence:
    return lifted_sigma(rs, d, move) if move > 0 else lifted_sigma_inv(rs, d, -move)


def epsilon(rs: RootSystem, d: MDependence, i: int) -> MDependence:
    """Negate the ``i``-th root and coefficient."""
    if not 1 <= i <= len(d.roots):
        raise IndexError(i)
    roots = list(d.roots)
    coeffs = list(d.coeffs)
    roots[i - 1] = rs.neg(roots[i - 1])
    coeffs[i - 1] = -coeffs[i - 1]
    return MDependence(tuple(roots), tuple(coeffs))


def weight(d: MDependence):
    return d.weight()


def is_dependence(rs: RootSystem, d: MDependence) -> bool:
    dim = rs.ambient_dim
    total = [0] * dim
    for r, c in zip(d.roots, d.coeffs):
        if c:
            total = [x + c * y for x, y in zip(total, rs.coords[r])]
    return not any(total)


def pair_sign(rs: RootSystem, d: MDependence, i: int, j: int) -> int:
    """Sign of ``<c_i alpha_i, c_j alpha_j>`` (0-based positions)."""
    from .scalar import sign

    return sign(d.coeffs[i]) * sign(d.coeffs[j]) * rs.ip_sign(d.roots[i], d.roots[j])


def _lower(rs: RootSystem, d: MDependence, k: int) -> tuple[MDependence, list[int]]:
    """Apply whichever of sigma_k, sigma_k^-1 lowers the weight (1-based k)."""
    w = d.weight()
    for mv in (k, -k):
        d2 = lifted_move(rs, d, mv)
        if d2.weight() < w:
            return d2, [mv]
    raise LemmaViolation(f"obtuse pair at position {k} lowers no weight: {d}")


def reduce_weight_step(rs: RootSystem, d: MDependence) -> tuple[MDependence, list[int]]:
    """One weight-lowering step, possibly after commuting orthogonal neighbours."""
    m = len(d.roots)
    if m < 3:
        raise ValueError("need at least three roots")
    if not all(d.coeffs):
        raise ValueError("all coefficients must be nonzero")
    for k in range(m - 1):
        if pair_sign(rs, d, k, k + 1) < 0:
            return _lower(rs, d, k + 1)
    g = acuteness_graph(rs, d)
    comps = g.components()
    if len(comps) < 2:
        raise LemmaViolation(f"connected acuteness graph for {d}")
    comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}
    cross = [(p, q) for p, q in sorted(g.obtuse) if comp_of[p] != comp_of[q]]
    if not cross:
        raise LemmaViolation(f"no obtuse pair across components for {d}")
    p, q = cross[0]
    left = set(comps[comp_of[p]])  # moves right past the rest
    # sort to (rest..., left...) by swapping adjacent (left, rest) pairs
    trace: list[int] = []
    order = list(range(m))
    while True:
        k = next((k for k in range(m - 1) if order[k] in left and order[k + 1] not in left), None)
        if k is None:
            raise LemmaViolation(f"sorting finished without an obtuse swap for {d}")
        s = pair_sign(rs, d, k, k + 1)
        if s > 0:
            raise LemmaViolation("acute pair across components")
        if s < 0:
            d2, tr = _lower(rs, d, k + 1)
            return d2, trace + tr
        d = lifted_sigma(rs, d, k + 1)
        trace.append(k + 1)
        order[k], order[k + 1] = order[k + 1], order[k]


# -- the main reduction ---------------------------------------------------------------

def _dihedral_lift(rs: RootSystem, lines: Iterable[int]) -> dict[int, int]:
    """Map the reflections of the rank-two subsystem containing ``lines`` to integers.

    ``t(n) = (s_g s_d)^n s_g`` for a generating pair ``(g, d)``.
    """
    closure = sorted(rs.subsystem_closure(lines))
    size = len(closure)
    pairs = []
    if all(s in closure for s in rs.simple) and rs.rank == 2:
        pairs.append(tuple(rs.simple))
    pairs += [(g, d) for g in closure for d in closure if g != d]
    for g, d in pairs:
        rot = rs.compose(rs.refl[g], rs.refl[d])
        if rs.element_order(rot) == size:
            break
    else:
        raise LemmaViolation(f"no generating pair in rank-two subsystem {closure}")
    lift: dict[int, int] = {}
    x = rs.refl[g]
    for n in range(size):
        lift[rs.reflection_of(x)] = n
        x = rs.compose(rot, x)
    return lift


def reduce_dihedral(rs: RootSystem, t: Sequence[int]) -> tuple[Factorization, list[int]]:
    """A triple in a rank-two subsystem, moved until two entries coincide."""
    lift = _dihedral_lift(rs, t)
    ints = tuple(lift[a] for a in t)
    _, trace, _ = dihedral.reduce_triple(ints)
    out = replay(rs, t, trace)
    inv = {n: a for a, n in lift.items()}
    final = dihedral.replay(ints, trace)
    if tuple(inv[n % len(lift)] for n in final) != out:
        raise LemmaViolation("dihedral projection does not commute with the moves")
    return out, trace


def main_lemma_step(rs: RootSystem, t: Sequence[int], max_steps: int = 100000) -> tuple[Factorization, list[int], int]:
    """A Hurwitz-equivalent factorization whose length-``k`` prefix is not reduced.

    Requires ``reflection_length(product(t)) < len(t)``.  Returns the new
    factorization, the move trace and ``k`` (``k <= m - 1`` unless ``m == 2``).
    """
    t = tuple(t)
    m = len(t)
    if reflection_length(rs, rs.product(t)) >= m:
        raise ValueError("the factorization is already shortest")
    if m == 2:
        return t, [], 2
    j = first_dependent_prefix(rs, t)
    coeffs = find_dependence(rs, t[:j])
    positions = [p + 1 for p, c in enumerate(coeffs) if c]
    if len(positions) < m:
        t2, trace = move_to_prefix(rs, t, positions)
        return t2, trace, len(positions)
    if m == 3:
        t2, trace = reduce_dihedral(rs, t)
        equal = next((p, q) for p in range(3) for q in range(p + 1, 3) if t2[p] == t2[q])
        t3, tr2 = move_to_prefix(rs, t2, [equal[0] + 1, equal[1] + 1])
        return t3, trace + tr2, 2
    d = MDependence(t, tuple(coeffs))
    trace: list[int] = []
    steps = 0
    while all(d.coeffs):
        d, tr = reduce_weight_step(rs, d)
        trace += tr
        steps += 1
        if steps > max_steps:
            raise LemmaViolation(f"weight reduction did not reach a vanishing coefficient from {t}")
    t2 = replay(rs, t, trace)
    if tuple(rs.line(r) for r in d.roots) != t2:
        raise LemmaViolation("lifted moves disagree with the factorization moves")
    support = [p + 1 for p in d.support()]
    t3, tr2 = move_to_prefix(rs, t2, support)
    return t3, trace + tr2, len(support)


def standard_form(rs: RootSystem, t: Sequence[int]) -> tuple[Factorization, list[int]]:
    """Leading equal pairs followed by a shortest factorization of the product."""
    t = tuple(t)
    m = len(t)
    ell = reflection_length(rs, rs.product(t))
    if (m - ell) % 2:
        raise ValueError(f"length {m} and reflection length {ell} have different parity")
    trace: list[int] = []
    offset = 0
    while m - offset > ell:
        seg = t[offset:]
        i = first_dependent_prefix(rs, seg)
        while i > 2:
            sub, tr, _ = main_lemma_step(rs, seg[:i])
            seg = sub + seg[i:]
            trace += _shift(tr, offset)
            i = first_dependent_prefix(rs, seg)
        t = t[:offset] + seg
        if t[offset] != t[offset + 1]:
            raise LemmaViolation("dependent pair with distinct reflections")
        offset += 2
    return t, trace


def is_standard_form(rs: RootSystem, t: Sequence[int]) -> bool:
    ell = reflection_length(rs, rs.product(t))
    k = len(t) - ell
    if k % 2:
        return False
    pairs_ok = all(t[p] == t[p + 1] for p in range(0, k, 2))
    suffix = t[k:]
    return pairs_ok and reflection_length(rs, rs.product(suffix)) == len(suffix)


# -- orbits --------------------------------------------------------------------------

@dataclass
class Orbit:
    elements: list  # BFS order, starting with the seed
    parents: dict = field(default_factory=dict)  # element -> (previous element, move)
    complete: bool = True

    def __len__(self) -> int:
        return len(self.elements)

    def trace_to(self, target) -> list[int]:
        moves = []
        x = target
        while self.parents.get(x) is not None:
            x, mv = self.parents[x]
            moves.append(mv)
        return moves[::-1]


def hurwitz_orbit(rs: RootSystem, t: Sequence[int], budget: int = DEFAULT_BUDGET,
                  with_traces: bool = False, strict: bool = False) -> Orbit:
    """BFS closure under all ``sigma_i^{+-1}``.

    When the budget is hit the partial orbit is returned with ``complete=False``
    (or :class:`BudgetExceeded` is raised if ``strict``).
    """
    lr = rs.line_refl
    seed = tuple(t)
    m = len(seed)
    seen = {seed: None}
    queue = deque([seed])
    order = [seed]
    while queue:
        x = queue.popleft()
        for k in range(m - 1):
            a, b = x[k], x[k + 1]
            for mv, pair in ((k + 1, (b, lr[b][a])), (-(k + 1), (lr[a][b], a))):
                y = x[:k] + pair + x[k + 2:]
                if y not in seen:
                    seen[y] = (x, mv) if with_traces else None
                    order.append(y)
                    queue.append(y)
                    if len(order) >= budget:
                        if strict:
                            raise BudgetExceeded("Hurwitz orbit budget exceeded", partial=order)
                        log.warning("Hurwitz orbit truncated at %d elements", len(order))
                        return Orbit(order, seen if with_traces else {}, complete=False)
    return Orbit(order, seen if with_traces else {}, complete=True)


def normalize_signs(rs: RootSystem, d: MDependence) -> MDependence:
    """Flip every negative root to its positive line, negating its coefficient."""
    roots, coeffs = [], []
    for r, c in zip(d.roots, d.coeffs):
        if r >= rs.N:
            r, c = rs.neg(r), -c
        roots.append(r)
        coeffs.append(c)
    return MDependence(tuple(roots), tuple(coeffs))


def lifted_closure(rs: RootSystem, seeds: Iterable[MDependence], budget: int = DEFAULT_BUDGET) -> set:
    """All sign-normalized m-dependences reachable from ``seeds`` by lifted moves.

    Raises :class:`BudgetExceeded` when more than ``budget`` states appear,
    which is how an unbounded (unit-rescaled) orbit would show up.
    """
    seen: set = set()
    queue: deque = deque()
    for d in seeds:
        d = normalize_signs(rs, d)
        if d not in seen:
            seen.add(d)
            queue.append(d)
    while queue:
        x = queue.popleft()
        for k in range(1, len(x.roots)):
            for mv in (k, -k):
                y = normalize_signs(rs, lifted_move(rs, x, mv))
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
                    if len(seen) > budget:
                        raise BudgetExceeded("lifted closure budget exceeded", partial=seen)
    return seen


def circuit_lifted_closure(rs: RootSystem, members: Sequence[int], budget: int = DEFAULT_BUDGET) -> set:
    """Lifted closure over every ordering of a circuit with its dependence."""
    from itertools import permutations

    from .circuits import as_circuit

    c = as_circuit(rs, members)
    if not c.exact:
        raise ValueError("lifted moves need exact coefficients")
    seen: set = set()
    for perm in permutations(range(len(c.members))):
        d = MDependence(tuple(c.members[p] for p in perm), tuple(c.coeffs[p] for p in perm))
        if d in seen:
            continue
        seen |= lifted_closure(rs, [d], budget - len(seen))
    return seen


@dataclass
class ClosureCheck:
    """Outcome of :func:`circuit_closure_check`."""

    finite: bool
    tuples: int  # distinct root tuples reached
    states: int  # sign-normalized dependences; the lifted closure size when finite
    orbits: int
    witness: tuple | None = None  # a root tuple reached with two coefficient vectors not equal up to sign


def _golden_cartan(rs: RootSystem) -> tuple[np.ndarray, np.ndarray]:
    n = rs.N
    kp = np.zeros((n, n), dtype=np.int64)
    kq = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            g = GoldenInt.from_q5(rs.cartan(a, b))
            kp[a, b], kq[a, b] = g.a, g.b
    return kp, kq


def _golden_coeffs(coeffs: Sequence) -> list[GoldenInt]:
    # scale by the least positive integer making every coefficient integral in Z[phi]
    for scale in range(1, 10**4):
        try:
            return [GoldenInt.from_q5(scale * c) for c in coeffs]
        except ValueError:
            continue
    raise ValueError("coefficients have no small common denominator")


def _golden_moves(lines, cp, cq, kp, kq, line, flip):
    """All lifted moves of a batch of sign-normalized states, stacked move by move."""
    out_l, out_p, out_q = [], [], []
    for i in range(lines.shape[1] - 1):
        a, b = lines[:, i], lines[:, i + 1]
        pa, qa, pb, qb = cp[:, i], cq[:, i], cp[:, i + 1], cq[:, i + 1]
        # sigma: (a, b) -> (b, s_b(a)), coefficients (cb + K(a,b) ca, ca)
        l2, p2, q2 = lines.copy(), cp.copy(), cq.copy()
        x, y, s = kp[a, b], kq[a, b], np.where(flip[b, a], -1, 1)
        l2[:, i], l2[:, i + 1] = b, line[b, a]
        p2[:, i] = pb + x * pa + y * qa
        q2[:, i] = qb + x * qa + y * pa + y * qa
        p2[:, i + 1], q2[:, i + 1] = s * pa, s * qa
        out_l.append(l2), out_p.append(p2), out_q.append(q2)
        # inverse: (a, b) -> (s_a(b), a), coefficients (cb, ca + K(b,a) cb)
        l2, p2, q2 = lines.copy(), cp.copy(), cq.copy()
        x, y, s = kp[b, a], kq[b, a], np.where(flip[a, b], -1, 1)
        l2[:, i], l2[:, i + 1] = line[a, b], a
        p2[:, i], q2[:, i] = s * pb, s * qb
        p2[:, i + 1] = pa + x * pb + y * qb
        q2[:, i + 1] = qa + x * qb + y * pb + y * qb
        out_l.append(l2), out_p.append(p2), out_q.append(q2)
    return np.concatenate(out_l), np.concatenate(out_p), np.concatenate(out_q)


def _sign_match(p1, q1, p2, q2) -> tuple[np.ndarray, np.ndarray]:
    same = np.all((p1 == p2) & (q1 == q2), axis=1)
    opposite = np.all((p1 == -p2) & (q1 == -q2), axis=1)
    return same, opposite


def circuit_closure_check(rs: RootSystem, members: Sequence[int], budget: int = DEFAULT_BUDGET) -> ClosureCheck:
    """Decide whether the lifted closure of a full circuit, over every ordering, is finite.

    Hurwitz moves keep the generated reflection subgroup, so every root tuple
    reached from a full circuit spans the space and carries a dependence unique
    up to scale.  The closure is finite iff each root tuple is only reached with
    one coefficient vector up to sign; any other ratio is a unit of absolute
    value different from 1, and the loop producing it repeats without end.
    The search runs over root tuples with coefficients as Z[phi] integer pairs,
    batched with numpy.  ``budget`` bounds the number of root tuples.
    """
    from itertools import permutations

    from .circuits import as_circuit

    c = as_circuit(rs, members)
    if not c.exact:
        raise ValueError("lifted moves need exact coefficients")
    n, m = rs.N, len(c.members)
    if float(n) ** m >= 2.0**62:
        raise ValueError("root tuples do not fit a 64-bit key")
    kp, kq = _golden_cartan(rs)
    line = np.array([[rs.line(rs.refl[b][a]) for a in range(n)] for b in range(n)], dtype=np.int64)
    flip = np.array([[rs.refl[b][a] >= n for a in range(n)] for b in range(n)])
    radix = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    gold = _golden_coeffs(c.coeffs)

    store: list[list] = []  # per orbit: sorted keys, row order, p coords, q coords, both signs counted
    tuples = states = 0

    def failure(witness) -> ClosureCheck:
        return ClosureCheck(False, tuples, 0, len(store) + 1,
                            None if witness is None else tuple(int(v) for v in witness))

    for perm in permutations(range(m)):
        sl = np.array([[c.members[p] for p in perm]], dtype=np.int64)
        sp = np.array([[gold[p].a for p in perm]], dtype=np.int32)
        sq = np.array([[gold[p].b for p in perm]], dtype=np.int32)
        key = int((sl @ radix)[0])
        known = False
        for entry in store:
            ks, order, ps, qs, both = entry
            j = int(np.searchsorted(ks, key))
            if j < len(ks) and ks[j] == key:
                row = order[j]
                same, opposite = _sign_match(sp, sq, ps[row][None], qs[row][None])
                if not (same[0] or opposite[0]):
                    return failure(sl[0])
                if not same[0] and not both:
                    states += len(ks)  # this ordering seeds the negated copy of the orbit
                    entry[4] = True
                known = True
                break
        if known:
            continue
        vk, vp, vq = sl @ radix, sp, sq
        fl, fp, fq = sl, sp, sq
        negated = False
        while len(fl):
            cl, cp, cq = _golden_moves(fl, fp, fq, kp, kq, line, flip)
            if max(np.abs(cp).max(), np.abs(cq).max()) > 2**30:
                return failure(None)  # runaway growth is itself a rescaling loop
            cp, cq = cp.astype(np.int32), cq.astype(np.int32)
            ck = cl @ radix
            order = np.argsort(ck, kind="stable")
            ck, cl, cp, cq = ck[order], cl[order], cp[order], cq[order]
            # candidates sharing a root tuple must agree up to sign
            dup = np.nonzero(ck[1:] == ck[:-1])[0]
            same, opposite = _sign_match(cp[dup], cq[dup], cp[dup + 1], cq[dup + 1])
            bad = ~(same | opposite)
            if bad.any():
                return failure(cl[dup[bad][0]])
            negated |= bool((opposite & ~same).any())
            first = np.ones(len(ck), dtype=bool)
            first[1:] = ck[1:] != ck[:-1]
            ck, cl, cp, cq = ck[first], cl[first], cp[first], cq[first]
            # and with the tuples this orbit already holds
            vorder = np.argsort(vk, kind="stable")
            sk = vk[vorder]
            j = np.minimum(np.searchsorted(sk, ck), len(sk) - 1)
            found = sk[j] == ck
            rows = vorder[j[found]]
            same, opposite = _sign_match(cp[found], cq[found], vp[rows], vq[rows])
            bad = ~(same | opposite)
            if bad.any():
                return failure(cl[found][bad][0])
            negated |= bool((opposite & ~same).any())
            fresh = ~found
            fl, fp, fq = cl[fresh], cp[fresh], cq[fresh]
            vk = np.concatenate([vk, ck[fresh]])
            vp = np.concatenate([vp, fp])
            vq = np.concatenate([vq, fq])
            if tuples + len(vk) > budget:
                raise BudgetExceeded("closure check budget exceeded", partial=tuples + len(vk))
        vorder = np.argsort(vk, kind="stable")
        store.append([vk[vorder], vorder, vp, vq, negated])
        tuples += len(vk)
        # once a state meets its negative, linearity puts every negative in the orbit
        states += len(vk) * (2 if negated else 1)
        log.debug("closure orbit %d: %d tuples", len(store), len(vk))
    return ClosureCheck(True, tuples, states, len(store))


def enumerate_factorizations(rs: RootSystem, w: GroupElement, m: int,
                             budget: int = DEFAULT_BUDGET) -> list[Factorization]:
    """All ``(t_1, ..., t_m)`` with ``t_1 ... t_m = w``, in lexicographic order."""
    if m == 0:
        return [()] if w == rs.identity else []
    out: list[Factorization] = []
    refl = rs.refl
    inverse = rs.inverse
    nodes = 0

    def dfs(prefix: list[int], g: GroupElement) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("factorization enumeration budget exceeded", partial=out)
        if len(prefix) == m - 1:
            rest = rs.compose(inverse(g), w)
            last = rs.reflection_of(rest)
            if last is not None:
                out.append(tuple(prefix) + (last,))
            return
        for a in range(rs.N):
            prefix.append(a)
            dfs(prefix, tuple(g[x] for x in refl[a]))
            prefix.pop()

    dfs([], rs.identity)
    return out


def verify_theorem(rs: RootSystem, c: GroupElement, m: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Compare the Hurwitz orbits of length-``m`` factorizations of ``c`` with class multisets."""
    facts = enumerate_factorizations(rs, c, m, budget)
    remaining = set(facts)
    orbits = []
    consistent = True
    for f in facts:
        if f not in remaining:
            continue
        orb = hurwitz_orbit(rs, f, budget=budget, strict=True)
        members = set(orb.elements)
        if not members <= remaining:
            consistent = False
        remaining -= members
        multisets = {class_multiset(rs, x) for x in orb.elements}
        if len(multisets) != 1:
            consistent = False
        orbits.append({
            "size": len(orb),
            "multiset": {str(cid): cnt for cid, cnt in sorted(multisets.pop())},
            "witness": list(f),
        })
    keys = [tuple(sorted(o["multiset"].items())) for o in orbits]
    agreement = consistent and len(set(keys)) == len(keys)
    return {
        "type": str(rs.tag),
        "length": m,
        "classes": [list(cl) for cl in rs.reflection_classes()],
        "total_factorizations": len(facts),
        "orbits": orbits,
        "agreement": agreement,
    }


# -- shortest factorizations and quasi-Coxeter elements ----------------------------------

def shortest_factorizations(rs: RootSystem, w: GroupElement, limit: int | None = None,
                            budget: int = DEFAULT_BUDGET) -> list[Factorization]:
    ell = reflection_length(rs, w)
    out: list[Factorization] = []
    nodes = 0

    def dfs(prefix: list[int], g: GroupElement, left: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("shortest factorization search exceeded its budget", partial=out)
        if left == 0:
            out.append(tuple(prefix))
            return limit is not None and len(out) >= limit
        for a in range(rs.N):
            h = rs.compose(rs.refl[a], g)
            if reflection_length(rs, h) == left - 1:
                prefix.append(a)
                if dfs(prefix, h, left - 1):
                    return True
                prefix.pop()
        return False

    dfs([], w, ell)
    return out


def is_quasi_coxeter(rs: RootSystem, w: GroupElement, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether some shortest factorization of ``w`` has factors generating the group."""
    ell = reflection_length(rs, w)
    if ell < rs.rank:
        return False
    seen: set = set()
    nodes = 0

    def dfs(g: GroupElement, chosen: frozenset, left: int) -> bool:
        nonlocal nodes
        if left == 0:
            return len(rs.subsystem_closure(chosen)) == rs.N
        key = (g, chosen)
        if key in seen:
            return False
        seen.add(key)
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("quasi-Coxeter search exceeded its budget")
        for a in range(rs.N):
            h = rs.compose(rs.refl[a], g)
            if reflection_length(rs, h) == left - 1 and dfs(h, chosen | {a}, left - 1):
                return True
        return False

    return dfs(w, frozenset(), ell)
