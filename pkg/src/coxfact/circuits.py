"""Circuits of root systems, their dependences and acuteness graphs.

A circuit is an inclusion-minimal linearly dependent set of roots.  Circuits
are identified by the lines they span, so members are positive-root indices.
The coefficients of the (unique up to scaling) dependence are normalized so
that the smallest member has coefficient +1.

Classical types B/C/D are also handled through signed graphs on the vertex
set {1..n}: ``e_i - e_j`` is a plus edge, ``e_i + e_j`` a minus edge and
``2e_i`` (or ``e_i``) a minus self-loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from . import linalg
from .rootsys import RootSystem, RootSystemError
from .scalar import exact_div, sign, to_json


class NotACircuitError(ValueError):
    """The roots are dependent but do not carry a unique dependence."""


class DependenceError(ValueError):
    pass


# -- dependences ----------------------------------------------------------------

@dataclass(frozen=True)
class Circuit:
    members: tuple[int, ...]  # sorted positive-root indices
    coeffs: tuple  # aligned with members; members[0] has +1
    exact: bool = True  # False in the dihedral angle model: coeffs are signs only

    def __len__(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "members": list(self.members),
            "coeffs": [to_json(c) for c in self.coeffs],
            "exact": self.exact,
        }


@dataclass(frozen=True)
class MDependence:
    """Ordered roots (full indices, so signs are explicit) with coefficients."""

    roots: tuple[int, ...]
    coeffs: tuple

    def __len__(self) -> int:
        return len(self.roots)

    def weight(self):
        total = 0
        for c in self.coeffs:
            total = total + abs(c)
        return total

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.coeffs) if c)


def _normalize(coeffs: list) -> tuple:
    lead = next(c for c in coeffs if c)
    return tuple(exact_div(c, lead) if c else 0 for c in coeffs)


def _vectors(rs: RootSystem, roots: Sequence[int]) -> list:
    if not rs.has_coordinates:
        raise RootSystemError(f"{rs.tag} uses the angle model; no coordinates")
    return [rs.coords[r] for r in roots]


def _angle_dependence(rs: RootSystem, roots: Sequence[int]):
    """Dependence signs for the angle model (coefficients up to positive scaling)."""
    m = rs.N
    k = len(roots)
    lines = [rs.line(r) for r in roots]
    distinct = len(set(lines))
    nullity = k - min(2, distinct)
    if nullity == 0:
        return None
    if nullity > 1:
        raise NotACircuitError(f"kernel of dimension {nullity}")
    if distinct < k:
        # the only dependence is between the two copies of one line
        p = next(p for p in range(k) if lines[p] in lines[:p])
        q = lines.index(lines[p])
        raw = [0] * k
        raw[q] = 1
        raw[p] = -rs.root_sign(roots[p]) * rs.root_sign(roots[q])
        return _normalize(raw)

    def sin_sign(a: int, b: int) -> int:
        # sign of det(root a, root b) = sign of sin((b - a) pi / m)
        d = (b - a) % (2 * m)
        return 0 if d % m == 0 else (1 if d < m else -1)

    a, b, c = roots
    raw = [sin_sign(b, c), sin_sign(c, a), sin_sign(a, b)]
    return _normalize(raw)


def find_dependence(rs: RootSystem, roots: Sequence[int]):
    """Coefficients of the dependence among ``roots``, or ``None`` if independent.

    Raises :class:`NotACircuitError` when the kernel has dimension two or more.
    In the dihedral angle model the coefficients are signs only.
    """
    roots = list(roots)
    if not roots:
        return None
    if not rs.has_coordinates:
        return _angle_dependence(rs, roots)
    basis = linalg.kernel(_vectors(rs, roots))
    if not basis:
        return None
    if len(basis) > 1:
        raise NotACircuitError(f"kernel of dimension {len(basis)}")
    return _normalize(basis[0])


def is_circuit(rs: RootSystem, roots: Sequence[int]) -> bool:
    try:
        dep = find_dependence(rs, roots)
    except NotACircuitError:
        return False
    return dep is not None and all(dep)


def as_circuit(rs: RootSystem, lines: Iterable[int]) -> Circuit:
    members = tuple(sorted(rs.line(x) for x in lines))
    dep = find_dependence(rs, members)
    if dep is None or not all(dep):
        raise DependenceError(f"{members} is not a circuit")
    return Circuit(members, dep, exact=rs.has_coordinates)


def unique_circuit_in(rs: RootSystem, roots: Sequence[int]) -> Circuit:
    """The circuit inside ``B + {alpha}`` for an independent ``B``."""
    roots = [rs.line(r) for r in roots]
    if len(set(roots)) < len(roots):
        raise DependenceError("repeated line")
    dep = find_dependence(rs, roots)
    if dep is None:
        raise DependenceError("the roots are independent")
    pairs = sorted((r, c) for r, c in zip(roots, dep) if c)
    members = tuple(r for r, _ in pairs)
    return Circuit(members, _normalize([c for _, c in pairs]), exact=rs.has_coordinates)


def dependence_of(circuit: Circuit) -> MDependence:
    return MDependence(circuit.members, circuit.coeffs)


# -- acuteness graphs -------------------------------------------------------------

@dataclass(frozen=True)
class AcutenessGraph:
    m: int
    acute: frozenset  # pairs (i, j), i < j
    obtuse: frozenset
    labels: tuple = ()

    def components(self) -> list[list[int]]:
        adj = {v: [] for v in range(self.m)}
        for i, j in self.acute:
            adj[i].append(j)
            adj[j].append(i)
        seen = [False] * self.m
        out = []
        for s in range(self.m):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            out.append(sorted(comp))
        return out

    def degrees(self) -> list[int]:
        deg = [0] * self.m
        for i, j in self.acute:
            deg[i] += 1
            deg[j] += 1
        return deg

    def summary(self) -> dict:
        comps = self.components()
        return {
            "vertices": self.m,
            "acute_edges": len(self.acute),
            "obtuse_edges": len(self.obtuse),
            "components": sorted((len(c) for c in comps), reverse=True),
            "isolated": sum(1 for d in self.degrees() if d == 0),
            "disconnected": len(comps) > 1,
        }


def _pair_sign(rs: RootSystem, r1: int, c1, r2: int, c2) -> int:
    return sign(c1) * sign(c2) * rs.ip_sign(r1, r2)


def acuteness_graph(rs: RootSystem, dep: Circuit | MDependence) -> AcutenessGraph:
    roots, coeffs = (dep.members, dep.coeffs) if isinstance(dep, Circuit) else (dep.roots, dep.coeffs)
    if not all(coeffs):
        raise DependenceError("zero coefficient in dependence")
    acute, obtuse = set(), set()
    for i, j in combinations(range(len(roots)), 2):
        s = _pair_sign(rs, roots[i], coeffs[i], roots[j], coeffs[j])
        if s > 0:
            acute.add((i, j))
        elif s < 0:
            obtuse.add((i, j))
    labels = tuple(_label(rs, r, c) for r, c in zip(roots, coeffs))
    return AcutenessGraph(len(roots), frozenset(acute), frozenset(obtuse), labels)


def vector_acuteness_graph(vectors: Sequence[Sequence], coeffs: Sequence) -> AcutenessGraph:
    """Acuteness graph of arbitrary vectors with a given dependence."""
    acute, obtuse = set(), set()
    for i, j in combinations(range(len(vectors)), 2):
        ip = sum(a * b for a, b in zip(vectors[i], vectors[j]))
        s = sign(coeffs[i]) * sign(coeffs[j]) * sign(ip)
        if s > 0:
            acute.add((i, j))
        elif s < 0:
            obtuse.add((i, j))
    return AcutenessGraph(len(vectors), frozenset(acute), frozenset(obtuse))


def gamma_disconnected(g: AcutenessGraph) -> bool:
    return len(g.components()) > 1


def obtuseness_connected(g: AcutenessGraph) -> bool:
    flipped = AcutenessGraph(g.m, g.obtuse, g.acute)
    return len(flipped.components()) == 1


def is_full(rs: RootSystem, c: Circuit | Iterable[int]) -> bool:
    members = c.members if isinstance(c, Circuit) else c
    return len(rs.subsystem_closure(members)) == rs.N


def _label(rs: RootSystem, r: int, c) -> str:
    return f"{'+' if sign(c) > 0 else ''}{c}({rs.root_label(r)})"


def to_dot(g: AcutenessGraph, name: str = "circuit") -> str:
    """Acute edges solid, obtuse edges dashed."""
    lines = [f'graph "{name}" {{']
    for v in range(g.m):
        label = g.labels[v] if g.labels else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for i, j in sorted(g.acute):
        lines.append(f"  {i} -- {j};")
    for i, j in sorted(g.obtuse):
        lines.append(f"  {i} -- {j} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- exhaustive enumeration --------------------------------------------------------

class _Span:
    """Incrementally maintained row-reduced basis, remembering combinations."""

    def __init__(self) -> None:
        self.rows: list[tuple[int, list, dict]] = []  # (pivot, vector, combination)

    def reduce(self, v: Sequence, tag: int) -> tuple[list, dict]:
        v = list(v)
        comb = {tag: 1}
        for piv, row, rc in self.rows:
            f = v[piv]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
                for k, c in rc.items():
                    comb[k] = comb.get(k, 0) - f * c
        return v, comb

    def push(self, v: list, comb: dict) -> None:
        piv = next(i for i, x in enumerate(v) if x)
        p = v[piv]
        v = [exact_div(x, p) if x else 0 for x in v]
        comb = {k: exact_div(c, p) for k, c in comb.items()}
        # keep rows fully reduced against the new pivot
        new_rows = []
        for q, row, rc in self.rows:
            f = row[piv]
            if f:
                row = [x - f * y for x, y in zip(row, v)]
                rc = dict(rc)
                for k, c in comb.items():
                    rc[k] = rc.get(k, 0) - f * c
            new_rows.append((q, row, rc))
        new_rows.append((piv, v, comb))
        self.rows = new_rows


def enumerate_circuits(rs: RootSystem, max_size: int | None = None) -> Iterator[Circuit]:
    """Every circuit of positive-root lines, each exactly once."""
    N = rs.N
    if not rs.has_coordinates:
        for triple in combinations(range(N), 3):
            yield as_circuit(rs, triple)
        return
    limit = rs.rank + 1 if max_size is None else max_size
    vecs = rs.coords

    def dfs(chosen: list[int], span: _Span):
        for a in range((chosen[-1] + 1) if chosen else 0, N):
            residual, comb = span.reduce(vecs[a], a)
            if any(residual):
                if len(chosen) + 1 < limit:
                    child = _Span()
                    child.rows = list(span.rows)
                    child.push(residual, comb)
                    yield from dfs(chosen + [a], child)
            else:
                support = {k: c for k, c in comb.items() if c}
                if len(support) == len(chosen) + 1:
                    members = tuple(sorted(support))
                    yield Circuit(members, _normalize([support[k] for k in members]))

    yield from dfs([], _Span())


# -- signed graphs ------------------------------------------------------------------

@dataclass(frozen=True)
class SignedGraph:
    n: int
    edges: tuple  # (i, j, sign) with 1 <= i <= j <= n; loops have sign -1

    def vertices(self) -> set[int]:
        vs = set()
        for i, j, _ in self.edges:
            vs.add(i)
            vs.add(j)
        return vs


def _classical(rs: RootSystem) -> None:
    if rs.tag.family not in "BCD":
        raise RootSystemError(f"signed graphs need a type B/C/D system, got {rs.tag}")


def root_edge(rs: RootSystem, r: int) -> tuple[int, int, int]:
    _classical(rs)
    v = rs.coords[r]
    nz = [(k + 1, x) for k, x in enumerate(v) if x]
    if len(nz) == 1:
        return (nz[0][0], nz[0][0], -1)
    (i, a), (j, b) = nz
    return (i, j, 1 if a * b < 0 else -1)


def to_signed_graph(rs: RootSystem, roots: Iterable[int]) -> SignedGraph:
    return SignedGraph(rs.rank, tuple(root_edge(rs, r) for r in roots))


def edge_root(rs: RootSystem, e: tuple[int, int, int]) -> int:
    _classical(rs)
    i, j, s = e
    v = [0] * rs.rank
    if i == j:
        if s != -1:
            raise ValueError("self-loops carry a minus sign")
        if rs.tag.family == "D":
            raise RootSystemError("type D has no self-loops")
        v[i - 1] = 1
    else:
        v[i - 1] = 1
        v[j - 1] = -1 if s > 0 else 1
    return rs.find_line(v)


def from_signed_graph(rs: RootSystem, sg: SignedGraph) -> list[int]:
    return [edge_root(rs, e) for e in sg.edges]


def switch(sg: SignedGraph, k: int) -> SignedGraph:
    """Toggle the sign of every non-loop edge at ``k``."""
    out = []
    for i, j, s in sg.edges:
        if i != j and k in (i, j):
            s = -s
        out.append((i, j, s))
    return SignedGraph(sg.n, tuple(out))


def _adjacency(edges: Sequence) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx, (i, j, _) in enumerate(edges):
        adj.setdefault(i, []).append((j, idx))
        if i != j:
            adj.setdefault(j, []).append((i, idx))
    return adj


def _degree(edges: Sequence) -> dict[int, int]:
    deg: dict[int, int] = {}
    for i, j, _ in edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    return deg


def _spanning_tree(edges: Sequence) -> tuple[dict, dict, list[int]] | None:
    """BFS tree: parent vertex, parent edge, and the non-tree edge indices."""
    adj = _adjacency(edges)
    root = min(adj)
    parent, pedge = {root: None}, {root: None}
    queue = [root]
    tree = set()
    for v in queue:
        for u, idx in adj[v]:
            if u not in parent:
                parent[u] = v
                pedge[u] = idx
                tree.add(idx)
                queue.append(u)
    if len(parent) != len(adj):
        return None
    return parent, pedge, [k for k in range(len(edges)) if k not in tree]


def _tree_path_edges(parent: dict, pedge: dict, u: int, v: int) -> set[int]:
    anc = {}
    x, d = u, 0
    while x is not None:
        anc[x] = d
        x, d = parent[x], d + 1
    out = set()
    y = v
    while y not in anc:
        out.add(pedge[y])
        y = parent[y]
    x = u
    while x != y:
        out.add(pedge[x])
        x = parent[x]
    return out


def fundamental_cycles(edges: Sequence) -> list[set[int]] | None:
    st = _spanning_tree(edges)
    if st is None:
        return None
    parent, pedge, extra = st
    return [_tree_path_edges(parent, pedge, edges[k][0], edges[k][1]) | {k} for k in extra]


def _balanced(edges: Sequence, cycle: Iterable[int]) -> bool:
    return sum(1 for k in cycle if edges[k][2] < 0) % 2 == 0


def zaslavsky_is_circuit(sg: SignedGraph) -> bool:
    """A balanced cycle, or two edge-disjoint unbalanced cycles joined by a path
    or sharing one vertex (self-loops are unbalanced cycles)."""
    edges = sg.edges
    if not edges:
        return False
    cycles = fundamental_cycles(edges)
    if cycles is None:
        return False
    V, E = len(sg.vertices()), len(edges)
    deg = _degree(edges)
    if E == V:
        return all(d == 2 for d in deg.values()) and _balanced(edges, cycles[0])
    if E == V + 1:
        if min(deg.values()) < 2:
            return False
        c1, c2 = cycles
        return not (c1 & c2) and not _balanced(edges, c1) and not _balanced(edges, c2)
    return False


# -- classical normal forms ----------------------------------------------------------

def standard_circuit_edges(n: int, i: int, j: int) -> list[tuple[int, int, int]]:
    """Signed-graph edges of the representative with cycle sizes ``i <= j``.

    ``i = 1`` (and ``j = 1``) means a self-loop, which only occurs in type C.
    """
    if not (1 <= i <= j and i + j <= n + 1):
        raise ValueError(f"invalid parameters n={n}, i={i}, j={j}")
    edges = []
    if i == 1:
        edges.append((1, 1, -1))
    else:
        edges += [(k, k + 1, 1) for k in range(1, i)]
        edges.append((1, i, -1))
    a, b = i, n - j + 1
    edges += [(k, k + 1, 1) for k in range(a, b)]
    if j == 1:
        edges.append((n, n, -1))
    else:
        edges += [(k, k + 1, 1) for k in range(b, n)]
        edges.append((b, n, -1))
    return edges


def standard_circuit(rs: RootSystem, i: int, j: int) -> Circuit:
    sg = SignedGraph(rs.rank, tuple(standard_circuit_edges(rs.rank, i, j)))
    return as_circuit(rs, from_signed_graph(rs, sg))


def perfect_matchings(n: int, edges: Sequence, limit: int = 2) -> list[list[int]]:
    """Up to ``limit`` perfect matchings of vertices 1..n, as edge-index lists."""
    adj = _adjacency(edges)
    matched = [False] * (n + 1)
    found: list[list[int]] = []
    chosen: list[int] = []

    def rec() -> None:
        if len(found) >= limit:
            return
        v = next((x for x in range(1, n + 1) if not matched[x]), None)
        if v is None:
            found.append(list(chosen))
            return
        matched[v] = True
        for u, idx in adj.get(v, []):
            if u != v and not matched[u]:
                matched[u] = True
                chosen.append(idx)
                rec()
                chosen.pop()
                matched[u] = False
        matched[v] = False

    rec()
    return found


def matching_parity(sg: SignedGraph) -> int:
    """Parity of the minus edges inside the unique perfect matching."""
    ms = perfect_matchings(sg.n, sg.edges, limit=2)
    if len(ms) != 1:
        raise ValueError("the underlying graph has no unique perfect matching")
    return sum(1 for k in ms[0] if sg.edges[k][2] < 0) % 2


@dataclass
class CanonicalForm:
    i: int
    j: int
    parity: int | None  # only in the split case
    signs: frozenset = field(default_factory=frozenset)  # switched vertices
    relabel: dict = field(default_factory=dict)  # old vertex -> new vertex

    @property
    def key(self) -> tuple:
        return (self.i, self.j, self.parity)


def _cycle_walk(edges: Sequence, cycle: set[int], start: int) -> tuple[list[int], list[int]]:
    """Vertices and edges of a cycle, walked from ``start``."""
    cyc = sorted(cycle)
    if len(cyc) == 1:
        return [start], cyc
    verts, path = [start], []
    used = set()
    cur = start
    for _ in range(len(cyc)):
        k = next(k for k in cyc if k not in used and cur in edges[k][:2])
        used.add(k)
        path.append(k)
        i, j, _ = edges[k]
        cur = j if i == cur else i
        verts.append(cur)
    assert verts[-1] == start
    return verts[:-1], path


def classical_canonical_form(rs: RootSystem, c: Circuit | Iterable[int]) -> CanonicalForm:
    """Cycle sizes ``(i, j)`` of a full circuit in type C or D, by switching and relabeling.

    The switching/relabeling is executed explicitly and checked to carry the
    circuit onto the standard representative.  For type D with ``n`` even and
    ``i, j`` odd, the matching parity of the circuit is also returned.
    """
    _classical(rs)
    members = c.members if isinstance(c, Circuit) else tuple(c)
    n = rs.rank
    sg = to_signed_graph(rs, members)
    if not zaslavsky_is_circuit(sg) or len(sg.edges) != n + 1 or sg.vertices() != set(range(1, n + 1)):
        raise DependenceError("not a full circuit")
    if not is_full(rs, members):
        raise DependenceError("not a full circuit")
    edges = [list(e) for e in sg.edges]
    c1, c2 = fundamental_cycles(sg.edges)
    if (len(c1), min(c1)) > (len(c2), min(c2)):
        c1, c2 = c2, c1
    i, j = len(c1), len(c2)

    def verts_of(cyc: set[int]) -> set[int]:
        out = set()
        for k in cyc:
            out.update(edges[k][:2])
        return out

    va, vb = verts_of(c1), verts_of(c2)
    # attachment vertices: the ends of the connecting path (or the shared vertex)
    if va & vb:
        a = b = next(iter(va & vb))
        path_vertices = [a]
        path_edges: list[int] = []
    else:
        rest = [k for k in range(len(edges)) if k not in c1 and k not in c2]
        adj = _adjacency([tuple(edges[k]) for k in rest])
        # endpoints: the path vertices lying on a cycle
        a = next(v for v in sorted(va) if v in adj)
        b = next(v for v in sorted(vb) if v in adj)
        path_vertices, path_edges = [a], []
        prev = None
        cur = a
        while cur != b:
            u, idx = next((u, idx) for u, idx in adj[cur] if u != prev)
            path_edges.append(rest[idx])
            prev, cur = cur, u
            path_vertices.append(cur)
    switched: set[int] = set()

    def do_switch(v: int) -> None:
        switched.symmetric_difference_update({v})
        for e in edges:
            if e[0] != e[1] and v in (e[0], e[1]):
                e[2] = -e[2]

    # push minus edges off the path into the first cycle
    for t in range(len(path_edges) - 1, -1, -1):
        if edges[path_edges[t]][2] < 0:
            do_switch(path_vertices[t])
    relabel: dict[int, int] = {}
    for cyc, att in ((c1, a), (c2, b)):
        verts, cedges = _cycle_walk(edges, cyc, att)
        # leave a single minus edge, the one closing the cycle at the attachment
        for t in range(1, len(verts)):
            if edges[cedges[t - 1]][2] < 0:
                do_switch(verts[t])
        if cyc is c1:
            for t, v in enumerate(verts):
                relabel[v] = i - t
        else:
            start = n - j + 1
            for t, v in enumerate(verts):
                relabel[v] = start + t
    for t, v in enumerate(path_vertices):
        relabel.setdefault(v, i + t)
    # verify: the signed permutation carries the circuit onto the representative
    image = set()
    for r in members:
        vec = rs.coords[r]
        out = [0] * n
        for k, x in enumerate(vec):
            if x:
                out[relabel[k + 1] - 1] = -x if (k + 1) in switched else x
        image.add(rs.find_line(out))
    target = standard_circuit(rs, i, j)
    if image != set(target.members):
        raise AssertionError(f"normalization failed for {members}")
    parity = None
    if rs.tag.family == "D" and n % 2 == 0 and i % 2 == 1 and j % 2 == 1:
        parity = matching_parity(sg)
        ref = matching_parity(to_signed_graph(rs, target.members))
        assert parity == ref ^ (len(switched) % 2)
    return CanonicalForm(i, j, parity, frozenset(switched), relabel)


def classical_orbit_prediction(tag_family: str, n: int) -> list[tuple]:
    """Orbit keys ``(i, j, parity)`` of full circuits predicted for types C and D."""
    if tag_family in "BC":
        return [(1, j, None) for j in range(1, n + 1)]
    out = []
    for i in range(2, n + 1):
        for j in range(i, n + 2 - i):
            if n % 2 == 0 and i % 2 == 1 and j % 2 == 1:
                out += [(i, j, 0), (i, j, 1)]
            else:
                out.append((i, j, None))
    return out
