"""Finite irreducible root systems with exact coordinates.

Indexing convention, fixed for every system: the ``N`` positive roots have
indices ``0 .. N-1`` (simple roots first, in diagram order, then the order in
which simple reflections discover the rest), and the negative of root ``i``
has index ``i + N``.  A reflection is named by the index of its positive
root.

Group elements are permutations of the ``2N`` root indices, stored as
tuples.  Composition applies the rightmost factor first:
``compose(g, h)[i] == g[h[i]]``, so the product ``t1 t2 ... tm`` acts on a
vector by ``tm`` first.  Conjugation is ``a^b = b^-1 a b``.

Dihedral systems ``I2(m)`` use an angle model: root ``k`` (``0 <= k < 2m``)
points at angle ``k*pi/m``.  Inner-product signs come from integer angle
differences.  For ``m`` in {3, 4, 6} crystallographic coordinates are also
attached, indexed consistently with the angle model.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg
from .scalar import Q5, exact_div, sign, to_json

GroupElement = tuple  # permutation of root indices


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True)
class TypeTag:
    family: str  # A B C D E F H I
    n: int  # rank, or m for I2(m)

    @property
    def rank(self) -> int:
        return 2 if self.family == "I" else self.n

    def __str__(self) -> str:
        if self.family == "I":
            return f"I2({self.n})"
        return f"{self.family}{self.n}"


_TAG_RE = re.compile(r"^\s*([A-Ia-i])\s*(?:2\s*[:(]\s*(\d+)\s*\)?|\(?\s*(\d+)\s*\)?)\s*$")


def parse_type(text: str | TypeTag) -> TypeTag:
    """Accepts ``A3``, ``A(3)``, ``E6``, ``I2(5)``, ``I2:5``."""
    if isinstance(text, TypeTag):
        tag = text
    else:
        s = text.strip().upper().replace(" ", "")
        m = re.fullmatch(r"I2[:(](\d+)\)?", s)
        if m:
            tag = TypeTag("I", int(m.group(1)))
        else:
            m = re.fullmatch(r"([ABCDEFH])\(?(\d+)\)?", s)
            if not m:
                raise RootSystemError(f"cannot parse type tag {text!r}")
            tag = TypeTag(m.group(1), int(m.group(2)))
    f, n = tag.family, tag.n
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "H": n in (3, 4),
        "I": n >= 3,
    }.get(f, False)
    if not ok:
        raise RootSystemError(f"invalid type {tag}")
    return tag


# -- simple roots ---------------------------------------------------------------

def _unit(dim: int, i: int, scale=1) -> list:
    v = [0] * dim
    v[i] = scale
    return v


def _e8_simple() -> list[list]:
    # Bourbaki simple roots, doubled so all coordinates are integers
    s = [[1, -1, -1, -1, -1, -1, -1, 1], [2, 2, 0, 0, 0, 0, 0, 0]]
    for i in range(6):
        v = [0] * 8
        v[i] = -2
        v[i + 1] = 2
        s.append(v)
    return s


def _simple_roots(tag: TypeTag) -> list[list]:
    f, n = tag.family, tag.n
    if f == "A":
        return [[1 if k == i else -1 if k == i + 1 else 0 for k in range(n + 1)] for i in range(n)]
    if f in "BCD":
        s = [[1 if k == i else -1 if k == i + 1 else 0 for k in range(n)] for i in range(n - 1)]
        if f == "B":
            s.append(_unit(n, n - 1))
        elif f == "C":
            s.append(_unit(n, n - 1, 2))
        else:
            v = [0] * n
            v[n - 2] = v[n - 1] = 1
            s.append(v)
        return s
    if f == "E":
        return _e8_simple()[:n]
    if f == "F":
        # Bourbaki F4, doubled
        return [[0, 2, -2, 0], [0, 0, 2, -2], [0, 0, 0, 2], [1, -1, -1, -1]]
    if f == "H":
        # coordinates scaled by 4: phi/2 -> 1 + r5, 1/(2 phi) -> r5 - 1
        p, q = Q5(1, 1), Q5(-1, 1)
        z, two, four = Q5(0), Q5(2), Q5(4)
        if n == 3:
            return [[z, four, z], [q, -p, -two], [z, z, four]]
        return [[z, z, z, four], [z, q, -two, -p], [z, z, four, z], [q, -p, -two, z]]
    raise RootSystemError(f"no coordinate model for {tag}")


_DIHEDRAL_COORDS = {3, 4, 6}


def _dihedral_coords(m: int) -> list[list]:
    """Crystallographic realization of I2(m), root k at angle k*pi/m."""
    if m == 4:
        short = [[1, 0], [0, 1], [-1, 0], [0, -1]]
    else:
        short = [[1, -1, 0], [1, 0, -1], [0, 1, -1], [-1, 1, 0], [-1, 0, 1], [0, -1, 1]]
    if m == 3:
        return short
    roots = []
    k = len(short)
    for i in range(k):
        roots.append(short[i])
        roots.append([a + b for a, b in zip(short[i], short[(i + 1) % k])])
    return roots


def weyl_order(tag: TypeTag) -> int:
    f, n = tag.family, tag.n
    if f == "A":
        return math.factorial(n + 1)
    if f in "BC":
        return 2**n * math.factorial(n)
    if f == "D":
        return 2 ** (n - 1) * math.factorial(n)
    if f == "I":
        return 2 * n
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("H", 3): 120, ("H", 4): 14400}[(f, n)]


def _dot(x: Sequence, y: Sequence):
    acc = 0
    for a, b in zip(x, y):
        if a and b:
            acc = acc + a * b
    return acc


# -- the root system ------------------------------------------------------------

class RootSystem:
    """Immutable after construction; see the module docstring for indexing."""

    def __init__(self, tag: TypeTag) -> None:
        self.tag = tag
        self.rank = tag.rank
        if tag.family == "I":
            self._init_dihedral(tag.n)
        else:
            self._init_coordinates(_simple_roots(tag))
        self.n_roots = 2 * self.N
        self._reflection_lookup = {p: a for a, p in enumerate(self.refl)}

    # construction ------------------------------------------------------------
    def _init_coordinates(self, simple: list[list]) -> None:
        simple = [tuple(v) for v in simple]
        self.field = "q5" if isinstance(simple[0][0], Q5) else "q"
        self.ambient_dim = len(simple[0])
        positive = list(simple)
        seen = set(positive)
        norms = [_dot(a, a) for a in simple]
        i = 0
        while i < len(positive):
            beta = positive[i]
            for a, na in zip(simple, norms):
                # a simple reflection permutes the positive roots other than its own
                if beta == a:
                    continue
                c = exact_div(2 * _dot(beta, a), na)
                if not c:
                    continue
                gamma = tuple(x - c * y for x, y in zip(beta, a))
                if gamma not in seen:
                    seen.add(gamma)
                    positive.append(gamma)
            i += 1
        self._finish_coordinates(positive, list(range(len(simple))))

    def _finish_coordinates(self, positive: list[tuple], simple_idx: list[int]) -> None:
        self.N = len(positive)
        self.coords = positive + [tuple(-x for x in v) for v in positive]
        self.simple = simple_idx
        self._index = {v: i for i, v in enumerate(self.coords)}
        N = self.N
        self.gram = [[_dot(positive[i], positive[j]) for j in range(N)] for i in range(N)]
        self.norms = [self.gram[i][i] for i in range(N)]
        self._ipsign = [[sign(x) for x in row] for row in self.gram]
        refl = []
        for a in range(N):
            alpha = positive[a]
            na = self.norms[a]
            perm = []
            for v in self.coords:
                c = exact_div(2 * _dot(v, alpha), na)
                img = v if not c else tuple(x - c * y for x, y in zip(v, alpha))
                perm.append(self._index[img])
            refl.append(tuple(perm))
        self.refl = refl
        # coefficients of positive roots on the simple basis
        G = [[self.gram[i][j] for j in self.simple] for i in self.simple]
        self.simple_coeffs = [
            tuple(linalg.solve(G, [self.gram[b][s] for s in self.simple])) for b in range(N)
        ]

    def _init_dihedral(self, m: int) -> None:
        self.N = m
        self.simple = [0, m - 1]
        self.refl = [tuple((2 * a - k) % (2 * m) for k in range(2 * m)) for a in range(m)]
        self._ipsign = [[_angle_sign(k - l, m) for l in range(m)] for k in range(m)]
        if m in _DIHEDRAL_COORDS:
            coords = [tuple(v) for v in _dihedral_coords(m)]
            self.field = "q"
            self.ambient_dim = len(coords[0])
            pos = coords[:m]
            self._finish_coordinates(pos, [0, m - 1])
            # the crystallographic model must reproduce the angle model
            assert self.coords == coords
            assert all(self._ipsign[k][l] == _angle_sign(k - l, m) for k in range(m) for l in range(m))
        else:
            self.field = "angle"
            self.ambient_dim = 2
            self.coords = None
            self.gram = None
            self.norms = None
            self.simple_coeffs = None

    # basic index helpers -------------------------------------------------------
    @property
    def has_coordinates(self) -> bool:
        return self.coords is not None

    @property
    def is_crystallographic(self) -> bool:
        return self.field == "q"

    def line(self, i: int) -> int:
        return i % self.N

    def neg(self, i: int) -> int:
        return (i + self.N) % self.n_roots

    def root_sign(self, i: int) -> int:
        return 1 if i < self.N else -1

    @property
    def positive(self) -> range:
        return range(self.N)

    @property
    def negation_map(self) -> tuple:
        return tuple(self.neg(i) for i in range(self.n_roots))

    def ip_sign(self, i: int, j: int) -> int:
        return self._ipsign[i % self.N][j % self.N] * self.root_sign(i) * self.root_sign(j)

    def ip(self, i: int, j: int):
        """Exact inner product of roots ``i`` and ``j`` (coordinate models only)."""
        if self.gram is None:
            raise RootSystemError(f"{self.tag} has no exact coordinates")
        v = self.gram[i % self.N][j % self.N]
        return v if self.root_sign(i) == self.root_sign(j) else -v

    def norm(self, i: int):
        return self.norms[i % self.N]

    @cached_property
    def _cartan_pos(self) -> list[list]:
        N = self.N
        return [[exact_div(2 * self.gram[i][j], self.norms[j]) for j in range(N)] for i in range(N)]

    def cartan(self, i: int, j: int):
        """``2 <alpha_i, alpha_j> / |alpha_j|^2``."""
        if self.gram is None:
            raise RootSystemError(f"{self.tag} has no exact coordinates")
        v = self._cartan_pos[i % self.N][j % self.N]
        return v if self.root_sign(i) == self.root_sign(j) else -v

    def index_of(self, vec: Sequence) -> int:
        """Index of the root with these exact coordinates."""
        return self._index[tuple(vec)]

    def find_line(self, vec: Sequence) -> int:
        """Positive index of the root that is a positive multiple of ``vec``."""
        if self.coords is None:
            raise RootSystemError("angle model roots are addressed by index")
        vec = tuple(vec)
        if len(vec) != self.ambient_dim:
            raise RootSystemError("dimension mismatch")
        for i, r in enumerate(self.coords):
            if _is_positive_multiple(r, vec):
                return self.line(i)
        raise RootSystemError(f"{vec} is not proportional to a root of {self.tag}")

    def simple_coefficients(self, i: int) -> tuple:
        c = self.simple_coeffs[i % self.N]
        return c if i < self.N else tuple(-x for x in c)

    # the reflection formula --------------------------------------------------
    def reflect(self, a: int, v: Sequence) -> tuple:
        """``s_alpha(v) = v - 2<v,alpha>/|alpha|^2 alpha`` on coordinate vectors."""
        alpha = self.coords[a]
        c = exact_div(2 * _dot(v, alpha), _dot(alpha, alpha))
        return tuple(x - c * y for x, y in zip(v, alpha))

    # group elements ------------------------------------------------------------
    @cached_property
    def identity(self) -> GroupElement:
        return tuple(range(self.n_roots))

    def as_element(self, a: int) -> GroupElement:
        return self.refl[self.line(a)]

    @staticmethod
    def compose(g: GroupElement, h: GroupElement) -> GroupElement:
        """First ``h``, then ``g``."""
        return tuple(g[x] for x in h)

    @staticmethod
    def apply(g: GroupElement, i: int) -> int:
        return g[i]

    @staticmethod
    def inverse(g: GroupElement) -> GroupElement:
        inv = [0] * len(g)
        for i, x in enumerate(g):
            inv[x] = i
        return tuple(inv)

    def product(self, factors: Iterable[int]) -> GroupElement:
        """Group element ``t_1 t_2 ... t_m`` for reflections named by roots."""
        g = self.identity
        for a in factors:
            r = self.refl[self.line(a)]
            g = tuple(g[x] for x in r)
        return g

    def element_order(self, g: GroupElement) -> int:
        k, h = 1, g
        while h != self.identity:
            h = self.compose(g, h)
            k += 1
        return k

    def reflection_of(self, g: GroupElement) -> int | None:
        """Positive root index if ``g`` is a reflection, else ``None``."""
        return self._reflection_lookup.get(g)

    def conjugate_root(self, a: int, b: int) -> int:
        """Positive index of the reflection ``s_a^{s_b} = s_{s_b(a)}``."""
        return self.refl[self.line(b)][a] % self.N

    def coxeter_element(self, ordering: Sequence[int] | None = None) -> GroupElement:
        if ordering is None:
            ordering = range(self.rank)
        ordering = list(ordering)
        if sorted(ordering) != list(range(self.rank)):
            raise RootSystemError("ordering must permute the simple roots")
        return self.product(self.simple[i] for i in ordering)

    def coxeter_matrix(self) -> list[list[int]]:
        s = self.simple
        return [[self.element_order(self.compose(self.refl[a], self.refl[b])) if a != b else 1
                 for b in s] for a in s]

    # reflection subgroups --------------------------------------------------
    @cached_property
    def line_refl(self) -> list[tuple]:
        """``line_refl[a][b]`` is the positive index of ``s_a(alpha_b)``."""
        N = self.N
        return [tuple(p[b] % N for b in range(N)) for p in self.refl]

    def subsystem_closure(self, lines: Iterable[int]) -> frozenset:
        lr = self.line_refl
        closure = [self.line(x) for x in lines]
        seen = set(closure)
        i = 0
        while i < len(closure):
            x = closure[i]
            for k in range(i + 1):
                y = closure[k]
                for z in (lr[x][y], lr[y][x]):
                    if z not in seen:
                        seen.add(z)
                        closure.append(z)
            i += 1
        return frozenset(seen)

    @cached_property
    def _classes(self) -> tuple[tuple[int, ...], ...]:
        lr = self.line_refl
        cls = [-1] * self.N
        out = []
        for start in range(self.N):
            if cls[start] >= 0:
                continue
            cid = len(out)
            cls[start] = cid
            members = [start]
            i = 0
            while i < len(members):
                x = members[i]
                for a in range(self.N):
                    y = lr[a][x]
                    if cls[y] < 0:
                        cls[y] = cid
                        members.append(y)
                i += 1
            out.append(tuple(sorted(members)))
        self._class_of = tuple(cls)
        return tuple(out)

    def reflection_classes(self) -> tuple[tuple[int, ...], ...]:
        """Partition of positive roots into conjugacy classes of reflections."""
        return self._classes

    def class_of(self, a: int) -> int:
        self._classes
        return self._class_of[self.line(a)]

    # misc ------------------------------------------------------------------
    def order(self) -> int:
        return weyl_order(self.tag)

    def height(self, i: int):
        return sum(self.simple_coefficients(i))

    def highest_root(self) -> int:
        if not self.is_crystallographic:
            raise RootSystemError("highest root is defined for crystallographic systems")
        return max(range(self.N), key=lambda i: (self.height(i), -i))

    def root_label(self, i: int) -> str:
        """Readable name of a root, e.g. ``e1-e2`` or ``2e3`` in classical types."""
        if self.coords is None:
            return f"r{i}"
        v = self.coords[i]
        if self.tag.family in "ABCD":
            parts = []
            for k, x in enumerate(v):
                if x:
                    mag = "" if abs(x) == 1 else str(abs(x))
                    parts.append(("-" if x < 0 else "+") + f"{mag}e{k + 1}")
            s = "".join(parts)
            return s[1:] if s.startswith("+") else s
        return "(" + ",".join(str(x) for x in v) + ")"

    def to_json(self) -> dict:
        return {
            "type": str(self.tag),
            "rank": self.rank,
            "field": self.field,
            "n_positive": self.N,
            "n_roots": 2 * self.N,
            "labels": [self.root_label(i) for i in range(2 * self.N)],
            "roots": None if self.coords is None else [[to_json(x) for x in v] for v in self.coords],
            "simple": list(self.simple),
            "classes": [list(c) for c in self.reflection_classes()],
        }

    def __repr__(self) -> str:
        return f"RootSystem({self.tag})"

    def __reduce__(self):
        return (build, (str(self.tag),))


def _first_nonzero(v: Sequence):
    for x in v:
        if x:
            return x
    return 0


def _is_positive_multiple(r: Sequence, v: Sequence) -> bool:
    lam = None
    for x, y in zip(r, v):
        if (x == 0) != (y == 0):
            return False
        if x == 0:
            continue
        q = exact_div(x, y)
        if lam is None:
            if sign(q) <= 0:
                return False
            lam = q
        elif q != lam:
            return False
    return lam is not None


def _angle_sign(d: int, m: int) -> int:
    """Sign of cos(d*pi/m)."""
    d %= 2 * m
    twice = 2 * d
    if twice == m or twice == 3 * m:
        return 0
    return 1 if (twice < m or twice > 3 * m) else -1


@lru_cache(maxsize=None)
def _build_cached(tag: TypeTag) -> RootSystem:
    return RootSystem(tag)


def build(type_tag: str | TypeTag) -> RootSystem:
    return _build_cached(parse_type(type_tag))
