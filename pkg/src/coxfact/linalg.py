"""Exact linear algebra: fraction-free (Bareiss) elimination, rank, kernel."""

from __future__ import annotations

from typing import Sequence

from .scalar import exact_div, ring_div


def echelon(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Bareiss elimination; returns the echelon rows and their pivot columns.

    Pivots are taken from the first nonzero column, scanning rows top-down.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for k in range(c, ncols):
                row_i[k] = ring_div(piv * row_i[k] - f * row_r[k], prev)
        prev = piv
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(echelon(rows)[1])


def kernel(columns: Sequence[Sequence]) -> list[list]:
    """Basis of the space of coefficient vectors ``c`` with ``sum c_i v_i = 0``.

    ``columns`` lists the vectors ``v_i``.  Each basis vector has a 1 in one
    free position, which keeps the output deterministic.
    """
    k = len(columns)
    if k == 0:
        return []
    d = len(columns[0])
    mat = [[columns[j][i] for j in range(k)] for i in range(d)]
    ech, pivots = echelon(mat)
    free = [j for j in range(k) if j not in pivots]
    basis = []
    for f in free:
        sol = [0] * k
        sol[f] = 1
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            acc = 0
            for j in range(pc + 1, k):
                if sol[j] and ech[r][j]:
                    acc = acc + ech[r][j] * sol[j]
            sol[pc] = exact_div(-acc, ech[r][pc]) if acc else 0
        basis.append(sol)
    return basis


def determinant(rows: Sequence[Sequence]):
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sgn = 1
    prev = 1
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sgn = -sgn
        for i in range(c + 1, n):
            for k in range(c + 1, n):
                m[i][k] = ring_div(m[c][c] * m[i][k] - m[i][c] * m[c][k], prev)
            m[i][c] = 0
        prev = m[c][c]
    return m[n - 1][n - 1] if sgn > 0 else -m[n - 1][n - 1]


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve ``matrix @ x = rhs`` for an invertible square ``matrix``."""
    n = len(matrix)
    aug = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise ValueError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [exact_div(x, piv) if x else 0 for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]
