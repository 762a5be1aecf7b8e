"""Exact linear algebra on small integer/rational matrices.

Matrices are tuples of row tuples.  Dense routines use fraction-free
(Bareiss) elimination where possible; :class:`TreeFactor` handles plumbing
forms of trees in linear time by eliminating leaves towards the root.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i)
    )


def matmul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def bareiss_minors(a: Matrix) -> list[int]:
    """Leading principal minors of an integer matrix, without pivoting.

    Stops early (returning a shorter list) at the first zero pivot.
    """
    n = len(a)
    m = [list(r) for r in a]
    minors = []
    prev = 1
    for k in range(n):
        piv = m[k][k]
        minors.append(piv)
        if piv == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * piv - m[i][k] * m[k][j]) // prev
        prev = piv
    return minors


def det(a: Matrix) -> int:
    """Exact determinant of an integer matrix (Bareiss with row pivoting)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(a) -> int:
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def inverse(a) -> tuple[tuple[Fraction, ...], ...]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise PreconditionError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def is_negative_definite(a: Matrix) -> bool:
    """Sylvester's criterion on ``-a``: all leading minors of ``-a`` positive."""
    neg = tuple(tuple(-x for x in row) for row in a)
    minors = bareiss_minors(neg)
    return len(minors) == len(a) and all(x > 0 for x in minors)


class TreeFactor:
    """LDL^T factorisation of a tree's plumbing matrix.

    ``diag`` holds the framings, ``parent`` the parent of every vertex
    (``-1`` for the root) and the off-diagonal entry on each tree edge is 1.
    Leaves are eliminated before their parents, so there is no fill-in.
    """

    def __init__(self, diag: Sequence[int], parent: Sequence[int]):
        n = len(diag)
        self.n = n
        self.parent = list(parent)
        children: list[list[int]] = [[] for _ in range(n)]
        roots = []
        for v, p in enumerate(self.parent):
            if p < 0:
                roots.append(v)
            else:
                children[p].append(v)
        if len(roots) != 1:
            raise PreconditionError("plumbing graph must be a connected tree")
        order = []
        stack = [roots[0]]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(children[v])
        if len(order) != n:
            raise PreconditionError("parent array does not describe a tree")
        self.preorder = order
        self.postorder = order[::-1]
        self.children = children
        pivots = [Fraction(0)] * n
        for v in self.postorder:
            d = Fraction(diag[v])
            for c in children[v]:
                d -= 1 / pivots[c]
            if d == 0:
                raise PreconditionError("zero pivot: plumbing matrix is singular or indefinite")
            pivots[v] = d
        self.pivots = pivots

    @property
    def det(self) -> int:
        out = Fraction(1)
        for p in self.pivots:
            out *= p
        assert out.denominator == 1
        return out.numerator

    def negative_definite(self) -> bool:
        return all(p < 0 for p in self.pivots)

    def solve(self, b: Sequence) -> tuple[Fraction, ...]:
        """Return ``x`` with ``Q x = b``, exactly."""
        piv = self.pivots
        y = [Fraction(v) for v in b]
        for v in self.postorder:
            p = self.parent[v]
            if p >= 0 and y[v]:
                y[p] -= y[v] / piv[v]
        x = [Fraction(0)] * self.n
        for v in self.preorder:
            p = self.parent[v]
            x[v] = (y[v] - (x[p] if p >= 0 else 0)) / piv[v]
        return tuple(x)
