"""Exact dense linear algebra over Q(i).

Matrices are plain lists of rows of :class:`~logpoisson.series.Scalar`.
Only what the solver and the spectral module need is here: row reduction,
rank, kernels, pivot-minimal particular solutions and inverses.
"""
from __future__ import annotations

from typing import Sequence

from .series import ONE, ZERO, Scalar, as_scalar

Mat = list  # list[list[Scalar]]


def mat(rows) -> Mat:
    return [[as_scalar(x) for x in row] for row in rows]


def zeros(m: int, n: int | None = None) -> Mat:
    return [[ZERO] * (m if n is None else n) for _ in range(m)]


def identity(n: int) -> Mat:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def diag(entries) -> Mat:
    entries = [as_scalar(x) for x in entries]
    n = len(entries)
    return [[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)]


def unit(n: int, a: int, b: int, c=ONE) -> Mat:
    """``c * E_ab`` in ``n x n``."""
    m = zeros(n)
    m[a][b] = as_scalar(c)
    return m


def matmul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b)) if b else []
    out = []
    for row in a:
        new = []
        for col in bt:
            s = ZERO
            for x, y in zip(row, col):
                if x and y:
                    s = s + x * y
            new.append(s)
        out.append(new)
    return out


def matvec(a: Mat, v: Sequence[Scalar]) -> list:
    out = []
    for row in a:
        s = ZERO
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(a: Mat, c) -> Mat:
    c = as_scalar(c)
    return [[x * c for x in r] for r in a]


def commutator(a: Mat, b: Mat) -> Mat:
    return sub(matmul(a, b), matmul(b, a))


def is_zero(a: Mat) -> bool:
    return all(not x for r in a for x in r)


def transpose(a: Mat) -> Mat:
    return [list(c) for c in zip(*a)]


def mat_pow(a: Mat, k: int) -> Mat:
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def rref(a: Mat, col_order: Sequence[int] | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists pivot columns in the order
    they were chosen.  ``col_order`` fixes the order in which columns are
    considered for pivots (default ``0..n-1``).
    """
    m = [list(r) for r in a]
    if not m:
        return m, []
    ncols = len(m[0])
    cols = range(ncols) if col_order is None else col_order
    pivots = []
    row = 0
    for c in cols:
        if row == len(m):
            break
        p = next((i for i in range(row, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[row], m[p] = m[p], m[row]
        inv = m[row][c].inverse()
        m[row] = [x * inv for x in m[row]]
        prow = m[row]
        for i in range(len(m)):
            if i != row and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], prow)]
        pivots.append(c)
        row += 1
    return m, pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def solve(a: Mat, b: Sequence[Scalar], col_order: Sequence[int] | None = None):
    """Pivot-minimal solution of ``a x = b`` (free variables zero), or ``None``.

    ``col_order`` chooses which unknowns become pivots first; different orders
    give solutions differing by a kernel element.
    """
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [as_scalar(x)] for r, x in zip(a, b)]
    order = list(range(ncols)) if col_order is None else list(col_order)
    r, pivots = rref(aug, order)
    for row in r[len(pivots):]:
        if row[-1]:
            return None
    x = [ZERO] * ncols
    for i, c in enumerate(pivots):
        x[c] = r[i][-1]
    return x


def kernel(a: Mat, ncols: int | None = None) -> list:
    """Basis of the right kernel, one vector per free column."""
    if not a:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    n = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -r[i][f]
        basis.append(v)
    return basis


def inverse(a: Mat) -> Mat | None:
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n))]
    r, pivots = rref(aug, list(range(n)))
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in r]


def format_matrix(a: Mat) -> str:
    from .series import format_scalar
    return "[" + "; ".join(", ".join(format_scalar(x) for x in r) for r in a) + "]"
