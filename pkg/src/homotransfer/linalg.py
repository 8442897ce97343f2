"""Dense exact linear algebra over Q (matrices are lists of rows of Fractions)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def zeros(m: int, n: int) -> list:
    return [[Fraction(0)] * n for _ in range(m)]


def eye(n: int) -> list:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def matmul(a: list, b: list) -> list:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                o = out[i]
                for j in range(cols):
                    if bk[j]:
                        o[j] += x * bk[j]
    return out


def transpose(a: list, ncols: int | None = None) -> list:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def rref(a: list) -> tuple:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(map(Fraction, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: list) -> int:
    return len(rref(a)[1])


def nullspace(a: list, ncols: int) -> list:
    """Basis of {x : a x = 0} as a list of column vectors (lists)."""
    if not a:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -m[r][f]
        basis.append(x)
    return basis


def column_space(vectors: Sequence[Sequence], dim: int) -> list:
    """An echelon basis of the span of ``vectors`` (each of length ``dim``).

    Each returned vector has a pivot coordinate equal to 1 where all other
    returned vectors vanish; coordinates in the span are read off there.
    """
    if not vectors:
        return []
    m, pivots = rref([list(v) for v in vectors])
    return [m[i] for i in range(len(pivots))]


def pivot_of(v: Sequence) -> int:
    return next(i for i, x in enumerate(v) if x)


def inverse(a: list) -> list:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in m]


def solve(a: list, b: list) -> list:
    """One solution x of a x = b (b a column list), or raise if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if a else 0
    aug = [list(a[i]) + [Fraction(b[i])] for i in range(rows)]
    m, pivots = rref(aug)
    if cols in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        x[p] = m[r][cols]
    return x


def complement_basis(span: Sequence[Sequence], dim: int, candidates: Sequence[Sequence] | None = None) -> list:
    """Vectors from ``candidates`` (default: unit vectors) completing ``span`` to a basis."""
    if candidates is None:
        candidates = [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)]
    chosen = [list(v) for v in span]
    out = []
    r = rank(chosen) if chosen else 0
    for c in candidates:
        trial = chosen + [list(c)]
        r2 = rank(trial)
        if r2 > r:
            chosen = trial
            out.append(list(c))
            r = r2
        if r == dim:
            break
    return out
