"""Dense linear algebra over F_p on lists of Python ints.

Pivoting is deterministic (first nonzero entry in column order), so ranks,
kernels and witnesses are reproducible.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, InvalidInput

Matrix = List[List[int]]


def row_reduce(rows: Sequence[Sequence[int]], p: int) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[v % p for v in row] for row in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][col], -1, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                ri = a[r]
                a[i] = [(v - f * w) % p for v, w in zip(a[i], ri)]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(row_reduce(rows, p)[1])


def kernel(rows: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> Matrix:
    """Basis of the right kernel {c : A c = 0}."""
    if ncols is None:
        if not rows:
            raise InvalidInput("cannot infer column count of an empty matrix")
        ncols = len(rows[0])
    red, pivots = row_reduce(rows, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][fc]) % p
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], p: int) -> List[int]:
    """Unique solution of a square nonsingular system A x = b."""
    n = len(rows)
    if any(len(r) != n for r in rows) or len(rhs) != n:
        raise DimensionMismatch("solve() needs a square system")
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug, p)
    if pivots != list(range(n)):
        raise InvalidInput("singular system")
    return [red[i][n] for i in range(n)]


def _dtype_for(p: int, inner: int):
    return np.int64 if (p - 1) ** 2 * max(inner, 1) < (1 << 63) else object


def matmul_mod(a, b, p: int) -> np.ndarray:
    """Exact product of integer matrices modulo p."""
    a = np.asarray(a)
    b = np.asarray(b)
    dt = _dtype_for(p, a.shape[1] if a.ndim == 2 else 1)
    return (a.astype(dt) @ b.astype(dt)) % p


def kron_mod(a, b, p: int) -> np.ndarray:
    dt = _dtype_for(p, 1)
    return np.kron(np.asarray(a, dtype=dt), np.asarray(b, dtype=dt)) % p
