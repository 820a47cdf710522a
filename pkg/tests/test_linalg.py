import itertools

import numpy as np
import pytest

from ctslab.errors import DimensionMismatch, InvalidInput
from ctslab.field import Rng
from ctslab.linalg import kernel, kron_mod, matmul_mod, rank, row_reduce, solve


def brute_rank(rows, p):
    """Rank as log_p of the size of the row space (tiny matrices only)."""
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(len(rows[0]))))
    k = 0
    while p**k < len(span):
        k += 1
    return k


def test_rank_against_row_space_size():
    rng = Rng(3)
    for _ in range(60):
        rows = [[rng.below(3) for _ in range(4)] for _ in range(3)]
        assert rank(rows, 3) == brute_rank(rows, 3)


def test_rref_shape():
    red, piv = row_reduce([[2, 4, 1], [1, 2, 0]], 5)
    assert piv == [0, 2]
    assert red[0][0] == 1 and red[1][2] == 1


def test_kernel_vectors():
    rng = Rng(4)
    for _ in range(30):
        rows = [[rng.below(7) for _ in range(5)] for _ in range(3)]
        ker = kernel(rows, 7)
        assert len(ker) == 5 - rank(rows, 7)
        for v in ker:
            assert all(sum(a * b for a, b in zip(r, v)) % 7 == 0 for r in rows)


def test_solve():
    A = [[1, 1], [0, 1]]
    assert solve(A, [1, 0], 101) == [1, 0]
    assert solve(A, [0, 1], 101) == [100, 1]
    with pytest.raises(InvalidInput):
        solve([[1, 1], [1, 1]], [0, 1], 5)
    with pytest.raises(DimensionMismatch):
        solve([[1, 1]], [0], 5)


def test_matmul_and_kron():
    a = [[1, 2], [3, 4]]
    b = [[0, 1], [1, 0]]
    assert matmul_mod(a, b, 5).tolist() == [[2, 1], [4, 3]]
    assert kron_mod(a, b, 5).shape == (4, 4)
    big = 2**61 - 1
    m = matmul_mod([[big - 1]], [[big - 1]], big)
    assert int(m[0][0]) == 1
    assert np.array_equal(kron_mod([[1]], [[3]], 7), np.array([[3]]))
