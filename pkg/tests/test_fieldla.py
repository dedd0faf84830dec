"""Exact linear algebra kernel against a naive elimination oracle."""

import numpy as np
import pytest

from dflab import fieldla
from dflab.ring import PrimeField, Rationals

F = PrimeField(97)


def naive_rank(M, p=97):
    A = np.array(M, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, j])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, j]), p - 2, p)
        A[r] = (A[r] * inv) % p
        for i2 in range(r + 1, m):
            if A[i2, j]:
                A[i2] = (A[i2] - A[i2, j] * A[r]) % p
        r += 1
    return r


@pytest.mark.parametrize("seed", range(6))
def test_rank_and_nullspace_random(seed):
    rng = np.random.default_rng(seed)
    for _ in range(8):
        m, n = (int(v) for v in rng.integers(1, 70, 2))
        k = int(rng.integers(0, min(m, n) + 1))
        M = (
            rng.integers(0, 97, (m, k), dtype=np.int64)
            @ rng.integers(0, 97, (k, n), dtype=np.int64)
        ) % 97
        r = fieldla.rank(F, M)
        assert r == naive_rank(M)
        N = fieldla.nullspace(F, M)
        assert (M @ N % 97 == 0).all()
        assert N.shape[1] == n - r
        assert fieldla.rank(F, N) == N.shape[1]


def test_panel_boundaries():
    rng = np.random.default_rng(11)
    for (m, n, k) in [(200, 300, 150), (300, 200, 190), (257, 260, 255)]:
        M = (
            rng.integers(0, 97, (m, k), dtype=np.int64)
            @ rng.integers(0, 97, (k, n), dtype=np.int64)
        ) % 97
        assert fieldla.rank(F, M) == k


def test_solve_and_membership():
    rng = np.random.default_rng(5)
    B = rng.integers(0, 97, (30, 8), dtype=np.int64)
    V = (B @ rng.integers(0, 97, (8, 3), dtype=np.int64)) % 97
    ra, rab = fieldla.rank_two(F, B, V)
    assert ra == rab
    X = fieldla.solve_columns(F, B, V)
    assert (B @ X % 97 == V % 97).all()
    W = rng.integers(0, 97, (30, 1), dtype=np.int64)
    assert fieldla.solve_columns(F, B, W) is None
    cs = fieldla.ColumnSpace(F, 30)
    cs.add_columns(B)
    assert cs.rank == fieldla.rank(F, B)
    assert cs.contains(V[:, 0]) and not cs.contains(W[:, 0])


def test_empty_shapes():
    assert fieldla.rank(F, np.zeros((0, 5), dtype=np.int64)) == 0
    assert fieldla.rank(F, np.zeros((5, 0), dtype=np.int64)) == 0
    N = fieldla.nullspace(F, np.zeros((0, 4), dtype=np.int64))
    assert N.shape == (4, 4)


def test_rationals_backend():
    FQ = Rationals()
    rng = np.random.default_rng(7)
    M = fieldla.random_matrix(FQ, 6, 9, rng)
    N = fieldla.nullspace(FQ, M)
    prod = M @ N
    assert all(prod[i, j] == 0 for i in range(6) for j in range(N.shape[1]))
    r = fieldla.rank(FQ, M)
    assert r + N.shape[1] == 9
