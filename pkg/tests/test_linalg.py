"""Matrix algebra tests: ranks, inverses, blockwise solves, parity-check derivation."""

import numpy as np
import pytest

from widelrc import gf
from widelrc.errors import ConstructionError, SingularMatrixError
from widelrc.linalg import GfMatrix, derive_parity_check, vandermonde


def naive_matmul(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    out = np.zeros((a.rows, b.cols), dtype=np.uint8)
    for i in range(a.rows):
        for j in range(b.cols):
            acc = 0
            for t in range(a.cols):
                acc ^= gf.mul(int(a.a[i, t]), int(b.a[t, j]))
            out[i, j] = acc
    return GfMatrix(out)


def random_matrix(rng, rows, cols) -> GfMatrix:
    return GfMatrix(rng.integers(0, 256, (rows, cols), dtype=np.uint8))


def random_invertible(rng, order) -> GfMatrix:
    while True:
        m = random_matrix(rng, order, order)
        if m.rank() == order:
            return m


def test_vandermonde_shapes_and_examples():
    m = vandermonde([5], 1, start_power=0)
    assert m.a.tolist() == [[1]]
    m = vandermonde([1, 2, 3], 3, start_power=1)
    assert m.rank() == 3
    # start_power 0 yields an all-ones first row
    m = vandermonde([1, 2, 3], 2, start_power=0)
    assert m.a[0].tolist() == [1, 1, 1]


def test_vandermonde_rejects_bad_points():
    with pytest.raises(ConstructionError):
        vandermonde([1, 1], 2, start_power=1)
    with pytest.raises(ConstructionError):
        vandermonde([0, 1], 2, start_power=1)
    # zero point is fine when powers start at 0
    m = vandermonde([0, 1], 1, start_power=0)
    assert m.a[0].tolist() == [1, 1]


def test_square_vandermonde_invertible_orders_1_to_8():
    rng = np.random.default_rng(11)
    for order in range(1, 9):
        for _ in range(5):
            points = rng.choice(np.arange(1, 256), size=order, replace=False)
            m = vandermonde([int(p) for p in points], order, start_power=1)
            assert m.rank() == order


def test_rank_basics():
    assert GfMatrix.identity(5).rank() == 5
    assert GfMatrix.zeros(3, 4).rank() == 0
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = random_matrix(rng, 5, 7)
        r = m.rank()
        assert r <= 5
        # invariant under row swaps and row scaling
        swapped = m.a.copy()
        swapped[[0, 3]] = swapped[[3, 0]]
        assert GfMatrix(swapped).rank() == r
        scaled = m.a.copy()
        scaled[1] = gf.MUL_TABLE[0x35][scaled[1]]
        assert GfMatrix(scaled).rank() == r


def test_invert_round_trips():
    ident = GfMatrix.identity(4)
    assert ident.invert() == ident
    rng = np.random.default_rng(42)
    for _ in range(10):
        m = random_invertible(rng, 5)
        inv = m.invert()
        assert m.mul(inv) == GfMatrix.identity(5)
        assert inv.invert() == m


def test_invert_hand_case():
    m = GfMatrix([[1, 1], [1, 2]])
    assert m.mul(m.invert()) == GfMatrix.identity(2)


def test_invert_singular_raises():
    with pytest.raises(SingularMatrixError):
        GfMatrix([[1, 2], [1, 2]]).invert()


def test_solve_blocks():
    rng = np.random.default_rng(5)
    ident = GfMatrix.identity(3)
    rhs = rng.integers(0, 256, (3, 16), dtype=np.uint8)
    assert np.array_equal(ident.solve_blocks(rhs), rhs)
    for _ in range(10):
        m = random_invertible(rng, 4)
        x = rng.integers(0, 256, (4, 16), dtype=np.uint8)
        rhs = m.apply_blocks(x)
        solved = m.solve_blocks(rhs)
        assert np.array_equal(solved, x)
        # substitution oracle: multiplying back reproduces the rhs
        assert np.array_equal(m.apply_blocks(solved), rhs)


def test_matmul_matches_naive():
    rng = np.random.default_rng(9)
    a = random_matrix(rng, 3, 4)
    b = random_matrix(rng, 4, 5)
    assert a.mul(b) == naive_matmul(a, b)


def test_derive_parity_check():
    # k = n: empty parity part
    h = derive_parity_check(GfMatrix.identity(3))
    assert h.rows == 0 and h.cols == 3

    rng = np.random.default_rng(17)
    k, n = 4, 7
    gen = np.vstack(
        [np.eye(k, dtype=np.uint8), rng.integers(0, 256, (n - k, k), dtype=np.uint8)]
    )
    g = GfMatrix(gen)
    h = derive_parity_check(g)
    assert (h.rows, h.cols) == (n - k, n)
    # H * G = 0 as a matrix product
    assert not h.mul(g).a.any()
    # H y = 0 for encoded vectors
    x = rng.integers(0, 256, (k, 8), dtype=np.uint8)
    y = g.apply_blocks(x)
    assert not h.apply_blocks(y).any()


def test_derive_parity_check_rejects_non_systematic():
    with pytest.raises(ValueError):
        derive_parity_check(GfMatrix([[2, 0], [0, 1], [1, 1]]))
