"""Field arithmetic tests against an independent bit-level oracle."""

import random

import numpy as np
import pytest

from widelrc import gf


def clmul_reduce(a: int, b: int) -> int:
    """Carry-less multiply then polynomial reduction; no table lookups."""
    acc = 0
    for bit in range(8):
        if (b >> bit) & 1:
            acc ^= a << bit
    for bit in range(15, 7, -1):
        if (acc >> bit) & 1:
            acc ^= gf.REDUCING_POLY << (bit - 8)
    return acc


def test_add_examples():
    assert gf.add(0x57, 0x57) == 0x00
    assert gf.add(0x57, 0x83) == 0xD4
    for a in range(256):
        assert gf.add(a, 0) == a


def test_mul_examples():
    assert gf.mul(0x02, 0x80) == 0x1D
    for a in range(256):
        assert gf.mul(a, 1) == a
        assert gf.mul(a, 0) == 0


def test_mul_matches_bitwise_oracle_everywhere():
    for a in range(256):
        for b in range(256):
            assert gf.mul(a, b) == clmul_reduce(a, b), (a, b)


def test_inv_examples():
    assert gf.inv(1) == 1
    assert gf.inv(0x02) == 0x8E
    # exhaustive-search oracle
    for a in (0x02, 0x37, 0xFE):
        candidates = [b for b in range(1, 256) if clmul_reduce(a, b) == 1]
        assert candidates == [gf.inv(a)]
    with pytest.raises(ZeroDivisionError):
        gf.inv(0)


def test_inv_is_involution():
    for a in range(1, 256):
        assert gf.inv(gf.inv(a)) == a
        assert gf.mul(a, gf.inv(a)) == 1


def test_table_invariants():
    # antilog[log[a]] = a for all nonzero a
    for a in range(1, 256):
        assert gf.ANTILOG_TABLE[gf.LOG_TABLE[a]] == a
    # the antilog table wraps so that two log indices never need a modulo
    assert len(gf.ANTILOG_TABLE) == 510
    for i in range(255, 510):
        assert gf.ANTILOG_TABLE[i] == gf.ANTILOG_TABLE[i - 255]


def test_field_axioms_random_triples():
    rng = random.Random(0xC0DE)
    for _ in range(10_000):
        a, b, c = rng.randrange(256), rng.randrange(256), rng.randrange(256)
        assert gf.mul(a, b) == gf.mul(b, a)
        assert gf.add(a, b) == gf.add(b, a)
        assert gf.mul(a, gf.mul(b, c)) == gf.mul(gf.mul(a, b), c)
        assert gf.add(a, gf.add(b, c)) == gf.add(gf.add(a, b), c)
        assert gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c))


def test_power():
    assert gf.power(0, 0) == 1
    assert gf.power(0, 3) == 0
    rng = random.Random(7)
    for _ in range(200):
        a = rng.randrange(1, 256)
        e = rng.randrange(0, 20)
        expected = 1
        for _ in range(e):
            expected = clmul_reduce(expected, a)
        assert gf.power(a, e) == expected


def test_xor_block_acc():
    a = gf.as_block(bytes([0x01, 0x02]))
    b = gf.as_block(bytes([0x03, 0x04]))
    gf.xor_block_acc(a, b)
    assert a.tolist() == [0x02, 0x06]
    gf.xor_block_acc(a, a)
    assert not a.any()
    dst = gf.as_block(bytes([9, 9]))
    gf.xor_block_acc(dst, gf.zero_block(2))
    assert dst.tolist() == [9, 9]


def test_mul_block_acc():
    dst = gf.zero_block(1)
    gf.mul_block_acc(dst, 0x02, gf.as_block(bytes([0x80])))
    assert dst.tolist() == [0x1D]
    # coeff 0 leaves dst alone; coeff 1 equals xor accumulate
    dst = gf.as_block(bytes([5, 6]))
    gf.mul_block_acc(dst, 0, gf.as_block(bytes([7, 8])))
    assert dst.tolist() == [5, 6]
    gf.mul_block_acc(dst, 1, gf.as_block(bytes([7, 8])))
    assert dst.tolist() == [5 ^ 7, 6 ^ 8]


def test_block_acc_linearity():
    rng = np.random.default_rng(3)
    for coeff in (0x00, 0x01, 0x53, 0xFF):
        a = rng.integers(0, 256, 64, dtype=np.uint8)
        b = rng.integers(0, 256, 64, dtype=np.uint8)
        one_shot = gf.zero_block(64)
        gf.mul_block_acc(one_shot, coeff, a ^ b)
        two_step = gf.zero_block(64)
        gf.mul_block_acc(two_step, coeff, a)
        gf.mul_block_acc(two_step, coeff, b)
        assert np.array_equal(one_shot, two_step)


def test_block_length_mismatch_rejected():
    with pytest.raises(ValueError):
        gf.xor_block_acc(gf.zero_block(3), gf.zero_block(4))
    with pytest.raises(ValueError):
        gf.mul_block_acc(gf.zero_block(3), 2, gf.zero_block(4))
