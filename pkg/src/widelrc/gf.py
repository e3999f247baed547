"""Arithmetic in GF(2^8) plus the bulk byte-block kernels used by every coding path.

The field is built over the reduction polynomial
    x^8 + x^4 + x^3 + x^2 + 1  (0x11D)
with generator element 0x02, the conventional choice for byte-oriented
storage coding.  Addition is XOR; multiplication is table-driven via
log/antilog lookups.

All tables are built once at import time and are immutable afterwards, so
every function here is a pure read of shared tables plus caller-owned
buffers and is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import numpy as np

REDUCING_POLY = 0x11D
GENERATOR = 0x02
FIELD_SIZE = 256


def _build_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    # antilog covers index sums up to 254 + 254 so mul() needs no modulo
    exp = np.zeros(510, dtype=np.uint8)
    log = np.full(256, -1, dtype=np.int16)  # log[0] stays -1 (undefined)
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= REDUCING_POLY
    for i in range(255, 510):
        exp[i] = exp[i - 255]

    inv = np.zeros(256, dtype=np.uint8)
    for a in range(1, 256):
        inv[a] = exp[255 - log[a]]

    # full 256x256 product table; row c maps any byte b to c*b, which lets
    # mul_block_acc run as a single fancy-index gather over a whole buffer
    mul_table = np.zeros((256, 256), dtype=np.uint8)
    b_logs = log[1:].astype(np.int32)
    for a in range(1, 256):
        mul_table[a, 1:] = exp[int(log[a]) + b_logs]
    return exp, log, inv, mul_table


ANTILOG_TABLE, LOG_TABLE, INVERSE_TABLE, MUL_TABLE = _build_tables()


def add(a: int, b: int) -> int:
    """Field addition (== subtraction): bitwise XOR."""
    return a ^ b


def mul(a: int, b: int) -> int:
    """Field multiplication via the precomputed product table."""
    return int(MUL_TABLE[a, b])


def inv(a: int) -> int:
    """Multiplicative inverse; zero has none."""
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^8)")
    return int(INVERSE_TABLE[a])


def power(a: int, e: int) -> int:
    """a raised to a non-negative integer exponent."""
    if e < 0:
        raise ValueError("negative exponent")
    if a == 0:
        return 1 if e == 0 else 0
    return int(ANTILOG_TABLE[(int(LOG_TABLE[a]) * e) % 255])


def exp_element(i: int) -> int:
    """The i-th power of the generator element (0x02)."""
    return int(ANTILOG_TABLE[i % 255])


def as_block(data) -> np.ndarray:
    """Copy arbitrary bytes-like data into a mutable uint8 block."""
    return np.frombuffer(bytes(data), dtype=np.uint8).copy()


def zero_block(size: int) -> np.ndarray:
    return np.zeros(size, dtype=np.uint8)


def _check_blocks(dst: np.ndarray, src: np.ndarray) -> None:
    if dst.shape != src.shape:
        raise ValueError(
            f"block length mismatch: dst {dst.shape} vs src {src.shape}"
        )


def xor_block_acc(dst: np.ndarray, src: np.ndarray) -> np.ndarray:
    """dst ^= src elementwise; returns dst."""
    _check_blocks(dst, src)
    np.bitwise_xor(dst, src, out=dst)
    return dst


def mul_block_acc(dst: np.ndarray, coeff: int, src: np.ndarray) -> np.ndarray:
    """dst ^= coeff * src elementwise; returns dst."""
    _check_blocks(dst, src)
    if coeff == 0:
        return dst
    if coeff == 1:
        np.bitwise_xor(dst, src, out=dst)
    else:
        np.bitwise_xor(dst, MUL_TABLE[coeff][src], out=dst)
    return dst
