"""Dense matrix algebra over GF(2^8).

Everything here works on `GfMatrix`, a thin wrapper around a row-major
uint8 numpy array.  Elimination uses partial pivoting by first nonzero
element; exact field arithmetic needs no pivot-scaling heuristics.  Dense
storage is fine at wide-code sizes (n <= 1024).

Pure functions over caller-owned matrices; safe for concurrent use on
distinct values.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import gf
from .errors import ConstructionError, SingularMatrixError


class GfMatrix:
    """A rows x cols matrix of GF(2^8) elements."""

    __slots__ = ("a",)

    def __init__(self, array) -> None:
        a = np.array(array, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError("GfMatrix needs a 2-D array")
        self.a = a

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GfMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, order: int) -> "GfMatrix":
        return cls(np.eye(order, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "GfMatrix":
        return cls(np.array([list(r) for r in rows], dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def copy(self) -> "GfMatrix":
        return GfMatrix(self.a.copy())

    def __eq__(self, other) -> bool:
        return isinstance(other, GfMatrix) and np.array_equal(self.a, other.a)

    def __repr__(self) -> str:
        return f"GfMatrix({self.rows}x{self.cols})"

    def rank(self) -> int:
        return _eliminate(self.a.copy())

    def mul(self, other: "GfMatrix") -> "GfMatrix":
        """Matrix product self @ other."""
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = np.zeros((self.rows, other.cols), dtype=np.uint8)
        for i in range(self.rows):
            acc = out[i]
            row = self.a[i]
            for j in range(self.cols):
                c = int(row[j])
                if c:
                    gf.mul_block_acc(acc, c, other.a[j])
        return GfMatrix(out)

    def apply_blocks(self, blocks: np.ndarray) -> np.ndarray:
        """Matrix-vector product where the vector entries are byte blocks.

        `blocks` has shape (cols, block_size); the result has shape
        (rows, block_size).
        """
        if blocks.shape[0] != self.cols:
            raise ValueError("block count does not match matrix columns")
        out = np.zeros((self.rows, blocks.shape[1]), dtype=np.uint8)
        for i in range(self.rows):
            row = self.a[i]
            acc = out[i]
            for j in np.nonzero(row)[0]:
                gf.mul_block_acc(acc, int(row[j]), blocks[j])
        return out

    def invert(self) -> "GfMatrix":
        """Inverse of a square full-rank matrix."""
        n = self.rows
        if n != self.cols:
            raise SingularMatrixError("only square matrices can be inverted")
        work = self.a.copy()
        aug = np.eye(n, dtype=np.uint8)
        for col in range(n):
            pivot = _find_pivot(work, col, col)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            if pivot != col:
                work[[col, pivot]] = work[[pivot, col]]
                aug[[col, pivot]] = aug[[pivot, col]]
            pv_inv = gf.inv(int(work[col, col]))
            if pv_inv != 1:
                work[col] = gf.MUL_TABLE[pv_inv][work[col]]
                aug[col] = gf.MUL_TABLE[pv_inv][aug[col]]
            for r in range(n):
                if r != col and work[r, col]:
                    factor = int(work[r, col])
                    gf.mul_block_acc(work[r], factor, work[col])
                    gf.mul_block_acc(aug[r], factor, aug[col])
        return GfMatrix(aug)

    def solve_blocks(self, rhs: np.ndarray) -> np.ndarray:
        """Solve self @ x = rhs blockwise.

        `rhs` has shape (rows, block_size); returns x of the same shape.
        """
        n = self.rows
        if n != self.cols:
            raise SingularMatrixError("solve needs a square matrix")
        if rhs.shape[0] != n:
            raise ValueError("right-hand side row count mismatch")
        work = self.a.copy()
        out = rhs.astype(np.uint8, copy=True)
        for col in range(n):
            pivot = _find_pivot(work, col, col)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            if pivot != col:
                work[[col, pivot]] = work[[pivot, col]]
                out[[col, pivot]] = out[[pivot, col]]
            pv_inv = gf.inv(int(work[col, col]))
            if pv_inv != 1:
                work[col] = gf.MUL_TABLE[pv_inv][work[col]]
                out[col] = gf.MUL_TABLE[pv_inv][out[col]]
            for r in range(n):
                if r != col and work[r, col]:
                    factor = int(work[r, col])
                    gf.mul_block_acc(work[r], factor, work[col])
                    gf.mul_block_acc(out[r], factor, out[col])
        return out


def _find_pivot(work: np.ndarray, col: int, start_row: int):
    nz = np.nonzero(work[start_row:, col])[0]
    if nz.size == 0:
        return None
    return start_row + int(nz[0])


def _eliminate(work: np.ndarray) -> int:
    """In-place forward elimination; returns the rank."""
    rows, cols = work.shape
    r = 0
    for col in range(cols):
        if r == rows:
            break
        pivot = _find_pivot(work, col, r)
        if pivot is None:
            continue
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        pv_inv = gf.inv(int(work[r, col]))
        if pv_inv != 1:
            work[r] = gf.MUL_TABLE[pv_inv][work[r]]
        below = work[r + 1 :, col]
        for off in np.nonzero(below)[0]:
            i = r + 1 + int(off)
            gf.mul_block_acc(work[i], int(work[i, col]), work[r])
        r += 1
    return r


def vandermonde(points: Sequence[int], num_rows: int, start_power: int = 0) -> GfMatrix:
    """Matrix of consecutive powers: entry (i, j) = points[j] ** (start_power + i)."""
    if num_rows < 1:
        raise ConstructionError("need at least one row")
    pts = list(points)
    if len(set(pts)) != len(pts):
        raise ConstructionError("evaluation points must be distinct")
    if start_power >= 1 and any(p == 0 for p in pts):
        raise ConstructionError("zero point invalid for positive powers")
    out = np.zeros((num_rows, len(pts)), dtype=np.uint8)
    for j, p in enumerate(pts):
        v = gf.power(p, start_power)
        for i in range(num_rows):
            out[i, j] = v
            v = gf.mul(v, p)
    return GfMatrix(out)


def derive_parity_check(g: GfMatrix) -> GfMatrix:
    """Parity-check matrix of a systematic generator.

    For G stacked as [I_k ; A] (n x k, column-vector codewords y = G x),
    H = [A | I_{n-k}] satisfies H y = 0 for every codeword: the A-part
    reproduces the parity symbols, which then cancel against the identity
    part in characteristic 2.
    """
    n, k = g.rows, g.cols
    if n < k:
        raise ValueError("generator must have at least k rows")
    if not np.array_equal(g.a[:k], np.eye(k, dtype=np.uint8)):
        raise ValueError("generator is not systematic (top k rows != identity)")
    m = n - k
    h = np.zeros((m, n), dtype=np.uint8)
    h[:, :k] = g.a[k:]
    h[:, k:] = np.eye(m, dtype=np.uint8)
    return GfMatrix(h)
