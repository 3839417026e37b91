"""Bit-packed linear algebra over GF(2).

Vectors are Python ints used as bitsets (bit j = coordinate j); matrices are
sequences of row bitmasks.  All routines are pure and allocation-light so that
callers can enumerate over millions of vectors.
"""

from __future__ import annotations

from dataclasses import dataclass


def parity(x: int) -> int:
    """Parity of the number of set bits."""
    return x.bit_count() & 1


def dot(x: int, y: int) -> int:
    """Standard inner product of two bit vectors."""
    return (x & y).bit_count() & 1


def iter_bits(x: int):
    """Yield the indices of the set bits of x, lowest first."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def identity(dim: int) -> list[int]:
    return [1 << j for j in range(dim)]


def transpose(rows: list[int] | tuple[int, ...], dim: int) -> list[int]:
    cols = [0] * dim
    for i, r in enumerate(rows):
        for j in iter_bits(r):
            cols[j] |= 1 << i
    return cols


def vecmat(x: int, rows) -> int:
    """Row vector times matrix: XOR of the rows selected by x."""
    acc = 0
    for j in iter_bits(x):
        acc ^= rows[j]
    return acc


def matmul(a_rows, b_rows) -> list[int]:
    """Product of two bit matrices given by row masks."""
    return [vecmat(r, b_rows) for r in a_rows]


def rank(rows, dim: int) -> int:
    """Rank of a bit matrix via Gaussian elimination."""
    work = list(rows)
    rk = 0
    row = 0
    for col in range(dim):
        pivot = None
        for r in range(row, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for r in range(len(work)):
            if r != row and ((work[r] >> col) & 1):
                work[r] ^= work[row]
        rk += 1
        row += 1
        if row == len(work):
            break
    return rk


def solve(rows, rhs, dim: int) -> int | None:
    """Particular solution of the linear system over GF(2).

    ``rows[k]`` is the bitmask of the k-th equation's coefficients, ``rhs[k]``
    its right-hand bit.  Free variables are set to 0.  Returns None when the
    system is inconsistent.
    """
    eqs = [(rows[k], rhs[k] & 1) for k in range(len(rows))]
    pivots: list[tuple[int, int, int]] = []  # (col, mask, rhs)
    for mask, b in eqs:
        for col, pmask, pb in pivots:
            if (mask >> col) & 1:
                mask ^= pmask
                b ^= pb
        if mask == 0:
            if b:
                return None
            continue
        col = (mask & -mask).bit_length() - 1
        pivots.append((col, mask, b))
    # back-substitute, free variables = 0
    x = 0
    for col, mask, b in reversed(pivots):
        val = b ^ parity(mask & x & ~(1 << col))
        if val:
            x |= 1 << col
    return x


@dataclass(frozen=True)
class SpanSolver:
    """Coordinates with respect to a fixed independent family of bit vectors.

    ``coords(v)`` returns the combination mask expressing v in the family, or
    None when v lies outside the span.
    """

    vectors: tuple[int, ...]
    _table: tuple[tuple[int, int, int], ...]  # (pivot, reduced vector, combo)

    @classmethod
    def build(cls, vectors) -> "SpanSolver":
        table: list[tuple[int, int, int]] = []
        for t, v in enumerate(vectors):
            r, c = v, 1 << t
            for pivot, vec, combo in table:
                if (r >> pivot) & 1:
                    r ^= vec
                    c ^= combo
            if r == 0:
                raise ValueError("vectors are linearly dependent")
            pivot = (r & -r).bit_length() - 1
            table.append((pivot, r, c))
        return cls(tuple(vectors), tuple(table))

    def coords(self, v: int) -> int | None:
        r, c = v, 0
        for pivot, vec, combo in self._table:
            if (r >> pivot) & 1:
                r ^= vec
                c ^= combo
        return c if r == 0 else None

    def combine(self, coords: int) -> int:
        acc = 0
        for t in iter_bits(coords):
            acc ^= self.vectors[t]
        return acc
