"""Dense linear algebra over the two-element field.

Vectors are plain Python ints used as bit sets: bit ``i`` holds coordinate
``i``.  A :class:`BitMatrix` stores one such int per row, so row XOR is a
single big-int operation regardless of width.

Pivots are always chosen deterministically (the highest set bit of the
first vector that exposes it), which keeps every basis computed downstream
reproducible.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np


def iter_bits(v: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``v`` in ascending order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def vec_from_bits(bits: Iterable[int]) -> int:
    v = 0
    for b in bits:
        v ^= 1 << b
    return v


def vec_to_array(v: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint8)
    for i in iter_bits(v):
        if i >= n:
            raise ValueError(f"bit {i} outside a vector of length {n}")
        out[i] = 1
    return out


def vec_from_array(a) -> int:
    a = np.asarray(a, dtype=np.uint8) & 1
    if a.size == 0:
        return 0
    return int.from_bytes(np.packbits(a, bitorder="little").tobytes(), "little")


def dot(u: int, v: int) -> int:
    return (u & v).bit_count() & 1


class BitMatrix:
    """Matrix over F2 with bit-packed rows.

    ``rows[i]`` is an int whose bit ``j`` is entry ``(i, j)``.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self.rows = [0] * nrows
        else:
            if len(rows) != nrows:
                raise ValueError(f"expected {nrows} rows, got {len(rows)}")
            limit = 1 << ncols
            for r in rows:
                if r < 0 or r >= limit:
                    raise ValueError("row has bits outside the column range")
            self.rows = list(rows)

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_dense(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError("from_dense expects a 2-d array")
        return cls(a.shape[0], a.shape[1], [vec_from_array(row) for row in a])

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[int]) -> "BitMatrix":
        """Build a matrix whose ``j``-th column is the vector ``cols[j]``."""
        rows = [0] * nrows
        for j, c in enumerate(cols):
            bit = 1 << j
            for i in iter_bits(c):
                if i >= nrows:
                    raise ValueError(f"column {j} has a bit outside {nrows} rows")
                rows[i] |= bit
        return cls(nrows, len(cols), rows)

    # -- access ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {ij} outside a {self.shape} matrix")
        return (self.rows[i] >> j) & 1

    def __setitem__(self, ij: tuple[int, int], value: int) -> None:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {ij} outside a {self.shape} matrix")
        if value & 1:
            self.rows[i] |= 1 << j
        else:
            self.rows[i] &= ~(1 << j)

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            for j in iter_bits(r):
                cols[j] |= bit
        return cols

    def column(self, j: int) -> int:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        c = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                c |= 1 << i
        return c

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = vec_to_array(r, self.ncols)
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, self.rows)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.nrows, self.columns())

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    # -- arithmetic -----------------------------------------------------
    def apply(self, v: int) -> int:
        """Matrix-vector product ``self @ v``."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows = []
        orows = other.rows
        for r in self.rows:
            acc = 0
            for k in iter_bits(r):
                acc ^= orows[k]
            rows.append(acc)
        return BitMatrix(self.nrows, other.ncols, rows)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(self.rows)))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(
            "".join(str((r >> j) & 1) for j in range(self.ncols)) for r in self.rows
        )
        return f"BitMatrix({self.nrows}x{self.ncols}: [{body}])"


def hstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    if not blocks:
        raise ValueError("hstack needs at least one block")
    nrows = blocks[0].nrows
    rows = [0] * nrows
    shift = 0
    for b in blocks:
        if b.nrows != nrows:
            raise ValueError("hstack blocks must share the row count")
        for i, r in enumerate(b.rows):
            rows[i] |= r << shift
        shift += b.ncols
    return BitMatrix(nrows, shift, rows)


def vstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    if not blocks:
        raise ValueError("vstack needs at least one block")
    ncols = blocks[0].ncols
    rows: list[int] = []
    for b in blocks:
        if b.ncols != ncols:
            raise ValueError("vstack blocks must share the column count")
        rows.extend(b.rows)
    return BitMatrix(len(rows), ncols, rows)


# -- echelon helpers (vectors as ints) ----------------------------------

def _insert(pivots: dict[int, int], v: int) -> int:
    """Reduce ``v`` against ``pivots`` (keyed by highest bit); store it if
    independent.  Returns the reduced vector (0 when dependent)."""
    while v:
        h = v.bit_length() - 1
        p = pivots.get(h)
        if p is None:
            pivots[h] = v
            return v
        v ^= p
    return 0


def rank_of_vectors(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for v in vectors:
        if _insert(pivots, v):
            r += 1
    return r


def rank(m: BitMatrix) -> int:
    """F2 rank of ``m``; ``m`` itself is left untouched."""
    if m.nrows <= m.ncols:
        return rank_of_vectors(m.rows)
    return rank_of_vectors(m.columns())


def _reduce_columns(cols: Sequence[int]):
    """Column-reduce while tracking combinations.

    Returns ``(pivots, kernel)`` where ``pivots`` maps a highest bit to a
    ``(reduced column, combination)`` pair and ``kernel`` lists combination
    vectors of columns summing to zero.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for j, c in enumerate(cols):
        comb = 1 << j
        while c:
            h = c.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = (c, comb)
                break
            c ^= p[0]
            comb ^= p[1]
        else:
            kernel.append(comb)
    return pivots, kernel


def kernel_basis(m: BitMatrix) -> list[int]:
    """Basis of ``{v : m v = 0}``; there are ``cols - rank(m)`` vectors."""
    _, kernel = _reduce_columns(m.columns())
    return kernel


def solve(m: BitMatrix, b: int) -> int | None:
    """Some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent."""
    if b < 0 or b >> m.nrows:
        raise ValueError(f"right-hand side does not fit {m.nrows} rows")
    pivots, _ = _reduce_columns(m.columns())
    x = 0
    while b:
        h = b.bit_length() - 1
        p = pivots.get(h)
        if p is None:
            return None
        b ^= p[0]
        x ^= p[1]
    return x


def image_complement_basis(sub: BitMatrix, ambient_dim: int) -> list[int]:
    """Unit vectors that extend a basis of ``col(sub)`` to all of F2^ambient_dim."""
    if sub.nrows != ambient_dim:
        raise ValueError(f"sub has {sub.nrows} rows, ambient dimension is {ambient_dim}")
    pivots: dict[int, int] = {}
    for c in sub.columns():
        _insert(pivots, c)
    return [1 << i for i in range(ambient_dim) if i not in pivots]


def inverse(m: BitMatrix) -> BitMatrix:
    if m.nrows != m.ncols:
        raise ValueError("only square matrices can be inverted")
    n = m.nrows
    cols = []
    for i in range(n):
        x = solve(m, 1 << i)
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return BitMatrix.from_columns(n, cols)


def random_matrix(rng: np.random.Generator, nrows: int, ncols: int) -> BitMatrix:
    return BitMatrix.from_dense(rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8))


def random_invertible(rng: np.random.Generator, n: int) -> BitMatrix:
    while True:
        m = random_matrix(rng, n, n)
        if rank(m) == n:
            return m
