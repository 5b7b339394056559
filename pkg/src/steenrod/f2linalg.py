"""Dense exact linear algebra over GF(2).

Vectors are bit-packed into Python ints (bit i = coordinate i), so row
operations are single XORs regardless of width.  Everything is immutable
after construction and all operations are pure functions; pivoting is
deterministic (leftmost nonzero column first) so downstream charts and
resolutions are reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass


class F2DimensionError(ValueError):
    """Shapes do not match; a usage error, distinct from 'no solution'."""


@dataclass(frozen=True)
class F2Vector:
    """A vector over GF(2): `length` coordinates packed into `bits`."""

    length: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise F2DimensionError("bits set beyond vector length")

    @staticmethod
    def from_support(length: int, support) -> "F2Vector":
        bits = 0
        for i in support:
            bits ^= 1 << i
        return F2Vector(length, bits)

    @staticmethod
    def from_list(coords) -> "F2Vector":
        bits = 0
        for i, c in enumerate(coords):
            if c & 1:
                bits |= 1 << i
        return F2Vector(len(coords), bits)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.length != other.length:
            raise F2DimensionError("vector length mismatch")
        return F2Vector(self.length, self.bits ^ other.bits)

    __xor__ = __add__

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]


@dataclass(frozen=True)
class F2Matrix:
    """A rows x cols matrix over GF(2), stored as a tuple of row bitmasks."""

    rows: int
    cols: int
    row_data: tuple

    def __post_init__(self):
        if len(self.row_data) != self.rows:
            raise F2DimensionError("row count mismatch")
        for r in self.row_data:
            if r < 0 or (self.cols < r.bit_length()):
                raise F2DimensionError("row wider than cols")

    @staticmethod
    def from_rows(rows_bits, cols: int) -> "F2Matrix":
        rows_bits = tuple(rows_bits)
        return F2Matrix(len(rows_bits), cols, rows_bits)

    @staticmethod
    def from_lists(lists) -> "F2Matrix":
        lists = list(lists)
        cols = len(lists[0]) if lists else 0
        rows = []
        for row in lists:
            bits = 0
            for i, c in enumerate(row):
                if c & 1:
                    bits |= 1 << i
            rows.append(bits)
        return F2Matrix(len(lists), cols, tuple(rows))

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "F2Matrix":
        return F2Matrix(rows, cols, (0,) * rows)

    def entry(self, i: int, j: int) -> int:
        return (self.row_data[i] >> j) & 1

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.cols, self.row_data[i])

    def mul_vec(self, v: F2Vector) -> F2Vector:
        if v.length != self.cols:
            raise F2DimensionError("matrix/vector shape mismatch")
        bits = 0
        for i, r in enumerate(self.row_data):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return F2Vector(self.rows, bits)

    def vec_mul(self, v: F2Vector) -> F2Vector:
        """Row vector times matrix: combines the rows selected by v."""
        if v.length != self.rows:
            raise F2DimensionError("vector/matrix shape mismatch")
        acc = 0
        b = v.bits
        i = 0
        while b:
            if b & 1:
                acc ^= self.row_data[i]
            b >>= 1
            i += 1
        return F2Vector(self.cols, acc)

    def matmul(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise F2DimensionError("matrix shape mismatch")
        out = []
        for r in self.row_data:
            acc = 0
            b = r
            i = 0
            while b:
                if b & 1:
                    acc ^= other.row_data[i]
                b >>= 1
                i += 1
            out.append(acc)
        return F2Matrix(self.rows, other.cols, tuple(out))

    def transpose(self) -> "F2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.row_data):
            b = r
            j = 0
            while b:
                if b & 1:
                    out[j] |= 1 << i
                b >>= 1
                j += 1
        return F2Matrix(self.cols, self.rows, tuple(out))

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.cols:
            raise F2DimensionError("column mismatch in vstack")
        return F2Matrix(self.rows + other.rows, self.cols,
                        self.row_data + other.row_data)


def _eliminate(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """In-place Gauss-Jordan elimination; returns (reduced rows, pivot cols)."""
    pivots = []
    pivot_row = 0
    for col in range(cols):
        mask = 1 << col
        found = -1
        for r in range(pivot_row, len(rows)):
            if rows[r] & mask:
                found = r
                break
        if found < 0:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        for r in range(len(rows)):
            if r != pivot_row and rows[r] & mask:
                rows[r] ^= rows[pivot_row]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows, pivots


def rref(m: F2Matrix) -> tuple[F2Matrix, list[int]]:
    """Reduced row-echelon form; pivots strictly increasing, row space kept."""
    rows, pivots = _eliminate(list(m.row_data), m.cols)
    return F2Matrix(m.rows, m.cols, tuple(rows)), pivots


def rank(m: F2Matrix) -> int:
    _, pivots = _eliminate(list(m.row_data), m.cols)
    return len(pivots)


def rank_of_rows(rows_bits, cols: int) -> int:
    _, pivots = _eliminate(list(rows_bits), cols)
    return len(pivots)


def kernel_basis(m: F2Matrix) -> list[F2Vector]:
    """Basis of {v : m v = 0}; len = cols - rank(m), deterministic order."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for fc in free_cols:
        bits = 1 << fc
        for i, pc in enumerate(pivots):
            if red.entry(i, fc):
                bits |= 1 << pc
        basis.append(F2Vector(m.cols, bits))
    return basis


def solve(m: F2Matrix, b: F2Vector):
    """One solution of m x = b, or None when b is outside the column space."""
    if b.length != m.rows:
        raise F2DimensionError("rhs length must equal row count")
    # Work on the transpose so elimination rows are candidate columns,
    # augmented with identity bits to track which columns were combined.
    aug_rows = []
    for j in range(m.cols):
        col_bits = 0
        for i in range(m.rows):
            if m.entry(i, j):
                col_bits |= 1 << i
        aug_rows.append(col_bits)
    rows = [aug_rows[j] | (1 << (m.rows + j)) for j in range(m.cols)]
    rows, _ = _eliminate(rows, m.rows)
    target = b.bits
    combo = 0
    for r in rows:
        head = r & ((1 << m.rows) - 1)
        if head == 0:
            continue
        low = head & -head
        if target & low:
            target ^= head
            combo ^= r >> m.rows
    if target != 0:
        return None
    return F2Vector(m.cols, combo)


def row_space_basis(rows_bits, cols: int) -> list[int]:
    rows, pivots = _eliminate(list(rows_bits), cols)
    return rows[: len(pivots)]


def in_span(rows_bits, cols: int, v_bits: int) -> bool:
    base = row_space_basis(rows_bits, cols)
    r = rank_of_rows(base + [v_bits], cols)
    return r == len(base)


def complement_pivots(sub_rows, ambient_dim: int) -> list[int]:
    """Indices of unit vectors extending a row space to the full space.

    Deterministic: the non-pivot coordinates of the reduced subspace basis.
    """
    _, pivots = _eliminate(list(sub_rows), ambient_dim)
    pivot_set = set(pivots)
    return [j for j in range(ambient_dim) if j not in pivot_set]


def quotient_reps(sub_rows, ambient_dim: int):
    """(complement indices, reducer) for the quotient by span(sub_rows).

    reducer(v_bits) -> canonical representative with zero coordinates at
    the subspace pivots; two vectors are congruent iff reps are equal.
    """
    rows, pivots = _eliminate(list(sub_rows), ambient_dim)
    rows = rows[: len(pivots)]

    def reduce(v_bits: int) -> int:
        for row, pc in zip(rows, pivots):
            if v_bits & (1 << pc):
                v_bits ^= row
        return v_bits

    comp = [j for j in range(ambient_dim) if j not in set(pivots)]
    return comp, reduce
