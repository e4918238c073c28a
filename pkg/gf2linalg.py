"""Dense GF(2) linear algebra on bit-packed rows.

A :class:`BitMatrix` keeps each row as a Python ``int`` whose bit ``j`` is the
entry in column ``j``. Row XOR is a single integer operation, which is what
every elimination routine here is built on.

Besides rank and null space over GF(2) this module has the other two binary
matrix ranks that show up around graph states: the rank over the rationals
and the Boolean rank, together with the biclique partition number computed by
exhaustive search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from config import DEFAULT_CONFIG
from errors import InvalidParam, ResourceLimit

logger = logging.getLogger(__name__)


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterable[int]:
    """Yield the indices of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_to_int(bits: Iterable[int]) -> int:
    value = 0
    for index in bits:
        value |= 1 << index
    return value


@dataclass(frozen=True, slots=True)
class BitMatrix:
    """Immutable ``nrows x cols`` matrix over GF(2), one packed int per row."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        if self.cols < 0:
            raise InvalidParam("column count must be non-negative")
        mask = (1 << self.cols) - 1
        for row in self.rows:
            if row < 0 or row & ~mask:
                raise InvalidParam(f"row {row:#x} has bits beyond column {self.cols}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, cols: int) -> BitMatrix:
        return cls((0,) * nrows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def ones(cls, nrows: int, cols: int) -> BitMatrix:
        return cls(((1 << cols) - 1,) * nrows, cols)

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        """Build from nested 0/1 lists; ``cols`` is needed only for 0 rows."""
        if cols is None:
            cols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != cols:
                raise InvalidParam("ragged matrix rows")
            rows.append(bits_to_int(j for j, v in enumerate(r) if v & 1))
        return cls(tuple(rows), cols)

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> BitMatrix:
        arr = (np.asarray(array) & 1).astype(np.uint8)
        if arr.ndim != 2:
            raise InvalidParam("expected a 2-D array")
        return cls.from_lists(arr.tolist(), cols=arr.shape[1])

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        """Parse rows of ``0``/``1`` characters, one row per line."""
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if any(set(line) - {"0", "1"} for line in lines):
            raise InvalidParam("parity-check rows may only contain 0 and 1")
        return cls.from_lists([[int(ch) for ch in line] for line in lines])

    # -- accessors --------------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return (self.rows[i] >> j) & 1

    def count_ones(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.rows]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.nrows, self.cols)

    def to_text(self) -> str:
        return "\n".join("".join(str(v) for v in row) for row in self.to_lists())

    # -- structure --------------------------------------------------------

    def transpose(self) -> BitMatrix:
        rows = [0] * self.cols
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                rows[j] |= 1 << i
        return BitMatrix(tuple(rows), self.nrows)

    def column(self, j: int) -> int:
        return bits_to_int(i for i, r in enumerate(self.rows) if (r >> j) & 1)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> BitMatrix:
        rows = []
        for i in row_idx:
            r = self.rows[i]
            rows.append(bits_to_int(k for k, j in enumerate(col_idx) if (r >> j) & 1))
        return BitMatrix(tuple(rows), len(col_idx))

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if self.nrows != other.nrows:
            raise InvalidParam("hstack needs equal row counts")
        rows = tuple(a | (b << self.cols) for a, b in zip(self.rows, other.rows))
        return BitMatrix(rows, self.cols + other.cols)

    def matvec(self, v: int) -> int:
        """Return ``M v`` over GF(2) as a packed column vector."""
        return bits_to_int(i for i, r in enumerate(self.rows) if popcount(r & v) & 1)


# ---------------------------------------------------------------------------
# GF(2) elimination
# ---------------------------------------------------------------------------


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form over GF(2) and the pivot columns."""
    rows = list(m.rows)
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        bit = 1 << col
        found = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return BitMatrix(tuple(rows), m.cols), pivots


def rank_xor(m: BitMatrix) -> int:
    """Rank over GF(2)."""
    basis: dict[int, int] = {}
    for row in m.rows:
        while row:
            top = row.bit_length() - 1
            if top in basis:
                row ^= basis[top]
            else:
                basis[top] = row
                break
    return len(basis)


def span_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Echelon basis of the span of packed vectors, keyed by leading bit."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return basis


def in_span(basis: dict[int, int], v: int) -> bool:
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return False
        v ^= basis[top]
    return True


def kernel_xor(m: BitMatrix) -> list[int]:
    """Basis of the right null space ``{v : M v = 0}`` over GF(2)."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for i, p in enumerate(pivots):
            if (reduced.rows[i] >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def solve_xor(m: BitMatrix, rhs: Sequence[int]) -> int | None:
    """One solution ``v`` of ``M v = rhs`` over GF(2), or ``None``."""
    if len(rhs) != m.nrows:
        raise InvalidParam("right-hand side length must equal the row count")
    augmented = BitMatrix(
        tuple(r | ((b & 1) << m.cols) for r, b in zip(m.rows, rhs)), m.cols + 1
    )
    reduced, pivots = rref(augmented)
    if m.cols in pivots:
        return None
    v = 0
    for i, p in enumerate(pivots):
        if (reduced.rows[i] >> m.cols) & 1:
            v |= 1 << p
    return v


# ---------------------------------------------------------------------------
# Rank over the rationals
# ---------------------------------------------------------------------------


def rank_rational(m: BitMatrix) -> int:
    """Rank of the 0/1 matrix over Q, by exact fraction elimination."""
    rows = [[Fraction(v) for v in row] for row in m.to_lists()]
    rank = 0
    for col in range(m.cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col] / lead
            if factor:
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Boolean rank and biclique partition number
# ---------------------------------------------------------------------------


def _cells(m: BitMatrix) -> int:
    """Pack the ones of ``m`` into one int, bit ``i * cols + j``."""
    packed = 0
    for i, r in enumerate(m.rows):
        packed |= r << (i * m.cols)
    return packed


def _rect_cells(row_set: int, col_set: int, cols: int) -> int:
    packed = 0
    for i in iter_bits(row_set):
        packed |= col_set << (i * cols)
    return packed


def _prepare_search(m: BitMatrix, cap: int, limit: int) -> BitMatrix:
    if cap < 1:
        raise InvalidParam("cap must be at least 1")
    ones = m.count_ones()
    if ones > limit:
        raise ResourceLimit("bp_search_limit", limit, ones)
    # fewer rows means fewer row subsets to enumerate
    return m.transpose() if m.nrows > m.cols else m


def maximal_rectangles(m: BitMatrix) -> list[tuple[int, int]]:
    """All maximal all-ones rectangles as ``(row_set, col_set)`` bitmasks."""
    found: set[tuple[int, int]] = set()
    nonzero = [i for i, r in enumerate(m.rows) if r]

    def extend(start: int, cols: int) -> None:
        for k in range(start, len(nonzero)):
            common = cols & m.rows[nonzero[k]]
            if not common:
                continue
            row_set = bits_to_int(i for i, r in enumerate(m.rows) if r & common == common)
            found.add((row_set, common))
            extend(k + 1, common)

    extend(0, (1 << m.cols) - 1)
    return sorted(found)


def boolean_rank(
    m: BitMatrix,
    cap: int = DEFAULT_CONFIG.bp_cap,
    *,
    limit: int = DEFAULT_CONFIG.bp_search_limit,
) -> int | None:
    """Biclique cover number: fewest rectangles whose union is the ones of ``m``.

    Returns ``None`` when no cover with at most ``cap`` rectangles exists.
    """
    m = _prepare_search(m, cap, limit)
    target = _cells(m)
    if not target:
        return 0
    rects = [_rect_cells(r, c, m.cols) for r, c in maximal_rectangles(m)]
    logger.debug("boolean_rank: %d ones, %d maximal rectangles", popcount(target), len(rects))

    def cover(uncovered: int, budget: int) -> bool:
        if not uncovered:
            return True
        if budget == 0:
            return False
        cell = uncovered & -uncovered
        return any(cover(uncovered & ~rect, budget - 1) for rect in rects if rect & cell)

    for k in range(1, cap + 1):
        if cover(target, k):
            return k
    return None


def biclique_partition_number(
    m: BitMatrix,
    cap: int = DEFAULT_CONFIG.bp_cap,
    *,
    limit: int = DEFAULT_CONFIG.bp_search_limit,
) -> int | None:
    """Fewest rectangles with pairwise disjoint cells whose union is the ones of ``m``.

    The search branches on every rectangle containing the lowest uncovered
    cell and deepens from the rational rank, which bounds the answer below.
    Returns ``None`` when more than ``cap`` rectangles would be needed.
    """
    m = _prepare_search(m, cap, limit)
    target = _cells(m)
    if not target:
        return 0
    cols = m.cols
    row_mask = (1 << cols) - 1

    def rectangles_at(remaining: int, cell: int) -> Iterable[int]:
        i, j = divmod(cell.bit_length() - 1, cols)
        rows = [(remaining >> (k * cols)) & row_mask for k in range(m.nrows)]
        others = [k for k in range(m.nrows) if k != i and (rows[k] >> j) & 1]
        for subset in range(1 << len(others)):
            row_set = 1 << i
            allowed = rows[i]
            for t in iter_bits(subset):
                row_set |= 1 << others[t]
                allowed &= rows[others[t]]
            extra = allowed & ~(1 << j)
            # every column subset of ``extra`` together with column j
            sub = extra
            while True:
                yield _rect_cells(row_set, sub | (1 << j), cols)
                if sub == 0:
                    break
                sub = (sub - 1) & extra

    def partition(remaining: int, budget: int) -> bool:
        if not remaining:
            return True
        if budget == 0:
            return False
        cell = remaining & -remaining
        return any(partition(remaining & ~rect, budget - 1) for rect in rectangles_at(remaining, cell))

    start = max(1, rank_rational(m))
    for k in range(start, cap + 1):
        logger.debug("biclique_partition_number: trying %d rectangles", k)
        if partition(target, k):
            return k
    return None
