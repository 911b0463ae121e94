"""Latin squares, orthogonal pairs, and the GF(2) structure of their 4-nets.

A pair of orthogonal Latin squares of order n is equivalent to a 4-net(n):
n^2 points (the cells) and 4n lines in four parallel classes (rows, columns,
symbols of the first square, symbols of the second square).  A relation is a
set of lines whose incidence-matrix columns sum to zero over GF(2); this
module knows how to test membership of lines in a prescribed pair of
relations R1/R2, label cells and symbol pairs accordingly, and compute
GF(2) ranks of incidence matrices.

Everything here is pure and immutable; rows, columns and symbols are
0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

# The five admissible shapes of two independent [4,4,4,4] relations at
# order 10.  classes[c] = (x, y, z) counts lines of parallel class c lying
# in R1&R2, R1 only and R2 only; the remaining 10-x-y-z lines are in neither.
CASE_FORMS = {
    1: ((1, 3, 3), (1, 3, 3), (1, 3, 3), (1, 3, 3)),
    2: ((1, 3, 3), (1, 3, 3), (1, 3, 3), (2, 2, 2)),
    3: ((1, 3, 3), (1, 3, 3), (2, 2, 2), (2, 2, 2)),
    4: ((1, 3, 3), (2, 2, 2), (2, 2, 2), (2, 2, 2)),
    5: ((2, 2, 2), (2, 2, 2), (2, 2, 2), (2, 2, 2)),
}


def _to_cells(square: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Normalize a nested sequence into a validated n*n tuple grid."""
    rows = tuple(tuple(int(v) for v in row) for row in square)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ValueError("square must be a non-empty n×n array")
    for row in rows:
        for v in row:
            if not 0 <= v < n:
                raise ValueError(f"symbol {v} out of range [0, {n})")
    return rows


def is_latin(square: Sequence[Sequence[int]]) -> bool:
    """True iff every row and every column is a permutation of 0..n-1.

    Raises ValueError for arrays that are not n×n or contain out-of-range
    symbols; in-range arrays that merely repeat symbols return False.
    """
    rows = _to_cells(square)
    n = len(rows)
    full = (1 << n) - 1
    for row in rows:
        mask = 0
        for v in row:
            mask |= 1 << v
        if mask != full:
            return False
    for j in range(n):
        mask = 0
        for row in rows:
            mask |= 1 << row[j]
        if mask != full:
            return False
    return True


@dataclass(frozen=True)
class LatinSquare:
    """An order-n Latin square with symbols 0..n-1; validated on construction."""

    cells: tuple[tuple[int, ...], ...]

    def __init__(self, cells: Sequence[Sequence[int]]):
        grid = _to_cells(cells)
        if not is_latin(grid):
            raise ValueError("rows and columns must each be permutations")
        object.__setattr__(self, "cells", grid)

    @property
    def order(self) -> int:
        return len(self.cells)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.cells[i][j]

    @classmethod
    def cyclic(cls, n: int, slope: int = 1) -> "LatinSquare":
        """Cell (i, j) = (i + slope*j) mod n; Latin whenever gcd(slope, n) == 1."""
        return cls([[(i + slope * j) % n for j in range(n)] for i in range(n)])


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    """True iff the n^2 superimposed symbol pairs (a_ij, b_ij) are all distinct."""
    if a.order != b.order:
        raise ValueError("orders differ")
    n = a.order
    seen = 0
    for ra, rb in zip(a.cells, b.cells):
        for va, vb in zip(ra, rb):
            bit = 1 << (n * va + vb)
            if seen & bit:
                return False
            seen |= bit
    return True


@dataclass(frozen=True)
class MolsPair:
    """Two orthogonal Latin squares of the same order."""

    a: LatinSquare
    b: LatinSquare

    def __post_init__(self):
        if not are_orthogonal(self.a, self.b):
            raise ValueError("squares are not orthogonal")

    @property
    def order(self) -> int:
        return self.a.order


def compose_with_row_inverse(a: LatinSquare, b: LatinSquare) -> tuple[tuple[int, ...], ...]:
    """Row-wise composition of a with the inverse of b: Z[i][b_ij] = a_ij.

    The result is a plain grid; by Mann's theorem it is a Latin square
    exactly when a and b are orthogonal.
    """
    if a.order != b.order:
        raise ValueError("orders differ")
    n = a.order
    z = [[0] * n for _ in range(n)]
    for i in range(n):
        ra, rb = a.cells[i], b.cells[i]
        zi = z[i]
        for j in range(n):
            zi[rb[j]] = ra[j]
    return tuple(tuple(row) for row in z)


@dataclass(frozen=True)
class RelationForm:
    """Shape of a pair of relations: per parallel class, the line counts
    (x, y, z) in R1&R2, R1 only, and R2 only.

    Within each class the lines of R1&R2 come first, then R1 only, then R2
    only, then the rest.  The five order-10 case forms are available via
    from_case; arbitrary triples are allowed at other orders so the
    machinery can be exercised at small sizes.
    """

    order: int
    classes: tuple[tuple[int, int, int], ...]
    case_id: int | None = None

    def __post_init__(self):
        if len(self.classes) != 4:
            raise ValueError("a 4-net form needs exactly 4 class triples")
        for x, y, z in self.classes:
            if min(x, y, z) < 0 or x + y + z > self.order:
                raise ValueError(f"class triple ({x},{y},{z}) does not fit order {self.order}")
        if self.case_id is not None:
            if self.order != 10 or self.classes != CASE_FORMS.get(self.case_id):
                raise ValueError(f"case {self.case_id} does not match the given form")

    @classmethod
    def from_case(cls, case_id: int) -> "RelationForm":
        if case_id not in CASE_FORMS:
            raise ValueError(f"case id must be in 1..5, got {case_id}")
        return cls(order=10, classes=CASE_FORMS[case_id], case_id=case_id)


@dataclass(frozen=True)
class LineIndex:
    """A net line: value in [0, 4n), split into a parallel class and offset.

    Lines [0, n) are rows, [n, 2n) columns, [2n, 3n) symbols of the first
    square, [3n, 4n) symbols of the second square.
    """

    value: int
    order: int

    def __post_init__(self):
        if not 0 <= self.value < 4 * self.order:
            raise ValueError(f"line {self.value} out of range for order {self.order}")

    @property
    def parallel_class(self) -> int:
        return self.value // self.order

    @property
    def offset(self) -> int:
        return self.value % self.order


def relation_membership(form: RelationForm, line: int | LineIndex) -> tuple[bool, bool]:
    """Whether the given line lies in R1 and in R2 for the given form."""
    value = line.value if isinstance(line, LineIndex) else int(line)
    n = form.order
    if not 0 <= value < 4 * n:
        raise ValueError(f"line {value} out of range for order {n}")
    x, y, z = form.classes[value // n]
    o = value % n
    return (o < x + y, o < x or x + y <= o < x + y + z)


def line_code(form: RelationForm, line: int | LineIndex) -> int:
    """Relational code of a line: 0=R1&R2, 1=R1 only, 2=R2 only, 3=neither."""
    in1, in2 = relation_membership(form, line)
    if in1:
        return 0 if in2 else 1
    return 2 if in2 else 3


def _agreement_label(m1: tuple[bool, bool], m2: tuple[bool, bool]) -> int:
    # 0: both relations agree; 1: only R1 agrees; 2: only R2 agrees; 3: neither.
    return (0 if m1[0] == m2[0] else 2) + (0 if m1[1] == m2[1] else 1)


def rc_label(form: RelationForm, i: int, j: int) -> int:
    """Label in {0,1,2,3} of cell (i, j): joint R1/R2 membership agreement
    between row line i and column line j+n."""
    n = form.order
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError("row or column index out of range")
    return _agreement_label(relation_membership(form, i), relation_membership(form, n + j))


def st_label(form: RelationForm, s: int, t: int) -> int:
    """Label in {0,1,2,3} of the symbol pair (s, t), via lines s+2n and t+3n."""
    n = form.order
    if not (0 <= s < n and 0 <= t < n):
        raise ValueError("symbol out of range")
    return _agreement_label(
        relation_membership(form, 2 * n + s), relation_membership(form, 3 * n + t)
    )


@dataclass(frozen=True)
class IncidenceMatrix:
    """Point-line incidence of a 4-net: n^2 rows of 4n bits, bit j = line j."""

    rows: tuple[int, ...]
    width: int

    def column_weights(self) -> list[int]:
        return [sum((r >> j) & 1 for r in self.rows) for j in range(self.width)]

    def column_sum(self, lines: Iterable[int]) -> int:
        """GF(2) sum of the selected columns, packed as an n^2-bit integer."""
        acc = 0
        for bit, row in enumerate(self.rows):
            parity = 0
            for j in lines:
                parity ^= (row >> j) & 1
            acc |= parity << bit
        return acc


def incidence_matrix(pair: MolsPair) -> IncidenceMatrix:
    """Incidence matrix of the 4-net of an orthogonal pair: the point (i, j)
    lies on lines i, n+j, 2n+a_ij and 3n+b_ij."""
    n = pair.order
    rows = []
    for i in range(n):
        ra, rb = pair.a.cells[i], pair.b.cells[i]
        base = (1 << i)
        for j in range(n):
            rows.append(base | 1 << (n + j) | 1 << (2 * n + ra[j]) | 1 << (3 * n + rb[j]))
    return IncidenceMatrix(rows=tuple(rows), width=4 * n)


def f2_rank(matrix: IncidenceMatrix | Iterable[int], width: int | None = None) -> int:
    """Rank over GF(2) of bit-packed rows, by elimination with
    first-nonzero-column pivoting (deterministic in the input order)."""
    if isinstance(matrix, IncidenceMatrix):
        rows = list(matrix.rows)
        width = matrix.width
    else:
        rows = list(matrix)
        if width is None:
            width = max((r.bit_length() for r in rows), default=0)
    rank = 0
    for col in range(width):
        bit = 1 << col
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r] & bit:
                rows[r] ^= prow
        rank += 1
        if rank == len(rows):
            break
    return rank


def verify_relations(pair: MolsPair, form: RelationForm) -> bool:
    """True iff rc_label(i, j) == st_label(a_ij, b_ij) for every cell, i.e.
    the prescribed R1 and R2 really are relations of the pair's net."""
    if pair.order != form.order:
        raise ValueError("pair and form orders differ")
    n = form.order
    rc = [[rc_label(form, i, j) for j in range(n)] for i in range(n)]
    st = [[st_label(form, s, t) for t in range(n)] for s in range(n)]
    for i in range(n):
        ra, rb = pair.a.cells[i], pair.b.cells[i]
        rci = rc[i]
        for j in range(n):
            if rci[j] != st[ra[j]][rb[j]]:
                return False
    return True


def relation_lines(form: RelationForm, which: int) -> list[int]:
    """Line indices of R1 (which=1) or R2 (which=2)."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    out = []
    for line in range(4 * form.order):
        in1, in2 = relation_membership(form, line)
        if (in1, in2)[which - 1]:
            out.append(line)
    return out
