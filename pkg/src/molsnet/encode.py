"""Deterministic CNF construction for the two-relation search.

Variable layout (order n): A_ijk -> i*n^2 + j*n + k + 1, B adds n^3,
Z (the composition square A o B^-1) adds 2n^3, and sequential-counter
auxiliaries are allocated consecutively from 3n^3 + 1 in emission order.
Two builds of the same instance are byte-identical after serialization.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Callable, Iterable, Sequence

from .core import CASE_FORMS, RelationForm, rc_label, st_label

Clause = tuple[int, ...]

BLOCKS = ("A", "B", "Z")


@dataclass(frozen=True)
class VarLayout:
    """Bijection between cell/symbol triples (plus auxiliaries) and variable ids."""

    order: int

    @property
    def block_size(self) -> int:
        return self.order**3

    @property
    def aux_start(self) -> int:
        return 3 * self.block_size + 1

    def var(self, block: str, i: int, j: int, k: int) -> int:
        n = self.order
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise ValueError(f"indices ({i},{j},{k}) out of range for order {n}")
        return BLOCKS.index(block) * self.block_size + i * n * n + j * n + k + 1

    def a(self, i: int, j: int, k: int) -> int:
        return self.var("A", i, j, k)

    def b(self, i: int, j: int, k: int) -> int:
        return self.var("B", i, j, k)

    def z(self, i: int, j: int, k: int) -> int:
        return self.var("Z", i, j, k)

    def decode(self, var: int) -> tuple[str, int, int, int] | tuple[str, int]:
        """Name a variable id: ('A', i, j, k) for square blocks, ('s', m) for
        the m-th auxiliary (1-based)."""
        if var < 1:
            raise ValueError("variable ids are positive")
        if var > 3 * self.block_size:
            return ("s", var - 3 * self.block_size)
        n = self.order
        block, off = divmod(var - 1, self.block_size)
        i, rem = divmod(off, n * n)
        j, k = divmod(rem, n)
        return (BLOCKS[block], i, j, k)


class AuxAllocator:
    """Hands out consecutive auxiliary variable ids above the square blocks."""

    def __init__(self, layout: VarLayout):
        self.next_var = layout.aux_start

    def take(self, count: int) -> int:
        """Reserve `count` consecutive ids; returns the first."""
        first = self.next_var
        self.next_var += count
        return first

    @property
    def max_var(self) -> int:
        return self.next_var - 1


def exactly_one(variables: Sequence[int], alloc: AuxAllocator) -> list[Clause]:
    """Sequential-counter encoding of "exactly one of `variables` is true".

    For m >= 2 this emits exactly 4m-4 clauses over m fresh auxiliaries
    s_1..s_m (s_i: at least one of x_1..x_i is true).  s_m is fixed true by
    substitution at emission time, so it receives an id but appears in no
    clause.  A single variable yields one unit clause and no auxiliaries.
    """
    m = len(variables)
    if m == 0:
        raise ValueError("exactly_one needs at least one variable")
    if m == 1:
        return [(variables[0],)]
    s0 = alloc.take(m)  # s_i is id s0 + i - 1
    s = lambda i: s0 + i - 1
    x = lambda i: variables[i - 1]
    clauses: list[Clause] = []
    # x_i -> s_i and s_{i-1} -> s_i; the i=m instances are satisfied by s_m.
    for i in range(1, m):
        clauses.append((-x(i), s(i)))
        if i >= 2:
            clauses.append((-s(i - 1), s(i)))
    # at most one: x_i and s_{i-1} never both true.
    for i in range(2, m + 1):
        clauses.append((-x(i), -s(i - 1)))
    # at least one: s_i -> (s_{i-1} or x_i), with s_0 dropped and s_m true.
    clauses.append((-s(1), x(1)))
    for i in range(2, m):
        clauses.append((-s(i), s(i - 1), x(i)))
    clauses.append((s(m - 1), x(m)))
    return clauses


def latin_constraints(block: str, layout: VarLayout, alloc: AuxAllocator) -> list[Clause]:
    """Exactly-one groups making one square block Latin: every cell one
    symbol, every row and every column every symbol once (3n^2 groups)."""
    n = layout.order
    var = layout.var
    clauses: list[Clause] = []
    for i in range(n):
        for j in range(n):
            clauses.extend(exactly_one([var(block, i, j, k) for k in range(n)], alloc))
    for i in range(n):
        for k in range(n):
            clauses.extend(exactly_one([var(block, i, j, k) for j in range(n)], alloc))
    for j in range(n):
        for k in range(n):
            clauses.extend(exactly_one([var(block, i, j, k) for i in range(n)], alloc))
    return clauses


def orthogonality_constraints(
    layout: VarLayout, alloc: AuxAllocator
) -> tuple[list[Clause], list[Clause]]:
    """Orthogonality of A and B via the composition square Z = A o B^-1.

    Returns (latin_z, ternary): the Latin constraints on Z plus the three
    ternary families (A_ijk & B_ijl) -> Z_ilk, (Z_ilk & B_ijl) -> A_ijk and
    (Z_ilk & A_ijk) -> B_ijl over all i, j, k, l; the latter two are
    redundant but propagate well.
    """
    n = layout.order
    a, b, z = layout.a, layout.b, layout.z
    latin_z = latin_constraints("Z", layout, alloc)
    ternary: list[Clause] = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    ternary.append((-a(i, j, k), -b(i, j, l), z(i, l, k)))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    ternary.append((-z(i, l, k), -b(i, j, l), a(i, j, k)))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    ternary.append((-z(i, l, k), -a(i, j, k), b(i, j, l)))
    return latin_z, ternary


def relation_constraints(form: RelationForm, layout: VarLayout) -> list[Clause]:
    """Forbid every (cell, symbol-pair) combination whose labels disagree:
    one binary clause per (i, j, s, t) with rc(i, j) != st(s, t)."""
    if form.order != layout.order:
        raise ValueError("form and layout orders differ")
    n = layout.order
    a, b = layout.a, layout.b
    rc = [[rc_label(form, i, j) for j in range(n)] for i in range(n)]
    st = [[st_label(form, s, t) for t in range(n)] for s in range(n)]
    clauses: list[Clause] = []
    for i in range(n):
        for j in range(n):
            label = rc[i][j]
            for s in range(n):
                sts = st[s]
                for t in range(n):
                    if sts[t] != label:
                        clauses.append((-a(i, j, s), -b(i, j, t)))
    return clauses


def _class_intervals(triple: tuple[int, int, int], n: int) -> list[list[int]]:
    """Equivalence classes of one parallel class as index intervals."""
    x, y, z = triple
    bounds = [0, x, x + y, x + y + z, n]
    return [list(range(bounds[c], bounds[c + 1])) for c in range(4) if bounds[c] < bounds[c + 1]]


def symmetry_breaking(
    form: RelationForm, layout: VarLayout, include_a00b00: bool = False
) -> dict[str, list[Clause]]:
    """Clause families F1..F6 encoding the minimal-pair conditions.

    F1 orders the transpose (skipped in case 4, where rows and columns have
    different class shapes), F2 orders the swap of A and B up to entry (2,0)
    (skipped in case 2), F3/F4 sort the first column/row of A within row and
    column classes (F4 skips the first column class in case 4), and F5/F6
    sort symbol classes of A and B along the first column.  The optional
    A00=B00 equality (redundant given F5/F6 and the relation clauses) is off
    by default.
    """
    if form.case_id is None or form.order != 10:
        raise ValueError("symmetry breaking is defined for the order-10 case forms")
    n = layout.order
    a, b = layout.a, layout.b
    case = form.case_id
    fams: dict[str, list[Clause]] = {f"symbreak-F{i}": [] for i in range(1, 7)}

    if case != 4:
        f1 = fams["symbreak-F1"]
        for k in range(n):
            for l in range(k):
                f1.append((-a(1, 0, k), -a(0, 1, l)))
        for m in range(n):
            for k in range(n):
                for l in range(k + 1):
                    f1.append((-a(1, 0, m), -a(0, 1, m), -b(1, 0, k), -b(0, 1, l)))

    if case != 2:
        f2 = fams["symbreak-F2"]
        for k in range(n):
            for l in range(k):
                f2.append((-a(1, 0, k), -b(1, 0, l)))
        for m in range(n):
            for k in range(n):
                for l in range(k):
                    f2.append((-a(1, 0, m), -b(1, 0, m), -a(2, 0, k), -b(2, 0, l)))

    f3 = fams["symbreak-F3"]
    for cls in _class_intervals(form.classes[0], n):
        for i in cls[:-1]:
            for k in range(n):
                for l in range(k):
                    f3.append((-a(i, 0, k), -a(i + 1, 0, l)))

    f4 = fams["symbreak-F4"]
    col_classes = _class_intervals(form.classes[1], n)
    if case == 4:
        col_classes = col_classes[1:]
    for cls in col_classes:
        for j in cls[:-1]:
            for k in range(n):
                for l in range(k):
                    f4.append((-a(0, j, k), -a(0, j + 1, l)))

    f5 = fams["symbreak-F5"]
    for cls in _class_intervals(form.classes[2], n):
        for s in cls[:-1]:
            for i in range(n):
                for ip in range(i):
                    f5.append((-a(i, 0, s), -a(ip, 0, s + 1)))

    f6 = fams["symbreak-F6"]
    for cls in _class_intervals(form.classes[3], n):
        for t in cls[:-1]:
            for i in range(n):
                for ip in range(i):
                    f6.append((-b(i, 0, t), -b(ip, 0, t + 1)))

    if include_a00b00:
        if case == 2:
            raise ValueError("A00=B00 does not hold in case 2")
        eq = []
        for k in range(n):
            eq.append((-a(0, 0, k), b(0, 0, k)))
            eq.append((-b(0, 0, k), a(0, 0, k)))
        fams["symbreak-a00b00"] = eq
    return fams


@dataclass(frozen=True)
class CnfInstance:
    """An immutable CNF with its variable layout and per-family clause ranges."""

    var_count: int
    clauses: tuple[Clause, ...]
    layout: VarLayout | None = None
    families: tuple[tuple[str, int, int], ...] = ()
    form: RelationForm | None = None

    def family_range(self, tag: str) -> tuple[int, int]:
        for name, start, stop in self.families:
            if name == tag:
                return start, stop
        raise KeyError(tag)

    def family_clauses(self, tag: str) -> tuple[Clause, ...]:
        start, stop = self.family_range(tag)
        return self.clauses[start:stop]

    def family_sizes(self) -> dict[str, int]:
        return {name: stop - start for name, start, stop in self.families}


def build_instance(
    order: int,
    form: RelationForm | None = None,
    enable_a00b00_equality: bool = False,
) -> CnfInstance:
    """Assemble the full instance: latin(A), latin(B), orthogonality
    (including latin(Z)), relation clauses, then symmetry families.

    With form=None (any order) only the Latin and orthogonality families are
    emitted - the small-order test mode.  With a case form the order must
    be 10 and all families are emitted.
    """
    if form is not None and form.order != order:
        raise ValueError("form order does not match the requested order")
    if form is None and enable_a00b00_equality:
        raise ValueError("A00=B00 clauses require a case form")
    if form is not None and form.case_id is None:
        raise ValueError("full builds require one of the five order-10 case forms")
    layout = VarLayout(order)
    alloc = AuxAllocator(layout)
    clauses: list[Clause] = []
    families: list[tuple[str, int, int]] = []

    def emit(tag: str, group: Iterable[Clause]) -> None:
        start = len(clauses)
        clauses.extend(group)
        families.append((tag, start, len(clauses)))

    emit("latin-A", latin_constraints("A", layout, alloc))
    emit("latin-B", latin_constraints("B", layout, alloc))
    latin_z, ternary = orthogonality_constraints(layout, alloc)
    emit("latin-Z", latin_z)
    emit("ortho", ternary)
    if form is not None:
        emit("relation", relation_constraints(form, layout))
        for tag, group in symmetry_breaking(form, layout, enable_a00b00_equality).items():
            emit(tag, group)
    return CnfInstance(
        var_count=alloc.max_var,
        clauses=tuple(clauses),
        layout=layout,
        families=tuple(families),
        form=form,
    )


class DimacsError(ValueError):
    """Malformed DIMACS input."""


def write_dimacs(instance: CnfInstance, sink: str | Path | IO[str]) -> None:
    """Serialize with a deterministic provenance comment block; one clause
    per line, decimal literals, terminating 0, LF endings."""
    own = isinstance(sink, (str, Path))
    out = open(sink, "w", newline="\n") if own else sink
    try:
        out.write("c molsnet cnf\n")
        if instance.layout is not None:
            out.write(f"c order {instance.layout.order}\n")
        if instance.form is not None and instance.form.case_id is not None:
            out.write(f"c case {instance.form.case_id}\n")
        for name, start, stop in instance.families:
            out.write(f"c family {name} {start} {stop}\n")
        out.write(f"p cnf {instance.var_count} {len(instance.clauses)}\n")
        for clause in instance.clauses:
            out.write(" ".join(map(str, clause)))
            out.write(" 0\n")
    finally:
        if own:
            out.close()


def write_var_map(instance: CnfInstance, sink: str | Path | IO[str]) -> None:
    """Sidecar map for external tooling: one `A i j k <varid>` line per
    square variable."""
    if instance.layout is None:
        raise ValueError("instance has no layout to dump")
    own = isinstance(sink, (str, Path))
    out = open(sink, "w", newline="\n") if own else sink
    try:
        n = instance.layout.order
        for block in BLOCKS:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        out.write(f"{block} {i} {j} {k} {instance.layout.var(block, i, j, k)}\n")
    finally:
        if own:
            out.close()


def read_dimacs(source: str | Path | IO[str]) -> CnfInstance:
    """Parse a DIMACS file back into clauses (layout and families are not
    recovered).  Rejects malformed headers, out-of-range literals and
    unterminated clauses."""
    own = isinstance(source, (str, Path))
    inp = open(source, "r") if own else source
    try:
        var_count = None
        clause_count = None
        tokens: list[str] = []
        for line in inp:
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                if var_count is not None:
                    raise DimacsError("duplicate header")
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise DimacsError(f"malformed header: {line!r}")
                try:
                    var_count, clause_count = int(parts[2]), int(parts[3])
                except ValueError:
                    raise DimacsError(f"malformed header: {line!r}") from None
                continue
            if var_count is None:
                raise DimacsError("clause data before header")
            tokens.extend(line.split())
        if var_count is None:
            raise DimacsError("missing header")
        clauses: list[Clause] = []
        current: list[int] = []
        for tok in tokens:
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause in input")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > var_count:
                    raise DimacsError(f"literal {lit} exceeds declared variable count")
                current.append(lit)
        if current:
            raise DimacsError("missing clause terminator")
        if clause_count is not None and clause_count != len(clauses):
            raise DimacsError(
                f"header declares {clause_count} clauses but {len(clauses)} present"
            )
        return CnfInstance(var_count=var_count, clauses=tuple(clauses))
    finally:
        if own:
            inp.close()


def dimacs_bytes(instance: CnfInstance) -> bytes:
    """The exact serialized form, for determinism checks."""
    buf = io.StringIO()
    write_dimacs(instance, buf)
    return buf.getvalue().encode()
