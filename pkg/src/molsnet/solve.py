"""Conflict-driven clause-learning search with all-solutions enumeration.

The engine is a textbook CDCL: two watched literals (with a dedicated
binary-clause lane), first-UIP learning with local clause minimization,
activity-ordered decisions (decay 0.95) with phase saving, Luby restarts on
a base of 64 conflicts, and LBD-based deletion where glue <= 2 clauses are
kept forever.  Found models are blocked by clauses over the upper-left
(n-1)^2 cells of both squares and logged as trusted proof steps, so a run
that exhausts the search space ends with a checkable unsatisfiability
certificate.

Literals are kept internally as 2*var (positive) / 2*var+1 (negative);
truth values live in a bytearray indexed by literal (0 unassigned, 1 true,
2 false).  The hot propagation loop is written against local aliases on
purpose; profile before restructuring it.
"""

from __future__ import annotations

import random
import shlex
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .core import LatinSquare, MolsPair
from .encode import Clause, CnfInstance, VarLayout

VAR_DECAY = 0.95
RESTART_BASE = 64
RANDOM_DECISION_FREQ = 0.02


class ConflictBudgetExceeded(Exception):
    """The configured conflict budget ran out before a verdict was reached."""

    def __init__(self, conflicts: int):
        super().__init__(f"conflict budget exhausted after {conflicts} conflicts")
        self.conflicts = conflicts


class SolverSoundnessError(RuntimeError):
    """A model failed decoding; this indicates a bug, not an input problem."""


class ExternalSolverError(RuntimeError):
    """The external solver produced unusable output."""


def _luby(x: int) -> int:
    """Luby restart sequence 1,1,2,1,1,2,4,... at 0-based position x."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return 1 << seq


def _to_internal(ext: int) -> int:
    return (ext << 1) if ext > 0 else ((-ext) << 1) | 1


def _to_external(lit: int) -> int:
    return -(lit >> 1) if lit & 1 else (lit >> 1)


class _VarHeap:
    """Indexed max-heap over variable activities (MiniSat's order heap).

    Unassigned decision variables are always present; assigned ones are
    dropped lazily when popped.  Ties are broken by a fixed rank so that a
    fresh search walks the variables in a chosen deterministic order.
    """

    def __init__(
        self,
        activity: list[float],
        variables: Iterable[int],
        nvars: int,
        rank: list[int] | None = None,
    ):
        self.activity = activity
        self.rank = rank if rank is not None else list(range(nvars + 1))
        self.heap = list(variables)
        self.pos = [-1] * (nvars + 1)
        for i, v in enumerate(self.heap):
            self.pos[v] = i
        self._heapify()

    def __contains__(self, v: int) -> bool:
        return self.pos[v] >= 0

    def _heapify(self) -> None:
        for i in range(len(self.heap) // 2 - 1, -1, -1):
            self._sift_down(i)

    def _sift_up(self, i: int) -> None:
        # Preference order: higher activity, then lower rank.
        heap, pos, act, rank = self.heap, self.pos, self.activity, self.rank
        v = heap[i]
        a = act[v]
        rv = rank[v]
        while i > 0:
            parent = (i - 1) >> 1
            pv = heap[parent]
            pa = act[pv]
            if pa > a or (pa == a and rank[pv] < rv):
                break
            heap[i] = pv
            pos[pv] = i
            i = parent
        heap[i] = v
        pos[v] = i

    def _sift_down(self, i: int) -> None:
        heap, pos, act, rank = self.heap, self.pos, self.activity, self.rank
        size = len(heap)
        v = heap[i]
        a = act[v]
        rv = rank[v]
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            right = left + 1
            cv = heap[left]
            ca = act[cv]
            if right < size:
                c2 = heap[right]
                a2 = act[c2]
                if a2 > ca or (a2 == ca and rank[c2] < rank[cv]):
                    left = right
                    cv = c2
                    ca = a2
            if a > ca or (a == ca and rv < rank[cv]):
                break
            heap[i] = cv
            pos[cv] = i
            i = left
        heap[i] = v
        pos[v] = i

    def insert(self, v: int) -> None:
        if self.pos[v] >= 0:
            return
        self.heap.append(v)
        self.pos[v] = len(self.heap) - 1
        self._sift_up(len(self.heap) - 1)

    def bumped(self, v: int) -> None:
        if self.pos[v] >= 0:
            self._sift_up(self.pos[v])

    def pop_max(self) -> int | None:
        heap, pos = self.heap, self.pos
        if not heap:
            return None
        top = heap[0]
        pos[top] = -1
        last = heap.pop()
        if heap:
            heap[0] = last
            pos[last] = 0
            self._sift_down(0)
        return top

    def rebuild(self) -> None:
        heap, pos, act = self.heap, self.pos, self.activity
        heap.sort(key=lambda v: -act[v])
        for i, v in enumerate(heap):
            pos[v] = i


class Solver:
    """One CDCL instance over a fixed clause set; supports incremental
    clause additions between solve calls (used for blocking clauses)."""

    def __init__(
        self,
        clauses: Iterable[Clause],
        var_count: int,
        seed: int = 0,
        proof=None,
        decision_vars: Iterable[int] | None = None,
        decision_order: Sequence[int] | None = None,
        restart_base: int = RESTART_BASE,
    ):
        self.nvars = var_count
        self.proof = proof
        self.restart_base = restart_base
        self.rng = random.Random(seed)
        nv = var_count
        self.litval = bytearray(2 * nv + 2)  # 0 unassigned, 1 true, 2 false
        self.level = [0] * (nv + 1)
        self.reason: list = [None] * (nv + 1)
        # watches[p]: [blocker, clause] pairs for clauses watching literal p.
        self.watches: list[list] = [[] for _ in range(2 * nv + 2)]
        self.bins: list[list] = [[] for _ in range(2 * nv + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity = [0.0] * (nv + 1)
        self.var_inc = 1.0
        self.saved_phase = bytearray(nv + 1)
        self.seen = bytearray(nv + 1)
        self.learnts: list[tuple[list, int]] = []  # (clause, lbd), glue > 2 only
        self.ok = True

        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self._restart_count = 0
        self._conflicts_at_restart = 0
        self._reduce_count = 0
        self._conflicts_at_reduce = 0

        self._in_formula = bytearray(nv + 1)
        for clause in clauses:
            for ext in clause:
                self._in_formula[abs(ext)] = 1
            self._add_input_clause(clause)

        # Decisions are restricted to the given variables (propagation must
        # determine the rest, as it does for the composition square and the
        # counter chains); by default every variable occurring in the
        # formula is eligible.
        self.is_decision = bytearray(nv + 1)
        if decision_vars is None:
            self.is_decision[:] = self._in_formula
        else:
            for v in decision_vars:
                self.is_decision[v] = 1
        rank = None
        if decision_order is not None:
            rank = [nv + 1] * (nv + 1)
            for i, v in enumerate(decision_order):
                rank[v] = i
        self.heap = _VarHeap(
            self.activity,
            (v for v in range(1, nv + 1) if self.is_decision[v]),
            nv,
            rank=rank,
        )

        # Decision variables try their saved phase, initially positive
        # (fixing a cell propagates hard); the seed flips a small random
        # subset so distinct seeds explore differently.
        for v in range(1, nv + 1):
            if self.is_decision[v]:
                self.saved_phase[v] = 1 if self.rng.random() < 0.05 else 0
            else:
                self.saved_phase[v] = 1

    # ------------------------------------------------------------------ setup

    def _add_input_clause(self, clause: Clause) -> None:
        seen_lits = set()
        lits = []
        for ext in clause:
            lit = _to_internal(ext)
            if lit in seen_lits:
                continue
            if lit ^ 1 in seen_lits:
                return  # tautology
            seen_lits.add(lit)
            lits.append(lit)
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            if not self._enqueue_root(lits[0]):
                self.ok = False
            return
        self._attach(list(lits))

    def _attach(self, cls: list) -> None:
        if len(cls) == 2:
            l0, l1 = cls
            self.bins[l0].append((l1, cls))
            self.bins[l1].append((l0, cls))
        else:
            self.watches[cls[0]].append([cls[1], cls])
            self.watches[cls[1]].append([cls[0], cls])

    def _enqueue_root(self, lit: int) -> bool:
        v = self.litval[lit]
        if v == 1:
            return True
        if v == 2:
            return False
        self.litval[lit] = 1
        self.litval[lit ^ 1] = 2
        self.level[lit >> 1] = 0
        self.reason[lit >> 1] = None
        self.trail.append(lit)
        return True

    # ------------------------------------------------------------ propagation

    def _propagate(self):
        """Unit propagation; returns a conflicting clause or None."""
        litval = self.litval
        watches = self.watches
        bins = self.bins
        trail = self.trail
        level = self.level
        reason = self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        props = 0
        while qhead < len(trail):
            t = trail[qhead]
            qhead += 1
            f = t ^ 1
            for other, cls in bins[f]:
                v = litval[other]
                if v == 2:
                    self.qhead = qhead
                    self.propagations += props
                    return cls
                if v == 0:
                    litval[other] = 1
                    litval[other ^ 1] = 2
                    var = other >> 1
                    level[var] = dl
                    reason[var] = cls
                    trail.append(other)
                    props += 1
            wl = watches[f]
            if not wl:
                continue
            i = j = 0
            n_wl = len(wl)
            while i < n_wl:
                entry = wl[i]
                i += 1
                if litval[entry[0]] == 1:  # blocker satisfies the clause
                    wl[j] = entry
                    j += 1
                    continue
                c = entry[1]
                if c[0] == f:
                    c[0] = c[1]
                    c[1] = f
                first = c[0]
                fv = litval[first]
                if fv == 1:
                    entry[0] = first
                    wl[j] = entry
                    j += 1
                    continue
                moved = False
                k = 2
                lc = len(c)
                while k < lc:
                    lk = c[k]
                    if litval[lk] != 2:
                        c[1] = lk
                        c[k] = f
                        watches[lk].append([first, c])
                        moved = True
                        break
                    k += 1
                if moved:
                    continue
                entry[0] = first
                wl[j] = entry
                j += 1
                if fv == 2:
                    while i < n_wl:
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    del wl[j:]
                    self.qhead = qhead
                    self.propagations += props
                    return c
                litval[first] = 1
                litval[first ^ 1] = 2
                var = first >> 1
                level[var] = dl
                reason[var] = c
                trail.append(first)
                props += 1
            del wl[j:]
        self.qhead = qhead
        self.propagations += props
        return None

    # -------------------------------------------------------------- conflicts

    def _analyze(self, confl) -> tuple[list[int], int, int]:
        """First-UIP learning with local minimization.

        Returns (learnt, backjump_level, lbd); learnt[0] is the asserting
        literal and learnt[1] (when present) a literal of the backjump level.
        """
        level = self.level
        reason = self.reason
        seen = self.seen
        trail = self.trail
        activity = self.activity
        bumped = self.heap.bumped
        var_inc = self.var_inc
        dl = len(self.trail_lim)
        learnt: list[int] = [0]
        to_clear: list[int] = []
        pathc = 0
        p = 0
        idx = len(trail) - 1
        while True:
            for q in confl:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    activity[v] += var_inc
                    bumped(v)
                    if level[v] >= dl:
                        pathc += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[p >> 1] = 0
            pathc -= 1
            if pathc <= 0:
                break
            confl = reason[p >> 1]
        learnt[0] = p ^ 1

        if var_inc > 1e100:
            # Uniform rescale preserves the heap order.
            scale = 1e-100
            for v in range(1, self.nvars + 1):
                activity[v] *= scale
            self.var_inc = var_inc * scale

        # Recursive minimization: a literal is redundant when its whole
        # reason tree is covered by the remaining clause (or root facts).
        kept = [learnt[0]]
        for q in learnt[1:]:
            if reason[q >> 1] is None or not self._redundant(q, to_clear):
                kept.append(q)
        for v in to_clear:
            seen[v] = 0

        if len(kept) == 1:
            return kept, 0, 1
        max_i = 1
        max_lev = level[kept[1] >> 1]
        for i in range(2, len(kept)):
            lv = level[kept[i] >> 1]
            if lv > max_lev:
                max_lev = lv
                max_i = i
        kept[1], kept[max_i] = kept[max_i], kept[1]
        lbd = len({level[q >> 1] for q in kept})
        return kept, max_lev, lbd

    def _redundant(self, q: int, to_clear: list[int]) -> bool:
        """Is literal q implied by seen literals and root facts?  Walks the
        reason graph; marks vars it proves redundant as seen to share work."""
        seen = self.seen
        level = self.level
        reason = self.reason
        mark_start = len(to_clear)
        stack = [q]
        while stack:
            lit = stack.pop()
            r = reason[lit >> 1]
            lpos = lit ^ 1
            for x in r:
                if x == lpos:
                    continue
                v = x >> 1
                if seen[v] or level[v] == 0:
                    continue
                if reason[v] is None:
                    # Not covered: undo the marks made by this walk.
                    for u in to_clear[mark_start:]:
                        seen[u] = 0
                    del to_clear[mark_start:]
                    return False
                seen[v] = 1
                to_clear.append(v)
                stack.append(x)
        return True

    def _backtrack(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        litval = self.litval
        saved = self.saved_phase
        insert = self.heap.insert
        bound = self.trail_lim[target]
        trail = self.trail
        is_decision = self.is_decision
        for pos in range(len(trail) - 1, bound - 1, -1):
            lit = trail[pos]
            v = lit >> 1
            litval[lit] = 0
            litval[lit ^ 1] = 0
            saved[v] = lit & 1
            if is_decision[v]:
                insert(v)
        del trail[bound:]
        del self.trail_lim[target:]
        self.qhead = bound

    def _log_add(self, lits: Sequence[int]) -> None:
        if self.proof is not None:
            self.proof.add_clause(tuple(_to_external(l) for l in lits))

    def _learn(self, kept: list[int], bt: int, lbd: int) -> None:
        self._log_add(kept)
        self._backtrack(bt)
        lit = kept[0]
        if len(kept) == 1:
            self.litval[lit] = 1
            self.litval[lit ^ 1] = 2
            self.level[lit >> 1] = 0
            self.reason[lit >> 1] = None
            self.trail.append(lit)
            return
        self._attach(kept)
        if lbd > 2 and len(kept) > 2:
            self.learnts.append((kept, lbd))
        self.litval[lit] = 1
        self.litval[lit ^ 1] = 2
        self.level[lit >> 1] = len(self.trail_lim)
        self.reason[lit >> 1] = kept
        self.trail.append(lit)

    # --------------------------------------------------------------- cleanups

    def _locked(self, cls: list) -> bool:
        l0 = cls[0]
        return self.litval[l0] == 1 and self.reason[l0 >> 1] is cls

    def _detach(self, cls: list) -> None:
        for w in (cls[0], cls[1]):
            wl = self.watches[w]
            for i, entry in enumerate(wl):
                if entry[1] is cls:
                    wl[i] = wl[-1]
                    wl.pop()
                    break

    def _reduce_db(self) -> None:
        """Drop the worse half of the long learned clauses (by LBD, then
        size); locked clauses survive."""
        self.learnts.sort(key=lambda item: (item[1], len(item[0])))
        keep = len(self.learnts) // 2
        kept, dropped = self.learnts[:keep], self.learnts[keep:]
        survivors = list(kept)
        for cls, lbd in dropped:
            if self._locked(cls):
                survivors.append((cls, lbd))
                continue
            self._detach(cls)
            if self.proof is not None:
                self.proof.delete_clause(tuple(_to_external(l) for l in cls))
        self.learnts = survivors

    # ------------------------------------------------------------------ search

    def _decide(self) -> bool:
        litval = self.litval
        heap = self.heap
        var = 0
        if self.rng.random() < RANDOM_DECISION_FREQ:
            cand = self.rng.randrange(1, self.nvars + 1)
            if self.is_decision[cand] and litval[2 * cand] == 0:
                var = cand
        while not var:
            v = heap.pop_max()
            if v is None:
                break
            if litval[2 * v] == 0:
                var = v
        if not var:
            # Safety net: propagation should have fixed every constrained
            # variable once the decision set is assigned; decide any straggler.
            in_formula = self._in_formula
            for v in range(1, self.nvars + 1):
                if in_formula[v] and litval[2 * v] == 0:
                    var = v
                    break
            if not var:
                return False
        self.decisions += 1
        self.trail_lim.append(len(self.trail))
        lit = 2 * var | self.saved_phase[var]
        litval[lit] = 1
        litval[lit ^ 1] = 2
        self.level[var] = len(self.trail_lim)
        self.reason[var] = None
        self.trail.append(lit)
        return True

    def solve(self, conflict_budget: int | None = None) -> list[bool] | None:
        """Search until a model or UNSAT; returns the model as a bool list
        indexed by variable, or None (logging the empty clause) on UNSAT.

        May be called again after add_clause_incremental to continue the
        enumeration.  Raises ConflictBudgetExceeded when the budget runs out.
        """
        if not self.ok:
            self._log_add(())
            return None
        restart_limit = self.restart_base * _luby(self._restart_count)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    self._log_add(())
                    return None
                kept, bt, lbd = self._analyze(confl)
                self._learn(kept, bt, lbd)
                self.var_inc /= VAR_DECAY
                if conflict_budget is not None and self.conflicts >= conflict_budget:
                    raise ConflictBudgetExceeded(self.conflicts)
                if self.conflicts - self._conflicts_at_restart >= restart_limit:
                    self._restart_count += 1
                    self._conflicts_at_restart = self.conflicts
                    restart_limit = self.restart_base * _luby(self._restart_count)
                    self._backtrack(0)
                    if (
                        self.conflicts - self._conflicts_at_reduce
                        >= 2000 + 300 * self._reduce_count
                    ):
                        self._reduce_count += 1
                        self._conflicts_at_reduce = self.conflicts
                        self._reduce_db()
            else:
                if not self._decide():
                    litval = self.litval
                    return [False] + [litval[2 * v] == 1 for v in range(1, self.nvars + 1)]

    def add_clause_incremental(self, ext_lits: Sequence[int]) -> None:
        """Attach a clause that is fully falsified by the current model
        (a blocking clause), backjumping far enough to continue the search."""
        lits = [_to_internal(e) for e in ext_lits]
        if len(lits) < 2:
            raise ValueError("incremental clauses need at least 2 literals")
        for e in ext_lits:
            v = abs(e)
            self._in_formula[v] = 1
            if not self.is_decision[v]:
                self.is_decision[v] = 1
                if self.litval[2 * v] == 0:
                    self.heap.insert(v)
        level = self.level
        levels = sorted({level[l >> 1] for l in lits}, reverse=True)
        if levels[0] == 0:
            self.ok = False
            return
        bt = levels[1] if len(levels) > 1 else levels[0] - 1
        self._backtrack(bt)
        litval = self.litval
        free = [l for l in lits if litval[l] == 0]
        rest = [l for l in lits if litval[l] != 0]
        lits = free + rest
        self._attach(lits)
        if len(free) == 1:
            lit = lits[0]
            litval[lit] = 1
            litval[lit ^ 1] = 2
            level[lit >> 1] = len(self.trail_lim)
            self.reason[lit >> 1] = lits
            self.trail.append(lit)


# ----------------------------------------------------------------- decoders


class MolsDecoder:
    """Reads the A/B blocks of a model back into a MolsPair and produces the
    2(n-1)^2-literal blocking clause over the upper-left cells."""

    def __init__(self, layout: VarLayout):
        self.layout = layout

    def _read_square(self, model: Sequence[bool], block: str) -> list[list[int]]:
        layout = self.layout
        n = layout.order
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                symbol = -1
                for k in range(n):
                    if model[layout.var(block, i, j, k)]:
                        if symbol >= 0:
                            raise SolverSoundnessError(
                                f"cell ({i},{j}) of {block} holds two symbols"
                            )
                        symbol = k
                if symbol < 0:
                    raise SolverSoundnessError(f"cell ({i},{j}) of {block} is empty")
                row.append(symbol)
            rows.append(row)
        return rows

    def __call__(self, model: Sequence[bool]) -> tuple[MolsPair, tuple[int, ...]]:
        a = self._read_square(model, "A")
        b = self._read_square(model, "B")
        try:
            pair = MolsPair(LatinSquare(a), LatinSquare(b))
        except ValueError as exc:
            raise SolverSoundnessError(f"model decodes to an invalid pair: {exc}") from exc
        layout = self.layout
        n = layout.order
        blocking = []
        for i in range(n - 1):
            for j in range(n - 1):
                blocking.append(-layout.a(i, j, a[i][j]))
                blocking.append(-layout.b(i, j, b[i][j]))
        return pair, tuple(blocking)


class ProjectionDecoder:
    """Enumerates assignments projected onto a fixed variable set; the
    blocking clause negates the projected assignment."""

    def __init__(self, variables: Sequence[int]):
        self.variables = tuple(variables)

    def __call__(self, model: Sequence[bool]) -> tuple[tuple[bool, ...], tuple[int, ...]]:
        payload = tuple(bool(model[v]) for v in self.variables)
        blocking = tuple(-v if model[v] else v for v in self.variables)
        return payload, blocking


# -------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class EnumerationResult:
    """All decoded solutions plus run statistics; status 'exhausted' means
    the final solver verdict was UNSAT (the search space is empty)."""

    solutions: tuple
    status: str  # exhausted | budget | limit
    conflicts: int
    decisions: int
    propagations: int
    seconds: float

    def __len__(self) -> int:
        return len(self.solutions)


def _decision_hint(instance: CnfInstance) -> range | None:
    # For built instances the A and B blocks determine everything else by
    # propagation, so the search only ever branches on them.
    if instance.layout is None:
        return None
    return range(1, 2 * instance.layout.block_size + 1)


def solve(
    instance: CnfInstance,
    seed: int = 0,
    proof=None,
    conflict_budget: int | None = None,
) -> list[bool] | None:
    """One-shot solve: a model (bool list indexed by variable) or None."""
    solver = Solver(
        instance.clauses,
        instance.var_count,
        seed=seed,
        proof=proof,
        decision_vars=_decision_hint(instance),
    )
    return solver.solve(conflict_budget)


def enumerate_solutions(
    instance: CnfInstance,
    decoder: Callable[[Sequence[bool]], tuple[object, tuple[int, ...]]],
    seed: int = 0,
    proof=None,
    conflict_budget: int | None = None,
    max_solutions: int | None = None,
    on_solution: Callable[[object], None] | None = None,
) -> EnumerationResult:
    """Find every solution by blocking each found model and re-solving.

    Each blocking clause is recorded as a trusted proof addition, so the
    final UNSAT verdict yields a certificate for the whole enumeration.
    """
    solver = Solver(
        instance.clauses,
        instance.var_count,
        seed=seed,
        proof=proof,
        decision_vars=_decision_hint(instance),
    )
    solutions: list = []
    status = "exhausted"
    start = time.perf_counter()
    try:
        while True:
            model = solver.solve(conflict_budget)
            if model is None:
                break
            payload, blocking = decoder(model)
            solutions.append(payload)
            if on_solution is not None:
                on_solution(payload)
            if proof is not None:
                proof.trusted_clause(blocking)
            solver.add_clause_incremental(blocking)
            if max_solutions is not None and len(solutions) >= max_solutions:
                status = "limit"
                break
    except ConflictBudgetExceeded:
        status = "budget"
    return EnumerationResult(
        solutions=tuple(solutions),
        status=status,
        conflicts=solver.conflicts,
        decisions=solver.decisions,
        propagations=solver.propagations,
        seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------- external solver


def _parse_solver_output(text: str) -> tuple[str, list[int]]:
    status = None
    lits: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            token = line.split(None, 1)[1].strip()
            if token == "SATISFIABLE":
                status = "SAT"
            elif token == "UNSATISFIABLE":
                status = "UNSAT"
            else:
                raise ExternalSolverError(f"unrecognized status line: {line!r}")
        elif line.startswith("v "):
            for tok in line[2:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise ExternalSolverError(f"bad literal in model line: {tok!r}") from None
                if lit != 0:
                    lits.append(lit)
    if status is None:
        raise ExternalSolverError(
            "no status line in solver output: " + text[:500].strip()
        )
    return status, lits


def external_enumerate(
    dimacs_path: str | Path,
    solver_command: str | Sequence[str],
    decoder: Callable[[Sequence[bool]], tuple[object, tuple[int, ...]]],
    max_solutions: int | None = None,
    on_solution: Callable[[object], None] | None = None,
) -> EnumerationResult:
    """Drive an external DIMACS solver through the blocking-clause loop.

    The command is run on a working copy of the instance which is rewritten
    with all accumulated blocking clauses before each call; the solver must
    print `s SATISFIABLE`/`s UNSATISFIABLE` and `v` model lines.  Proof
    logging is not available in this mode.
    """
    from .encode import read_dimacs

    base = read_dimacs(dimacs_path)
    command = shlex.split(solver_command) if isinstance(solver_command, str) else list(
        solver_command
    )
    work = Path(str(dimacs_path) + ".work")
    blocking_clauses: list[tuple[int, ...]] = []
    solutions: list = []
    status = "limit"
    start = time.perf_counter()
    try:
        while True:
            with open(work, "w", newline="\n") as out:
                total = len(base.clauses) + len(blocking_clauses)
                out.write(f"p cnf {base.var_count} {total}\n")
                for clause in base.clauses:
                    out.write(" ".join(map(str, clause)))
                    out.write(" 0\n")
                for clause in blocking_clauses:
                    out.write(" ".join(map(str, clause)))
                    out.write(" 0\n")
            run = subprocess.run(
                command + [str(work)], capture_output=True, text=True
            )
            output = run.stdout + "\n" + run.stderr
            try:
                verdict, lits = _parse_solver_output(run.stdout)
            except ExternalSolverError:
                if run.returncode not in (0, 10, 20):
                    raise ExternalSolverError(
                        f"solver exited with {run.returncode}: {output[:500].strip()}"
                    ) from None
                raise
            if verdict == "UNSAT":
                status = "exhausted"
                break
            model = [False] * (base.var_count + 1)
            for lit in lits:
                if abs(lit) <= base.var_count:
                    model[abs(lit)] = lit > 0
            payload, blocking = decoder(model)
            solutions.append(payload)
            if on_solution is not None:
                on_solution(payload)
            blocking_clauses.append(blocking)
            if max_solutions is not None and len(solutions) >= max_solutions:
                break
    finally:
        work.unlink(missing_ok=True)
    return EnumerationResult(
        solutions=tuple(solutions),
        status=status,
        conflicts=0,
        decisions=0,
        propagations=0,
        seconds=time.perf_counter() - start,
    )
