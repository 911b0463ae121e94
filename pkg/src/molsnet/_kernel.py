"""Array-based CDCL kernel, JIT-compiled with numba.

This mirrors the reference engine in solve.py step for step: two watched
literals with blockers and a binary-clause lane, first-UIP learning with
recursive minimization, activity decisions (decay 0.95, rank tie-breaks)
with phase saving, Luby restarts (base 64) and LBD-based deletion with
glue <= 2 kept forever.  All state lives in numpy arrays so the search
loop runs compiled; the Python wrapper only drains proof output, decodes
models and grows arrays.

Clause arena layout: [size, flags, lit0, lit1, ...]; flags bit0 = learnt,
bit1 = deleted, lbd << 2.  Watcher lists are singly linked through
parallel node arrays.  Proof steps accumulate in an int32 buffer as
[tag, size, external lits...] with tag 0 = addition, 1 = deletion.
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np
from numba import njit

# run() statuses
SAT = 10
UNSAT = 20
BUDGET = 30
DRAIN = 40
GROW_ARENA = 50
GROW_WATCH = 51
GROW_LEARNTS = 52

# meta slots (int64)
M_ARENA_TOP = 0
M_QHEAD = 1
M_CONFLICTS = 2
M_DECISIONS = 3
M_PROPS = 4
M_RESTARTS = 5
M_CONF_AT_RESTART = 6
M_REDUCES = 7
M_CONF_AT_REDUCE = 8
M_TRAIL_SIZE = 9
M_TL_SIZE = 10
M_WTOP = 11
M_BTOP = 12
M_LSIZE = 13
M_PTOP = 14
M_OK = 15
M_RNG = 16
M_HSIZE = 17
M_RESTART_BASE = 18
M_META_LEN = 19

F_VAR_INC = 0

PROOF_HEADROOM = 2_000_000  # ints kept free for one conflict + one reduce dump

State = namedtuple(
    "State",
    [
        "meta", "fmeta", "arena",
        "whead", "wnext", "wclause", "wblocker",
        "bhead", "bnext", "bother", "bref",
        "litval", "level", "reason", "trail", "trail_lim",
        "activity", "harr", "hpos", "rank",
        "saved", "seen", "isdec", "infor",
        "larr", "llbd", "pbuf", "lbuf", "tbuf", "mstack",
    ],
)


@njit(cache=True)
def _rng_next(meta):
    x = np.uint64(meta[M_RNG])
    x ^= x << np.uint64(13)
    x ^= x >> np.uint64(7)
    x ^= x << np.uint64(17)
    meta[M_RNG] = np.int64(x)
    return x


# ------------------------------------------------------------------- heap


@njit(cache=True)
def _heap_sift_up(S, i):
    harr, hpos, act, rank = S.harr, S.hpos, S.activity, S.rank
    v = harr[i]
    a = act[v]
    rv = rank[v]
    while i > 0:
        parent = (i - 1) >> 1
        pv = harr[parent]
        pa = act[pv]
        if pa > a or (pa == a and rank[pv] < rv):
            break
        harr[i] = pv
        hpos[pv] = i
        i = parent
    harr[i] = v
    hpos[v] = i


@njit(cache=True)
def _heap_sift_down(S, i):
    harr, hpos, act, rank = S.harr, S.hpos, S.activity, S.rank
    size = S.meta[M_HSIZE]
    v = harr[i]
    a = act[v]
    rv = rank[v]
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        cv = harr[left]
        ca = act[cv]
        right = left + 1
        if right < size:
            c2 = harr[right]
            a2 = act[c2]
            if a2 > ca or (a2 == ca and rank[c2] < rank[cv]):
                left = right
                cv = c2
                ca = a2
        if a > ca or (a == ca and rv < rank[cv]):
            break
        harr[i] = cv
        hpos[cv] = i
        i = left
    harr[i] = v
    hpos[v] = i


@njit(cache=True)
def _heap_insert(S, v):
    if S.hpos[v] >= 0:
        return
    size = S.meta[M_HSIZE]
    S.harr[size] = v
    S.hpos[v] = size
    S.meta[M_HSIZE] = size + 1
    _heap_sift_up(S, size)


@njit(cache=True)
def _heap_pop(S):
    size = S.meta[M_HSIZE]
    if size == 0:
        return -1
    top = S.harr[0]
    S.hpos[top] = -1
    size -= 1
    S.meta[M_HSIZE] = size
    if size > 0:
        last = S.harr[size]
        S.harr[0] = last
        S.hpos[last] = 0
        _heap_sift_down(S, 0)
    return top


# ------------------------------------------------------------------ arena


@njit(cache=True)
def _alloc_clause(S, lits, start, size, learnt):
    ref = S.meta[M_ARENA_TOP]
    arena = S.arena
    arena[ref] = size
    arena[ref + 1] = 1 if learnt else 0
    for i in range(size):
        arena[ref + 2 + i] = lits[start + i]
    S.meta[M_ARENA_TOP] = ref + 2 + size
    return ref


@njit(cache=True)
def _attach(S, ref):
    arena = S.arena
    size = arena[ref]
    l0 = arena[ref + 2]
    l1 = arena[ref + 3]
    if size == 2:
        meta = S.meta
        b = meta[M_BTOP]
        S.bnext[b] = S.bhead[l0]
        S.bother[b] = l1
        S.bref[b] = ref
        S.bhead[l0] = b
        S.bnext[b + 1] = S.bhead[l1]
        S.bother[b + 1] = l0
        S.bref[b + 1] = ref
        S.bhead[l1] = b + 1
        meta[M_BTOP] = b + 2
    else:
        meta = S.meta
        w = meta[M_WTOP]
        S.wnext[w] = S.whead[l0]
        S.wclause[w] = ref
        S.wblocker[w] = l1
        S.whead[l0] = w
        S.wnext[w + 1] = S.whead[l1]
        S.wclause[w + 1] = ref
        S.wblocker[w + 1] = l0
        S.whead[l1] = w + 1
        meta[M_WTOP] = w + 2


@njit(cache=True)
def _enqueue(S, lit, ref, lvl):
    S.litval[lit] = 1
    S.litval[lit ^ 1] = 2
    var = lit >> 1
    S.level[var] = lvl
    S.reason[var] = ref
    S.trail[S.meta[M_TRAIL_SIZE]] = lit
    S.meta[M_TRAIL_SIZE] += 1


# -------------------------------------------------------------- propagate


@njit(cache=True)
def _propagate(S):
    meta = S.meta
    litval = S.litval
    arena = S.arena
    whead, wnext, wclause, wblocker = S.whead, S.wnext, S.wclause, S.wblocker
    bhead, bnext, bother, bref = S.bhead, S.bnext, S.bother, S.bref
    trail = S.trail
    level = S.level
    reason = S.reason
    dl = meta[M_TL_SIZE]
    qhead = meta[M_QHEAD]
    ts = meta[M_TRAIL_SIZE]
    props = 0
    confl = -1
    while qhead < ts:
        t = trail[qhead]
        qhead += 1
        f = t ^ 1
        node = bhead[f]
        while node != -1:
            o = bother[node]
            v = litval[o]
            if v == 2:
                confl = bref[node]
                break
            if v == 0:
                litval[o] = 1
                litval[o ^ 1] = 2
                var = o >> 1
                level[var] = dl
                reason[var] = bref[node]
                trail[ts] = o
                ts += 1
                props += 1
            node = bnext[node]
        if confl != -1:
            break
        prev = -1
        node = whead[f]
        while node != -1:
            nxt = wnext[node]
            if litval[wblocker[node]] == 1:
                prev = node
                node = nxt
                continue
            c = wclause[node]
            l0 = arena[c + 2]
            if l0 == f:
                l0 = arena[c + 3]
                arena[c + 2] = l0
                arena[c + 3] = f
            fv = litval[l0]
            if fv == 1:
                wblocker[node] = l0
                prev = node
                node = nxt
                continue
            end = c + 2 + arena[c]
            k = c + 4
            moved = False
            while k < end:
                lk = arena[k]
                if litval[lk] != 2:
                    arena[c + 3] = lk
                    arena[k] = f
                    if prev == -1:
                        whead[f] = nxt
                    else:
                        wnext[prev] = nxt
                    wnext[node] = whead[lk]
                    whead[lk] = node
                    wblocker[node] = l0
                    moved = True
                    break
                k += 1
            if moved:
                node = nxt
                continue
            wblocker[node] = l0
            if fv == 2:
                confl = c
                break
            litval[l0] = 1
            litval[l0 ^ 1] = 2
            var = l0 >> 1
            level[var] = dl
            reason[var] = c
            trail[ts] = l0
            ts += 1
            props += 1
            prev = node
            node = nxt
        if confl != -1:
            break
    meta[M_QHEAD] = qhead
    meta[M_TRAIL_SIZE] = ts
    meta[M_PROPS] += props
    return confl


# ---------------------------------------------------------------- analyze


@njit(cache=True)
def _analyze(S, confl):
    """First-UIP learning; learnt literals land in lbuf.  Returns
    (size, backjump_level, lbd)."""
    meta = S.meta
    arena = S.arena
    level = S.level
    reason = S.reason
    seen = S.seen
    trail = S.trail
    activity = S.activity
    hpos = S.hpos
    lbuf = S.lbuf
    tbuf = S.tbuf
    var_inc = S.fmeta[F_VAR_INC]
    dl = meta[M_TL_SIZE]
    nlearnt = 1
    nclear = 0
    pathc = 0
    p = -1
    idx = meta[M_TRAIL_SIZE] - 1
    c = confl
    while True:
        size = arena[c]
        base = c + 2
        for i in range(size):
            q = arena[base + i]
            if q == p:
                continue
            v = q >> 1
            if seen[v] == 0 and level[v] > 0:
                seen[v] = 1
                tbuf[nclear] = v
                nclear += 1
                activity[v] += var_inc
                if hpos[v] >= 0:
                    _heap_sift_up(S, hpos[v])
                if level[v] >= dl:
                    pathc += 1
                else:
                    lbuf[nlearnt] = q
                    nlearnt += 1
        while seen[trail[idx] >> 1] == 0:
            idx -= 1
        p = trail[idx]
        idx -= 1
        seen[p >> 1] = 0
        pathc -= 1
        if pathc <= 0:
            break
        c = reason[p >> 1]
    lbuf[0] = p ^ 1

    if var_inc > 1e100:
        scale = 1e-100
        for v in range(1, len(activity)):
            activity[v] *= scale
        S.fmeta[F_VAR_INC] = var_inc * scale

    # recursive minimization over the reason graph
    mstack = S.mstack
    kept = 1
    for li in range(1, nlearnt):
        q = lbuf[li]
        if reason[q >> 1] < 0:
            lbuf[kept] = q
            kept += 1
            continue
        mark_start = nclear
        msize = 1
        mstack[0] = q
        redundant = True
        while msize > 0:
            msize -= 1
            lit = mstack[msize]
            r = reason[lit >> 1]
            rsize = arena[r]
            rbase = r + 2
            lpos = lit ^ 1
            for i in range(rsize):
                x = arena[rbase + i]
                if x == lpos:
                    continue
                v = x >> 1
                if seen[v] != 0 or level[v] == 0:
                    continue
                if reason[v] < 0:
                    redundant = False
                    break
                seen[v] = 1
                tbuf[nclear] = v
                nclear += 1
                mstack[msize] = x
                msize += 1
            if not redundant:
                break
        if redundant:
            continue
        for u in range(mark_start, nclear):
            seen[tbuf[u]] = 0
        nclear = mark_start
        lbuf[kept] = q
        kept += 1
    for u in range(nclear):
        seen[tbuf[u]] = 0

    if kept == 1:
        return 1, 0, 1
    max_i = 1
    max_lev = level[lbuf[1] >> 1]
    for i in range(2, kept):
        lv = level[lbuf[i] >> 1]
        if lv > max_lev:
            max_lev = lv
            max_i = i
    tmp = lbuf[1]
    lbuf[1] = lbuf[max_i]
    lbuf[max_i] = tmp
    # count distinct levels quadratically; clauses are short after
    # minimization so this stays cheap
    lbd = 0
    for i in range(kept):
        lv = level[lbuf[i] >> 1]
        fresh = True
        for j in range(i):
            if level[lbuf[j] >> 1] == lv:
                fresh = False
                break
        if fresh:
            lbd += 1
    return kept, max_lev, lbd


@njit(cache=True)
def _backtrack(S, target):
    meta = S.meta
    if meta[M_TL_SIZE] <= target:
        return
    litval = S.litval
    saved = S.saved
    isdec = S.isdec
    trail = S.trail
    bound = S.trail_lim[target]
    ts = meta[M_TRAIL_SIZE]
    for pos in range(ts - 1, bound - 1, -1):
        lit = trail[pos]
        v = lit >> 1
        litval[lit] = 0
        litval[lit ^ 1] = 0
        saved[v] = lit & 1
        if isdec[v] != 0:
            _heap_insert(S, v)
    meta[M_TRAIL_SIZE] = bound
    meta[M_TL_SIZE] = target
    meta[M_QHEAD] = bound


# ------------------------------------------------------------ proof + db


@njit(cache=True)
def _log_clause(S, tag, lits, size):
    meta = S.meta
    p = meta[M_PTOP]
    pbuf = S.pbuf
    pbuf[p] = tag
    pbuf[p + 1] = size
    p += 2
    for i in range(size):
        lit = lits[i]
        v = lit >> 1
        pbuf[p] = -v if (lit & 1) == 1 else v
        p += 1
    meta[M_PTOP] = p


@njit(cache=True)
def _log_arena_clause(S, tag, ref):
    meta = S.meta
    arena = S.arena
    size = arena[ref]
    p = meta[M_PTOP]
    pbuf = S.pbuf
    pbuf[p] = tag
    pbuf[p + 1] = size
    p += 2
    base = ref + 2
    for i in range(size):
        lit = arena[base + i]
        v = lit >> 1
        pbuf[p] = -v if (lit & 1) == 1 else v
        p += 1
    meta[M_PTOP] = p


@njit(cache=True)
def _rebuild_watchers(S):
    meta = S.meta
    arena = S.arena
    whead = S.whead
    bhead = S.bhead
    for i in range(len(whead)):
        whead[i] = -1
        bhead[i] = -1
    meta[M_WTOP] = 0
    meta[M_BTOP] = 0
    c = 0
    top = meta[M_ARENA_TOP]
    while c < top:
        size = arena[c]
        if (arena[c + 1] & 2) == 0:
            _attach(S, c)
        c += 2 + size
    return 0


@njit(cache=True)
def _locked(S, ref):
    l0 = S.arena[ref + 2]
    return S.litval[l0] == 1 and S.reason[l0 >> 1] == ref


@njit(cache=True)
def _reduce_db(S):
    """Delete the worse half of deletable learnt clauses (by lbd, then
    size), log the deletions and rebuild the watcher lists."""
    meta = S.meta
    arena = S.arena
    larr = S.larr
    llbd = S.llbd
    n = meta[M_LSIZE]
    if n < 2:
        return 0
    # order refs by (lbd, size) via argsort on a packed key
    keys = np.empty(n, dtype=np.int64)
    for i in range(n):
        ref = larr[i]
        keys[i] = (np.int64(llbd[i]) << 32) + arena[ref]
    order = np.argsort(keys)
    keep = n // 2
    new_size = 0
    for oi in range(n):
        i = order[oi]
        ref = larr[i]
        if oi < keep or _locked(S, ref):
            larr[new_size] = ref
            llbd[new_size] = llbd[i]
            new_size += 1
        else:
            arena[ref + 1] |= 2
            _log_arena_clause(S, 1, ref)
    # compact the arrays via a second pass (larr/llbd already rewritten)
    meta[M_LSIZE] = new_size
    _rebuild_watchers(S)
    return 0


@njit(cache=True)
def _garbage_collect(S):
    """Compact the arena, dropping deleted clauses; remaps reasons and the
    learnt list, then rebuilds watchers."""
    meta = S.meta
    arena = S.arena
    top = meta[M_ARENA_TOP]
    scratch = np.empty(top, dtype=np.int32)
    c = 0
    new_top = 0
    while c < top:
        size = arena[c]
        if (arena[c + 1] & 2) == 0:
            scratch[new_top] = size
            scratch[new_top + 1] = arena[c + 1]
            for i in range(size):
                scratch[new_top + 2 + i] = arena[c + 2 + i]
            arena[c + 1] = -(new_top + 1)  # forwarding address, flagged
            new_top += 2 + size
        c += 2 + size
    # remap reasons on the trail
    reason = S.reason
    trail = S.trail
    for pos in range(meta[M_TRAIL_SIZE]):
        v = trail[pos] >> 1
        r = reason[v]
        if r >= 0:
            fwd = arena[r + 1]
            reason[v] = -fwd - 1
    larr = S.larr
    for i in range(meta[M_LSIZE]):
        fwd = arena[larr[i] + 1]
        larr[i] = -fwd - 1
    arena[:new_top] = scratch[:new_top]
    meta[M_ARENA_TOP] = new_top
    _rebuild_watchers(S)
    return 0


# ----------------------------------------------------------------- search


@njit(cache=True)
def _decide(S):
    meta = S.meta
    litval = S.litval
    var = -1
    r = _rng_next(meta)
    if (r & np.uint64(0xFFFF)) < np.uint64(1311):  # ~2% random decisions
        cand = 1 + np.int64(_rng_next(meta) % np.uint64(len(S.level) - 1))
        if S.isdec[cand] != 0 and litval[2 * cand] == 0:
            var = cand
    while var < 0:
        v = _heap_pop(S)
        if v < 0:
            break
        if litval[2 * v] == 0:
            var = v
    if var < 0:
        infor = S.infor
        for v in range(1, len(S.level)):
            if infor[v] != 0 and litval[2 * v] == 0:
                var = v
                break
        if var < 0:
            return False
    meta[M_DECISIONS] += 1
    S.trail_lim[meta[M_TL_SIZE]] = meta[M_TRAIL_SIZE]
    meta[M_TL_SIZE] += 1
    lit = 2 * var + (1 if S.saved[var] != 0 else 0)
    _enqueue(S, lit, -1, meta[M_TL_SIZE])
    return True


@njit(cache=True)
def _luby(x):
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


@njit(cache=True)
def run(S, conflict_budget, arena_cap, watch_cap, learnt_cap):
    """Continue the search; returns a status code.  Resumable after DRAIN,
    BUDGET and GROW_* returns."""
    meta = S.meta
    if meta[M_OK] == 0:
        _log_clause(S, 0, S.lbuf, 0)
        return UNSAT
    restart_limit = meta[M_RESTART_BASE] * _luby(meta[M_RESTARTS])
    while True:
        # suspend points: buffer nearly full or arrays nearly exhausted
        if meta[M_PTOP] >= len(S.pbuf) - PROOF_HEADROOM:
            return DRAIN
        if meta[M_ARENA_TOP] >= arena_cap:
            return GROW_ARENA
        if meta[M_WTOP] >= watch_cap or meta[M_BTOP] >= watch_cap:
            return GROW_WATCH
        if meta[M_LSIZE] >= learnt_cap:
            return GROW_LEARNTS
        confl = _propagate(S)
        if confl >= 0:
            meta[M_CONFLICTS] += 1
            if meta[M_TL_SIZE] == 0:
                meta[M_OK] = 0
                _log_clause(S, 0, S.lbuf, 0)
                return UNSAT
            size, bt, lbd = _analyze(S, confl)
            _log_clause(S, 0, S.lbuf, size)
            _backtrack(S, bt)
            if size == 1:
                _enqueue(S, S.lbuf[0], -1, 0)
            else:
                ref = _alloc_clause(S, S.lbuf, 0, size, 1)
                S.arena[ref + 1] |= lbd << 2
                _attach(S, ref)
                if lbd > 2 and size > 2:
                    S.larr[meta[M_LSIZE]] = ref
                    S.llbd[meta[M_LSIZE]] = lbd
                    meta[M_LSIZE] += 1
                _enqueue(S, S.lbuf[0], ref, meta[M_TL_SIZE])
            S.fmeta[F_VAR_INC] /= 0.95
            if conflict_budget > 0 and meta[M_CONFLICTS] >= conflict_budget:
                return BUDGET
            if meta[M_CONFLICTS] - meta[M_CONF_AT_RESTART] >= restart_limit:
                meta[M_RESTARTS] += 1
                meta[M_CONF_AT_RESTART] = meta[M_CONFLICTS]
                restart_limit = meta[M_RESTART_BASE] * _luby(meta[M_RESTARTS])
                _backtrack(S, 0)
                if meta[M_CONFLICTS] - meta[M_CONF_AT_REDUCE] >= 2000 + 300 * meta[M_REDUCES]:
                    meta[M_REDUCES] += 1
                    meta[M_CONF_AT_REDUCE] = meta[M_CONFLICTS]
                    _reduce_db(S)
                    if meta[M_ARENA_TOP] > (arena_cap * 3) // 4:
                        _garbage_collect(S)
        else:
            if not _decide(S):
                return SAT


@njit(cache=True)
def load_formula(S, flat, offs):
    """Install sanitized input clauses (internal literals).  Returns 0."""
    meta = S.meta
    for ci in range(len(offs) - 1):
        a = offs[ci]
        size = offs[ci + 1] - a
        if size == 1:
            lit = flat[a]
            v = S.litval[lit]
            if v == 2:
                meta[M_OK] = 0
            elif v == 0:
                _enqueue(S, lit, -1, 0)
        else:
            ref = _alloc_clause(S, flat, a, size, 0)
            _attach(S, ref)
    return 0


@njit(cache=True)
def model_value_array(S):
    out = np.zeros(len(S.level), dtype=np.uint8)
    litval = S.litval
    for v in range(1, len(S.level)):
        if litval[2 * v] == 1:
            out[v] = 1
    return out


@njit(cache=True)
def add_incremental(S, lits):
    """Attach a clause fully falsified by the current (total) assignment,
    backjumping so the search can continue; mirrors the reference engine."""
    meta = S.meta
    level = S.level
    n = len(lits)
    # distinct levels, highest and second highest
    maxlev = -1
    second = -1
    for i in range(n):
        lv = level[lits[i] >> 1]
        if lv > maxlev:
            second = maxlev
            maxlev = lv
        elif lv < maxlev and lv > second:
            second = lv
    for i in range(n):
        v = lits[i] >> 1
        S.infor[v] = 1
        if S.isdec[v] == 0:
            S.isdec[v] = 1
            if S.litval[2 * v] == 0:
                _heap_insert(S, v)
    if maxlev == 0:
        meta[M_OK] = 0
        return 0
    bt = second if second >= 0 else maxlev - 1
    _backtrack(S, bt)
    # order free literals first
    litval = S.litval
    buf = S.lbuf
    nfree = 0
    for i in range(n):
        if litval[lits[i]] == 0:
            buf[nfree] = lits[i]
            nfree += 1
    pos = nfree
    for i in range(n):
        if litval[lits[i]] != 0:
            buf[pos] = lits[i]
            pos += 1
    ref = _alloc_clause(S, buf, 0, n, 0)
    _attach(S, ref)
    if nfree == 1:
        _enqueue(S, buf[0], ref, meta[M_TL_SIZE])
    return 0


# ----------------------------------------------------------------- wrapper


class KernelSolver:
    """Drop-in replacement for solve.Solver backed by the compiled kernel.

    The search runs inside run(); this wrapper drains proof output into the
    sink, grows arrays on demand and exposes the same interface as the
    reference engine.
    """

    def __init__(
        self,
        clauses,
        var_count,
        seed=0,
        proof=None,
        decision_vars=None,
        decision_order=None,
        restart_base=64,
    ):
        import random as _random

        self.nvars = var_count
        self.proof = proof
        nv = var_count
        rng = _random.Random(seed)

        flat = []
        offs = [0]
        in_formula = bytearray(nv + 1)
        n_bin = 0
        n_long = 0
        root_units = []
        ok = True
        for clause in clauses:
            lits = []
            seen_lits = set()
            taut = False
            for ext in clause:
                lit = (ext << 1) if ext > 0 else ((-ext) << 1) | 1
                if lit in seen_lits:
                    continue
                if lit ^ 1 in seen_lits:
                    taut = True
                    break
                seen_lits.add(lit)
                lits.append(lit)
                in_formula[abs(ext)] = 1
            if taut:
                continue
            if not lits:
                ok = False
                continue
            flat.extend(lits)
            offs.append(len(flat))
            if len(lits) == 2:
                n_bin += 1
            elif len(lits) > 2:
                n_long += 1

        is_decision = bytearray(nv + 1)
        if decision_vars is None:
            is_decision[:] = in_formula
        else:
            for v in decision_vars:
                is_decision[v] = 1

        arena_size = len(flat) + 2 * (len(offs) - 1) + 8_000_000
        watch_size = 2 * n_long + 2_000_000
        bin_size = 2 * n_bin + 1_000_000
        learnt_size = 400_000
        pbuf_size = 8_000_000

        meta = np.zeros(M_META_LEN, dtype=np.int64)
        meta[M_OK] = 1 if ok else 0
        meta[M_RNG] = (seed * 2654435761 + 88172645463325252) & 0x7FFFFFFFFFFFFFFF or 1
        meta[M_RESTART_BASE] = restart_base
        fmeta = np.ones(1, dtype=np.float64)

        rank = np.arange(nv + 1, dtype=np.int32)
        if decision_order is not None:
            rank[:] = nv + 1
            for i, v in enumerate(decision_order):
                rank[v] = i

        self._arrays = dict(
            meta=meta,
            fmeta=fmeta,
            arena=np.zeros(arena_size, dtype=np.int32),
            whead=np.full(2 * nv + 2, -1, dtype=np.int32),
            wnext=np.zeros(watch_size, dtype=np.int32),
            wclause=np.zeros(watch_size, dtype=np.int32),
            wblocker=np.zeros(watch_size, dtype=np.int32),
            bhead=np.full(2 * nv + 2, -1, dtype=np.int32),
            bnext=np.zeros(bin_size, dtype=np.int32),
            bother=np.zeros(bin_size, dtype=np.int32),
            bref=np.zeros(bin_size, dtype=np.int32),
            litval=np.zeros(2 * nv + 2, dtype=np.int8),
            level=np.zeros(nv + 1, dtype=np.int32),
            reason=np.full(nv + 1, -1, dtype=np.int32),
            trail=np.zeros(nv + 2, dtype=np.int32),
            trail_lim=np.zeros(nv + 2, dtype=np.int32),
            activity=np.zeros(nv + 1, dtype=np.float64),
            harr=np.zeros(nv + 2, dtype=np.int32),
            hpos=np.full(nv + 1, -1, dtype=np.int32),
            rank=rank,
            saved=np.zeros(nv + 1, dtype=np.int8),
            seen=np.zeros(nv + 1, dtype=np.uint8),
            isdec=np.frombuffer(bytes(is_decision), dtype=np.uint8).copy(),
            infor=np.frombuffer(bytes(in_formula), dtype=np.uint8).copy(),
            larr=np.zeros(learnt_size, dtype=np.int32),
            llbd=np.zeros(learnt_size, dtype=np.int32),
            pbuf=np.zeros(pbuf_size, dtype=np.int32),
            lbuf=np.zeros(nv + 2, dtype=np.int32),
            tbuf=np.zeros(nv + 2, dtype=np.int32),
            mstack=np.zeros(nv + 2, dtype=np.int32),
        )
        saved = self._arrays["saved"]
        for v in range(1, nv + 1):
            if is_decision[v]:
                saved[v] = 1 if rng.random() < 0.05 else 0
            else:
                saved[v] = 1

        # seed the heap with decision variables in rank order
        order = sorted(
            (v for v in range(1, nv + 1) if is_decision[v]), key=lambda v: rank[v]
        )
        harr = self._arrays["harr"]
        hpos = self._arrays["hpos"]
        for i, v in enumerate(order):
            harr[i] = v
            hpos[v] = i
        meta[M_HSIZE] = len(order)

        self._state = State(**self._arrays)
        load_formula(
            self._state,
            np.array(flat, dtype=np.int32),
            np.array(offs, dtype=np.int64),
        )
        self._empty_logged = False

    # ------------------------------------------------------------- plumbing

    def _rebuild_state(self):
        self._state = State(**self._arrays)

    def _grow(self, names, extra):
        for name in names:
            old = self._arrays[name]
            self._arrays[name] = np.concatenate(
                [old, np.zeros(extra, dtype=old.dtype)]
            )
        self._rebuild_state()

    def _caps(self):
        arena_cap = len(self._arrays["arena"]) - (self.nvars + 8)
        watch_cap = min(len(self._arrays["wnext"]), len(self._arrays["bnext"])) - 8
        learnt_cap = len(self._arrays["larr"]) - 8
        return arena_cap, watch_cap, learnt_cap

    def drain_proof(self):
        """Flush buffered proof steps to the sink (additions and deletions)."""
        meta = self._arrays["meta"]
        top = int(meta[M_PTOP])
        if top == 0:
            return
        if self.proof is not None:
            buf = self._arrays["pbuf"]
            steps = buf[:top].tolist()
            i = 0
            add = self.proof.add_clause
            delete = self.proof.delete_clause
            while i < top:
                tag = steps[i]
                size = steps[i + 1]
                lits = steps[i + 2 : i + 2 + size]
                if tag == 0:
                    add(lits)
                else:
                    delete(lits)
                i += 2 + size
        meta[M_PTOP] = 0

    # --------------------------------------------------------------- public

    @property
    def conflicts(self):
        return int(self._arrays["meta"][M_CONFLICTS])

    @property
    def decisions(self):
        return int(self._arrays["meta"][M_DECISIONS])

    @property
    def propagations(self):
        return int(self._arrays["meta"][M_PROPS])

    @property
    def ok(self):
        return bool(self._arrays["meta"][M_OK])

    def solve(self, conflict_budget=None):
        from .solve import ConflictBudgetExceeded

        budget = conflict_budget if conflict_budget is not None else 0
        while True:
            caps = self._caps()
            status = run(self._state, budget, *caps)
            if status == DRAIN:
                self.drain_proof()
            elif status == GROW_ARENA:
                self._grow(["arena"], max(8_000_000, len(self._arrays["arena"])))
            elif status == GROW_WATCH:
                self._grow(
                    ["wnext", "wclause", "wblocker", "bnext", "bother", "bref"],
                    2_000_000,
                )
            elif status == GROW_LEARNTS:
                self._grow(["larr", "llbd"], len(self._arrays["larr"]))
            elif status == BUDGET:
                self.drain_proof()
                raise ConflictBudgetExceeded(self.conflicts)
            elif status == UNSAT:
                self.drain_proof()
                return None
            elif status == SAT:
                self.drain_proof()
                model = model_value_array(self._state)
                return model.astype(bool)
            else:
                raise RuntimeError(f"unknown kernel status {status}")

    def add_clause_incremental(self, ext_lits):
        lits = np.array(
            [(e << 1) if e > 0 else ((-e) << 1) | 1 for e in ext_lits],
            dtype=np.int32,
        )
        if len(lits) < 2:
            raise ValueError("incremental clauses need at least 2 literals")
        add_incremental(self._state, lits)
