"""Compiled virtual CPU, stride scheduler and test-CPU evaluator.

CPU state lives in a struct-of-arrays bank (``CpuBank``). A single compiled
loop, ``run_steps``, interprets instructions either for one fixed slot or
for a stride-scheduled population. The bank is unpacked into local arrays
once per call; handing the bank to a helper on every instruction costs a
few hundred nanoseconds of reference counting.

Randomness arrives as a buffer of uniform doubles (``draws``) with a cursor
in ``dstate[0]``. ``run_steps`` returns early when fewer than
``DRAWS_PER_STEP`` remain so the caller can refill.
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np
from numba import njit

from .isa import ALPHABET_SIZE, MAX_GENOME_LENGTH

MEM_SIZE = 2 * MAX_GENOME_LENGTH
STACK_DEPTH = 10
LABEL_MAX = 10
DRAWS_PER_STEP = 16
STRIDE_CONSTANT = 1e7

IP, READ, WRITE, FLOW = 0, 1, 2, 3

ST_NONE = 0
ST_IO = 1
ST_DIVIDE = 2
FAIL_NOT_ALLOCATED = -1
FAIL_UNDER_COPIED = -2
FAIL_TOO_SHORT = -3
FAIL_LENGTH = -4

# signed views of the canonical inputs A, B, C
INPUTS = np.array([0xAAAAAAAA - (1 << 32), 0xCCCCCCCC - (1 << 32), 0xF0F0F0F0 - (1 << 32)],
                  dtype=np.int64)

CpuBank = namedtuple("CpuBank", [
    "genome",     # int8[n, MAX]   the organism's own (immutable) genome
    "glen",       # int32[n]
    "mem",        # int8[n, 2*MAX] working memory
    "copied",     # uint8[n, 2*MAX]
    "memlen",     # int32[n]
    "regs",       # int32[n, 3]
    "stacks",     # int32[n, 2, STACK_DEPTH]
    "sdepth",     # int32[n, 2]
    "active",     # int32[n]
    "heads",      # int32[n, 4]
    "labelbuf",   # int8[n, LABEL_MAX]
    "labellen",   # int32[n]
    "cursor",     # int64[n] inputs consumed this gestation
    "gest",       # int64[n]
    "credited",   # uint8[n, max(1, tasks)]
    "allocated",  # uint8[n]
    "failed",     # int64[n] failed divide attempts
])

# Per-cell scheduling state of a population.
Cells = namedtuple("Cells", [
    "occupied",   # uint8[n]
    "merit",      # float64[n]
    "last_gest",  # int64[n], -1 until the first divide
    "births",     # int64[n]
    "passes",     # float64[n]
    "heap",       # int64[n] min-heap of cells on (pass, index)
    "hkey",       # float64[n] pass of heap[k]
    "hpos",       # int64[n] heap position of each cell, -1 if absent
    "hsize",      # int64[1]
])

BirthLog = namedtuple("BirthLog", ["parent", "child", "length", "gest", "merit", "genomes", "n"])


def new_bank(n: int, n_tasks: int) -> CpuBank:
    return CpuBank(
        genome=np.zeros((n, MAX_GENOME_LENGTH), np.int8),
        glen=np.zeros(n, np.int32),
        mem=np.zeros((n, MEM_SIZE), np.int8),
        copied=np.zeros((n, MEM_SIZE), np.uint8),
        memlen=np.zeros(n, np.int32),
        regs=np.zeros((n, 3), np.int32),
        stacks=np.zeros((n, 2, STACK_DEPTH), np.int32),
        sdepth=np.zeros((n, 2), np.int32),
        active=np.zeros(n, np.int32),
        heads=np.zeros((n, 4), np.int32),
        labelbuf=np.zeros((n, LABEL_MAX), np.int8),
        labellen=np.zeros(n, np.int32),
        cursor=np.zeros(n, np.int64),
        gest=np.zeros(n, np.int64),
        credited=np.zeros((n, max(1, n_tasks)), np.uint8),
        allocated=np.zeros(n, np.uint8),
        failed=np.zeros(n, np.int64),
    )


def new_cells(n: int) -> Cells:
    return Cells(np.zeros(n, np.uint8), np.ones(n, np.float64), np.full(n, -1, np.int64),
                 np.zeros(n, np.int64), np.zeros(n, np.float64), np.zeros(n, np.int64),
                 np.zeros(n, np.float64), np.full(n, -1, np.int64), np.zeros(1, np.int64))


def new_birth_log(capacity: int, with_genomes: bool) -> BirthLog:
    return BirthLog(np.zeros(capacity, np.int64), np.zeros(capacity, np.int64),
                    np.zeros(capacity, np.int64), np.zeros(capacity, np.int64),
                    np.zeros(capacity, np.float64),
                    np.zeros((capacity if with_genomes else 0, MAX_GENOME_LENGTH), np.int8),
                    np.zeros(1, np.int64))


@njit(cache=True, error_model="numpy", inline="always")
def wrap32(x):
    x = x & 0xFFFFFFFF
    if x >= 0x80000000:
        x -= 0x100000000
    return x


@njit(cache=True, error_model="numpy", inline="always")
def _draw(draws, dstate):
    u = draws[dstate[0]]
    dstate[0] += 1
    return u


@njit(cache=True, error_model="numpy")
def reset_cpu(c, i):
    """Fresh CPU for the genome in slot ``i``; memory reloaded from the genome."""
    n = c.glen[i]
    for k in range(n):
        c.mem[i, k] = c.genome[i, k]
    c.copied[i, :2 * n] = 0
    c.memlen[i] = n
    c.regs[i, :] = 0
    c.stacks[i, :, :] = 0
    c.sdepth[i, :] = 0
    c.active[i] = 0
    c.heads[i, :] = 0
    c.labellen[i] = 0
    c.cursor[i] = 0
    c.gest[i] = 0
    c.credited[i, :] = 0
    c.allocated[i] = 0


@njit(cache=True, error_model="numpy")
def load_genome(c, i, codes, n):
    for k in range(n):
        c.genome[i, k] = codes[k]
    c.glen[i] = n
    reset_cpu(c, i)
    c.failed[i] = 0


@njit(cache=True, error_model="numpy")
def attempt_divide(c, i, ins_rate, del_rate, fixed, min_len, max_len, draws, dstate, child):
    """Extract the child into ``child``; returns its length or a FAIL_* code."""
    if c.allocated[i] == 0:
        return FAIL_NOT_ALLOCATED
    start = c.glen[i]
    n = c.memlen[i] - start
    ncopied = 0
    for k in range(start, start + n):
        ncopied += c.copied[i, k]
    if 2 * ncopied < n:
        return FAIL_UNDER_COPIED
    if n < min_len:
        return FAIL_TOO_SHORT
    if fixed and n != c.glen[i]:
        return FAIL_LENGTH
    for k in range(n):
        child[k] = c.mem[i, start + k]
    if not fixed:
        if ins_rate > 0.0 and _draw(draws, dstate) < ins_rate:
            pos = int(_draw(draws, dstate) * (n + 1))
            sym = int(_draw(draws, dstate) * ALPHABET_SIZE)
            if n + 1 <= max_len:
                for k in range(n, pos, -1):
                    child[k] = child[k - 1]
                child[pos] = sym
                n += 1
        if del_rate > 0.0 and _draw(draws, dstate) < del_rate:
            pos = int(_draw(draws, dstate) * n)
            if n - 1 >= min_len:
                for k in range(pos, n - 1):
                    child[k] = child[k + 1]
                n -= 1
    return n


@njit(cache=True, error_model="numpy")
def search_label(mem, i, ip, nxt, n, L):
    """Start of the first complement of the ``n``-nop label at ``nxt``.

    The scan starts just past the label and wraps; -1 if absent.
    """
    after = (ip + 1 + n) % L
    for k in range(L):
        p = (after + k) % L
        ok = True
        for m in range(n):
            if mem[i, (p + m) % L] != (mem[i, (nxt + m) % L] + 1) % 3:
                ok = False
                break
        if ok:
            return p
    return -1


@njit(cache=True, error_model="numpy", inline="always")
def merit_value(length, credited_row, bonuses, scaled):
    if not scaled:
        return 1.0
    m = float(length)
    for t in range(bonuses.shape[0]):
        if credited_row[t]:
            m *= bonuses[t]
    return m


# ---------------------------------------------------------------- scheduler
#
# Binary min-heap of cells ordered by (pass, cell index). ``hkey`` mirrors
# ``passes`` in heap order so sifting reads contiguous keys.

@njit(cache=True, error_model="numpy")
def _sift_up(heap, hkey, hpos, k):
    x = heap[k]
    kx = hkey[k]
    while k > 0:
        parent = (k - 1) >> 1
        y = heap[parent]
        ky = hkey[parent]
        if kx < ky or (kx == ky and x < y):
            heap[k] = y
            hkey[k] = ky
            hpos[y] = k
            k = parent
        else:
            break
    heap[k] = x
    hkey[k] = kx
    hpos[x] = k


@njit(cache=True, error_model="numpy")
def _sift_down(heap, hkey, hpos, n, k):
    x = heap[k]
    kx = hkey[k]
    while True:
        c1 = 2 * k + 1
        if c1 >= n:
            break
        if c1 + 1 < n:
            if hkey[c1 + 1] < hkey[c1] or (hkey[c1 + 1] == hkey[c1] and heap[c1 + 1] < heap[c1]):
                c1 += 1
        y = heap[c1]
        ky = hkey[c1]
        if ky < kx or (ky == kx and y < x):
            heap[k] = y
            hkey[k] = ky
            hpos[y] = k
            k = c1
        else:
            break
    heap[k] = x
    hkey[k] = kx
    hpos[x] = k


@njit(cache=True, error_model="numpy")
def heap_insert(cells, cell, key):
    """Add ``cell`` with pass ``key``."""
    k = cells.hsize[0]
    cells.passes[cell] = key
    cells.heap[k] = cell
    cells.hkey[k] = key
    cells.hpos[cell] = k
    cells.hsize[0] = k + 1
    _sift_up(cells.heap, cells.hkey, cells.hpos, k)


@njit(cache=True, error_model="numpy")
def heap_remove(cells, cell):
    heap, hkey, hpos = cells.heap, cells.hkey, cells.hpos
    k = hpos[cell]
    if k < 0:
        return
    last = cells.hsize[0] - 1
    cells.hsize[0] = last
    hpos[cell] = -1
    if k == last:
        return
    y = heap[last]
    heap[k] = y
    hkey[k] = hkey[last]
    hpos[y] = k
    _sift_up(heap, hkey, hpos, k)
    _sift_down(heap, hkey, hpos, last, hpos[y])


@njit(cache=True, error_model="numpy")
def scheduler_pick(cells):
    """Charge the minimal (pass, index) cell one stride and return it."""
    cell = cells.heap[0]
    key = cells.passes[cell] + STRIDE_CONSTANT / cells.merit[cell]
    cells.passes[cell] = key
    cells.hkey[0] = key
    _sift_down(cells.heap, cells.hkey, cells.hpos, cells.hsize[0], 0)
    return cell


@njit(cache=True, error_model="numpy")
def rebase_passes(cells):
    """Shift live passes so the minimum is 0; returns the shift.

    Subtracting a common value preserves the (pass, index) order except
    where rounding merges keys, so the heap is rebuilt from scratch.
    """
    n = cells.hsize[0]
    if n == 0:
        return 0.0
    heap, hkey, hpos, passes = cells.heap, cells.hkey, cells.hpos, cells.passes
    low = hkey[0]
    for k in range(n):
        passes[heap[k]] -= low
        hkey[k] = passes[heap[k]]
    for k in range((n >> 1) - 1, -1, -1):
        _sift_down(heap, hkey, hpos, n, k)
    for k in range(n):
        hpos[heap[k]] = k
    return low


@njit(cache=True, error_model="numpy")
def _give_birth(c, cells, i, clen, gest, vt, child, draws, dstate, bonuses, scaled,
                log, record_genomes):
    """Merits, parent reset, placement and logging after slot ``i`` divided."""
    occupied, merit = cells.occupied, cells.merit
    child_merit = merit_value(clen, c.credited[i], bonuses, scaled)
    parent_merit = merit_value(c.glen[i], c.credited[i], bonuses, scaled)
    if parent_merit != merit[i]:
        # the divide step was charged at the old stride; re-charge it at the new one
        key = vt + STRIDE_CONSTANT / parent_merit
        cells.passes[i] = key
        k = cells.hpos[i]
        cells.hkey[k] = key
        _sift_up(cells.heap, cells.hkey, cells.hpos, k)
        _sift_down(cells.heap, cells.hkey, cells.hpos, cells.hsize[0], cells.hpos[i])
        merit[i] = parent_merit
    cells.last_gest[i] = gest
    cells.births[i] += 1
    reset_cpu(c, i)
    # uniform over all cells except the parent
    n_cells = occupied.shape[0]
    j = int(_draw(draws, dstate) * (n_cells - 1))
    if j >= i:
        j += 1
    if occupied[j]:
        heap_remove(cells, j)
    load_genome(c, j, child, clen)
    occupied[j] = 1
    merit[j] = child_merit
    cells.last_gest[j] = -1
    cells.births[j] = 0
    heap_insert(cells, j, vt + STRIDE_CONSTANT / child_merit)
    k = log.n[0]
    if k < log.parent.shape[0]:
        log.parent[k] = i
        log.child[k] = j
        log.length[k] = clen
        log.gest[k] = gest
        log.merit[k] = child_merit
        if record_genomes:
            for m in range(clen):
                log.genomes[k, m] = child[m]
        log.n[0] = k + 1


# ---------------------------------------------------------------- interpreter

@njit(cache=True, error_model="numpy")
def run_steps(c, cells, single, slot, steps,
              copy_rate, ins_rate, del_rate, fixed, min_len, max_len, scaled, cull_factor,
              task_of_table, dep_mask, bonuses, draws, dstate,
              child, out, log, record_genomes, counters):
    """Interpret up to ``steps`` instructions; returns how many ran.

    With ``single`` the CPU in ``slot`` runs alone and the call returns right
    after a successful divide, leaving the parent un-reset for inspection.
    Otherwise cells are stride-scheduled, offspring placed and organisms
    past ``cull_factor * length`` steps removed; ``counters`` accumulates
    [births, culls].

    ``out`` = [opcode, io value, child length, gestation at divide, status]
    describing the last instruction.
    """
    mem, copied, memlen, regs = c.mem, c.copied, c.memlen, c.regs
    stacks, sdepth, active, heads = c.stacks, c.sdepth, c.active, c.heads
    labelbuf, labellen, cursor, gest = c.labelbuf, c.labellen, c.cursor, c.gest
    credited, allocated, glen, failed = c.credited, c.allocated, c.glen, c.failed
    heap, hkey, hpos, hsize = cells.heap, cells.hkey, cells.hpos, cells.hsize
    passes, merit, occupied = cells.passes, cells.merit, cells.occupied
    ndraws = draws.shape[0]

    done = 0
    op = 0
    status = ST_NONE
    while done < steps:
        if ndraws - dstate[0] < DRAWS_PER_STEP:
            break
        vt = 0.0
        if single:
            i = slot
        else:
            if hsize[0] == 0:
                break
            # Pick the root and charge it one stride. The sift is written out
            # here (bottom-up: smaller-child path to a leaf, then back up)
            # because a call per step costs more than the sift itself.
            i = heap[0]
            vt = hkey[0]
            px = vt + STRIDE_CONSTANT / merit[i]
            passes[i] = px
            hn = hsize[0]
            k = 0
            while True:
                c1 = 2 * k + 1
                if c1 >= hn:
                    break
                if c1 + 1 < hn:
                    ka = hkey[c1]
                    kb = hkey[c1 + 1]
                    c1 += np.int64((kb < ka) | ((kb == ka) & (heap[c1 + 1] < heap[c1])))
                y = heap[c1]
                heap[k] = y
                hkey[k] = hkey[c1]
                hpos[y] = k
                k = c1
            while k > 0:
                parent = (k - 1) >> 1
                y = heap[parent]
                ky = hkey[parent]
                if px < ky or (px == ky and i < y):
                    heap[k] = y
                    hkey[k] = ky
                    hpos[y] = k
                    k = parent
                else:
                    break
            heap[k] = i
            hkey[k] = px
            hpos[i] = k

        L = memlen[i]
        ip = heads[i, IP]
        op = mem[i, ip]
        gest[i] += 1
        status = ST_NONE
        nxt = ip + 1
        if nxt >= L:
            nxt -= L
        # a single following nop modifies register or head choice
        mod = mem[i, nxt]
        has_mod = mod < 3 and L > 1
        after_mod = nxt
        if has_mod:
            after_mod = nxt + 1
            if after_mod >= L:
                after_mod -= L
        new_ip = nxt
        r = 1
        if has_mod:
            r = mod
        r2 = r + 1
        if r2 == 3:
            r2 = 0

        if op < 3:
            pass
        elif op == 3 or op == 4:  # if-n-equ, if-less
            a = regs[i, r]
            b = regs[i, r2]
            cond = a != b if op == 3 else a < b
            new_ip = after_mod
            if not cond:
                new_ip += 1
                if new_ip >= L:
                    new_ip -= L
        elif op == 5:  # pop
            s = active[i]
            d = sdepth[i, s]
            if d == 0:
                regs[i, r] = 0
            else:
                regs[i, r] = stacks[i, s, d - 1]
                sdepth[i, s] = d - 1
            new_ip = after_mod
        elif op == 6:  # push
            s = active[i]
            d = sdepth[i, s]
            if d == STACK_DEPTH:
                for k in range(STACK_DEPTH - 1):
                    stacks[i, s, k] = stacks[i, s, k + 1]
                d -= 1
            stacks[i, s, d] = regs[i, r]
            sdepth[i, s] = d + 1
            new_ip = after_mod
        elif op == 7:  # swap-stk
            active[i] = 1 - active[i]
        elif op == 8:  # swap
            t = regs[i, r]
            regs[i, r] = regs[i, r2]
            regs[i, r2] = t
            new_ip = after_mod
        elif op <= 15:  # shift-r, shift-l, inc, dec, add, sub, nand
            v = np.int64(regs[i, r])
            if op == 9:
                v = (v & 0xFFFFFFFF) >> 1
            elif op == 10:
                v = (v & 0xFFFFFFFF) << 1
            elif op == 11:
                v = v + 1
            elif op == 12:
                v = v - 1
            else:
                bx = np.int64(regs[i, 1])
                cx = np.int64(regs[i, 2])
                if op == 13:
                    v = bx + cx
                elif op == 14:
                    v = bx - cx
                else:
                    v = ~(bx & cx)
            regs[i, r] = wrap32(v)
            new_ip = after_mod
        elif op == 16:  # io
            value = np.int64(regs[i, r])
            out[1] = value
            status = ST_IO
            u = value & 0xFFFFFFFF
            low = u & 0xFF
            if u == low * 0x01010101:
                t = task_of_table[low]
                if t >= 0 and credited[i, t] == 0:
                    cur = cursor[i]
                    hmask = 0
                    for back in range(1, 4):
                        if cur - back >= 0:
                            hmask |= 1 << ((cur - back) % 3)
                    if dep_mask[low] & ~hmask == 0:
                        credited[i, t] = 1
            regs[i, r] = INPUTS[cursor[i] % 3]
            cursor[i] += 1
            new_ip = after_mod
        elif op == 17:  # h-alloc
            if allocated[i] == 0:
                n = glen[i]
                for k in range(n, 2 * n):
                    mem[i, k] = 0
                    copied[i, k] = 0
                memlen[i] = 2 * n
                allocated[i] = 1
        elif op == 18:  # h-copy
            rd = heads[i, READ]
            wr = heads[i, WRITE]
            sym = mem[i, rd]
            if copy_rate > 0.0 and _draw(draws, dstate) < copy_rate:
                sym = int(_draw(draws, dstate) * ALPHABET_SIZE)
            mem[i, wr] = sym
            copied[i, wr] = 1
            if sym < 3:
                n = labellen[i]
                if n == LABEL_MAX:
                    for k in range(LABEL_MAX - 1):
                        labelbuf[i, k] = labelbuf[i, k + 1]
                    n -= 1
                labelbuf[i, n] = sym
                labellen[i] = n + 1
            else:
                labellen[i] = 0
            rd += 1
            if rd >= L:
                rd -= L
            wr += 1
            if wr >= L:
                wr -= L
            heads[i, READ] = rd
            heads[i, WRITE] = wr
        elif op == 19 or op == 23:  # h-search, if-label
            cap = LABEL_MAX if LABEL_MAX < L - 1 else L - 1
            n = 0
            p = nxt
            while n < cap and mem[i, p] < 3:
                n += 1
                p += 1
                if p == L:
                    p = 0
            after = (ip + 1 + n) % L
            new_ip = after
            if op == 19:
                regs[i, 1] = 0
                regs[i, 2] = 0
                heads[i, FLOW] = after
                if n > 0:
                    p = search_label(mem, i, ip, nxt, n, L)
                    if p >= 0:
                        regs[i, 1] = (p - ip) % L
                        regs[i, 2] = n
                        heads[i, FLOW] = (p + n) % L
            else:
                ok = labellen[i] >= n
                if ok:
                    off = labellen[i] - n
                    for m in range(n):
                        if labelbuf[i, off + m] != (mem[i, (nxt + m) % L] + 1) % 3:
                            ok = False
                            break
                if not ok:
                    new_ip = (after + 1) % L
        elif op <= 22:  # mov-head, jmp-head, get-head
            h = IP
            if has_mod:
                h = mod
            new_ip = after_mod
            cur = ip if h == IP else heads[i, h]
            if op == 22:
                regs[i, 2] = cur
            else:
                if op == 20:
                    dest = np.int64(heads[i, FLOW])
                else:
                    dest = (np.int64(cur) + np.int64(regs[i, 2])) % L
                if h == IP:
                    new_ip = dest
                else:
                    heads[i, h] = dest
        elif op == 24:  # set-flow
            rf = 2
            if has_mod:
                rf = mod
            heads[i, FLOW] = np.int64(regs[i, rf]) % L
            new_ip = after_mod
        else:  # h-divide
            res = attempt_divide(c, i, ins_rate, del_rate, fixed, min_len, max_len,
                                 draws, dstate, child)
            if res > 0:
                status = ST_DIVIDE
                out[2] = res
                out[3] = gest[i]
            else:
                failed[i] += 1
                status = res
        heads[i, IP] = new_ip
        done += 1

        if single:
            if status == ST_DIVIDE:
                break
        elif status == ST_DIVIDE:
            _give_birth(c, cells, i, out[2], out[3], vt, child, draws, dstate, bonuses,
                        scaled, log, record_genomes)
            counters[0] += 1
        elif gest[i] > cull_factor * glen[i]:
            heap_remove(cells, i)
            occupied[i] = 0
            counters[1] += 1
    out[0] = op
    out[4] = status
    return done


# ---------------------------------------------------------------- test CPU

@njit(cache=True, error_model="numpy")
def evaluate_genomes(codes, lens, task_of_table, dep_mask, bonuses, cap_factor, min_len, fixed,
                     out_gest, out_merit, out_len, out_identical, out_tasks):
    """Run each genome alone, mutation-free, until its first divide or the cap.

    ``out_gest`` is 0 for non-viable genomes. ``fixed`` rejects divides whose
    child length differs from the parent's.
    """
    n_tasks = bonuses.shape[0]
    c = CpuBank(
        np.zeros((1, MAX_GENOME_LENGTH), np.int8), np.zeros(1, np.int32),
        np.zeros((1, MEM_SIZE), np.int8), np.zeros((1, MEM_SIZE), np.uint8),
        np.zeros(1, np.int32), np.zeros((1, 3), np.int32),
        np.zeros((1, 2, STACK_DEPTH), np.int32), np.zeros((1, 2), np.int32),
        np.zeros(1, np.int32), np.zeros((1, 4), np.int32),
        np.zeros((1, LABEL_MAX), np.int8), np.zeros(1, np.int32),
        np.zeros(1, np.int64), np.zeros(1, np.int64),
        np.zeros((1, max(1, n_tasks)), np.uint8), np.zeros(1, np.uint8),
        np.zeros(1, np.int64),
    )
    cells = Cells(np.ones(1, np.uint8), np.ones(1, np.float64), np.full(1, -1, np.int64),
                  np.zeros(1, np.int64), np.zeros(1, np.float64), np.zeros(1, np.int64),
                  np.zeros(1, np.float64), np.zeros(1, np.int64), np.ones(1, np.int64))
    log = BirthLog(np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64),
                   np.zeros(0, np.int64), np.zeros(0, np.float64),
                   np.zeros((0, MAX_GENOME_LENGTH), np.int8), np.zeros(1, np.int64))
    draws = np.zeros(DRAWS_PER_STEP, np.float64)
    dstate = np.zeros(1, np.int64)
    counters = np.zeros(2, np.int64)
    child = np.empty(MAX_GENOME_LENGTH + 1, np.int8)
    out = np.zeros(5, np.int64)
    for g in range(codes.shape[0]):
        n = lens[g]
        load_genome(c, 0, codes[g], n)
        out_gest[g] = 0
        out_merit[g] = 0.0
        out_len[g] = 0
        out_identical[g] = 0
        for t in range(n_tasks):
            out_tasks[g, t] = 0
        run_steps(c, cells, True, 0, cap_factor * n, 0.0, 0.0, 0.0, fixed, min_len,
                  MAX_GENOME_LENGTH, True, cap_factor, task_of_table, dep_mask, bonuses,
                  draws, dstate, child, out, log, False, counters)
        if out[4] == ST_DIVIDE:
            clen = out[2]
            out_gest[g] = out[3]
            out_len[g] = clen
            out_merit[g] = merit_value(clen, c.credited[0], bonuses, True)
            same = clen == n
            if same:
                for k in range(n):
                    if child[k] != codes[g, k]:
                        same = False
                        break
            out_identical[g] = same
            for t in range(n_tasks):
                out_tasks[g, t] = c.credited[0, t]
