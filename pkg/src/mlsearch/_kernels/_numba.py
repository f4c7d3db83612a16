"""Numba-jitted kernels, behaviorally identical to _python.

Masks are numpy uint64 throughout; shift amounts and SWAR constants are
kept unsigned to avoid silent promotion.  Kernels are compiled lazily on
first call and cached on disk (cache=True), so only the first run of a
fresh checkout pays the compile cost.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)
U2 = np.uint64(2)
U4 = np.uint64(4)
U56 = np.uint64(56)
M1 = np.uint64(0x5555555555555555)
M2 = np.uint64(0x3333333333333333)
M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
H01 = np.uint64(0x0101010101010101)
ALL64 = np.uint64(0xFFFFFFFFFFFFFFFF)

_JIT = dict(cache=True, nogil=True)

# stack capacity: depth <= 64, at most 64 children per node
_STACK_CAP = 64 * 64 + 2


@njit(**_JIT)
def _popcount(x):
    x = x - ((x >> U1) & M1)
    x = (x & M2) + ((x >> U2) & M2)
    x = (x + (x >> U4)) & M4
    return (x * H01) >> U56


@njit(**_JIT)
def _bit(pos):
    return U1 << np.uint64(pos)


@njit(**_JIT)
def _bit_index(low):
    return int(_popcount(low - U1))


@njit(**_JIT)
def _above(x):
    if x >= 63:
        return U0
    return ALL64 << np.uint64(x + 1)


# ---------- extension oracles ----------


@njit(**_JIT)
def hs_extend_batch(sets, bases, budgets, stop_at_first=True):
    first = np.int64(-1)
    witness = U0
    calls = np.int64(0)
    nodes = np.int64(0)
    leaves = np.int64(0)
    smask_st = np.empty(_STACK_CAP, np.uint64)
    rem_st = np.empty(_STACK_CAP, np.int64)
    tmp = np.empty(64, np.uint64)
    for qi in range(len(bases)):
        base = bases[qi]
        budget = budgets[qi]
        calls += 1
        sp = 0
        smask_st[0] = U0
        rem_st[0] = budget
        sp = 1
        found = False
        w = U0
        while sp > 0:
            sp -= 1
            smask = smask_st[sp]
            rem = rem_st[sp]
            nodes += 1
            assign = base | smask
            best = -1
            best_w = 65
            for i in range(len(sets)):
                if sets[i] & assign == U0:
                    pw = int(_popcount(sets[i]))
                    if pw < best_w:
                        best_w = pw
                        best = i
            if best < 0:
                leaves += 1
                found = True
                w = assign
                break
            if rem == 0:
                leaves += 1
                continue
            cc = sets[best]
            nel = 0
            while cc != U0:
                low = cc & (~cc + U1)
                cc ^= low
                tmp[nel] = low
                nel += 1
            for t in range(nel - 1, -1, -1):
                smask_st[sp] = smask | tmp[t]
                rem_st[sp] = rem - 1
                sp += 1
        if found and first < 0:
            first = qi
            witness = w
            if stop_at_first:
                break
    return first, witness, calls, nodes, leaves


@njit(**_JIT)
def sat_extend_batch(pos, neg, bases, budgets, stop_at_first=True):
    first = np.int64(-1)
    witness = U0
    calls = np.int64(0)
    nodes = np.int64(0)
    leaves = np.int64(0)
    smask_st = np.empty(_STACK_CAP, np.uint64)
    rem_st = np.empty(_STACK_CAP, np.int64)
    tmp = np.empty(64, np.uint64)
    for qi in range(len(bases)):
        base = bases[qi]
        budget = budgets[qi]
        calls += 1
        smask_st[0] = U0
        rem_st[0] = budget
        sp = 1
        found = False
        w = U0
        while sp > 0:
            sp -= 1
            smask = smask_st[sp]
            rem = rem_st[sp]
            nodes += 1
            assign = base | smask
            unsat = -1
            unsat_w = 65
            for i in range(len(pos)):
                if pos[i] & assign == U0 and neg[i] & ~assign == U0:
                    pw = int(_popcount(pos[i]))
                    if pw < unsat_w:
                        unsat_w = pw
                        unsat = i
            if unsat < 0:
                leaves += 1
                found = True
                w = assign
                break
            cands = pos[unsat]
            if rem == 0 or cands == U0:
                leaves += 1
                continue
            cc = cands
            nel = 0
            while cc != U0:
                low = cc & (~cc + U1)
                cc ^= low
                tmp[nel] = low
                nel += 1
            for t in range(nel - 1, -1, -1):
                smask_st[sp] = smask | tmp[t]
                rem_st[sp] = rem - 1
                sp += 1
        if found and first < 0:
            first = qi
            witness = w
            if stop_at_first:
                break
    return first, witness, calls, nodes, leaves


@njit(**_JIT)
def _first_triangle(beats, live):
    mi = live
    while mi != U0:
        lo_i = mi & (~mi + U1)
        mi ^= lo_i
        i = _bit_index(lo_i)
        mj = live & _above(i)
        while mj != U0:
            lo_j = mj & (~mj + U1)
            mj ^= lo_j
            j = _bit_index(lo_j)
            if (beats[i] >> np.uint64(j)) & U1 == U1:
                cand = beats[j] & ~beats[i]
            else:
                cand = beats[i] & ~beats[j]
            cand &= live & _above(j)
            if cand != U0:
                lo_k = cand & (~cand + U1)
                return i, j, _bit_index(lo_k)
    return -1, -1, -1


@njit(**_JIT)
def tour_extend_batch(beats, n, bases, budgets, stop_at_first=True):
    full = ALL64 if n >= 64 else _bit(n) - U1
    first = np.int64(-1)
    witness = U0
    calls = np.int64(0)
    nodes = np.int64(0)
    leaves = np.int64(0)
    smask_st = np.empty(_STACK_CAP, np.uint64)
    rem_st = np.empty(_STACK_CAP, np.int64)
    for qi in range(len(bases)):
        base = bases[qi]
        budget = budgets[qi]
        calls += 1
        smask_st[0] = U0
        rem_st[0] = budget
        sp = 1
        found = False
        w = U0
        while sp > 0:
            sp -= 1
            smask = smask_st[sp]
            rem = rem_st[sp]
            nodes += 1
            live = full & ~(base | smask)
            i, j, k = _first_triangle(beats, live)
            if i < 0:
                leaves += 1
                found = True
                w = base | smask
                break
            if rem == 0:
                leaves += 1
                continue
            smask_st[sp] = smask | _bit(k)
            rem_st[sp] = rem - 1
            sp += 1
            smask_st[sp] = smask | _bit(j)
            rem_st[sp] = rem - 1
            sp += 1
            smask_st[sp] = smask | _bit(i)
            rem_st[sp] = rem - 1
            sp += 1
        if found and first < 0:
            first = qi
            witness = w
            if stop_at_first:
                break
    return first, witness, calls, nodes, leaves


# ---------- exact-depth leaf collection (slice enumeration) ----------


@njit(**_JIT)
def _append(out, cnt, value):
    if cnt == out.size:
        bigger = np.empty(out.size * 2, np.uint64)
        bigger[:cnt] = out
        out = bigger
    out[cnt] = value
    return out, cnt + 1


@njit(**_JIT)
def hs_collect_leaves(sets, base, depth):
    out = np.empty(256, np.uint64)
    cnt = 0
    smask_st = np.empty(_STACK_CAP, np.uint64)
    rem_st = np.empty(_STACK_CAP, np.int64)
    tmp = np.empty(64, np.uint64)
    smask_st[0] = U0
    rem_st[0] = depth
    sp = 1
    while sp > 0:
        sp -= 1
        smask = smask_st[sp]
        rem = rem_st[sp]
        assign = base | smask
        best = -1
        best_w = 65
        for i in range(len(sets)):
            if sets[i] & assign == U0:
                pw = int(_popcount(sets[i]))
                if pw < best_w:
                    best_w = pw
                    best = i
        if best < 0:
            if rem == 0:
                out, cnt = _append(out, cnt, smask)
            continue
        if rem == 0:
            continue
        cc = sets[best]
        nel = 0
        while cc != U0:
            low = cc & (~cc + U1)
            cc ^= low
            tmp[nel] = low
            nel += 1
        for t in range(nel - 1, -1, -1):
            smask_st[sp] = smask | tmp[t]
            rem_st[sp] = rem - 1
            sp += 1
    return out[:cnt].copy()


@njit(**_JIT)
def sat_collect_leaves(pos, neg, base, depth):
    out = np.empty(256, np.uint64)
    cnt = 0
    smask_st = np.empty(_STACK_CAP, np.uint64)
    rem_st = np.empty(_STACK_CAP, np.int64)
    tmp = np.empty(64, np.uint64)
    smask_st[0] = U0
    rem_st[0] = depth
    sp = 1
    while sp > 0:
        sp -= 1
        smask = smask_st[sp]
        rem = rem_st[sp]
        assign = base | smask
        unsat = -1
        unsat_w = 65
        for i in range(len(pos)):
            if pos[i] & assign == U0 and neg[i] & ~assign == U0:
                pw = int(_popcount(pos[i]))
                if pw < unsat_w:
                    unsat_w = pw
                    unsat = i
        if unsat < 0:
            if rem == 0:
                out, cnt = _append(out, cnt, smask)
            continue
        cands = pos[unsat]
        if rem == 0 or cands == U0:
            continue
        cc = cands
        nel = 0
        while cc != U0:
            low = cc & (~cc + U1)
            cc ^= low
            tmp[nel] = low
            nel += 1
        for t in range(nel - 1, -1, -1):
            smask_st[sp] = smask | tmp[t]
            rem_st[sp] = rem - 1
            sp += 1
    return out[:cnt].copy()


@njit(**_JIT)
def tour_collect_leaves(beats, n, base, depth):
    full = ALL64 if n >= 64 else _bit(n) - U1
    out = np.empty(256, np.uint64)
    cnt = 0
    smask_st = np.empty(_STACK_CAP, np.uint64)
    rem_st = np.empty(_STACK_CAP, np.int64)
    smask_st[0] = U0
    rem_st[0] = depth
    sp = 1
    while sp > 0:
        sp -= 1
        smask = smask_st[sp]
        rem = rem_st[sp]
        live = full & ~(base | smask)
        i, j, k = _first_triangle(beats, live)
        if i < 0:
            if rem == 0:
                out, cnt = _append(out, cnt, smask)
            continue
        if rem == 0:
            continue
        smask_st[sp] = smask | _bit(k)
        rem_st[sp] = rem - 1
        sp += 1
        smask_st[sp] = smask | _bit(j)
        rem_st[sp] = rem - 1
        sp += 1
        smask_st[sp] = smask | _bit(i)
        rem_st[sp] = rem - 1
        sp += 1
    return out[:cnt].copy()


# ---------- subset-cover family construction ----------


@njit(**_JIT)
def _next_same_card(v):
    c = v & (~v + U1)
    r = v + c
    return r | (((v ^ r) >> U2) // c)


@njit(**_JIT)
def _rank_comb(mask, choose):
    r = np.int64(0)
    i = 0
    while mask != U0:
        low = mask & (~mask + U1)
        mask ^= low
        b = _bit_index(low)
        i += 1
        r += choose[b, i]
    return r


@njit(**_JIT)
def _expand_virtual(vmask, table):
    out = U0
    while vmask != U0:
        low = vmask & (~vmask + U1)
        vmask ^= low
        out |= _bit(table[_bit_index(low)])
    return out


@njit(**_JIT)
def greedy_cover(n, p, q, choose):
    num_p = choose[n, p]
    num_q = choose[n, q]
    per_cand = choose[n - q, p - q]

    q_masks = np.empty(num_q, np.uint64)
    v = _bit(q) - U1
    for qi in range(num_q):
        q_masks[qi] = v
        v = _next_same_card(v)

    counts = np.full(num_q, per_cand, np.int64)
    uncovered = np.ones(num_p, np.bool_)
    n_unc = num_p
    chosen = np.empty(256, np.uint64)
    n_chosen = 0

    compl = np.empty(64, np.int64)
    elems = np.empty(64, np.int64)

    while n_unc > 0:
        best = 0
        best_c = counts[0]
        for ci in range(1, num_q):
            if counts[ci] > best_c:
                best_c = counts[ci]
                best = ci
        bmask = q_masks[best]
        chosen, n_chosen = _append(chosen, n_chosen, bmask)

        nc = 0
        rest = (ALL64 if n >= 64 else _bit(n) - U1) & ~bmask
        while rest != U0:
            low = rest & (~rest + U1)
            rest ^= low
            compl[nc] = _bit_index(low)
            nc += 1

        v = _bit(p - q) - U1
        for _ in range(per_cand):
            a_mask = bmask | _expand_virtual(v, compl)
            v = _next_same_card(v)
            ar = _rank_comb(a_mask, choose)
            if not uncovered[ar]:
                continue
            uncovered[ar] = False
            n_unc -= 1
            ne = 0
            rest2 = a_mask
            while rest2 != U0:
                low = rest2 & (~rest2 + U1)
                rest2 ^= low
                elems[ne] = _bit_index(low)
                ne += 1
            w = _bit(q) - U1
            for _ in range(choose[p, q]):
                sub = _expand_virtual(w, elems)
                w = _next_same_card(w)
                counts[_rank_comb(sub, choose)] -= 1

    return chosen[:n_chosen].copy()


# ---------- covering verification ----------


@njit(**_JIT)
def covering_exhaustive(n, p, members, num_p):
    s = _bit(p) - U1 if p > 0 else U0
    for _ in range(num_p):
        hit = False
        for mi in range(len(members)):
            if members[mi] & ~s == U0:
                hit = True
                break
        if not hit:
            return False, s
        if p > 0:
            s = _next_same_card(s)
    return True, U0


@njit(**_JIT)
def covering_missing_sampled(members, samples):
    for idx in range(len(samples)):
        s = samples[idx]
        hit = False
        for mi in range(len(members)):
            if members[mi] & ~s == U0:
                hit = True
                break
        if not hit:
            return idx
    return -1
