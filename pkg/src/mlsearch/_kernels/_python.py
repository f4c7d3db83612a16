"""Pure Python twins of the jitted kernels.

Same algorithms, same visit orders, same counts; _numba must stay
behaviorally identical (test_kernels checks parity on random inputs).
Mask arrays arrive as numpy uint64 and are converted to Python ints at
entry so the inner loops run on native ints.

All extension searches are iterative depth-first walks over an explicit
stack.  Children are pushed in descending element order so the smallest
element is explored first; the first qualifying leaf in that order wins.
"""

from __future__ import annotations

import numpy as np

ALL64 = (1 << 64) - 1


def _above(x: int) -> int:
    # mask of bit positions strictly greater than x, within 64 bits
    if x >= 63:
        return 0
    return (ALL64 << (x + 1)) & ALL64


def _children_desc(cands):
    elems = []
    while cands:
        low = cands & -cands
        elems.append(low)
        cands ^= low
    return reversed(elems)


# ---------- extension oracles ----------


def hs_extend_batch(sets_arr, bases, budgets, stop_at_first=True):
    """Hitting-set extension queries, answered in order.

    Returns (first_yes, witness_bits, calls, nodes, leaves); first_yes is
    -1 when no answered query said Yes.
    """
    sets = [int(x) for x in sets_arr]
    first = -1
    witness = 0
    calls = nodes = leaves = 0
    for qi in range(len(bases)):
        base = int(bases[qi])
        budget = int(budgets[qi])
        calls += 1
        found, w, nd, lv = _hs_extend_one(sets, base, budget)
        nodes += nd
        leaves += lv
        if found and first < 0:
            first = qi
            witness = w
            if stop_at_first:
                break
    return first, witness, calls, nodes, leaves


def _hs_extend_one(sets, base, budget):
    nodes = leaves = 0
    stack = [(0, budget)]
    while stack:
        smask, rem = stack.pop()
        nodes += 1
        assign = base | smask
        best = -1
        best_w = 65
        for i, s in enumerate(sets):
            if s & assign == 0:
                w = s.bit_count()
                if w < best_w:
                    best_w = w
                    best = i
        if best < 0:
            leaves += 1
            return True, assign, nodes, leaves
        if rem == 0:
            leaves += 1
            continue
        for low in _children_desc(sets[best]):
            stack.append((smask | low, rem - 1))
    return False, 0, nodes, leaves


def sat_extend_batch(pos_arr, neg_arr, bases, budgets, stop_at_first=True):
    """Min-ones CNF extension queries: flip positive literals of the
    unsatisfied clause (under the all-zero completion) with the fewest of
    them, ties to the earliest clause."""
    pos = [int(x) for x in pos_arr]
    neg = [int(x) for x in neg_arr]
    first = -1
    witness = 0
    calls = nodes = leaves = 0
    for qi in range(len(bases)):
        base = int(bases[qi])
        budget = int(budgets[qi])
        calls += 1
        found, w, nd, lv = _sat_extend_one(pos, neg, base, budget)
        nodes += nd
        leaves += lv
        if found and first < 0:
            first = qi
            witness = w
            if stop_at_first:
                break
    return first, witness, calls, nodes, leaves


def _sat_extend_one(pos, neg, base, budget):
    nodes = leaves = 0
    stack = [(0, budget)]
    while stack:
        smask, rem = stack.pop()
        nodes += 1
        assign = base | smask
        unsat = -1
        unsat_w = 65
        for i in range(len(pos)):
            if pos[i] & assign == 0 and neg[i] & ~assign == 0:
                w = pos[i].bit_count()
                if w < unsat_w:
                    unsat_w = w
                    unsat = i
        if unsat < 0:
            leaves += 1
            return True, assign, nodes, leaves
        cands = pos[unsat]
        if rem == 0 or cands == 0:
            # out of budget, or a clause with no positive literal left
            leaves += 1
            continue
        for low in _children_desc(cands):
            stack.append((smask | low, rem - 1))
    return False, 0, nodes, leaves


def tour_extend_batch(beats_arr, n, bases, budgets, stop_at_first=True):
    """Tournament feedback-vertex extension queries: delete a vertex of the
    lexicographically first surviving directed triangle."""
    beats = [int(x) for x in beats_arr]
    first = -1
    witness = 0
    calls = nodes = leaves = 0
    for qi in range(len(bases)):
        base = int(bases[qi])
        budget = int(budgets[qi])
        calls += 1
        found, w, nd, lv = _tour_extend_one(beats, n, base, budget)
        nodes += nd
        leaves += lv
        if found and first < 0:
            first = qi
            witness = w
            if stop_at_first:
                break
    return first, witness, calls, nodes, leaves


def _first_triangle(beats, live):
    # lexicographically first (i, j, k), i < j < k, carrying a 3-cycle
    mi = live
    while mi:
        lo_i = mi & -mi
        mi ^= lo_i
        i = lo_i.bit_length() - 1
        mj = live & _above(i)
        while mj:
            lo_j = mj & -mj
            mj ^= lo_j
            j = lo_j.bit_length() - 1
            if (beats[i] >> j) & 1:
                cand = beats[j] & ~beats[i]  # k beats i, j beats k
            else:
                cand = beats[i] & ~beats[j]  # i beats k, k beats j
            cand &= live & _above(j)
            if cand:
                lo_k = cand & -cand
                return i, j, lo_k.bit_length() - 1
    return -1, -1, -1


def _tour_extend_one(beats, n, base, budget):
    full = (1 << n) - 1
    nodes = leaves = 0
    stack = [(0, budget)]
    while stack:
        smask, rem = stack.pop()
        nodes += 1
        live = full & ~(base | smask)
        i, j, k = _first_triangle(beats, live)
        if i < 0:
            leaves += 1
            return True, base | smask, nodes, leaves
        if rem == 0:
            leaves += 1
            continue
        stack.append((smask | (1 << k), rem - 1))
        stack.append((smask | (1 << j), rem - 1))
        stack.append((smask | (1 << i), rem - 1))
    return False, 0, nodes, leaves


# ---------- exact-depth leaf collection (slice enumeration) ----------


def hs_collect_leaves(sets_arr, base, depth):
    """All added-sets of size exactly depth whose union with base hits
    every set; supersets of already-hitting nodes are not explored."""
    sets = [int(x) for x in sets_arr]
    base = int(base)
    out = []
    stack = [(0, int(depth))]
    while stack:
        smask, rem = stack.pop()
        assign = base | smask
        best = -1
        best_w = 65
        for i, s in enumerate(sets):
            if s & assign == 0:
                w = s.bit_count()
                if w < best_w:
                    best_w = w
                    best = i
        if best < 0:
            if rem == 0:
                out.append(smask)
            continue
        if rem == 0:
            continue
        for low in _children_desc(sets[best]):
            stack.append((smask | low, rem - 1))
    return np.array(out, dtype=np.uint64)


def sat_collect_leaves(pos_arr, neg_arr, base, depth):
    pos = [int(x) for x in pos_arr]
    neg = [int(x) for x in neg_arr]
    base = int(base)
    out = []
    stack = [(0, int(depth))]
    while stack:
        smask, rem = stack.pop()
        assign = base | smask
        unsat = -1
        unsat_w = 65
        for i in range(len(pos)):
            if pos[i] & assign == 0 and neg[i] & ~assign == 0:
                w = pos[i].bit_count()
                if w < unsat_w:
                    unsat_w = w
                    unsat = i
        if unsat < 0:
            if rem == 0:
                out.append(smask)
            continue
        cands = pos[unsat]
        if rem == 0 or cands == 0:
            continue
        for low in _children_desc(cands):
            stack.append((smask | low, rem - 1))
    return np.array(out, dtype=np.uint64)


def tour_collect_leaves(beats_arr, n, base, depth):
    beats = [int(x) for x in beats_arr]
    base = int(base)
    full = (1 << int(n)) - 1
    out = []
    stack = [(0, int(depth))]
    while stack:
        smask, rem = stack.pop()
        live = full & ~(base | smask)
        i, j, k = _first_triangle(beats, live)
        if i < 0:
            if rem == 0:
                out.append(smask)
            continue
        if rem == 0:
            continue
        stack.append((smask | (1 << k), rem - 1))
        stack.append((smask | (1 << j), rem - 1))
        stack.append((smask | (1 << i), rem - 1))
    return np.array(out, dtype=np.uint64)


# ---------- subset-cover family construction ----------


def _next_same_card(v):
    # Gosper: next mask with the same popcount, ascending numeric order
    c = v & -v
    r = v + c
    return r | (((v ^ r) >> 2) // c)


def _rank_comb(mask, choose):
    # combinatorial rank within the fixed-popcount layer; colex order,
    # which coincides with ascending numeric mask order
    r = 0
    i = 0
    while mask:
        low = mask & -mask
        mask ^= low
        b = low.bit_length() - 1
        i += 1
        r += choose[b][i]
    return r


def _expand_virtual(vmask, table):
    # map bit j of vmask to table[j]
    out = 0
    while vmask:
        low = vmask & -vmask
        vmask ^= low
        out |= 1 << table[low.bit_length() - 1]
    return out


def greedy_cover(n, p, q, choose_arr):
    """Greedy cover of all p-subsets of [0, n) by q-subsets under inclusion.

    Picks the q-set contained in the most uncovered p-sets each round;
    ties resolve to the smallest mask value.  Requires 0 < q < p <= n.
    Returns chosen masks in pick order.
    """
    choose = [[int(x) for x in row] for row in choose_arr]
    num_p = choose[n][p]
    num_q = choose[n][q]
    per_cand = choose[n - q][p - q]

    # candidate masks ascending = rank order
    q_masks = []
    v = (1 << q) - 1
    for _ in range(num_q):
        q_masks.append(v)
        v = _next_same_card(v)

    counts = [per_cand] * num_q
    uncovered = [True] * num_p
    n_unc = num_p
    chosen = []

    while n_unc > 0:
        best = 0
        best_c = counts[0]
        for ci in range(1, num_q):
            if counts[ci] > best_c:
                best_c = counts[ci]
                best = ci
        bmask = q_masks[best]
        chosen.append(bmask)

        compl = []
        rest = ((1 << n) - 1) & ~bmask
        while rest:
            low = rest & -rest
            rest ^= low
            compl.append(low.bit_length() - 1)

        v = (1 << (p - q)) - 1
        for _ in range(per_cand):
            a_mask = bmask | _expand_virtual(v, compl)
            v = _next_same_card(v)
            ar = _rank_comb(a_mask, choose)
            if not uncovered[ar]:
                continue
            uncovered[ar] = False
            n_unc -= 1
            elems = []
            rest2 = a_mask
            while rest2:
                low = rest2 & -rest2
                rest2 ^= low
                elems.append(low.bit_length() - 1)
            w = (1 << q) - 1
            for _ in range(choose[p][q]):
                sub = _expand_virtual(w, elems)
                w = _next_same_card(w)
                counts[_rank_comb(sub, choose)] -= 1

    return np.array(chosen, dtype=np.uint64)


# ---------- covering verification ----------


def covering_exhaustive(n, p, members_arr, num_p):
    """Scan every p-subset; return (ok, first_missed_mask)."""
    members = [int(x) for x in members_arr]
    s = (1 << int(p)) - 1 if p > 0 else 0
    for _ in range(int(num_p)):
        hit = False
        for m in members:
            if m & ~s == 0:
                hit = True
                break
        if not hit:
            return False, s
        if p > 0:
            s = _next_same_card(s)
    return True, 0


def covering_missing_sampled(members_arr, samples_arr):
    """Index of the first sampled p-set containing no member, or -1."""
    members = [int(x) for x in members_arr]
    for idx in range(len(samples_arr)):
        s = int(samples_arr[idx])
        hit = False
        for m in members:
            if m & ~s == 0:
                hit = True
                break
        if not hit:
            return idx
    return -1
