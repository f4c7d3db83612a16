"""Brute-force reference oracles.

Everything here enumerates exhaustively and exists to pin down expected
answers for the fast paths, so it trades speed for being obviously
correct.  Candidate order is size-ascending, then ascending mask value;
the first member found in that order is the reported witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .core import EMPTY_SET, ElementSet, ImplicitSetSystem, TooLarge

SEARCH_POOL_CAP = 24
ENUMERATE_CAP = 16


@dataclass(frozen=True)
class BruteForceReport:
    decision: bool
    witness: Optional[ElementSet]  # the full member found, base included
    checked: int


def _pool_elements(system: ImplicitSetSystem, base: ElementSet) -> list[int]:
    return [e for e in range(system.universe.n) if e not in base]


def _masks_of_size(pool: list[int], size: int) -> np.ndarray:
    masks = []
    for combo in combinations(pool, size):
        bits = 0
        for e in combo:
            bits |= 1 << e
        masks.append(bits)
    arr = np.array(masks, dtype=np.uint64)
    arr.sort()
    return arr


def brute_subset_search(
    system: ImplicitSetSystem, base: ElementSet = EMPTY_SET, k: int = 0
) -> BruteForceReport:
    """Scan every S disjoint from base with |S| <= k for membership of base | S."""
    pool = _pool_elements(system, base)
    if len(pool) > SEARCH_POOL_CAP:
        raise TooLarge(f"brute search pool capped at {SEARCH_POOL_CAP} elements")
    checked = 0
    base_bits = np.uint64(base.bits)
    for size in range(min(k, len(pool)) + 1):
        arr = _masks_of_size(pool, size)
        ok = np.asarray(system.membership_many(arr | base_bits), dtype=bool)
        checked += len(arr)
        if ok.any():
            first = int(np.argmax(ok))
            return BruteForceReport(True, ElementSet(int(arr[first]) | base.bits), checked)
    return BruteForceReport(False, None, checked)


def brute_minimum_size(system: ImplicitSetSystem) -> Optional[int]:
    """Smallest member cardinality, or None when the family is empty."""
    report = brute_subset_search(system, EMPTY_SET, system.universe.n)
    if not report.decision:
        return None
    return len(report.witness)


def brute_enumerate_minimal(system: ImplicitSetSystem) -> list[ElementSet]:
    """All members with no proper subset that is also a member.

    A member has a proper subset in the family iff it has a *minimal* one
    (descend until nothing can be removed), so candidates are checked
    against the minimal members found so far, in size-ascending order.
    """
    n = system.universe.n
    if n > ENUMERATE_CAP:
        raise TooLarge(f"brute enumeration capped at universe size {ENUMERATE_CAP}")
    arr = np.arange(1 << n, dtype=np.uint64)
    ok = np.asarray(system.membership_many(arr), dtype=bool)
    members = arr[ok]
    order = np.lexsort((members, np.bitwise_count(members)))
    members = members[order]

    buf = np.empty(len(members), dtype=np.uint64)
    cnt = 0
    for mask in members:
        if cnt and bool(np.any((buf[:cnt] & mask) == buf[:cnt])):
            continue
        buf[cnt] = mask
        cnt += 1
    return [ElementSet(int(m)) for m in buf[:cnt]]
