"""d-hitting-set instances.

The family is every subset of the universe that intersects all listed
sets (optionally capped in size); its minimal members admit the usual
branch-on-an-unhit-set enumeration with branching factor d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .. import _kernels as kernels
from ..core import (
    BranchStats,
    ElementOutOfRange,
    ElementSet,
    ExtensionOutcome,
    ExtensionQuery,
    ImplicitSetSystem,
    InvalidParams,
    ParseError,
    SystemContract,
    UniverseInfo,
)
from ._lines import data_lines


@dataclass(eq=False)
class HittingSetInstance(ImplicitSetSystem):
    universe: UniverseInfo
    sets: tuple[ElementSet, ...]
    cap_k: Optional[int] = None

    monotone_in_k = True

    def __post_init__(self):
        full = self.universe.full_mask
        for s in self.sets:
            if s.bits == 0:
                raise InvalidParams("constraint sets must be non-empty")
            if s.bits & ~full:
                raise InvalidParams("constraint set leaves the universe")
        if self.cap_k is not None and self.cap_k < 0:
            raise InvalidParams("cap_k must be non-negative")
        # d is the largest set cardinality, floored at 2 so the oracle
        # contract base stays above 1 even for all-singleton inputs
        self.d = max(2, max((len(s) for s in self.sets), default=2))
        self._sets_arr = np.array([s.bits for s in self.sets], dtype=np.uint64)
        self._sets_int = [s.bits for s in self.sets]
        self.contract = SystemContract(
            extension_base=Fraction(self.d), uniformity_constant=Fraction(self.d)
        )

    @property
    def m(self) -> int:
        return len(self.sets)

    def _hits_all(self, mask: int) -> bool:
        for s in self._sets_int:
            if s & mask == 0:
                return False
        return True

    def membership(self, s: ElementSet) -> bool:
        if not self.universe.contains(s):
            return False
        if self.cap_k is not None and len(s) > self.cap_k:
            return False
        return self._hits_all(s.bits)

    def membership_many(self, masks) -> np.ndarray:
        arr = np.asarray(masks, dtype=np.uint64)
        if self.m == 0:
            ok = np.ones(arr.shape, dtype=bool)
        else:
            ok = ((arr[:, None] & self._sets_arr[None, :]) != 0).all(axis=1)
        if self.cap_k is not None:
            ok &= np.bitwise_count(arr) <= self.cap_k
        return ok

    def extend(self, query: ExtensionQuery) -> ExtensionOutcome:
        self.validate_query(query)
        budget = query.budget
        if self.cap_k is not None:
            budget = min(budget, self.cap_k - len(query.base))
            if budget < 0:
                return ExtensionOutcome(False, None, BranchStats(0, 0))
        first, w, _, nodes, leaves = kernels.hs_extend_batch(
            self._sets_arr,
            np.array([query.base.bits], dtype=np.uint64),
            np.array([budget], dtype=np.int64),
            True,
        )
        stats = BranchStats(int(nodes), int(leaves))
        if first < 0:
            return ExtensionOutcome(False, None, stats)
        return ExtensionOutcome(True, ElementSet(int(w)), stats)

    def extend_batch(self, bases, budgets, stop_at_first=True):
        if self.cap_k is not None:
            # caps are an API nicety, not a hot path
            return super().extend_batch(bases, budgets, stop_at_first)
        first, w, calls, nodes, leaves = kernels.hs_extend_batch(
            self._sets_arr,
            np.ascontiguousarray(bases, dtype=np.uint64),
            np.ascontiguousarray(budgets, dtype=np.int64),
            stop_at_first,
        )
        return int(first), int(w), int(calls), int(nodes), int(leaves)

    def minimal_extensions(self, base: ElementSet, k: int) -> list[ElementSet]:
        self.validate_query(ExtensionQuery(base, k))
        raw = kernels.hs_collect_leaves(self._sets_arr, np.uint64(base.bits), int(k))
        out = []
        seen = set()
        for sm in raw:
            sm = int(sm)
            if sm in seen:
                continue
            seen.add(sm)
            full_m = base.bits | sm
            if self.cap_k is not None and full_m.bit_count() > self.cap_k:
                continue
            if self._is_minimal(full_m):
                out.append(ElementSet(sm))
        return out

    def _is_minimal(self, mask: int) -> bool:
        # monotone family: a strictly smaller member exists iff some
        # single-element removal still hits everything
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            if self._hits_all(mask ^ low):
                return False
        return True


def parse_hitting_set(text: str) -> HittingSetInstance:
    """Parse the 'p hs <n> <m>' format (1-indexed elements, one set per line)."""
    lines = data_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "hs":
        raise ParseError("expected header 'p hs <n> <m>'", lineno)
    try:
        n, m = int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError("universe and set counts must be integers", lineno) from None
    if n < 0 or m < 0:
        raise ParseError("counts must be non-negative", lineno)
    universe = UniverseInfo(n)

    sets = []
    for lineno, line in lines:
        if len(sets) == m:
            raise ParseError(f"more than the declared {m} sets", lineno)
        bits = 0
        for tok in line.split():
            try:
                e = int(tok)
            except ValueError:
                raise ParseError(f"bad element {tok!r}", lineno) from None
            if not 1 <= e <= n:
                raise ElementOutOfRange(f"element {e} outside 1..{n}", lineno)
            bits |= 1 << (e - 1)
        if bits == 0:
            raise ParseError("empty set line", lineno)
        sets.append(ElementSet(bits))
    if len(sets) != m:
        raise ParseError(f"expected {m} sets, found {len(sets)}")
    return HittingSetInstance(universe, tuple(sets))


def extend_hitting_set(instance: HittingSetInstance, base: ElementSet, k: int):
    return instance.extend(ExtensionQuery(base, k))
