"""Min-ones d-CNF instances.

The family is the set of satisfying assignments read as 1-sets.  The
extension oracle branches on the positive literals of an unsatisfied
clause (under the all-zero completion), picking the one with fewest
positive literals left; a clause with none kills the branch.
Minimality of a model is checked exactly
(no proper sub-assignment satisfies), which is a 2^|model| scan: unlike
the monotone backends, dropping a single variable is not a sufficient
test here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

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
    TooLarge,
    UniverseInfo,
)

# exact minimality scans all sub-assignments of a model
_MINIMALITY_SCAN_CAP = 22


@dataclass(eq=False)
class CnfInstance(ImplicitSetSystem):
    universe: UniverseInfo
    clauses: tuple[tuple[ElementSet, ElementSet], ...]  # (positives, negatives)
    tautologies_dropped: int = 0
    trivially_unsat: bool = False

    monotone_in_k = True

    def __post_init__(self):
        full = self.universe.full_mask
        widths = []
        for pos, neg in self.clauses:
            if (pos.bits | neg.bits) & ~full:
                raise InvalidParams("clause leaves the universe")
            if pos.bits & neg.bits:
                raise InvalidParams("tautological clauses must be dropped at parse time")
            widths.append(len(pos) + len(neg))
        self.d = max(2, max(widths, default=2))
        self._pos_arr = np.array([p.bits for p, _ in self.clauses], dtype=np.uint64)
        self._neg_arr = np.array([g.bits for _, g in self.clauses], dtype=np.uint64)
        self._pos_int = [p.bits for p, _ in self.clauses]
        self._neg_int = [g.bits for _, g in self.clauses]
        self.contract = SystemContract(
            extension_base=Fraction(self.d), uniformity_constant=Fraction(self.d)
        )

    @property
    def m(self) -> int:
        return len(self.clauses)

    def _satisfies(self, mask: int) -> bool:
        for pos, neg in zip(self._pos_int, self._neg_int):
            if pos & mask == 0 and neg & ~mask == 0:
                return False
        return True

    def membership(self, s: ElementSet) -> bool:
        if not self.universe.contains(s):
            return False
        return self._satisfies(s.bits)

    def membership_many(self, masks) -> np.ndarray:
        arr = np.asarray(masks, dtype=np.uint64)
        if self.m == 0:
            return np.ones(arr.shape, dtype=bool)
        pos_hit = (arr[:, None] & self._pos_arr[None, :]) != 0
        neg_hit = (~arr[:, None] & self._neg_arr[None, :]) != 0
        return (pos_hit | neg_hit).all(axis=1)

    def extend(self, query: ExtensionQuery) -> ExtensionOutcome:
        self.validate_query(query)
        first, w, _, nodes, leaves = kernels.sat_extend_batch(
            self._pos_arr,
            self._neg_arr,
            np.array([query.base.bits], dtype=np.uint64),
            np.array([query.budget], dtype=np.int64),
            True,
        )
        stats = BranchStats(int(nodes), int(leaves))
        if first < 0:
            return ExtensionOutcome(False, None, stats)
        return ExtensionOutcome(True, ElementSet(int(w)), stats)

    def extend_batch(self, bases, budgets, stop_at_first=True):
        first, w, calls, nodes, leaves = kernels.sat_extend_batch(
            self._pos_arr,
            self._neg_arr,
            np.ascontiguousarray(bases, dtype=np.uint64),
            np.ascontiguousarray(budgets, dtype=np.int64),
            stop_at_first,
        )
        return int(first), int(w), int(calls), int(nodes), int(leaves)

    def minimal_extensions(self, base: ElementSet, k: int) -> list[ElementSet]:
        self.validate_query(ExtensionQuery(base, k))
        raw = kernels.sat_collect_leaves(
            self._pos_arr, self._neg_arr, np.uint64(base.bits), int(k)
        )
        out = []
        seen = set()
        for sm in raw:
            sm = int(sm)
            if sm in seen:
                continue
            seen.add(sm)
            if self._is_minimal_model(base.bits | sm):
                out.append(ElementSet(sm))
        return out

    def _is_minimal_model(self, mask: int) -> bool:
        """No proper subset of the 1-set also satisfies the formula."""
        width = mask.bit_count()
        if width > _MINIMALITY_SCAN_CAP:
            raise TooLarge(
                f"minimality scan needs 2^{width} membership tests "
                f"(cap 2^{_MINIMALITY_SCAN_CAP})"
            )
        if mask == 0:
            return True  # no proper sub-assignment exists
        sub = (mask - 1) & mask
        while True:
            if self._satisfies(sub):
                return False
            if sub == 0:
                return True
            sub = (sub - 1) & mask


def parse_dimacs_cnf(text: str) -> CnfInstance:
    """Parse DIMACS CNF; 'c' and '#' lines are comments, clauses end at 0.

    Tautological clauses are dropped (and counted); an empty clause marks
    the instance trivially unsatisfiable and is kept.
    """
    header = None
    n = m = 0
    clauses = []
    cur_pos = cur_neg = 0
    tautologies = 0
    trivially_unsat = False
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError("expected header 'p cnf <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("variable and clause counts must be integers", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("counts must be non-negative", lineno)
            header = (n, m)
            header_line = lineno
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if len(clauses) == m:
                    raise ParseError(f"more than the declared {m} clauses", lineno)
                if cur_pos & cur_neg:
                    tautologies += 1
                else:
                    if cur_pos == 0 and cur_neg == 0:
                        trivially_unsat = True
                    clauses.append((ElementSet(cur_pos), ElementSet(cur_neg)))
                cur_pos = cur_neg = 0
                continue
            v = abs(lit)
            if not 1 <= v <= n:
                raise ElementOutOfRange(f"variable {v} outside 1..{n}", lineno)
            if lit > 0:
                cur_pos |= 1 << (v - 1)
            else:
                cur_neg |= 1 << (v - 1)
    if header is None:
        raise ParseError("empty input")
    if cur_pos or cur_neg:
        raise ParseError("last clause not terminated by 0")
    if len(clauses) + tautologies != m:
        raise ParseError(
            f"expected {m} clauses, found {len(clauses) + tautologies}", header_line
        )
    return CnfInstance(
        UniverseInfo(n),
        tuple(clauses),
        tautologies_dropped=tautologies,
        trivially_unsat=trivially_unsat,
    )


def extend_min_ones_cnf(instance: CnfInstance, base: ElementSet, k: int):
    return instance.extend(ExtensionQuery(base, k))
