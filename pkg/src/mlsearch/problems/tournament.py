"""Tournament feedback-vertex instances.

Deleting S must leave a transitive tournament, which happens exactly
when S meets every directed triangle of the original tournament.  The
extension oracle deletes one vertex of the lexicographically first
surviving triangle per node, branching three ways.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .. import _kernels as kernels
from ..core import (
    BranchStats,
    DuplicateArc,
    ElementOutOfRange,
    ElementSet,
    ExtensionOutcome,
    ExtensionQuery,
    ImplicitSetSystem,
    IncompleteTournament,
    InvalidParams,
    ParseError,
    SystemContract,
    UniverseInfo,
)
from ._lines import data_lines


@dataclass(eq=False)
class TournamentInstance(ImplicitSetSystem):
    universe: UniverseInfo
    beats: tuple[int, ...]  # beats[u] = bitmask of vertices u points at

    monotone_in_k = True

    def __post_init__(self):
        n = self.universe.n
        if len(self.beats) != n:
            raise InvalidParams("beats must have one row per vertex")
        full = self.universe.full_mask
        for u, row in enumerate(self.beats):
            if row & ~full or (row >> u) & 1:
                raise InvalidParams("arc rows must stay in the universe, no loops")
            for v in range(u + 1, n):
                fwd = (row >> v) & 1
                back = (self.beats[v] >> u) & 1
                if fwd == back:
                    raise InvalidParams(f"pair ({u}, {v}) needs exactly one arc")
        self._beats_arr = np.array(self.beats, dtype=np.uint64)
        self._triangles = tuple(
            (1 << a) | (1 << b) | (1 << c)
            for a, b, c in combinations(range(n), 3)
            if self._is_cycle(a, b, c)
        )
        self._tri_arr = np.array(self._triangles, dtype=np.uint64)
        self.contract = SystemContract(
            extension_base=Fraction(3), uniformity_constant=Fraction(3)
        )

    def _is_cycle(self, a, b, c) -> bool:
        ab = (self.beats[a] >> b) & 1
        bc = (self.beats[b] >> c) & 1
        ca = (self.beats[c] >> a) & 1
        return ab == bc == ca

    @property
    def n(self) -> int:
        return self.universe.n

    @property
    def triangles(self) -> tuple[int, ...]:
        return self._triangles

    def _hits_all_triangles(self, mask: int) -> bool:
        for t in self._triangles:
            if t & mask == 0:
                return False
        return True

    def membership(self, s: ElementSet) -> bool:
        if not self.universe.contains(s):
            return False
        return self._hits_all_triangles(s.bits)

    def residual_is_transitive(self, s: ElementSet) -> bool:
        """Independent check: surviving out-degrees must be pairwise distinct."""
        live = self.universe.full_mask & ~s.bits
        degs = sorted(
            (self.beats[v] & live).bit_count() for v in range(self.n) if (live >> v) & 1
        )
        return degs == list(range(len(degs)))

    def membership_many(self, masks) -> np.ndarray:
        arr = np.asarray(masks, dtype=np.uint64)
        if len(self._triangles) == 0:
            return np.ones(arr.shape, dtype=bool)
        return ((arr[:, None] & self._tri_arr[None, :]) != 0).all(axis=1)

    def extend(self, query: ExtensionQuery) -> ExtensionOutcome:
        self.validate_query(query)
        first, w, _, nodes, leaves = kernels.tour_extend_batch(
            self._beats_arr,
            self.n,
            np.array([query.base.bits], dtype=np.uint64),
            np.array([query.budget], dtype=np.int64),
            True,
        )
        stats = BranchStats(int(nodes), int(leaves))
        if first < 0:
            return ExtensionOutcome(False, None, stats)
        return ExtensionOutcome(True, ElementSet(int(w)), stats)

    def extend_batch(self, bases, budgets, stop_at_first=True):
        first, w, calls, nodes, leaves = kernels.tour_extend_batch(
            self._beats_arr,
            self.n,
            np.ascontiguousarray(bases, dtype=np.uint64),
            np.ascontiguousarray(budgets, dtype=np.int64),
            stop_at_first,
        )
        return int(first), int(w), int(calls), int(nodes), int(leaves)

    def minimal_extensions(self, base: ElementSet, k: int) -> list[ElementSet]:
        self.validate_query(ExtensionQuery(base, k))
        raw = kernels.tour_collect_leaves(
            self._beats_arr, self.n, np.uint64(base.bits), int(k)
        )
        out = []
        seen = set()
        for sm in raw:
            sm = int(sm)
            if sm in seen:
                continue
            seen.add(sm)
            if self._is_minimal(base.bits | sm):
                out.append(ElementSet(sm))
        return out

    def _is_minimal(self, mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            if self._hits_all_triangles(mask ^ low):
                return False
        return True


def parse_tournament(text: str) -> TournamentInstance:
    """Parse 'p tour <n>' plus one 'u v' line (u beats v) per vertex pair."""
    lines = data_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    parts = header.split()
    if len(parts) != 3 or parts[0] != "p" or parts[1] != "tour":
        raise ParseError("expected header 'p tour <n>'", lineno)
    try:
        n = int(parts[2])
    except ValueError:
        raise ParseError("vertex count must be an integer", lineno) from None
    if n < 0:
        raise ParseError("vertex count must be non-negative", lineno)

    beats = [0] * n
    oriented = set()
    expected = n * (n - 1) // 2
    for lineno, line in lines:
        toks = line.split()
        if len(toks) != 2:
            raise ParseError("expected 'u v' arc line", lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError(f"bad arc line {line!r}", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise ElementOutOfRange(f"vertex outside 1..{n}", lineno)
        if u == v:
            raise ParseError("self-arcs are not allowed", lineno)
        pair = (min(u, v), max(u, v))
        if pair in oriented:
            raise DuplicateArc(f"pair {pair} oriented twice", lineno)
        oriented.add(pair)
        beats[u - 1] |= 1 << (v - 1)
    if len(oriented) != expected:
        raise IncompleteTournament(
            f"{expected} arcs required for {n} vertices, found {len(oriented)}"
        )
    return TournamentInstance(UniverseInfo(n), tuple(beats))


def extend_tournament_fvs(instance: TournamentInstance, base: ElementSet, k: int):
    return instance.extend(ExtensionQuery(base, k))
