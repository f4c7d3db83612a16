"""Random instance generators shared by benchmarks and tests."""

from __future__ import annotations

import numpy as np

from .core import ElementSet, InvalidParams, UniverseInfo
from .problems.cnf import CnfInstance
from .problems.hitting import HittingSetInstance
from .problems.tournament import TournamentInstance


def random_tournament(n: int, rng: np.random.Generator) -> TournamentInstance:
    """Orient every pair by a fair coin."""
    beats = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.integers(0, 2):
                beats[i] |= 1 << j
            else:
                beats[j] |= 1 << i
    return TournamentInstance(UniverseInfo(n), tuple(beats))


def random_hitting_set(
    n: int, m: int, d: int, rng: np.random.Generator
) -> HittingSetInstance:
    """m constraint sets with 2..d elements drawn without replacement."""
    if d < 2 or d > n:
        raise InvalidParams("need 2 <= d <= n")
    sets = []
    for _ in range(m):
        width = int(rng.integers(2, d + 1))
        members = rng.choice(n, size=width, replace=False)
        bits = 0
        for e in members:
            bits |= 1 << int(e)
        sets.append(ElementSet(bits))
    return HittingSetInstance(UniverseInfo(n), tuple(sets))


def random_min_ones_cnf(
    n: int, m: int, d: int, rng: np.random.Generator, negate_prob: float = 0.5
) -> CnfInstance:
    """m clauses over 2..d distinct variables, each sign an independent coin.

    Distinct variables per clause, so tautologies cannot occur.
    """
    if d < 2 or d > n:
        raise InvalidParams("need 2 <= d <= n")
    clauses = []
    for _ in range(m):
        width = int(rng.integers(2, d + 1))
        members = rng.choice(n, size=width, replace=False)
        pos = neg = 0
        for e in members:
            if rng.random() < negate_prob:
                neg |= 1 << int(e)
            else:
                pos |= 1 << int(e)
        clauses.append((ElementSet(pos), ElementSet(neg)))
    return CnfInstance(UniverseInfo(n), tuple(clauses))
