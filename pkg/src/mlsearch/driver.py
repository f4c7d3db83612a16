"""Search drivers built on the extension oracle.

randomized_search guesses t-subsets of the free elements and asks the
oracle for the remaining k' - t, one plan per target size k' <= k, with
enough repetitions that each plan succeeds with chance at least 1 - 1/e
on yes-instances.  deterministic_search replaces the guessing with a
sweep over a subset-cover family, so a No answer is exact.  Both report
the oracle calls, branch nodes, and leaves actually spent.

Counting is canonical: queries have a fixed order (plan by plan, then
query index), a Yes is attributed to the earliest query that returns it,
and oracle_calls is the length of that canonical prefix.  Threaded runs
chunk the same order and merge on the earliest index, so counts never
depend on the thread count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    EMPTY_SET,
    ElementSet,
    ImplicitSetSystem,
    InvalidParams,
    Mode,
    NoSolution,
)
from .family import FamilyCache, default_cache, relabel_mask
from .schedule import SearchSchedule, build_schedule, choose_split


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one budgeted search.

    witness is the full member found (base included) and is None both on
    No and when the oracle contract is non-certifying.  reps_executed
    lists (k', queries answered) per plan, in plan order.
    """

    decision: bool
    witness: Optional[ElementSet]
    k: int
    searched_k: int
    method: str
    oracle_calls: int
    nodes: int
    leaves: int
    elapsed: float
    schedule: Optional[SearchSchedule]
    reps_executed: tuple[tuple[int, int], ...]


def free_elements(system: ImplicitSetSystem, base: ElementSet) -> list[int]:
    """Universe elements not in base, ascending."""
    if not system.universe.contains(base):
        raise InvalidParams("base outside the universe")
    return [e for e in range(system.universe.n) if e not in base]


def _sample_mask(rng: np.random.Generator, pool: list[int], t: int) -> int:
    """Uniform t-subset of pool as a raw mask, via partial Fisher-Yates."""
    idx = list(pool)
    bits = 0
    for j in range(t):
        swap = j + int(rng.integers(0, len(idx) - j))
        idx[j], idx[swap] = idx[swap], idx[j]
        bits |= 1 << idx[j]
    return bits


def uniform_t_subset(pool, t: int, rng: np.random.Generator) -> ElementSet:
    """Uniform random t-subset of pool (an ElementSet or element iterable)."""
    elems = list(pool)
    if t < 0 or t > len(elems):
        raise InvalidParams("subset size must be between 0 and the pool size")
    return ElementSet(_sample_mask(rng, elems, t))


def _rep_rng(entropy: int, k_prime: int, rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=entropy, spawn_key=(k_prime, rep))
    return np.random.Generator(np.random.PCG64(ss))


def _run_batch(system, base_bits, masks, budget, stop_at_first, threads):
    """Batch the queries base|mask at the given budget; canonical merge."""
    total = len(masks)
    if total == 0:
        return -1, 0, 0, 0, 0
    bases = np.bitwise_or(masks, np.uint64(base_bits))
    budgets = np.full(total, budget, dtype=np.int64)
    if threads <= 1 or total < 2 * threads:
        return system.extend_batch(bases, budgets, stop_at_first)

    step = -(-total // threads)
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        futures = [
            pool.submit(
                system.extend_batch, bases[lo:hi], budgets[lo:hi], stop_at_first
            )
            for lo, hi in bounds
        ]
        parts = [f.result() for f in futures]

    first = -1
    witness = 0
    calls = nodes = leaves = 0
    for (lo, _), (f, w, c, nd, lv) in zip(bounds, parts):
        calls += c
        nodes += nd
        leaves += lv
        if f >= 0 and first < 0:
            first = lo + f
            witness = w
            if stop_at_first:
                # later chunks ran speculatively; drop them from the counts
                break
    return first, witness, calls, nodes, leaves


def _clamp_budget(system, base, k):
    if k < 0:
        raise InvalidParams("budget must be non-negative")
    pool = free_elements(system, base)
    return pool, min(k, len(pool))


def _finish(result_args, system):
    if not system.contract.certifying:
        result_args["witness"] = None
    return SearchResult(**result_args)


def randomized_search(
    system: ImplicitSetSystem,
    k: int,
    base: ElementSet = EMPTY_SET,
    *,
    seed: int = 0,
    threads: int = 1,
) -> SearchResult:
    """Monte Carlo search for a member containing base with at most k
    additions.  Yes answers are certified (strict oracles); a No may be
    wrong with probability at most 1/e per target size."""
    pool, searched = _clamp_budget(system, base, k)
    schedule = build_schedule(len(pool), searched, system.contract, seed)
    start = time.perf_counter()
    calls = nodes = leaves = 0
    reps_exec: list[tuple[int, int]] = []
    for plan in schedule.plans:
        masks = np.empty(plan.repetitions, dtype=np.uint64)
        for rep in range(plan.repetitions):
            rng = _rep_rng(seed, plan.k_prime, rep)
            masks[rep] = _sample_mask(rng, pool, plan.t)
        first, w, c, nd, lv = _run_batch(
            system, base.bits, masks, plan.k_prime - plan.t, True, threads
        )
        calls += c
        nodes += nd
        leaves += lv
        if first >= 0:
            reps_exec.append((plan.k_prime, first + 1))
            return _finish(
                dict(
                    decision=True,
                    witness=ElementSet(int(w)),
                    k=k,
                    searched_k=searched,
                    method="randomized",
                    oracle_calls=calls,
                    nodes=nodes,
                    leaves=leaves,
                    elapsed=time.perf_counter() - start,
                    schedule=schedule,
                    reps_executed=tuple(reps_exec),
                ),
                system,
            )
        reps_exec.append((plan.k_prime, plan.repetitions))
    return SearchResult(
        decision=False,
        witness=None,
        k=k,
        searched_k=searched,
        method="randomized",
        oracle_calls=calls,
        nodes=nodes,
        leaves=leaves,
        elapsed=time.perf_counter() - start,
        schedule=schedule,
        reps_executed=tuple(reps_exec),
    )


def deterministic_search(
    system: ImplicitSetSystem,
    k: int,
    base: ElementSet = EMPTY_SET,
    *,
    families: Optional[FamilyCache] = None,
    threads: int = 1,
    stop_at_first: bool = True,
) -> SearchResult:
    """Derandomized search: sweep a subset-cover family per target size.

    Exact in both directions.  With stop_at_first off the sweep always
    answers every query, so oracle_calls equals the total family size
    regardless of the instance; that mode exists for work measurements.
    """
    pool, searched = _clamp_budget(system, base, k)
    cache = families if families is not None else default_cache()
    c = system.contract.extension_base
    n_eff = len(pool)
    identity = pool == list(range(len(pool)))
    start = time.perf_counter()
    calls = nodes = leaves = 0
    reps_exec: list[tuple[int, int]] = []
    best_first: Optional[tuple[int, int]] = None
    witness = None
    for k_prime in range(searched + 1):
        t = choose_split(n_eff, k_prime, c)
        fam = cache.get(n_eff, k_prime, t)
        if identity:
            masks = fam.masks_array()
        else:
            masks = np.array(
                [relabel_mask(m, pool) for m in fam.masks], dtype=np.uint64
            )
        first, w, cc, nd, lv = _run_batch(
            system, base.bits, masks, k_prime - t, stop_at_first, threads
        )
        calls += cc
        nodes += nd
        leaves += lv
        reps_exec.append((k_prime, cc))
        if first >= 0 and best_first is None:
            best_first = (k_prime, first)
            witness = ElementSet(int(w))
            if stop_at_first:
                break
    return _finish(
        dict(
            decision=best_first is not None,
            witness=witness,
            k=k,
            searched_k=searched,
            method="deterministic",
            oracle_calls=calls,
            nodes=nodes,
            leaves=leaves,
            elapsed=time.perf_counter() - start,
            schedule=None,
            reps_executed=tuple(reps_exec),
        ),
        system,
    )


@dataclass(frozen=True)
class MinimizeResult:
    k_min: int
    witness: Optional[ElementSet]
    method: str
    probes: tuple[tuple[int, bool], ...]
    oracle_calls: int
    nodes: int
    leaves: int
    elapsed: float


def _child_seed(seed: int, k: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(k,))
    return int(ss.generate_state(2, np.uint64)[0])


def minimize(
    system: ImplicitSetSystem,
    base: ElementSet = EMPTY_SET,
    *,
    method: str = "randomized",
    seed: int = 0,
    threads: int = 1,
    families: Optional[FamilyCache] = None,
) -> MinimizeResult:
    """Smallest k with a Yes, by bisection when Yes is monotone in k and
    a linear scan otherwise.  Raises NoSolution when even the full free
    set fails.  Randomized probes are one-sided, so the reported minimum
    can only ever be an overestimate."""
    if system.contract.mode is Mode.PERMISSIVE or not system.contract.certifying:
        raise InvalidParams("minimization needs a strict certifying oracle")
    if method not in ("randomized", "deterministic"):
        raise InvalidParams(f"unknown search method {method!r}")

    def probe(k: int) -> SearchResult:
        if method == "randomized":
            return randomized_search(
                system, k, base, seed=_child_seed(seed, k), threads=threads
            )
        return deterministic_search(
            system, k, base, families=families, threads=threads
        )

    pool = free_elements(system, base)
    n_eff = len(pool)
    start = time.perf_counter()
    probes: list[tuple[int, bool]] = []
    calls = nodes = leaves = 0

    def record(res: SearchResult):
        nonlocal calls, nodes, leaves
        probes.append((res.k, res.decision))
        calls += res.oracle_calls
        nodes += res.nodes
        leaves += res.leaves

    top = probe(n_eff)
    record(top)
    if not top.decision:
        raise NoSolution("no member contains the base, even using every element")

    if system.monotone_in_k:
        lo, hi = 0, n_eff
        best = top
        while lo < hi:
            mid = (lo + hi) // 2
            res = probe(mid)
            record(res)
            if res.decision:
                hi = mid
                best = res
            else:
                lo = mid + 1
    else:
        best = top
        for k in range(n_eff):
            res = probe(k)
            record(res)
            if res.decision:
                best = res
                break

    return MinimizeResult(
        k_min=best.k,
        witness=best.witness,
        method=method,
        probes=tuple(probes),
        oracle_calls=calls,
        nodes=nodes,
        leaves=leaves,
        elapsed=time.perf_counter() - start,
    )
