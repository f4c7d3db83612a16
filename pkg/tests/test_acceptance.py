"""Acceptance gate: one test per shipped guarantee, at fixed sizes and seeds.

Each test prints a single summary line with the measured numbers, so a
plain `pytest -v tests/test_acceptance.py` reads as a checklist.  The
sizes, counts, and tolerances here are contractual; loosening them is a
behaviour change, not a test fix.
"""

import math
import time
from fractions import Fraction

import numpy as np

from mlsearch import (
    ElementSet,
    FamilyCache,
    HittingSetInstance,
    UniverseInfo,
    brute_enumerate_minimal,
    brute_minimum_size,
    build_greedy,
    check_counting_bound,
    check_uniformity,
    default_cache,
    deterministic_search,
    enumerate_all,
    kappa,
    randomized_search,
    random_hitting_set,
    random_min_ones_cnf,
    random_tournament,
    to_min_ones_cnf,
    verify_covering,
)
from mlsearch.cli import main


def _rng(entropy, *key):
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=entropy, spawn_key=key))
    )


def _random_system(which, n, rng):
    if which == 0:
        return random_hitting_set(n, 2 * n, 3, rng)
    if which == 1:
        return random_min_ones_cnf(n, 2 * n, 3, rng)
    return random_tournament(n, rng)


def test_criterion_01_deterministic_search_matches_brute_force():
    # 500 instances per backend, n <= 12, every budget, under a minute
    start = time.perf_counter()
    searches = 0
    for which in range(3):
        rng = _rng(101, which)
        for _ in range(500):
            n = int(rng.integers(4, 13))
            system = _random_system(which, n, rng)
            ms = brute_minimum_size(system)
            for k in range(n + 1):
                res = deterministic_search(system, k)
                assert res.decision == (ms is not None and ms <= k), (which, n, k)
                if res.decision:
                    assert system.membership(res.witness)
                    assert len(res.witness) <= k
                searches += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(
        f"criterion 1: PASS - {searches} budget decisions across 1500 instances "
        f"match brute force ({elapsed:.1f}s)"
    )


def test_criterion_02_randomized_search_never_answers_yes_falsely():
    # 200 infeasible (instance, budget) pairs x 50 seeds: 10^4 runs, 0 false Yes
    rng = _rng(102)
    runs = 0
    kept = 0
    while kept < 200:
        n = int(rng.integers(4, 11))
        system = _random_system(kept % 3, n, rng)
        ms = brute_minimum_size(system)
        if not ms:  # need a strictly positive minimum to undershoot
            continue
        kept += 1
        for seed in range(50):
            res = randomized_search(system, ms - 1, seed=seed)
            assert not res.decision, (kept, n, ms, seed)
            runs += 1
    assert runs == 10_000
    print(f"criterion 2: PASS - {runs} undershot runs, zero false Yes answers")


def _planted_instance(i):
    # 14 elements, a planted 5-element blocker, 28 sets of width <= 3,
    # every set anchored on a planted element
    g = _rng(10_000 + i)
    n, size, m = 14, 5, 28
    chosen = [int(e) for e in g.choice(n, size=size, replace=False)]
    sets = []
    for _ in range(m):
        anchor = int(g.choice(chosen))
        extras = [int(e) for e in g.choice(n, size=2, replace=False)]
        sets.append(ElementSet.from_elements(set([anchor] + extras)))
    return HittingSetInstance(UniverseInfo(n), tuple(sets))


def test_criterion_03_randomized_search_recovers_planted_solutions():
    hits = 0
    for i in range(100):
        res = randomized_search(_planted_instance(i), 5, seed=i)
        if res.decision:
            assert len(res.witness) <= 5
            hits += 1
    assert hits >= 50
    print(f"criterion 3: PASS - {hits}/100 planted instances answered Yes at k=5")


def test_criterion_04_families_cover_exhaustively_and_at_scale():
    checked = 0
    for n in range(1, 15):
        for p in range(n + 1):
            for q in range(p + 1):
                rep = verify_covering(build_greedy(n, p, q))
                assert rep.ok, (n, p, q)
                checked += 1
    cache = default_cache()
    for n, p, q in ((20, 6, 3), (24, 6, 3)):
        fam = cache.get(n, p, q)
        rep = verify_covering(fam, exhaustive=False, samples=100_000, seed=0)
        assert rep.ok and rep.checked == 100_000, (n, p, q)
    print(
        f"criterion 4: PASS - {checked} parameter triples covered exhaustively, "
        f"(20,6,3) and (24,6,3) survive 10^5 sampled p-sets each"
    )


def test_criterion_05_greedy_family_sizes_meet_the_stated_bound():
    # |F| <= kappa * (1 + p ln n)^2, compared in exact rational arithmetic
    # against a safe lower bound on ln n
    worst = Fraction(0)
    for n in range(1, 15):
        log_floor = max(Fraction(0), Fraction(math.log(n)) - Fraction(1, 10**6))
        for p in range(n + 1):
            for q in range(p + 1):
                fam = build_greedy(n, p, q)
                bound = kappa(n, p, q) * (1 + p * log_floor) ** 2
                assert len(fam) <= bound, (n, p, q, len(fam))
                worst = max(worst, Fraction(len(fam)) / bound)
    print(
        f"criterion 5: PASS - every greedy family within the size bound "
        f"(worst fill ratio {float(worst):.3f})"
    )


def test_criterion_06_slice_sizes_stay_uniform_within_quadratic_slack():
    plan = [(0, (10, 12)), (1, (8, 10)), (2, (8, 10))]
    worst = 0.0
    reports = 0
    for which, sizes in plan:
        for n in sizes:
            rng = _rng(106, which, n)
            for _ in range(2):
                rep = check_uniformity(_random_system(which, n, rng))
                assert rep.ok, (which, n, rep.violations[:3])
                worst = max(worst, rep.max_ratio / (n * n))
                reports += 1
    print(
        f"criterion 6: PASS - {reports} instances, every slice within "
        f"u^k * n^2 (worst ratio-to-slack {worst:.3f})"
    )


def test_criterion_07_minimal_family_counts_respect_the_rate_bound():
    worst = 0.0
    for which in (0, 2):  # set systems and tournaments
        rng = _rng(107, which)
        for _ in range(200):
            n = int(rng.integers(4, 11))
            census = check_counting_bound(_random_system(which, n, rng))
            assert census.ok, (which, n, census.count, census.bound)
            worst = max(worst, census.count / census.bound)
    print(
        f"criterion 7: PASS - 400 censuses under (2 - 1/c)^n * n^2 "
        f"(worst fill {worst:.3f})"
    )


def test_criterion_08_enumeration_matches_brute_force():
    instances = 0
    for which in range(3):
        rng = _rng(108, which)
        for _ in range(100):
            n = int(rng.integers(4, 11))
            system = _random_system(which, n, rng)
            got = enumerate_all(system)
            assert set(got) == set(brute_enumerate_minimal(system)), (which, n)
            instances += 1
    print(f"criterion 8: PASS - {instances} instances enumerate identically to brute force")


def test_criterion_09_full_sweep_work_grows_at_the_advertised_rate():
    # log2 of total extension calls vs n, full sweeps on tournaments,
    # slope within [log2(5/3) - 0.30, log2(5/3) + 0.45]
    start = time.perf_counter()
    cache = FamilyCache()
    xs, ys = [], []
    for n in range(10, 19):
        rng = _rng(109, n)
        calls = []
        for _ in range(2):
            res = deterministic_search(
                random_tournament(n, rng), n, families=cache, stop_at_first=False
            )
            calls.append(res.oracle_calls)
        assert calls[0] == calls[1]  # sweep work is instance independent
        xs.append(n)
        ys.append(math.log2(calls[0]))
    slope = float(np.polyfit(xs, ys, 1)[0])
    lo = math.log2(5 / 3) - 0.30
    hi = math.log2(5 / 3) + 0.45
    elapsed = time.perf_counter() - start
    assert lo <= slope <= hi, (slope, lo, hi)
    assert elapsed < 600.0
    print(
        f"criterion 9: PASS - sweep slope {slope:.3f} per element in "
        f"[{lo:.3f}, {hi:.3f}] over n=10..18 ({elapsed:.1f}s)"
    )


def test_criterion_10_executed_repetitions_equal_the_schedule():
    code = main(["bench", "--suite", "schedule", "--n-range", "8..12", "--seed", "0"])
    assert code == 0
    checked = 0
    for n in range(6, 13):
        blockers = tuple(ElementSet(1 << i) for i in range(n))
        system = HittingSetInstance(UniverseInfo(n), blockers)
        res = randomized_search(system, n - 1, seed=0)
        assert not res.decision
        planned = []
        for plan in res.schedule.plans:
            reps = math.ceil(1 / plan.success_probability)
            assert plan.repetitions == reps, (n, plan.k_prime)
            assert plan.repetitions * plan.success_probability >= 1
            planned.append((plan.k_prime, reps))
            checked += 1
        assert list(res.reps_executed) == planned, n
    print(
        f"criterion 10: PASS - {checked} plans executed exactly "
        f"ceil(1/p) repetitions, none skipped or repeated"
    )


def test_criterion_11_set_cover_and_clause_forms_decide_identically():
    rng = _rng(111)
    agreements = 0
    for _ in range(200):
        n = int(rng.integers(4, 11))
        hs = random_hitting_set(n, 2 * n, 3, rng)
        cnf = to_min_ones_cnf(hs)
        for k in range(n + 1):
            a = deterministic_search(hs, k).decision
            b = deterministic_search(cnf, k).decision
            assert a == b, (n, k)
        agreements += 1
    print(
        f"criterion 11: PASS - {agreements}/200 instances agree at every "
        f"budget across both encodings"
    )
