"""Shared fixtures: kernel warmup and seeded rngs."""

import numpy as np
import pytest

import mlsearch._kernels as kernels


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # touch every compiled entry point once so timings and the slope
    # measurement never include JIT compilation
    sets = np.array([3, 6], dtype=np.uint64)
    beats = np.array([2, 4, 1], dtype=np.uint64)  # 3-cycle
    zeros1 = np.zeros(1, dtype=np.uint64)
    ones1 = np.ones(1, dtype=np.int64)
    choose = np.zeros((5, 5), dtype=np.int64)
    for a in range(5):
        choose[a, 0] = 1
        for b in range(1, a + 1):
            choose[a, b] = choose[a - 1, b - 1] + choose[a - 1, b]
    for _, mod in kernels.implementations():
        mod.hs_extend_batch(sets, zeros1, ones1, True)
        mod.sat_extend_batch(sets, np.zeros(2, np.uint64), zeros1, ones1, True)
        mod.tour_extend_batch(beats, 3, zeros1, ones1, True)
        mod.hs_collect_leaves(sets, np.uint64(0), 1)
        mod.sat_collect_leaves(sets, np.zeros(2, np.uint64), np.uint64(0), 1)
        mod.tour_collect_leaves(beats, 3, np.uint64(0), 1)
        mod.greedy_cover(4, 3, 2, choose)
        mod.covering_exhaustive(4, 2, np.array([3], dtype=np.uint64), 6)
        mod.covering_missing_sampled(
            np.array([3], dtype=np.uint64), np.array([3], dtype=np.uint64)
        )
    yield


@pytest.fixture
def rng():
    return make_rng(20240817)
