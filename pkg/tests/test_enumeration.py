"""Slice and full enumeration, uniformity and counting diagnostics."""

from fractions import Fraction
from itertools import combinations

import pytest

from mlsearch import (
    EMPTY_SET,
    ElementSet,
    ExtensionOutcome,
    ImplicitSetSystem,
    InvalidParams,
    NotUniform,
    SystemContract,
    UniverseInfo,
    brute_enumerate_minimal,
    check_counting_bound,
    check_uniformity,
    enumerate_all,
    enumerate_slice,
    iter_all_minimal,
    parse_dimacs_cnf,
    parse_hitting_set,
    parse_tournament,
    random_hitting_set,
    random_min_ones_cnf,
    random_tournament,
)
from mlsearch.enumeration import UniformSlice

from conftest import make_rng

E = ElementSet.from_elements

TWO_SETS = "p hs 3 2\n1 2\n2 3\n"
THREE_CYCLE = "p tour 3\n1 2\n2 3\n3 1\n"


def _instances(seed, n):
    rng = make_rng(seed)
    return [
        random_hitting_set(n, 2 * n, 3, rng),
        random_min_ones_cnf(n, 2 * n, 3, rng),
        random_tournament(n, rng),
    ]


# ---------- slices ----------


def test_slice_examples_hitting_set():
    inst = parse_hitting_set(TWO_SETS)
    s1 = enumerate_slice(inst, EMPTY_SET, 1)
    assert s1.added == (E([1]),)
    assert s1.members() == (E([1]),)
    s2 = enumerate_slice(inst, EMPTY_SET, 2)
    assert s2.added == (E([0, 2]),)


def test_slice_examples_cnf():
    inst = parse_dimacs_cnf("p cnf 2 1\n1 2 0\n")
    s1 = enumerate_slice(inst, EMPTY_SET, 1)
    assert set(s1.added) == {E([0]), E([1])}


def test_slice_examples_tournament():
    cyc = parse_tournament(THREE_CYCLE)
    # deleting any one vertex already breaks the only cycle
    assert enumerate_slice(cyc, E([0]), 0).added == (EMPTY_SET,)
    assert enumerate_slice(cyc, EMPTY_SET, 0).added == ()


def test_slice_members_join_base_with_added():
    sl = UniformSlice(E([0]), 2, (E([1, 2]), E([3, 4])))
    assert sl.members() == (E([0, 1, 2]), E([0, 3, 4]))


def test_slice_requires_an_enumerator():
    inner = parse_hitting_set(TWO_SETS)

    class OracleOnly(ImplicitSetSystem):
        universe = inner.universe
        contract = inner.contract

        def membership(self, s):
            return inner.membership(s)

        def extend(self, query):
            return inner.extend(query)

    stub = OracleOnly()
    assert not stub.has_slice_enumerator
    with pytest.raises(NotUniform):
        enumerate_slice(stub, EMPTY_SET, 1)
    with pytest.raises(NotUniform):
        stub.minimal_extensions(EMPTY_SET, 1)


# ---------- full enumeration ----------


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("which", range(3))
def test_enumerate_all_matches_brute_force(seed, which):
    n = 7 + seed % 3
    system = _instances(600 + seed, n)[which]
    got = enumerate_all(system)
    want = brute_enumerate_minimal(system)
    assert set(got) == set(want)
    assert list(got) == sorted(got, key=lambda s: (len(s), s.bits))


def test_randomized_enumeration_is_a_subset():
    for seed in range(5):
        system = _instances(700 + seed, 8)[seed % 3]
        det = set(enumerate_all(system))
        rand = set(enumerate_all(system, method="randomized", seed=seed))
        assert rand <= det


def test_iter_yields_sizes_in_nondecreasing_order():
    system = _instances(42, 9)[0]
    sizes = [len(s) for s in iter_all_minimal(system)]
    assert sizes == sorted(sizes)


def test_enumerate_max_size_truncates():
    system = _instances(43, 8)[1]
    full = enumerate_all(system)
    for cap in range(4):
        capped = enumerate_all(system, max_size=cap)
        assert set(capped) == {s for s in full if len(s) <= cap}


def test_enumerate_rejects_bad_arguments():
    inst = parse_hitting_set(TWO_SETS)
    with pytest.raises(InvalidParams):
        enumerate_all(inst, method="heuristic")
    with pytest.raises(InvalidParams):
        enumerate_all(inst, max_size=-1)


def test_enumerated_members_are_minimal_members():
    for system in _instances(44, 8):
        for s in enumerate_all(system):
            assert system.membership(s)
            for e in s:
                assert not system.membership(s - E([e]))


# ---------- uniformity ----------


def test_uniformity_holds_on_random_instances():
    for system in _instances(45, 7):
        report = check_uniformity(system)
        assert report.ok
        assert report.checked == sum(
            1
            for bits in range(1 << 7)
            for _ in range(7 - bin(bits).count("1") + 1)
        )
        assert not report.violations


def test_uniformity_respects_max_k():
    inst = parse_hitting_set(TWO_SETS)
    report = check_uniformity(inst, max_k=1)
    assert report.ok
    assert report.checked == sum(min(1, 3 - bin(b).count("1")) + 1 for b in range(8))


class OverfullSlices(ImplicitSetSystem):
    """Claims a tiny extension base, then hands out every k-subset."""

    def __init__(self, n):
        self.universe = UniverseInfo(n)
        self.contract = SystemContract(extension_base=Fraction(101, 100))

    def membership(self, s):
        return True

    def extend(self, query):
        return ExtensionOutcome(True, query.base)

    def minimal_extensions(self, base, k):
        pool = [e for e in range(self.universe.n) if e not in base]
        return [E(c) for c in combinations(pool, k)]


def test_uniformity_reports_violations_without_raising():
    report = check_uniformity(OverfullSlices(8))
    assert not report.ok
    # C(8, 4) = 70 exceeds 1.01**4 * 64, and bigger bases stay under it
    assert (EMPTY_SET, 4, 70) in report.violations
    assert report.worst_base == EMPTY_SET
    assert report.worst_k == 4
    assert report.max_ratio > 64


def test_uniformity_custom_slack():
    report = check_uniformity(OverfullSlices(8), slack=256)
    assert report.ok


# ---------- counting ----------


def test_counting_bound_holds_on_random_instances():
    for system in _instances(46, 8):
        census = check_counting_bound(system)
        assert census.ok
        assert sum(cnt for _, cnt in census.by_size) == census.count
        assert census.count == len(brute_enumerate_minimal(system))


def test_counting_bound_empty_family():
    census = check_counting_bound(parse_dimacs_cnf("p cnf 1 2\n1 0\n-1 0\n"))
    assert census.ok and census.count == 0 and census.by_size == ()


def test_counting_bound_trivial_family():
    census = check_counting_bound(parse_hitting_set("p hs 3 0\n"))
    assert census.ok and census.count == 1
    assert census.by_size == ((0, 1),)
