"""Value types: bitmask sets, universes, query and contract validation."""

from fractions import Fraction

import pytest

from mlsearch import (
    EMPTY_SET,
    MAX_UNIVERSE,
    BranchStats,
    ElementSet,
    ExtensionQuery,
    InvalidParams,
    Mode,
    SystemContract,
    UniverseInfo,
)


def test_element_set_round_trips():
    s = ElementSet.from_elements([0, 3, 5])
    assert s.bits == 0b101001
    assert s.elements() == (0, 3, 5)
    assert len(s) == 3
    assert list(s) == [0, 3, 5]
    assert ElementSet.from_hex(s.to_hex()) == s


def test_element_set_algebra():
    a = ElementSet.from_elements([0, 1, 4])
    b = ElementSet.from_elements([1, 2])
    assert (a | b).elements() == (0, 1, 2, 4)
    assert (a & b).elements() == (1,)
    assert (a - b).elements() == (0, 4)
    assert ElementSet.from_elements([1]) <= a
    assert not a <= b
    assert a.isdisjoint(ElementSet.from_elements([2, 3]))
    assert not a.isdisjoint(b)
    assert 4 in a and 2 not in a and -1 not in a
    assert EMPTY_SET <= a and len(EMPTY_SET) == 0


def test_element_set_rejects_bad_input():
    with pytest.raises(InvalidParams):
        ElementSet(-1)
    with pytest.raises(InvalidParams):
        ElementSet.from_elements([MAX_UNIVERSE])
    with pytest.raises(InvalidParams):
        ElementSet.from_elements([-1])


def test_element_set_is_immutable():
    s = ElementSet(5)
    with pytest.raises(AttributeError):
        s.bits = 7


def test_universe_defaults_and_names():
    u = UniverseInfo(4)
    assert u.full_mask == 0b1111
    assert u.full_set() == ElementSet(0b1111)
    assert u.name_of(0) == "1" and u.name_of(3) == "4"
    named = UniverseInfo(2, ("x", "y"))
    assert named.name_of(1) == "y"
    assert u.contains(ElementSet(0b1010))
    assert not u.contains(ElementSet(0b10000))


def test_universe_validation():
    with pytest.raises(InvalidParams):
        UniverseInfo(MAX_UNIVERSE + 1)
    with pytest.raises(InvalidParams):
        UniverseInfo(-1)
    with pytest.raises(InvalidParams):
        UniverseInfo(3, ("a", "b"))
    with pytest.raises(InvalidParams):
        UniverseInfo(2).name_of(2)


def test_query_and_stats():
    q = ExtensionQuery(ElementSet(1), 2)
    assert q.budget == 2
    with pytest.raises(InvalidParams):
        ExtensionQuery(ElementSet(1), -1)
    assert BranchStats() == BranchStats(0, 0)


def test_contract_validation():
    c = SystemContract(extension_base=3)
    assert c.extension_base == Fraction(3)
    assert c.mode is Mode.STRICT and c.certifying
    with pytest.raises(InvalidParams):
        SystemContract(extension_base=1)
    with pytest.raises(InvalidParams):
        SystemContract(extension_base=Fraction(1, 2))
    # strict oracles must certify; permissive ones may opt out
    with pytest.raises(InvalidParams):
        SystemContract(extension_base=2, certifying=False)
    relaxed = SystemContract(extension_base=2, mode=Mode.PERMISSIVE, certifying=False)
    assert not relaxed.certifying
    exact = SystemContract(extension_base=Fraction(41, 16), uniformity_constant=3)
    assert exact.uniformity_constant == Fraction(3)
