"""Subset-cover families: constructions, verification, cache."""

import math
from fractions import Fraction

import pytest

from mlsearch import (
    BucketHashFamily,
    ElementSet,
    FamilyCache,
    InvalidParams,
    ParseError,
    SetInclusionFamily,
    TooLarge,
    build_bucketed,
    build_greedy,
    kappa,
    load_family,
    pairwise_family,
    save_family,
    verify_covering,
)
from mlsearch.family import relabel_mask

from conftest import make_rng


# ---------- kappa ----------


def test_kappa_closed_forms():
    assert kappa(9, 4, 0) == 1
    assert kappa(9, 4, 4) == math.comb(9, 4)
    assert kappa(4, 2, 1) == 2
    assert kappa(24, 6, 3) == Fraction(math.comb(24, 3), math.comb(6, 3))


def test_kappa_at_least_one():
    for n in range(13):
        for p in range(n + 1):
            for q in range(p + 1):
                assert kappa(n, p, q) >= 1


def test_kappa_monotone_in_n_and_p():
    # exact rational comparisons, no floats
    for p in range(1, 10):
        for q in range(p + 1):
            for n in range(p, 14):
                assert kappa(n + 1, p, q) >= kappa(n, p, q)
    for n in range(1, 14):
        for q in range(n):
            for p in range(max(q, 1), n):
                assert kappa(n, p + 1, q) <= kappa(n, p, q)


def test_kappa_rejects_bad_orders():
    with pytest.raises(InvalidParams):
        kappa(3, 4, 1)
    with pytest.raises(InvalidParams):
        kappa(5, 2, 3)


# ---------- greedy construction ----------


def test_greedy_trivial_shapes():
    assert build_greedy(7, 3, 0).masks == (0,)
    full = build_greedy(5, 2, 2)
    assert len(full) == 10
    assert sorted(full.masks) == sorted(
        m for m in range(1 << 5) if bin(m).count("1") == 2
    )


def test_greedy_covers_exhaustively():
    for n, p, q in ((6, 4, 2), (8, 4, 2), (9, 5, 3), (10, 3, 1)):
        fam = build_greedy(n, p, q)
        rep = verify_covering(fam)
        assert rep.ok and rep.checked == math.comb(n, p)
        assert all(m.bit_count() == q for m in fam.masks)
        assert len(set(fam.masks)) == len(fam.masks)


def test_greedy_size_bound_small():
    for n, p, q in ((8, 4, 2), (10, 5, 2), (12, 6, 3)):
        fam = build_greedy(n, p, q)
        bound = kappa(n, p, q) * (1 + p * math.log(n)) ** 2
        assert len(fam) <= bound


def test_greedy_cap():
    with pytest.raises(TooLarge):
        build_greedy(21, 3, 2)


# ---------- covering verification ----------


def test_verify_covering_trivial_families():
    assert verify_covering(SetInclusionFamily(6, 3, 0, "x", (0,))).ok
    layer = build_greedy(6, 4, 4)
    fam = SetInclusionFamily(6, 6, 4, "x", layer.masks)
    assert verify_covering(fam).ok


def test_verify_covering_finds_a_hole():
    fam = build_greedy(5, 3, 2)
    holed = SetInclusionFamily(5, 3, 2, "x", fam.masks[1:])
    rep = verify_covering(holed)
    assert not rep.ok
    assert rep.missed is not None
    assert not any(m & ~rep.missed.bits == 0 for m in holed.masks)

    sampled = verify_covering(holed, exhaustive=False, samples=2000, seed=3)
    assert not sampled.ok and sampled.missed is not None


def test_verify_covering_sampled_passes_good_family():
    fam = build_greedy(10, 5, 2)
    rep = verify_covering(fam, exhaustive=False, samples=5000, seed=1)
    assert rep.ok and rep.sampled and rep.checked == 5000


def test_family_validation():
    with pytest.raises(InvalidParams):
        SetInclusionFamily(5, 3, 2, "x", (0b111,))  # wrong cardinality
    with pytest.raises(InvalidParams):
        SetInclusionFamily(4, 3, 2, "x", (0b110000,))  # escapes universe
    with pytest.raises(InvalidParams):
        SetInclusionFamily(4, 2, 3, "x", ())


# ---------- hash family ----------


def test_pairwise_family_size_and_range():
    fam = pairwise_family(7, 2)
    assert fam.prime == 7
    assert len(fam) == 42
    for func in fam.functions():
        for u in range(7):
            assert 0 <= fam.bucket_of(func, u) < 2


def test_pairwise_family_rejects_tiny():
    with pytest.raises(InvalidParams):
        pairwise_family(1, 2)
    with pytest.raises(InvalidParams):
        pairwise_family(8, 1)


def test_buckets_partition_universe():
    fam = pairwise_family(11, 3)
    func = next(iter(fam.functions()))
    buckets = fam.buckets(func)
    flat = sorted(e for bucket in buckets for e in bucket)
    assert flat == list(range(11))


def test_good_function_exists_for_planted_set():
    # some function must spread a planted 8-set evenly over 4 buckets
    fam = pairwise_family(16, 4)
    planted = ElementSet.from_elements([0, 2, 5, 7, 8, 11, 13, 14])
    assert any(fam.is_good_for(f, planted) for f in fam.functions())


def test_is_good_definition_matches_direct_inequality():
    fam = BucketHashFamily.for_universe(13, 3)
    for func in list(fam.functions())[:40]:
        direct = all(
            abs(len(bk) - 13 / 3) <= math.sqrt(13) * 3 for bk in fam.buckets(func)
        )
        assert fam.is_good(func) == direct


# ---------- bucketed construction ----------


def test_bucketed_falls_back_to_greedy_at_desk_scale():
    fam = build_bucketed(12, 4, 2)
    assert fam.construction == "greedy"
    assert fam.masks == build_greedy(12, 4, 2).masks


def test_bucketed_trivial_layers():
    assert build_bucketed(24, 5, 0).masks == (0,)
    layer = build_bucketed(22, 2, 2)
    assert len(layer) == math.comb(22, 2)


def test_bucketed_24_6_3():
    fam = build_bucketed(24, 6, 3)
    assert fam.construction == "bucketed"
    assert all(m.bit_count() == 3 for m in fam.masks)
    # sampled covering: no miss in 10^4 draws (the acceptance run does 10^5)
    rep = verify_covering(fam, exhaustive=False, samples=10_000, seed=5)
    assert rep.ok
    assert len(fam) <= kappa(24, 6, 3) * Fraction(2) ** 12


def test_bucketed_22_5_2_covers_exhaustively():
    fam = build_bucketed(22, 5, 2)
    assert verify_covering(fam).ok


# ---------- relabeling ----------


def test_relabel_mask():
    assert relabel_mask(0b101, [3, 5, 9]) == (1 << 3) | (1 << 9)
    assert relabel_mask(0, [1, 2]) == 0
    assert relabel_mask(0b11, [0, 7]) == 0b10000001


# ---------- persistence ----------


def test_save_load_round_trip(tmp_path):
    fam = build_greedy(8, 4, 2)
    path = tmp_path / "fam.txt"
    save_family(fam, path)
    text = path.read_text()
    assert text.splitlines()[0] == f"sepfam v1 8 4 2 {len(fam)}"
    loaded = load_family(path, "greedy")
    assert loaded.masks == fam.masks
    assert (loaded.n, loaded.p, loaded.q) == (8, 4, 2)


@pytest.mark.parametrize(
    "content",
    [
        "",
        "sepfam v2 4 2 1 0\n",
        "wrong v1 4 2 1 0\n",
        "sepfam v1 4 2 1 2\n1\n",
        "sepfam v1 4 2 1 1\nzz\n",
    ],
)
def test_load_family_rejects_malformed(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    with pytest.raises(ParseError):
        load_family(path)


# ---------- cache ----------


def test_cache_memory_hit_returns_same_object():
    cache = FamilyCache()
    a = cache.get(8, 4, 2)
    b = cache.get(8, 4, 2)
    assert a is b


def test_cache_resolve_rules():
    assert FamilyCache.resolve(12, "auto") == "greedy"
    assert FamilyCache.resolve(24, "auto") == "bucketed"
    assert FamilyCache.resolve(24, "greedy") == "greedy"
    with pytest.raises(InvalidParams):
        FamilyCache.resolve(10, "magic")


def test_cache_disk_round_trip(tmp_path):
    cache = FamilyCache(tmp_path)
    fam = cache.get(7, 3, 2)
    files = list(tmp_path.glob("sepfam_greedy_7_3_2.txt"))
    assert len(files) == 1
    fresh = FamilyCache(tmp_path)
    again = fresh.get(7, 3, 2)
    assert again.masks == fam.masks


def test_cache_rejects_mismatched_file(tmp_path):
    cache = FamilyCache(tmp_path)
    wrong = build_greedy(6, 3, 2)
    save_family(wrong, tmp_path / "sepfam_greedy_7_3_2.txt")
    with pytest.raises(ParseError):
        cache.get(7, 3, 2)


def test_exhaustive_covering_all_small_triples():
    # every construction we can build at n <= 10 covers, checked exhaustively
    for n in range(1, 11):
        for p in range(n + 1):
            for q in range(p + 1):
                fam = build_greedy(n, p, q)
                assert verify_covering(fam).ok, (n, p, q)
