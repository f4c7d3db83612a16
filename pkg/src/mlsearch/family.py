"""Subset-cover families: collections of q-sets meeting every p-set.

A family C of q-subsets of [0, n) is covering when every p-subset of
[0, n) contains at least one member.  The optimum has size at least
kappa(n, p, q) = C(n, q) / C(p, q); the greedy construction stays within
a polylog factor of that, and the bucketed construction keeps build time
subexponential for larger n by hashing elements into ceil(log2 n)
buckets, covering each bucket recursively with the greedy family, and
trimming the overshoot.

Families are cached on disk keyed by (n, p, q, construction); set
MLS_CACHE_DIR to persist them across runs.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels as kernels
from .core import ElementSet, InvalidParams, ParseError, TooLarge

GREEDY_CAP = 20
FAMILY_TAG = "sepfam"
FAMILY_VERSION = "v1"

# builds self-verify: exhaustive up to this many p-sets, sampled beyond
_VERIFY_EXHAUSTIVE_CAP = 2_000_000
_VERIFY_SAMPLES = 100_000


def kappa(n: int, p: int, q: int) -> Fraction:
    """Exact counting lower bound C(n, q) / C(p, q) on covering family size."""
    if not 0 <= q <= p <= n:
        raise InvalidParams("need 0 <= q <= p <= n")
    return Fraction(math.comb(n, q), math.comb(p, q))


def _choose_table(n: int) -> np.ndarray:
    table = np.zeros((n + 1, n + 1), dtype=np.int64)
    for a in range(n + 1):
        for b in range(a + 1):
            table[a, b] = math.comb(a, b)
    return table


@dataclass(frozen=True)
class SetInclusionFamily:
    n: int
    p: int
    q: int
    construction: str
    masks: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.q <= self.p <= self.n:
            raise InvalidParams("need 0 <= q <= p <= n")
        for m in self.masks:
            if m.bit_count() != self.q:
                raise InvalidParams("every member must have exactly q elements")
            if m & ~((1 << self.n) - 1):
                raise InvalidParams("member leaves the universe")

    def __len__(self) -> int:
        return len(self.masks)

    def member_sets(self) -> tuple[ElementSet, ...]:
        return tuple(ElementSet(m) for m in self.masks)

    def masks_array(self) -> np.ndarray:
        return np.array(self.masks, dtype=np.uint64)


def _full_layer(n: int, q: int) -> tuple[int, ...]:
    out = []
    v = (1 << q) - 1
    for _ in range(math.comb(n, q)):
        out.append(v)
        c = v & -v
        r = v + c
        v = r | (((v ^ r) >> 2) // c) if v else 0
    return tuple(out)


def build_greedy(n: int, p: int, q: int) -> SetInclusionFamily:
    """Greedy cover; ties go to the smallest mask value.  Capped at n <= 20."""
    if not 0 <= q <= p <= n:
        raise InvalidParams("need 0 <= q <= p <= n")
    if n > GREEDY_CAP:
        raise TooLarge(f"greedy construction capped at n = {GREEDY_CAP}")
    if q == 0:
        masks: tuple[int, ...] = (0,)
    elif q == p:
        # each q-set covers only itself, so the full layer is forced
        masks = _full_layer(n, q)
    else:
        chosen = kernels.greedy_cover(n, p, q, _choose_table(n))
        masks = tuple(int(x) for x in chosen)
    return SetInclusionFamily(n, p, q, "greedy", masks)


# ---------- pairwise-independent bucket assignment ----------


def _next_prime(n: int) -> int:
    cand = max(2, n)
    while True:
        for d in range(2, int(math.isqrt(cand)) + 1):
            if cand % d == 0:
                break
        else:
            return cand
        cand += 1


@dataclass(frozen=True)
class BucketHashFamily:
    """Affine maps u -> ((a*u + shift) mod prime) mod b, all a >= 1.

    Pairwise independent before the mod-b fold; the fold skews bucket
    loads slightly, which is why builds never assume balance and check
    goodness per function instead.
    """

    n: int
    b: int
    prime: int

    @classmethod
    def for_universe(cls, n: int, b: int) -> "BucketHashFamily":
        if n < 1 or b < 1:
            raise InvalidParams("need n >= 1 and b >= 1")
        return cls(n, b, _next_prime(n))

    def __len__(self) -> int:
        return (self.prime - 1) * self.prime

    def functions(self):
        for a in range(1, self.prime):
            for shift in range(self.prime):
                yield (a, shift)

    def bucket_of(self, func: tuple[int, int], u: int) -> int:
        a, shift = func
        return ((a * u + shift) % self.prime) % self.b

    def buckets(self, func: tuple[int, int]) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.b)]
        for u in range(self.n):
            out[self.bucket_of(func, u)].append(u)
        return out

    def is_good(self, func: tuple[int, int]) -> bool:
        """Every bucket size within sqrt(n) * b of the even split n / b."""
        for bucket in self.buckets(func):
            if (len(bucket) * self.b - self.n) ** 2 > self.n * self.b**4:
                return False
        return True

    def is_good_for(self, func: tuple[int, int], s: ElementSet) -> bool:
        """Every bucket's share of s within sqrt(n) * b of |s| / b."""
        p = len(s)
        counts = [0] * self.b
        for u in s:
            counts[self.bucket_of(func, u)] += 1
        return all((c * self.b - p) ** 2 <= self.n * self.b**4 for c in counts)


def pairwise_family(n: int, b: int) -> BucketHashFamily:
    """All affine bucket maps for an n-element universe and b buckets.

    Size (prime - 1) * prime with the smallest prime >= n, so O(n^2).
    Balance after the mod-b fold is not assumed anywhere; builds filter
    by goodness and verify covering at the end.
    """
    if n < 2 or b < 2:
        raise InvalidParams("need n >= 2 and b >= 2")
    return BucketHashFamily.for_universe(n, b)


def _compositions(total: int, caps: list[int]):
    """All tuples of non-negative parts summing to total with parts[i] <= caps[i]."""
    if not caps:
        if total == 0:
            yield ()
        return
    head_cap = min(caps[0], total)
    for head in range(head_cap + 1):
        for rest in _compositions(total - head, caps[1:]):
            yield (head,) + rest


def build_bucketed(n: int, p: int, q: int) -> SetInclusionFamily:
    """Bucketed construction; falls back to greedy for n <= 20 or fewer
    than two buckets.

    Elements are split into b = ceil(log2 n) buckets by the first usable
    hash function (good bucket sizes, every bucket within the greedy
    cap).  For every split of p across buckets, per-bucket greedy
    families with piece size ceil(q/p * p_i) are combined and a trim set
    of the overshoot's size is removed in all possible ways, so every
    emitted member has exactly q elements.  The build self-verifies
    covering and unions in further hash functions on a miss.
    """
    if not 0 <= q <= p <= n:
        raise InvalidParams("need 0 <= q <= p <= n")
    b = math.ceil(math.log2(n)) if n > 1 else 1
    if n <= GREEDY_CAP or b < 2:
        return build_greedy(n, p, q)
    if q == 0:
        return SetInclusionFamily(n, p, q, "bucketed", (0,))
    if q == p:
        # every q-set covers only itself, so the whole layer is forced
        if math.comb(n, q) > 5_000_000:
            raise TooLarge(f"full layer C({n}, {q}) is too large to build")
        return SetInclusionFamily(n, p, q, "bucketed", _full_layer(n, q))

    hashes = BucketHashFamily.for_universe(n, b)
    members: set[int] = set()
    bucket_fam_memo: dict[tuple[tuple[int, ...], int], list[int]] = {}
    used_any = False
    for func in hashes.functions():
        if not hashes.is_good(func):
            continue
        buckets = hashes.buckets(func)
        if any(len(bk) > GREEDY_CAP for bk in buckets):
            continue
        used_any = True
        _emit_for_function(n, p, q, buckets, members, bucket_fam_memo)
        report = _self_verify(n, p, SetInclusionFamily(n, p, q, "bucketed", tuple(members)))
        if report.ok:
            return SetInclusionFamily(n, p, q, "bucketed", tuple(sorted(members)))
    if not used_any:
        raise InvalidParams(
            f"no usable bucket assignment for (n={n}, p={p}, q={q})"
        )
    raise InvalidParams(
        f"bucketed construction failed covering for (n={n}, p={p}, q={q})"
    )


def _emit_for_function(n, p, q, buckets, members, memo):
    beta_num, beta_den = q, p
    caps = [len(bk) for bk in buckets]
    for comp in _compositions(p, caps):
        # slack check on the split sizes; loose at desk scale but kept
        if any((pi * len(buckets) - p) ** 2 > n * len(buckets) ** 4 for pi in comp):
            continue
        pieces = [-(-beta_num * pi // beta_den) for pi in comp]
        trim = sum(pieces) - q
        if trim < 0:
            continue
        per_bucket: list[list[int]] = []
        for bk, pi, piece in zip(buckets, comp, pieces):
            key = (tuple(bk), pi)
            if key not in memo:
                local = build_greedy(len(bk), pi, piece)
                memo[key] = [relabel_mask(m, bk) for m in local.masks]
            per_bucket.append(memo[key])
        _emit_products(per_bucket, trim, members)


def relabel_mask(local_mask: int, elements) -> int:
    """Map a mask over [0, len(elements)) through the element list."""
    out = 0
    i = 0
    while local_mask:
        if local_mask & 1:
            out |= 1 << elements[i]
        local_mask >>= 1
        i += 1
    return out


def _emit_products(per_bucket: list[list[int]], trim: int, members: set[int]):
    def rec(idx: int, acc: int):
        if idx == len(per_bucket):
            if trim == 0:
                members.add(acc)
            else:
                elems = ElementSet(acc).elements()
                for drop in combinations(elems, trim):
                    out = acc
                    for e in drop:
                        out &= ~(1 << e)
                    members.add(out)
            return
        for m in per_bucket[idx]:
            rec(idx + 1, acc | m)

    rec(0, 0)


# ---------- covering verification ----------


@dataclass(frozen=True)
class CoveringReport:
    ok: bool
    checked: int
    missed: Optional[ElementSet]
    sampled: bool


def sample_p_sets(n: int, p: int, count: int, seed: int) -> np.ndarray:
    """Uniform p-subsets of [0, n) as masks, one per row."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    out = np.empty(count, dtype=np.uint64)
    idx = list(range(n))
    for i in range(count):
        # partial Fisher-Yates over the element list
        for j in range(p):
            swap = j + int(rng.integers(0, n - j))
            idx[j], idx[swap] = idx[swap], idx[j]
        bits = 0
        for j in range(p):
            bits |= 1 << idx[j]
        out[i] = bits
    return out


def verify_covering(
    family: SetInclusionFamily,
    exhaustive: bool = True,
    samples: int = _VERIFY_SAMPLES,
    seed: int = 0,
) -> CoveringReport:
    """Check that every p-set contains a member, or that a uniform sample does.

    Exhaustive mode walks all C(n, p) sets; sampled mode draws uniform
    p-sets.  The report carries the first uncovered set, if any.
    """
    members = family.masks_array()
    total = math.comb(family.n, family.p)
    if exhaustive:
        if total > 50_000_000:
            raise TooLarge("exhaustive covering check too big; sample instead")
        ok, missing = kernels.covering_exhaustive(
            family.n, family.p, members, total
        )
        return CoveringReport(bool(ok), total, None if ok else ElementSet(int(missing)), False)
    drawn = sample_p_sets(family.n, family.p, samples, seed)
    miss_at = int(kernels.covering_missing_sampled(members, drawn))
    if miss_at < 0:
        return CoveringReport(True, samples, None, True)
    return CoveringReport(False, miss_at + 1, ElementSet(int(drawn[miss_at])), True)


def _self_verify(n: int, p: int, family: SetInclusionFamily) -> CoveringReport:
    if math.comb(n, p) <= _VERIFY_EXHAUSTIVE_CAP:
        return verify_covering(family)
    return verify_covering(family, exhaustive=False, samples=_VERIFY_SAMPLES, seed=7)


# ---------- disk cache ----------


def save_family(family: SetInclusionFamily, path) -> None:
    path = Path(path)
    lines = [
        f"{FAMILY_TAG} {FAMILY_VERSION} {family.n} {family.p} {family.q} {len(family.masks)}"
    ]
    lines.extend(format(m, "x") for m in family.masks)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_family(path, construction: str = "file") -> SetInclusionFamily:
    path = Path(path)
    masks = []
    header = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                parts = line.split()
                if len(parts) != 6 or parts[0] != FAMILY_TAG or parts[1] != FAMILY_VERSION:
                    raise ParseError(
                        f"expected '{FAMILY_TAG} {FAMILY_VERSION} <n> <p> <q> <count>'",
                        lineno,
                    )
                header = tuple(int(x) for x in parts[2:])
                continue
            try:
                masks.append(int(line, 16))
            except ValueError:
                raise ParseError(f"bad member line {line!r}", lineno) from None
    if header is None:
        raise ParseError("empty family file")
    n, p, q, count = header
    if len(masks) != count:
        raise ParseError(f"declared {count} members, found {len(masks)}")
    return SetInclusionFamily(n, p, q, construction, tuple(masks))


class FamilyCache:
    """Memory + optional directory cache keyed by (n, p, q, construction)."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory else None
        self._mem: dict[tuple[int, int, int, str], SetInclusionFamily] = {}

    @staticmethod
    def resolve(n: int, construction: str) -> str:
        if construction == "auto":
            return "greedy" if n <= GREEDY_CAP else "bucketed"
        if construction not in ("greedy", "bucketed"):
            raise InvalidParams(f"unknown construction {construction!r}")
        return construction

    def _path(self, n, p, q, construction) -> Optional[Path]:
        if self.directory is None:
            return None
        return self.directory / f"{FAMILY_TAG}_{construction}_{n}_{p}_{q}.txt"

    def get(self, n: int, p: int, q: int, construction: str = "auto") -> SetInclusionFamily:
        construction = self.resolve(n, construction)
        key = (n, p, q, construction)
        fam = self._mem.get(key)
        if fam is not None:
            return fam
        path = self._path(n, p, q, construction)
        if path is not None and path.exists():
            fam = load_family(path, construction)
            if (fam.n, fam.p, fam.q) != (n, p, q):
                raise ParseError(f"cache file {path} holds the wrong family")
        else:
            fam = build_greedy(n, p, q) if construction == "greedy" else build_bucketed(n, p, q)
            if path is not None:
                save_family(fam, path)
        self._mem[key] = fam
        return fam


_default_cache: Optional[FamilyCache] = None


def default_cache() -> FamilyCache:
    """Process-wide cache honoring MLS_CACHE_DIR (memory-only when unset)."""
    global _default_cache
    if _default_cache is None:
        _default_cache = FamilyCache(os.environ.get("MLS_CACHE_DIR") or None)
    return _default_cache
