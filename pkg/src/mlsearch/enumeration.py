"""Enumerating minimal members through family-guided slices.

A slice is the set of minimal members of size |base| + k that contain a
fixed base.  Backends with a branching enumerator expose it through
minimal_extensions; gluing slices over a subset-cover family yields
every minimal member of each size, because any size-k minimal member
contains some family member as its guessed part.

check_uniformity and check_counting_bound measure how tight the slice
and census bounds are on a concrete instance.  They report, never raise:
a violation is a finding about the instance, not a usage error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import ElementSet, ImplicitSetSystem, InvalidParams, NotUniform
from .driver import _rep_rng, _sample_mask
from .family import FamilyCache, default_cache
from .oracle import brute_enumerate_minimal
from .schedule import build_schedule, choose_split


@dataclass(frozen=True)
class UniformSlice:
    """Minimal members of size |base| + k containing base, as added parts."""

    base: ElementSet
    k: int
    added: tuple[ElementSet, ...]

    def members(self) -> tuple[ElementSet, ...]:
        return tuple(self.base | s for s in self.added)


def enumerate_slice(system: ImplicitSetSystem, base: ElementSet, k: int) -> UniformSlice:
    """The (base, k) slice; NotUniform when the backend cannot enumerate."""
    if not system.has_slice_enumerator:
        raise NotUniform(f"{type(system).__name__} has no slice enumerator")
    return UniformSlice(base, k, tuple(system.minimal_extensions(base, k)))


def iter_all_minimal(
    system: ImplicitSetSystem,
    max_size: Optional[int] = None,
    *,
    method: str = "deterministic",
    seed: int = 0,
    families: Optional[FamilyCache] = None,
) -> Iterator[ElementSet]:
    """Minimal members of size <= max_size, smallest sizes first.

    Deterministic mode is exhaustive.  Randomized mode replaces the
    family sweep with sampled guesses, so it yields a subset of the
    deterministic output; it exists to measure how much the sampling
    misses, not as the default.
    """
    if method not in ("deterministic", "randomized"):
        raise InvalidParams(f"unknown enumeration method {method!r}")
    n = system.universe.n
    cap = n if max_size is None else min(max_size, n)
    if cap < 0:
        raise InvalidParams("max_size must be non-negative")
    cache = families if families is not None else default_cache()
    pool = list(range(n))
    for k in range(cap + 1):
        if method == "deterministic":
            t = choose_split(n, k, system.contract.extension_base)
            guesses: list[int] = list(cache.get(n, k, t).masks)
        else:
            plan = build_schedule(n, k, system.contract, seed).plans[k]
            guesses = [
                _sample_mask(_rep_rng(seed, k, rep), pool, plan.t)
                for rep in range(plan.repetitions)
            ]
            t = plan.t
        seen: set[int] = set()
        for guess in guesses:
            base = ElementSet(guess)
            for added in system.minimal_extensions(base, k - t):
                full = base.bits | added.bits
                if full not in seen:
                    seen.add(full)
                    yield ElementSet(full)


def enumerate_all(
    system: ImplicitSetSystem,
    max_size: Optional[int] = None,
    *,
    method: str = "deterministic",
    seed: int = 0,
    families: Optional[FamilyCache] = None,
) -> tuple[ElementSet, ...]:
    """iter_all_minimal, collected and sorted by (size, mask value)."""
    out = {
        s.bits
        for s in iter_all_minimal(
            system, max_size, method=method, seed=seed, families=families
        )
    }
    return tuple(ElementSet(b) for b in sorted(out, key=lambda b: (b.bit_count(), b)))


@dataclass(frozen=True)
class UniformityReport:
    """How slice sizes compare against u**k times an n**2 slack."""

    ok: bool
    checked: int
    max_ratio: float
    worst_base: Optional[ElementSet]
    worst_k: int
    violations: tuple[tuple[ElementSet, int, int], ...]


def check_uniformity(
    system: ImplicitSetSystem,
    max_k: Optional[int] = None,
    slack: Optional[int] = None,
) -> UniformityReport:
    """Measure |slice(base, k)| against u**k * slack over every (base, k).

    Exhausts all 2**n bases, so this is a small-n diagnostic.  slack
    defaults to n**2 (1 for the empty universe).
    """
    n = system.universe.n
    u = system.contract.uniformity_constant
    if u is None:
        u = system.contract.extension_base
    if slack is None:
        slack = max(1, n * n)
    checked = 0
    max_ratio = 0.0
    worst: tuple[Optional[ElementSet], int] = (None, 0)
    violations: list[tuple[ElementSet, int, int]] = []
    for bits in range(1 << n):
        base = ElementSet(bits)
        k_cap = n - len(base)
        if max_k is not None:
            k_cap = min(k_cap, max_k)
        for k in range(k_cap + 1):
            size = len(system.minimal_extensions(base, k))
            checked += 1
            bound = Fraction(u) ** k * slack
            ratio = float(Fraction(size) / (Fraction(u) ** k))
            if ratio > max_ratio:
                max_ratio = ratio
                worst = (base, k)
            if size > bound:
                violations.append((base, k, size))
    return UniformityReport(
        ok=not violations,
        checked=checked,
        max_ratio=max_ratio,
        worst_base=worst[0],
        worst_k=worst[1],
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class FamilyCensus:
    """Count of minimal members against the (2 - 1/c)**n * n**2 budget."""

    ok: bool
    count: int
    bound: float
    by_size: tuple[tuple[int, int], ...]


def check_counting_bound(system: ImplicitSetSystem) -> FamilyCensus:
    """Brute-force census of all minimal members versus the rate bound."""
    n = system.universe.n
    c = system.contract.extension_base
    minimal = brute_enumerate_minimal(system)
    sizes: dict[int, int] = {}
    for s in minimal:
        sizes[len(s)] = sizes.get(len(s), 0) + 1
    slack = max(1, n * n)
    bound = float(Fraction(2) - Fraction(1) / c) ** n * slack
    return FamilyCensus(
        ok=len(minimal) <= bound,
        count=len(minimal),
        bound=bound,
        by_size=tuple(sorted(sizes.items())),
    )
