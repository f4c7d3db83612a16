"""Split points and repetition schedules, in exact rational arithmetic.

For a target size k' over n_eff free elements, the driver first guesses
a t-subset of the free elements and then asks the extension oracle for
the remaining k' - t.  The split t minimizes

    C(n_eff, t) / C(k', t) * c**(k' - t)

which balances guess quality against oracle cost.  All comparisons use
Fraction, so ties and brackets are exact; ties resolve to the smaller t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import InvalidParams, Mode, SystemContract


def split_objective(n_eff: int, k_prime: int, t: int, c: Fraction) -> Fraction:
    """Expected total oracle work if the split point were t."""
    if not 0 <= t <= k_prime <= n_eff:
        raise InvalidParams("need 0 <= t <= k' <= n_eff")
    return Fraction(math.comb(n_eff, t), math.comb(k_prime, t)) * Fraction(c) ** (
        k_prime - t
    )


def choose_split(n_eff: int, k_prime: int, c) -> int:
    """The t in 0..k' minimizing the objective; ties go to the smaller t."""
    c = Fraction(c)
    if c <= 1:
        raise InvalidParams("the oracle base c must exceed 1")
    if not 0 <= k_prime <= n_eff:
        raise InvalidParams("need 0 <= k' <= n_eff")
    best_t = 0
    best = split_objective(n_eff, k_prime, 0, c)
    for t in range(1, k_prime + 1):
        obj = split_objective(n_eff, k_prime, t, c)
        if obj < best:
            best = obj
            best_t = t
    return best_t


def analytic_split(n_eff: int, k_prime: int, c) -> float:
    """Continuous stationary point (c*mu - 1)/(c - 1) * n_eff, clamped to [0, k'].

    The discrete minimizer sits within one of this value; tests assert it.
    """
    c = float(Fraction(c))
    if n_eff == 0:
        return 0.0
    mu = k_prime / n_eff
    alpha = (c * mu - 1.0) / (c - 1.0)
    return min(float(k_prime), max(0.0, alpha * n_eff))


def success_probability(n_eff: int, k_prime: int, t: int) -> Fraction:
    """Chance a uniform t-subset of the n_eff free elements lands inside a
    fixed k'-subset."""
    if not 0 <= t <= k_prime <= n_eff:
        raise InvalidParams("need 0 <= t <= k' <= n_eff")
    return Fraction(math.comb(k_prime, t), math.comb(n_eff, t))


@dataclass(frozen=True)
class SplitPlan:
    k_prime: int
    t: int
    n_eff: int
    success_probability: Fraction
    repetitions: int


@dataclass(frozen=True)
class SearchSchedule:
    n_eff: int
    k: int
    master_seed: int
    mode: Mode
    plans: tuple[SplitPlan, ...]


def build_schedule(
    n_eff: int, k: int, contract: SystemContract, seed: int
) -> SearchSchedule:
    """One plan per target size k' = 0..k.

    Repetitions are ceil(1/p), which pushes the per-k' success chance on
    yes-instances to at least 1 - 1/e.
    """
    if not 0 <= k <= n_eff:
        raise InvalidParams("need 0 <= k <= n_eff")
    c = contract.extension_base
    plans = []
    for k_prime in range(k + 1):
        t = choose_split(n_eff, k_prime, c)
        p = success_probability(n_eff, k_prime, t)
        plans.append(
            SplitPlan(
                k_prime=k_prime,
                t=t,
                n_eff=n_eff,
                success_probability=p,
                repetitions=math.ceil(1 / p),
            )
        )
    return SearchSchedule(
        n_eff=n_eff, k=k, master_seed=seed, mode=contract.mode, plans=tuple(plans)
    )
