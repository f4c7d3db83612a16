"""Problem backends and instance file formats."""

from __future__ import annotations

from ..core import ElementSet, ParseError
from .cnf import CnfInstance, extend_min_ones_cnf, parse_dimacs_cnf
from .hitting import HittingSetInstance, extend_hitting_set, parse_hitting_set
from .tournament import TournamentInstance, extend_tournament_fvs, parse_tournament

PROBLEM_NAMES = ("hs", "sat", "tour")

_PARSERS = {
    "hs": parse_hitting_set,
    "sat": parse_dimacs_cnf,
    "tour": parse_tournament,
}


def parse_instance(problem: str, text: str):
    """Dispatch on the CLI problem name."""
    if problem not in _PARSERS:
        raise ParseError(f"unknown problem {problem!r}; choose from {PROBLEM_NAMES}")
    return _PARSERS[problem](text)


def to_min_ones_cnf(instance: HittingSetInstance) -> CnfInstance:
    """Hitting-set instances as monotone CNF: one all-positive clause per set.

    Hitting sets and satisfying 1-sets coincide, so decisions must agree
    query for query.
    """
    clauses = tuple((s, ElementSet(0)) for s in instance.sets)
    return CnfInstance(instance.universe, clauses)


__all__ = [
    "CnfInstance",
    "HittingSetInstance",
    "TournamentInstance",
    "PROBLEM_NAMES",
    "extend_hitting_set",
    "extend_min_ones_cnf",
    "extend_tournament_fvs",
    "parse_dimacs_cnf",
    "parse_hitting_set",
    "parse_instance",
    "parse_tournament",
    "to_min_ones_cnf",
]
