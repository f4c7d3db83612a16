"""Core value types shared by every solver component.

Sets over a universe of at most 64 elements are stored as plain integer
bitmasks (bit i set means element i is in the set).  Everything here is
cheap and allocation-light on purpose; the hot loops live in _kernels.
"""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

MAX_UNIVERSE = 64


class MlsError(Exception):
    """Base class for all package errors."""


class InvalidParams(MlsError, ValueError):
    """A query or constructor argument is out of contract."""


class BudgetExceedsUniverse(InvalidParams):
    """Extension budget larger than the number of free elements."""


class TooLarge(InvalidParams):
    """Input exceeds a documented desk-scale cap."""


class NoSolution(MlsError):
    """Minimization found no solution even with the full universe allowed."""


class NotUniform(MlsError, TypeError):
    """The system does not provide a slice enumerator."""


class ParseError(MlsError, ValueError):
    """Malformed instance or cache file."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ElementOutOfRange(ParseError):
    """Element index outside the declared universe."""


class DuplicateArc(ParseError):
    """The same vertex pair was given an orientation twice."""


class IncompleteTournament(ParseError):
    """Not every vertex pair received an orientation."""


@dataclass(frozen=True, slots=True)
class ElementSet:
    """Immutable subset of universe indices 0..n-1 as a bitmask."""

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise InvalidParams("bitmask must be non-negative")

    @classmethod
    def from_elements(cls, elements) -> "ElementSet":
        bits = 0
        for e in elements:
            if not 0 <= e < MAX_UNIVERSE:
                raise InvalidParams(f"element {e} outside 0..{MAX_UNIVERSE - 1}")
            bits |= 1 << e
        return cls(bits)

    @classmethod
    def from_hex(cls, text: str) -> "ElementSet":
        return cls(int(text, 16))

    def to_hex(self) -> str:
        return format(self.bits, "x")

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, e: int) -> bool:
        return 0 <= e < MAX_UNIVERSE and (self.bits >> e) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.bits | other.bits)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.bits & other.bits)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.bits & ~other.bits)

    def __le__(self, other: "ElementSet") -> bool:
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "ElementSet") -> bool:
        return self.bits & other.bits == 0

    def elements(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"ElementSet({{{', '.join(map(str, self))}}})"


EMPTY_SET = ElementSet(0)


@dataclass(frozen=True, slots=True)
class UniverseInfo:
    """Size and optional display names of the ground set."""

    n: int
    element_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if not 0 <= self.n <= MAX_UNIVERSE:
            raise InvalidParams(f"universe size must be in 0..{MAX_UNIVERSE}")
        if self.element_names is not None and len(self.element_names) != self.n:
            raise InvalidParams("element_names length must equal n")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def full_set(self) -> ElementSet:
        return ElementSet(self.full_mask)

    def name_of(self, e: int) -> str:
        if not 0 <= e < self.n:
            raise InvalidParams(f"element {e} outside universe of size {self.n}")
        if self.element_names is not None:
            return self.element_names[e]
        return str(e + 1)  # default names follow the 1-indexed file formats

    def contains(self, s: ElementSet) -> bool:
        return s.bits & ~self.full_mask == 0


@dataclass(frozen=True, slots=True)
class ExtensionQuery:
    """Ask whether some S disjoint from base, |S| <= budget, lands in the family."""

    base: ElementSet
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise InvalidParams("budget must be non-negative")


@dataclass(frozen=True, slots=True)
class BranchStats:
    """Branch nodes explored and leaves reached during one extension call."""

    nodes: int = 0
    leaves: int = 0


@dataclass(frozen=True, slots=True)
class ExtensionOutcome:
    decision: bool
    witness: Optional[ElementSet] = None
    stats: BranchStats = field(default_factory=BranchStats)


class Mode(enum.Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


@dataclass(frozen=True, slots=True)
class SystemContract:
    """What the extension oracle promises the drivers.

    extension_base is the exact rational c with single-call cost c**k * poly;
    it also drives all split-point arithmetic.  Strict oracles answer the
    extension question exactly and certify Yes answers with a witness.
    Permissive oracles may answer Yes whenever the family is non-empty and
    only certify when declared certifying.
    """

    extension_base: Fraction
    mode: Mode = Mode.STRICT
    certifying: bool = True
    uniformity_constant: Optional[Fraction] = None

    def __post_init__(self):
        base = Fraction(self.extension_base)
        object.__setattr__(self, "extension_base", base)
        if base <= 1:
            raise InvalidParams("extension base must exceed 1")
        if self.mode is Mode.STRICT and not self.certifying:
            raise InvalidParams("strict oracles certify by definition")
        if self.uniformity_constant is not None:
            object.__setattr__(
                self, "uniformity_constant", Fraction(self.uniformity_constant)
            )


class ImplicitSetSystem(ABC):
    """A monotone-queryable set family given by membership and extension.

    Implementations expose the universe, the oracle contract, a membership
    test, and the extension oracle.  Systems whose minimal members admit a
    bounded branching enumeration additionally override minimal_extensions.
    """

    universe: UniverseInfo
    contract: SystemContract

    #: Yes at budget k implies Yes at budget k+1, so minimize may bisect.
    monotone_in_k: bool = False

    @abstractmethod
    def membership(self, s: ElementSet) -> bool:
        """Exact test: is s a member of the family?"""

    @abstractmethod
    def extend(self, query: ExtensionQuery) -> ExtensionOutcome:
        """Decide whether base extends to a member with at most budget additions."""

    def validate_query(self, query: ExtensionQuery) -> None:
        if not self.universe.contains(query.base):
            raise InvalidParams("query base outside the universe")
        free = self.universe.n - len(query.base)
        if query.budget > free:
            raise BudgetExceedsUniverse(
                f"budget {query.budget} exceeds {free} free elements"
            )

    def membership_many(self, masks) -> "list[bool]":
        """Bulk membership; backends override with a vectorized version."""
        return [self.membership(ElementSet(int(m))) for m in masks]

    def extend_batch(self, bases, budgets, stop_at_first=True):
        """Run extension queries in order; see driver for count semantics.

        Returns (first_yes_index, witness_bits, calls, nodes, leaves) where
        first_yes_index is -1 when every answered query said No, and calls
        counts queries actually answered (first_yes_index + 1 on success
        when stop_at_first is set).
        """
        calls = nodes = leaves = 0
        first = -1
        witness_bits = 0
        for i, (b, k) in enumerate(zip(bases, budgets)):
            out = self.extend(ExtensionQuery(ElementSet(int(b)), int(k)))
            calls += 1
            nodes += out.stats.nodes
            leaves += out.stats.leaves
            if out.decision:
                first = i
                if out.witness is not None:
                    witness_bits = out.witness.bits
                if stop_at_first:
                    break
        return first, witness_bits, calls, nodes, leaves

    def minimal_extensions(self, base: ElementSet, k: int) -> list[ElementSet]:
        """All S with |S| = k, S disjoint from base, base | S a minimal member."""
        raise NotUniform(f"{type(self).__name__} has no slice enumerator")

    @property
    def has_slice_enumerator(self) -> bool:
        return type(self).minimal_extensions is not ImplicitSetSystem.minimal_extensions
