"""Alphabets, expressions, and the length-then-lexicographic pairing with the naturals.

Expressions are plain Python strings whose characters are symbols of some
alphabet.  The empty expression is legal; reports render it as ``ε``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

#: canonical rendering of the empty expression in human-readable output
EPSILON = "ε"


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of distinct single-character symbols plus a blank.

    The blank is the tape filler of the machine layer; it is never part of
    an expression.  Symbol order is fixed at construction and drives every
    enumeration downstream.
    """

    symbols: tuple[str, ...]
    blank: str = "_"

    def __post_init__(self) -> None:
        if not self.symbols:
            raise DomainError("an alphabet needs at least one symbol")
        for sym in self.symbols + (self.blank,):
            if not isinstance(sym, str) or len(sym) != 1:
                raise DomainError(f"symbols are single characters, got {sym!r}")
        if len(set(self.symbols)) != len(self.symbols):
            raise DomainError("alphabet symbols must be pairwise distinct")
        if self.blank in self.symbols:
            raise DomainError("the blank must not be an input symbol")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def contains(self, e: str) -> bool:
        return set(e) <= set(self.symbols)

    def validate(self, e: str) -> str:
        if not self.contains(e):
            bad = sorted(set(e) - set(self.symbols))[0]
            raise DomainError(f"symbol {bad!r} is not in alphabet {self.symbols}")
        return e


def expression_at(alphabet: Alphabet, index: int) -> str:
    """Return the index-th expression: all shorter strings come first, ties
    are broken lexicographically by alphabet order.  Index 0 is the empty
    expression."""
    if index < 0:
        raise DomainError("expression indices are naturals")
    s = alphabet.size
    if s == 1:
        # unary alphabets: the index-th expression is the length-index string
        return alphabet.symbols[0] * index
    length, cum, block = 0, 0, 1
    while cum + block <= index:
        cum += block
        length += 1
        block *= s
    offset = index - cum
    digits = []
    for _ in range(length):
        offset, d = divmod(offset, s)
        digits.append(d)
    return "".join(alphabet.symbols[d] for d in reversed(digits))


def index_of(alphabet: Alphabet, e: str) -> int:
    """Inverse of :func:`expression_at`."""
    alphabet.validate(e)
    s = alphabet.size
    if s == 1:
        return len(e)
    cum = (s ** len(e) - 1) // (s - 1)
    offset = 0
    for ch in e:
        offset = offset * s + alphabet.symbols.index(ch)
    return cum + offset


@dataclass(frozen=True)
class FiniteUniverse:
    """An explicit ordered universe of distinct expressions (may be empty)."""

    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members):
            raise DomainError("universe members must be distinct")


@dataclass(frozen=True)
class EnumeratedUniverse:
    """The expressions over an alphabet in enumeration order, optionally
    truncated to the first ``cap`` of them."""

    alphabet: Alphabet
    cap: int | None = None

    def __post_init__(self) -> None:
        if self.cap is not None and self.cap < 0:
            raise DomainError("cap must be a natural")


Universe = FiniteUniverse | EnumeratedUniverse


def members(universe: Universe, limit: int) -> tuple[str, ...]:
    """The first ``limit`` members of a universe in canonical order."""
    if limit < 0:
        raise DomainError("limit must be a natural")
    if isinstance(universe, FiniteUniverse):
        return universe.members[:limit]
    count = limit if universe.cap is None else min(limit, universe.cap)
    return tuple(expression_at(universe.alphabet, i) for i in range(count))


def universe_contains(universe: Universe, e: str) -> bool:
    if isinstance(universe, FiniteUniverse):
        return e in universe.members
    if not universe.alphabet.contains(e):
        return False
    return universe.cap is None or index_of(universe.alphabet, e) < universe.cap


def position(universe: Universe, e: str) -> int:
    """Canonical order index of a member; DomainError for non-members."""
    if isinstance(universe, FiniteUniverse):
        try:
            return universe.members.index(e)
        except ValueError:
            raise DomainError(f"{render(e)} is not a universe member") from None
    if not universe_contains(universe, e):
        raise DomainError(f"{render(e)} is not a universe member")
    return index_of(universe.alphabet, e)


def is_finitely_evaluable(universe: Universe) -> bool:
    """True when every member can be visited: explicit or capped."""
    return isinstance(universe, FiniteUniverse) or universe.cap is not None


def all_members(universe: Universe) -> tuple[str, ...]:
    if isinstance(universe, FiniteUniverse):
        return universe.members
    if universe.cap is None:
        raise DomainError("an uncapped enumerated universe cannot be materialized")
    return members(universe, universe.cap)


def int_range_universe(lo: int, hi: int) -> FiniteUniverse:
    """Integers lo..hi (inclusive) as decimal-digit expressions."""
    return FiniteUniverse(tuple(str(i) for i in range(lo, hi + 1)))


def render(e: str) -> str:
    """Canonical text form: symbols verbatim, empty expression as ε."""
    return e if e else EPSILON
