"""Problems as total conditions over a universe.

A problem is a universe of candidate expressions plus a condition that every
member either satisfies or not.  Problems are identified extensionally: two
problems over the same universe are equal exactly when they have the same
solutions.  Conjunction, disjunction and negation act pointwise on
conditions, which makes the problems over a universe a Boolean algebra
mirrored by union/intersection/complement on solution sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import machine as tm
from .errors import (DomainError, NoSolutionError, TotalityError,
                     UniverseMismatchError)
from .expr import (FiniteUniverse, Universe, all_members, is_finitely_evaluable,
                   position, render, universe_contains)


@dataclass(frozen=True)
class TableCondition:
    """Explicit truth table; must cover the whole (finite) universe."""

    truth: Mapping[str, bool]

    def describe(self) -> str:
        inside = ", ".join(render(e) for e, v in self.truth.items() if v)
        return f"x ∈ {{{inside}}}"


@dataclass(frozen=True)
class NativeCondition:
    """A host-supplied total predicate."""

    fn: Callable[[str], bool]
    name: str = "native"

    def describe(self) -> str:
        return self.name


@dataclass(frozen=True)
class MachineCondition:
    """A condition computed by an encoded machine within a fuel budget.

    The machine must halt with a single verdict symbol for every tested
    member; running out of fuel or producing anything else is a totality
    error, never a boolean.
    """

    program: str
    fuel: int

    def describe(self) -> str:
        return f"machine({len(self.program)} sym, fuel {self.fuel})"


@dataclass(frozen=True)
class SemiCondition:
    """A predicate that can only be semidecided: the checker returns True,
    False, or None for "unknown at this fuel".  Problems carrying one cannot
    be brute-forced; they exist for honest fuel-relative classification."""

    checker: Callable[[str, int], bool | None]
    name: str = "semi"

    def describe(self) -> str:
        return self.name


@dataclass(frozen=True)
class AndCondition:
    left: "Condition"
    right: "Condition"

    def describe(self) -> str:
        return f"({self.left.describe()} ∧ {self.right.describe()})"


@dataclass(frozen=True)
class OrCondition:
    left: "Condition"
    right: "Condition"

    def describe(self) -> str:
        return f"({self.left.describe()} ∨ {self.right.describe()})"


@dataclass(frozen=True)
class NotCondition:
    inner: "Condition"

    def describe(self) -> str:
        return f"¬{self.inner.describe()}"


Condition = (TableCondition | NativeCondition | MachineCondition | SemiCondition
             | AndCondition | OrCondition | NotCondition)


def evaluate(condition: Condition, x: str) -> bool:
    """Total evaluation; raises TotalityError when no boolean is reachable."""
    if isinstance(condition, TableCondition):
        try:
            return condition.truth[x]
        except KeyError:
            raise TotalityError(f"table does not cover {render(x)}", witness=x) from None
    if isinstance(condition, NativeCondition):
        return bool(condition.fn(x))
    if isinstance(condition, MachineCondition):
        outcome = tm.universal_apply(condition.program, x, condition.fuel)
        if isinstance(outcome, tm.OutOfFuel):
            raise TotalityError(
                f"condition machine ran out of fuel on {render(x)}",
                witness=x, fuel_related=True)
        if outcome.result == tm.TRUE_SYMBOL:
            return True
        if outcome.result == tm.FALSE_SYMBOL:
            return False
        raise TotalityError(
            f"condition machine produced no verdict on {render(x)}", witness=x)
    if isinstance(condition, SemiCondition):
        verdict = condition.checker(x, 0)
        if verdict is None:
            raise TotalityError(
                f"semidecidable condition is unknown on {render(x)}",
                witness=x, fuel_related=True)
        return verdict
    if isinstance(condition, AndCondition):
        return evaluate(condition.left, x) and evaluate(condition.right, x)
    if isinstance(condition, OrCondition):
        return evaluate(condition.left, x) or evaluate(condition.right, x)
    if isinstance(condition, NotCondition):
        return not evaluate(condition.inner, x)
    raise DomainError(f"unknown condition {condition!r}")


def evaluate_semi(condition: Condition, x: str, fuel: int) -> bool | None:
    """Three-valued evaluation: None when the verdict is unknown at fuel."""
    if isinstance(condition, SemiCondition):
        return condition.checker(x, fuel)
    try:
        return evaluate(condition, x)
    except TotalityError as exc:
        if exc.fuel_related:
            return None
        raise


@dataclass(frozen=True)
class Problem:
    universe: Universe
    condition: Condition
    label: str = ""

    def __post_init__(self) -> None:
        if isinstance(self.condition, TableCondition) and isinstance(self.universe, FiniteUniverse):
            if set(self.condition.truth) != set(self.universe.members):
                raise DomainError("table condition must cover the universe exactly")

    def describe(self) -> str:
        return self.label or f"x ? {self.condition.describe()}"


def solutions(problem: Problem, limit: int | None = None) -> tuple[str, ...]:
    """All members satisfying the condition, in universe order.

    Enumerated universes must be capped (by the universe or by ``limit``);
    a fuel exhaustion inside a machine condition surfaces as a totality
    error naming the witness.
    """
    universe = problem.universe
    if isinstance(universe, FiniteUniverse):
        pool = universe.members
    else:
        if universe.cap is None and limit is None:
            raise DomainError("an uncapped enumerated universe needs a limit")
        from .expr import members as universe_members
        cap = universe.cap if limit is None else (
            limit if universe.cap is None else min(limit, universe.cap))
        pool = universe_members(universe, cap)
    return tuple(x for x in pool if evaluate(problem.condition, x))


def tautology(universe: Universe) -> Problem:
    return Problem(universe, NativeCondition(lambda x: True, "⊤"), label="τ")


def contradiction(universe: Universe) -> Problem:
    return Problem(universe, NativeCondition(lambda x: False, "⊥"), label="τ̄")


def _require_same_universe(p: Problem, q: Problem) -> None:
    if p.universe != q.universe:
        raise UniverseMismatchError(
            f"cannot combine problems over different universes: "
            f"{p.describe()} vs {q.describe()}")


def conjoin(p: Problem, q: Problem) -> Problem:
    _require_same_universe(p, q)
    return Problem(p.universe, AndCondition(p.condition, q.condition),
                   label=f"({p.describe()} ∧ {q.describe()})")


def disjoin(p: Problem, q: Problem) -> Problem:
    _require_same_universe(p, q)
    return Problem(p.universe, OrCondition(p.condition, q.condition),
                   label=f"({p.describe()} ∨ {q.describe()})")


def negate(p: Problem) -> Problem:
    return Problem(p.universe, NotCondition(p.condition),
                   label=f"¬{p.describe()}")


def problem_of_set(universe: Universe, solution_set) -> Problem:
    """The problem whose solutions are exactly the given subset."""
    chosen = tuple(solution_set)
    for e in chosen:
        if not universe_contains(universe, e):
            raise DomainError(f"{render(e)} is outside the universe")
    if isinstance(universe, FiniteUniverse):
        table = {m: m in set(chosen) for m in universe.members}
        return Problem(universe, TableCondition(table),
                       label="x ∈ {%s}" % ", ".join(render(e) for e in chosen))
    members_set = frozenset(chosen)
    return Problem(universe, NativeCondition(lambda x: x in members_set, "x ∈ set"),
                   label="x ∈ {%s}" % ", ".join(render(e) for e in chosen))


def delta(universe: Universe, s: str) -> Problem:
    """The problem "is the candidate exactly s?"; its one solution is s."""
    if not universe_contains(universe, s):
        raise DomainError(f"{render(s)} is outside the universe")
    return Problem(universe, NativeCondition(lambda x: x == s, f"x = {render(s)}"),
                   label=f"x ? [x = {render(s)}]")


def equal(p: Problem, q: Problem) -> bool:
    """Extensional equality: same universe, same solution set."""
    _require_same_universe(p, q)
    if not is_finitely_evaluable(p.universe):
        raise DomainError("equality needs a finitely evaluable universe")
    return set(solutions(p)) == set(solutions(q))


def same_condition_shape(p: Problem, q: Problem) -> bool:
    """Debugging comparison only: identical condition descriptions."""
    return p.condition.describe() == q.condition.describe()


def is_solvable(problem: Problem) -> bool:
    return len(solutions(problem)) > 0


def choose(problem: Problem) -> str:
    """First solution in canonical universe order."""
    found = solutions(problem)
    if not found:
        raise NoSolutionError(f"{problem.describe()} has no solution")
    return found[0]


def invert_condition(problem: Problem) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The solution set and its complement; together they partition the
    universe."""
    universe_order = all_members(problem.universe)
    yes, no = [], []
    for x in universe_order:
        (yes if evaluate(problem.condition, x) else no).append(x)
    return tuple(yes), tuple(no)
