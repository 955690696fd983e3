"""Fuel-relative classification of problems.

Four properties are tracked: solvable (has any solution), finite (finitely
many solutions), expressible (an always-halting machine decides the
condition) and resolvable (a machine enumerates the solutions).  The last
two are undecidable in general, so flags are three-valued with an explicit
``unknown`` and a fuel stamp; raising fuel may turn unknowns definite but
never flips a definite flag.

Definite flags always respect the inclusion chain

    unsolvable ⊂ finite ⊂ expressible ⊂ resolvable

so the report constructor closes flags under these implications and refuses
combinations that would violate them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

from . import machine as tm
from .errors import InvariantViolation, TotalityError
from .expr import FiniteUniverse, is_finitely_evaluable, members, render
from .problem import Problem, SemiCondition, evaluate, evaluate_semi, solutions

YES = "yes"
NO = "no"
UNKNOWN = "unknown-at-fuel"

FLAGS = (YES, NO, UNKNOWN)


class Place(Enum):
    UNSOLVABLE = "S̄"
    FINITE_SOLVABLE = "F∩S"
    EXPRESSIBLE_INFINITE = "E∩F̄"
    ENUMERABLE_ONLY = "R∩Ē"
    UNRESOLVABLE = "R̄"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Evidence:
    """Candidate witnesses; each is checked against the problem, never
    trusted."""

    decider: tm.TMachine | None = None
    enumerator: Callable[[int], Iterable[str]] | None = None
    known_solution: str | None = None


@dataclass(frozen=True)
class ClassificationReport:
    solvable: str
    finite: str
    expressible: str
    resolvable: str
    place: Place
    fuel: int
    caveats: tuple[str, ...] = ()


_YES_IMPLICATIONS = {
    # definite yes on the key forces definite yes on the values
    "unsolvable": ("finite", "expressible", "resolvable"),
    "finite": ("expressible", "resolvable"),
    "expressible": ("resolvable",),
}


def build_report(solvable: str, finite: str, expressible: str, resolvable: str,
                 fuel: int, caveats: Iterable[str] = ()) -> ClassificationReport:
    """Close the flags under the inclusion chain and assign the place.

    Definite combinations forbidden by the chain (for example expressible
    yes with resolvable no) raise InvariantViolation instead of producing a
    report.
    """
    for flag in (solvable, finite, expressible, resolvable):
        if flag not in FLAGS:
            raise InvariantViolation(f"bad flag value {flag!r}")
    state = {"solvable": solvable, "finite": finite,
             "expressible": expressible, "resolvable": resolvable}

    def force(key: str, value: str, why: str) -> None:
        if state[key] == UNKNOWN:
            state[key] = value
        elif state[key] != value:
            raise InvariantViolation(
                f"{key}={state[key]} contradicts {why} (would force {key}={value})")

    if state["solvable"] == NO:
        # the empty solution set is finite and its condition is constant
        force("finite", YES, "unsolvable problems are finite")
        force("expressible", YES, "unsolvable problems are expressible")
        force("resolvable", YES, "unsolvable problems are resolvable")
    if state["finite"] == YES:
        force("expressible", YES, "finite problems are expressible")
        force("resolvable", YES, "finite problems are resolvable")
    if state["expressible"] == YES:
        force("resolvable", YES, "expressible problems are resolvable")
    # contrapositives
    if state["resolvable"] == NO:
        force("expressible", NO, "unresolvable problems are inexpressible")
    if state["expressible"] == NO:
        force("finite", NO, "inexpressible problems are infinite")
    if state["finite"] == NO:
        force("solvable", YES, "infinite problems are solvable")

    place = _assign_place(state)
    return ClassificationReport(
        solvable=state["solvable"], finite=state["finite"],
        expressible=state["expressible"], resolvable=state["resolvable"],
        place=place, fuel=fuel, caveats=tuple(caveats))


def _assign_place(state: dict[str, str]) -> Place:
    if state["solvable"] == NO:
        return Place.UNSOLVABLE
    if state["solvable"] == YES:
        if state["finite"] == YES:
            return Place.FINITE_SOLVABLE
        if state["finite"] == NO and state["expressible"] == YES:
            return Place.EXPRESSIBLE_INFINITE
        if state["expressible"] == NO and state["resolvable"] == YES:
            return Place.ENUMERABLE_ONLY
        if state["resolvable"] == NO:
            return Place.UNRESOLVABLE
    return Place.UNDETERMINED


@dataclass(frozen=True)
class Accept:
    tested: int


@dataclass(frozen=True)
class Reject:
    witness: str
    reason: str


DecisionVerdict = Accept | Reject


def is_decision_solution(machine: tm.TMachine, problem: Problem,
                         inputs: Iterable[str], fuel: int) -> DecisionVerdict:
    """Check a candidate decider: it must halt on every tested input with
    the verdict symbol matching the problem's condition."""
    tested = 0
    for data in inputs:
        tested += 1
        outcome = tm.run(machine, data, fuel)
        if isinstance(outcome, tm.OutOfFuel):
            return Reject(data, "did not halt within fuel")
        want = evaluate(problem.condition, data)
        want_symbol = tm.TRUE_SYMBOL if want else tm.FALSE_SYMBOL
        if outcome.result != want_symbol:
            return Reject(data, f"answered {render(outcome.result)}, wanted {want_symbol}")
    return Accept(tested)


def classify(problem: Problem, evidence: Evidence, fuel: int,
             sample: int = 64,
             window: Iterable[str] | None = None) -> ClassificationReport:
    """Classify a problem, brute-forcing what is finite and honestly
    reporting unknown-at-fuel for what is not.

    ``window`` optionally names the inputs on which witnesses are exercised
    for universes whose interesting members lie deep in enumeration order.
    """
    caveats: list[str] = []
    semi = isinstance(problem.condition, SemiCondition)

    if is_finitely_evaluable(problem.universe) and not semi:
        sigma = solutions(problem)
        solvable = YES if sigma else NO
        report = build_report(solvable, YES, YES, YES, fuel, [])
        caveats.append("finite universe: classified by exhaustive evaluation")
        if evidence.decider is not None:
            universe_members = members(problem.universe, sample)
            verdict = is_decision_solution(evidence.decider, problem,
                                           universe_members, fuel)
            if isinstance(verdict, Accept):
                caveats.append(f"decider accepted on {verdict.tested} inputs")
            else:
                caveats.append(
                    f"decider rejected at {render(verdict.witness)}: {verdict.reason}")
        return ClassificationReport(
            report.solvable, report.finite, report.expressible,
            report.resolvable, report.place, fuel, tuple(caveats))

    # open-ended universe, or a condition that can only be semidecided
    if window is not None:
        tested_members = tuple(window)
    else:
        tested_members = members(problem.universe, sample)
    solvable = UNKNOWN
    if evidence.known_solution is not None:
        verdict = evaluate_semi(problem.condition, evidence.known_solution, fuel)
        if verdict:
            solvable = YES
            caveats.append(f"solution witness {render(evidence.known_solution)} verified")
        else:
            caveats.append(f"claimed solution {render(evidence.known_solution)} did not verify")

    emitted: list[str] = []
    if evidence.enumerator is not None:
        emitted = list(evidence.enumerator(fuel))
        wrong = [e for e in emitted if evaluate_semi(problem.condition, e, fuel) is False]
        if wrong:
            caveats.append(f"enumerator emitted a non-solution {render(wrong[0])}")
        else:
            confirmed = [e for e in emitted
                         if evaluate_semi(problem.condition, e, fuel)]
            if confirmed and solvable == UNKNOWN:
                solvable = YES
                caveats.append(f"enumerator produced verified solution {render(confirmed[0])}")

    finite = UNKNOWN
    expressible = UNKNOWN
    if evidence.decider is not None:
        verdict = is_decision_solution(evidence.decider, problem, tested_members, fuel)
        if isinstance(verdict, Accept):
            expressible = YES
            caveats.append(f"decider accepted on {verdict.tested} tested inputs")
        else:
            caveats.append(
                f"decider rejected at {render(verdict.witness)}: {verdict.reason}")

    resolvable = UNKNOWN
    if evidence.enumerator is not None and not any(
            evaluate_semi(problem.condition, e, fuel) is False for e in emitted):
        truth_window = [e for e in tested_members
                        if evaluate_semi(problem.condition, e, fuel)]
        if set(truth_window) <= set(emitted):
            resolvable = YES
            caveats.append(
                f"enumerator covered all {len(truth_window)} solutions detectable at fuel")
        else:
            missing = sorted(set(truth_window) - set(emitted))[0]
            caveats.append(f"enumerator missed detectable solution {render(missing)}")

    report = build_report(solvable, finite, expressible, resolvable, fuel, caveats)
    if (report.place is Place.UNDETERMINED and report.resolvable == YES
            and report.expressible == UNKNOWN and evidence.decider is None):
        caveats.append(
            "no decider offered; consistent with an enumerable-but-undecidable "
            "narrative (illustrative only)")
        report = ClassificationReport(
            report.solvable, report.finite, report.expressible,
            report.resolvable, report.place, fuel, tuple(caveats))
    return report


def verify_partition(reports: Iterable[ClassificationReport]) -> bool:
    """Every definite report must sit in exactly one partition cell and
    respect the inclusion chain; the first offender is named."""
    for report in reports:
        flags = {"solvable": report.solvable, "finite": report.finite,
                 "expressible": report.expressible, "resolvable": report.resolvable}
        if any(v == UNKNOWN for v in flags.values()):
            raise InvariantViolation(f"report is not definite: {report}")
        rebuilt = build_report(report.solvable, report.finite,
                               report.expressible, report.resolvable,
                               report.fuel)
        if rebuilt.place is Place.UNDETERMINED or rebuilt.place != report.place:
            raise InvariantViolation(
                f"report claims place {report.place} but flags give {rebuilt.place}")
    return True


def halting_pair_expression(program: str, data: str) -> str:
    """Canonical single-expression form of a program/input pair."""
    return program + "⦙" + data


def split_halting_pair(expr: str) -> tuple[str, str] | None:
    if "⦙" not in expr:
        return None
    program, _, data = expr.partition("⦙")
    return program, data


def halting_set_condition() -> SemiCondition:
    """The semidecidable "this pair halts" predicate over pair expressions."""

    def checker(expr: str, fuel: int) -> bool | None:
        pair = split_halting_pair(expr)
        if pair is None:
            return False
        if fuel <= 0:
            return None
        verdict = tm.halting_condition(pair[0], pair[1], fuel)
        if isinstance(verdict, tm.HaltsWithin):
            return True
        return None

    return SemiCondition(checker, name="pair halts")


def halting_set_demo(pairs: list[tuple[str, str]], budget: int) -> tuple[tuple[str, str], ...]:
    """Dovetail the pairs and return those observed to halt, in emission
    order; the complement at any budget is exactly the pairs that have not
    halted within their allotted steps."""
    return tuple(pair for pair, _ in tm.dovetail(pairs, budget))
