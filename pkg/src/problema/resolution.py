"""The ways to resolve: routine, trial, analogy, and their meta forms.

A resolution is a procedure from problems to solution sets.  A routine
returns a known answer set unconditionally; a trial filters a pool of
candidates through the problem's condition; an analogy transforms the
problem, resolves the transformed one, and translates the answers back.
Applied to a metaproblem (the problem of finding valid resolutions), trial
and analogy become meta-trial and meta-analogy, which closes the typology:
there are exactly five structural forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError, TotalityError
from .expr import is_finitely_evaluable, position, render
from .problem import Problem, evaluate, solutions

DEFAULT_FUEL = 10_000


# ---------------------------------------------------------------------------
# the five structural forms

@dataclass(frozen=True)
class Routine:
    """A known answer set, returned for any problem whatsoever."""

    values: tuple

    def apply(self, target) -> tuple:
        return self.values


@dataclass(frozen=True)
class Trial:
    """Tests each pool candidate against the target's condition."""

    pool: tuple

    def apply(self, target) -> tuple:
        return _trial(target, self.pool)


@dataclass(frozen=True)
class AnalogyStep:
    """One problem transformation plus the map that carries the transformed
    problem's solutions back.

    ``elementwise`` optionally names a pair of per-element maps (forward,
    back) that realize ``transform``/``translator`` pointwise; it is what
    makes the step implementable by element functions.
    """

    name: str
    transform: Callable
    translator: Callable[[tuple], tuple]
    elementwise: tuple[Callable[[str], str], Callable[[str], str]] | None = None


@dataclass(frozen=True)
class Analogy:
    """Transform through every step, resolve with ``inner``, translate back
    in reverse step order."""

    steps: tuple[AnalogyStep, ...]
    inner: "Resolution"

    def __post_init__(self) -> None:
        if not self.steps:
            raise DomainError("an analogy needs at least one step")

    def apply(self, target) -> tuple:
        transformed = target
        for step in self.steps:
            transformed = step.transform(transformed)
        result = self.inner.apply(transformed)
        for step in reversed(self.steps):
            result = tuple(step.translator(result))
        return result


@dataclass(frozen=True)
class MetaTrial:
    """A trial over a family of candidate resolutions; applies to
    metaproblems."""

    family: "CandidateFamily"

    def apply(self, target) -> tuple:
        if not isinstance(target, Metaproblem):
            raise DomainError("a meta-trial applies to metaproblems")
        return tuple(r for _, r in self.family.members
                     if is_valid_resolution(r, target.base, target.fuel))


@dataclass(frozen=True)
class MetaAnalogy:
    """Transforms a metaproblem, meta-trials a family on it, translates the
    surviving resolutions back."""

    name: str
    transform: Callable[["Metaproblem"], "Metaproblem"]
    translator: Callable[[tuple], tuple]
    family: "CandidateFamily"

    def apply(self, target) -> tuple:
        if not isinstance(target, Metaproblem):
            raise DomainError("a meta-analogy applies to metaproblems")
        transformed = self.transform(target)
        survivors = tuple(r for _, r in self.family.members
                          if is_valid_resolution(r, transformed.base, transformed.fuel))
        return tuple(self.translator(survivors))


Resolution = Routine | Trial | Analogy | MetaTrial | MetaAnalogy

RESOLUTION_TAGS = {
    Routine: "routine",
    Trial: "trial",
    Analogy: "analogy",
    MetaTrial: "meta-trial",
    MetaAnalogy: "meta-analogy",
}


def classify_resolution(resolution: Resolution) -> str:
    """Exactly one of the five structural tags."""
    return RESOLUTION_TAGS[type(resolution)]


# ---------------------------------------------------------------------------
# plain resolving

def routine(values: Sequence[str]) -> Routine:
    return Routine(tuple(values))


def _ground_truth(target) -> tuple:
    """Solution set of a problem or metaproblem, in canonical order."""
    if isinstance(target, Metaproblem):
        return target.valid_members()
    return solutions(target)


def _trial(target, pool: tuple, first: int | None = None) -> tuple:
    """Pool ∩ solutions, testing candidates in canonical order."""
    if isinstance(target, Metaproblem):
        family = [r for _, r in target.family.members]
        for candidate in pool:
            if candidate not in family:
                raise DomainError("trial pool must come from the metaproblem family")
        ordered = [r for r in family if r in set(pool)]
        out = []
        for candidate in ordered:
            if target.validity(candidate):
                out.append(candidate)
                if first is not None and len(out) >= first:
                    break
        return tuple(out)
    for candidate in pool:
        position(target.universe, candidate)  # raises for foreign candidates
    ordered = sorted(set(pool), key=lambda e: position(target.universe, e))
    out = []
    for candidate in ordered:
        try:
            if evaluate(target.condition, candidate):
                out.append(candidate)
                if first is not None and len(out) >= first:
                    break
        except TotalityError as exc:
            raise TotalityError(
                f"trial aborted: condition undecided on {render(candidate)}",
                witness=candidate, fuel_related=exc.fuel_related) from exc
    return tuple(out)


def trial(problem: Problem, pool: Sequence[str], first: int | None = None) -> tuple[str, ...]:
    """Filter ``pool`` through the problem's condition.

    Exhaustive by default; ``first`` stops after that many solutions for
    callers that only need to solve, not resolve.
    """
    return _trial(problem, tuple(pool), first)


def apply_analogy(step: AnalogyStep, inner: Resolution, problem) -> tuple:
    """Single-step analogy: transform, resolve, translate back."""
    return Analogy((step,), inner).apply(problem)


def identity_step() -> AnalogyStep:
    return AnalogyStep("identity", transform=lambda p: p,
                       translator=lambda s: tuple(s),
                       elementwise=(lambda x: x, lambda x: x))


def chain(first_step: AnalogyStep, second_step: AnalogyStep) -> AnalogyStep:
    """Compose two steps: transforms run first-then-second, translators run
    second-then-first."""
    elementwise = None
    if first_step.elementwise and second_step.elementwise:
        f1, b1 = first_step.elementwise
        f2, b2 = second_step.elementwise
        elementwise = (lambda x: f2(f1(x)), lambda x: b1(b2(x)))
    return AnalogyStep(
        f"{first_step.name}∘{second_step.name}",
        transform=lambda p: second_step.transform(first_step.transform(p)),
        translator=lambda s: tuple(first_step.translator(tuple(second_step.translator(s)))),
        elementwise=elementwise,
    )


def general_form(steps: Sequence[AnalogyStep], pool: Sequence[str]) -> Resolution:
    """Analogy chain around a trial; with no steps it degenerates to the
    plain trial, and over a superset of the solutions that trial resolves
    exactly like the routine."""
    if steps:
        return Analogy(tuple(steps), Trial(tuple(pool)))
    return Trial(tuple(pool))


# ---------------------------------------------------------------------------
# metaproblems

@dataclass(frozen=True)
class CandidateFamily:
    """A finite, labelled family of candidate resolutions."""

    members: tuple[tuple[str, Resolution], ...]

    def __post_init__(self) -> None:
        labels = [name for name, _ in self.members]
        if len(set(labels)) != len(labels):
            raise DomainError("family labels must be distinct")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.members)

    def resolutions(self) -> tuple[Resolution, ...]:
        return tuple(r for _, r in self.members)

    def label_of(self, resolution: Resolution) -> str:
        for name, r in self.members:
            if r == resolution:
                return name
        raise DomainError("resolution is not in the family")


def family(*members: tuple[str, Resolution]) -> CandidateFamily:
    return CandidateFamily(tuple(members))


@dataclass(frozen=True)
class Metaproblem:
    """The problem of finding, within a family, the valid resolutions of a
    base target (a problem, or another metaproblem one level down)."""

    base: object  # Problem | Metaproblem
    family: CandidateFamily
    fuel: int = DEFAULT_FUEL

    def ground_truth(self) -> tuple:
        return _ground_truth(self.base)

    def validity(self, resolution: Resolution) -> bool:
        return is_valid_resolution(resolution, self.base, self.fuel)

    def valid_members(self) -> tuple[Resolution, ...]:
        return tuple(r for _, r in self.family.members if self.validity(r))


def metaproblem(base, candidate_family: CandidateFamily,
                fuel: int = DEFAULT_FUEL) -> Metaproblem:
    if isinstance(base, Problem) and not is_finitely_evaluable(base.universe):
        raise DomainError("the base problem must be finitely evaluable")
    return Metaproblem(base, candidate_family, fuel)


def is_valid_resolution(resolution: Resolution, target, fuel: int = DEFAULT_FUEL) -> bool:
    """True when applying the resolution terminates within fuel and returns
    exactly the target's solutions."""
    valid, _ = validity_verdict(resolution, target, fuel)
    return valid


def validity_verdict(resolution: Resolution, target,
                     fuel: int = DEFAULT_FUEL) -> tuple[bool, bool]:
    """(valid, fuel_caveat): a member that blows its budget is invalid at
    this fuel, with the caveat recorded rather than silently dropped."""
    truth = _ground_truth(target)
    try:
        produced = resolution.apply(target)
    except TotalityError as exc:
        return False, exc.fuel_related
    except DomainError:
        return False, False
    return set(produced) == set(truth), False


def meta_trial(meta: Metaproblem) -> tuple[Resolution, ...]:
    """The valid members of the family, in family order."""
    return meta.valid_members()


@dataclass(frozen=True)
class MemberVerdict:
    label: str
    valid: bool
    fuel_caveat: bool
    produced_size: int | None


@dataclass(frozen=True)
class MetaReport:
    base_label: str
    fuel: int
    verdicts: tuple[MemberVerdict, ...]

    def valid_labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.verdicts if v.valid)


def meta_report(meta: Metaproblem) -> MetaReport:
    """Per-member verdicts with fuel caveats, for reporting."""
    verdicts = []
    for name, resolution in meta.family.members:
        valid, caveat = validity_verdict(resolution, meta.base, meta.fuel)
        size: int | None
        try:
            size = len(resolution.apply(meta.base))
        except (TotalityError, DomainError):
            size = None
        verdicts.append(MemberVerdict(name, valid, caveat, size))
    base_label = (meta.base.describe() if isinstance(meta.base, Problem)
                  else "metaproblem")
    return MetaReport(base_label, meta.fuel, tuple(verdicts))


def iterate_meta(problem: Problem, n: int,
                 families: Sequence[CandidateFamily],
                 fuel: int = DEFAULT_FUEL) -> Metaproblem:
    """The level-n metaproblem, built by nesting: level 0 asks for valid
    resolutions of the problem, level k for valid resolutions of the level
    k-1 metaproblem.  Needs one family per level."""
    if n < 0:
        raise DomainError("meta level must be a natural")
    if len(families) < n + 1:
        raise DomainError(f"need {n + 1} families for level {n}")
    meta = metaproblem(problem, families[0], fuel)
    for level in range(1, n + 1):
        meta = Metaproblem(meta, families[level], fuel)
    return meta
