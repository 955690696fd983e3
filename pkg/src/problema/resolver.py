"""The resolver ladder: mechanism, adapter, perceiver, learner, subject.

Each rung carries one resource: a fixed element, a condition on elements, an
element function, a finite set of element functions, and finally evaluation
of encoded function programs.  ``range_of`` collects the problems a resolver
solves (non-empty output, all of it correct) and ``power_of`` the problems
it resolves (output exactly the solution set), both computed by definition
against the brute-force solution oracle over a complete space of subset
problems.

Two software bindings recur.  The adapter and identity-perceiver forms feed
the current problem's condition in *before* the resource is applied (the
trial form); the learner and subject forms filter *after* mapping the pool
through their function sets (a learner composed with a post-filter adapter).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from . import machine as tm
from .errors import ConfigurationError, DomainError, FuelError
from .expr import FiniteUniverse, render
from .problem import Problem, TableCondition, problem_of_set
from .resolution import DEFAULT_FUEL, trial

MAX_SPACE_UNIVERSE = 16


@dataclass(frozen=True)
class ElementFunction:
    """A named total map on expressions, host-evaluated, optionally backed
    by an encoded machine so a subject can run it through the evaluator."""

    name: str
    fn: Callable[[str], str] | None = None
    program: str | None = None
    fuel: int = DEFAULT_FUEL

    def __post_init__(self) -> None:
        if self.fn is None and self.program is None:
            raise DomainError(f"element function {self.name} has no realization")

    def apply_host(self, x: str) -> str:
        if self.fn is not None:
            return self.fn(x)
        return self.apply_evaluated(x)

    def apply_evaluated(self, x: str) -> str:
        """Apply through the program evaluator; requires a program."""
        if self.program is None:
            raise ConfigurationError(
                f"element function {self.name} carries no program",
                condition="subject condition")
        outcome = tm.universal_apply(self.program, x, self.fuel)
        if isinstance(outcome, tm.OutOfFuel):
            raise FuelError(f"{self.name} ran out of fuel on {render(x)}",
                            steps=outcome.steps)
        return outcome.result


def identity_function(alphabet=None) -> ElementFunction:
    """The element identity, program-backed when an alphabet is given."""
    program = None
    if alphabet is not None:
        program = tm.encode(tm.identity_machine(alphabet))
    return ElementFunction("i", fn=lambda x: x, program=program)


def machine_function(name: str, machine: tm.TMachine,
                     fuel: int = DEFAULT_FUEL) -> ElementFunction:
    program = tm.encode(machine)

    def fn(x: str) -> str:
        outcome = tm.run(machine, x, fuel)
        if isinstance(outcome, tm.OutOfFuel):
            raise FuelError(f"{name} ran out of fuel on {render(x)}", steps=fuel)
        return outcome.result

    return ElementFunction(name, fn=fn, program=program, fuel=fuel)


@dataclass(frozen=True)
class Mechanism:
    """Returns its one element, whatever the problem."""

    value: str

    def describe(self) -> str:
        return f"mechanism[{render(self.value)}]"


@dataclass(frozen=True)
class Adapter:
    """Holds a set of elements; its working form intersects that set with
    the current problem's solutions (a trial)."""

    pool: tuple[str, ...]

    def describe(self) -> str:
        return "adapter[{%s}]" % ", ".join(render(e) for e in self.pool)


@dataclass(frozen=True)
class Perceiver:
    """Holds one element function; maps whatever set it is given."""

    fn: ElementFunction

    def describe(self) -> str:
        return f"perceiver[{self.fn.name}]"


@dataclass(frozen=True)
class Learner:
    """Holds a finite set of element functions; maps a set through all of
    them."""

    functions: tuple[ElementFunction, ...]

    def describe(self) -> str:
        return "learner[{%s}]" % ", ".join(f.name for f in self.functions)


@dataclass(frozen=True)
class Subject:
    """Holds the function evaluator plus a library of encoded programs."""

    library: tuple[ElementFunction, ...]

    def describe(self) -> str:
        return "subject[u]({%s})" % ", ".join(f.name for f in self.library)


Resolver = Mechanism | Adapter | Perceiver | Learner | Subject

RAW = "raw"
TRIAL = "trial"


def resolve(resolver: Resolver, problem: Problem,
            software: Sequence[str] | None = None,
            binding: str = TRIAL) -> tuple[str, ...]:
    """Run a resolver against a problem.

    ``software`` supplies the data set the functional rungs operate on.
    With the ``raw`` binding the problem's condition is ignored (the output
    depends on the resource and software only); with the ``trial`` binding
    the condition is consulted: before the function for adapter/perceiver,
    after the function set for learner/subject.
    """
    if binding not in (RAW, TRIAL):
        raise DomainError(f"unknown binding {binding!r}")
    pool = tuple(software) if software is not None else None

    if isinstance(resolver, Mechanism):
        return (resolver.value,)

    if isinstance(resolver, Adapter):
        base = resolver.pool
        if binding == RAW:
            return base
        return trial(problem, base)

    if isinstance(resolver, Perceiver):
        if pool is None:
            raise DomainError("a perceiver needs its software set")
        source = pool if binding == RAW else trial(problem, pool)
        return _map_set((resolver.fn,), source, evaluated=False)

    if isinstance(resolver, Learner):
        image = _map_set(resolver.functions, pool_or_raise(pool, "learner"),
                         evaluated=False)
        if binding == RAW:
            return image
        return trial(problem, _clip_to_universe(image, problem))

    if isinstance(resolver, Subject):
        image = _map_set(resolver.library, pool_or_raise(pool, "subject"),
                         evaluated=True)
        if binding == RAW:
            return image
        return trial(problem, _clip_to_universe(image, problem))

    raise DomainError(f"unknown resolver {resolver!r}")


def pool_or_raise(pool: tuple[str, ...] | None, who: str) -> tuple[str, ...]:
    if pool is None:
        raise DomainError(f"a {who} needs its software set")
    return pool


def _map_set(functions: Sequence[ElementFunction], source: Sequence[str],
             evaluated: bool) -> tuple[str, ...]:
    out: list[str] = []
    seen = set()
    for fn in functions:
        for x in source:
            y = fn.apply_evaluated(x) if evaluated else fn.apply_host(x)
            if y not in seen:
                seen.add(y)
                out.append(y)
    return tuple(out)


def _clip_to_universe(image: Sequence[str], problem: Problem) -> tuple[str, ...]:
    from .expr import universe_contains
    return tuple(e for e in image if universe_contains(problem.universe, e))


def elementable_lift(fn: Callable[[str], str]) -> Callable[[Iterable[str]], tuple[str, ...]]:
    """Lift an element function to sets: F(S) = {f(s) | s in S}."""

    def lifted(source: Iterable[str]) -> tuple[str, ...]:
        out, seen = [], set()
        for x in source:
            y = fn(x)
            if y not in seen:
                seen.add(y)
                out.append(y)
        return tuple(out)

    return lifted


# ---------------------------------------------------------------------------
# complete problem spaces, range and power

@dataclass(frozen=True)
class ProblemSpace:
    """All subset problems over a finite universe; problem ``mask`` contains
    member ``i`` exactly when bit ``i`` of ``mask`` is set."""

    universe: FiniteUniverse
    problems: tuple[Problem, ...]

    @classmethod
    def over(cls, universe: FiniteUniverse) -> "ProblemSpace":
        n = len(universe.members)
        if n > MAX_SPACE_UNIVERSE:
            raise DomainError(
                f"problem spaces are capped at universes of {MAX_SPACE_UNIVERSE}")
        problems = []
        for mask in range(2 ** n):
            chosen = {m: bool(mask >> i & 1) for i, m in enumerate(universe.members)}
            problems.append(Problem(universe, TableCondition(chosen),
                                    label=f"σ={mask:b}"))
        return cls(universe, tuple(problems))

    def sigma(self, mask: int) -> tuple[str, ...]:
        return tuple(m for i, m in enumerate(self.universe.members) if mask >> i & 1)

    def mask_of(self, solution_set: Iterable[str]) -> int:
        chosen = set(solution_set)
        mask = 0
        for i, m in enumerate(self.universe.members):
            if m in chosen:
                mask |= 1 << i
        return mask


def range_of(resolver: Resolver, space: ProblemSpace,
             software: Sequence[str] | None = None,
             binding: str = TRIAL) -> tuple[int, ...]:
    """Problems (as masks) where the output is a non-empty set of
    solutions."""
    out = []
    for mask, problem in enumerate(space.problems):
        produced = set(resolve(resolver, problem, software, binding))
        sigma = set(space.sigma(mask))
        if produced and produced <= sigma:
            out.append(mask)
    return tuple(out)


def power_of(resolver: Resolver, space: ProblemSpace,
             software: Sequence[str] | None = None,
             binding: str = TRIAL) -> tuple[int, ...]:
    """Problems (as masks) where the output is exactly the solution set."""
    out = []
    for mask, problem in enumerate(space.problems):
        produced = set(resolve(resolver, problem, software, binding))
        if produced == set(space.sigma(mask)):
            out.append(mask)
    return tuple(out)


@dataclass(frozen=True)
class RangePowerReport:
    resolver_id: str
    range_masks: tuple[int, ...]
    power_masks: tuple[int, ...]
    universe: tuple[str, ...]


def range_power_report(resolver: Resolver, space: ProblemSpace,
                       software: Sequence[str] | None = None,
                       binding: str = TRIAL) -> RangePowerReport:
    """Compute both sweeps and re-check their defining inequalities."""
    range_masks = range_of(resolver, space, software, binding)
    power_masks = power_of(resolver, space, software, binding)
    for mask in range_masks:
        produced = set(resolve(resolver, space.problems[mask], software, binding))
        if not produced or not produced <= set(space.sigma(mask)):
            raise DomainError(f"range invariant broken at mask {mask}")
    for mask in power_masks:
        produced = set(resolve(resolver, space.problems[mask], software, binding))
        if produced != set(space.sigma(mask)):
            raise DomainError(f"power invariant broken at mask {mask}")
    return RangePowerReport(resolver.describe(), range_masks, power_masks,
                            space.universe.members)


# ---------------------------------------------------------------------------
# hierarchy and evolution

@dataclass(frozen=True)
class EmbeddingCheck:
    level: str
    injective: bool
    behavior_preserved: bool
    witness_beyond: str


@dataclass(frozen=True)
class HierarchyReport:
    embeddings: tuple[EmbeddingCheck, ...]

    def holds(self) -> bool:
        return all(e.injective and e.behavior_preserved for e in self.embeddings)


def _boolean_valued(fn_outputs: Iterable[str]) -> bool:
    return set(fn_outputs) <= {tm.TRUE_SYMBOL, tm.FALSE_SYMBOL}


def hierarchy_check(space: ProblemSpace) -> HierarchyReport:
    """Verify the five-rung ladder on a concrete space.

    Each rung's resources embed injectively into the next rung's with the
    same behavior, and each rung exhibits a resource no lower rung can
    express: a non-singleton set, a function with non-boolean outputs, a
    non-singleton function set, and a non-constant functional.
    """
    members = space.universe.members
    if len(members) < 2:
        raise DomainError("hierarchy checks need at least two universe members")
    checks: list[EmbeddingCheck] = []

    # mechanisms into adapters: s becomes the "equals s" condition, whose
    # set is the singleton {s}
    singletons = {s: (s,) for s in members}
    injective = len({v for v in singletons.values()}) == len(members)
    preserved = all(
        resolve(Adapter(singletons[s]), problem, binding=RAW)
        == resolve(Mechanism(s), problem)
        for s in members for problem in space.problems)
    non_singleton = tuple(members[:2])
    witness_ok = all((s,) != non_singleton for s in members)
    checks.append(EmbeddingCheck(
        "mechanism→adapter", injective, preserved,
        f"set {{{', '.join(non_singleton)}}} is no mechanism's output"
        if witness_ok else "missing"))

    # adapters into perceivers: the condition becomes a boolean-valued
    # element function; the set it carves out is recovered exactly
    def predicate_function(pool: tuple[str, ...]) -> Callable[[str], str]:
        chosen = set(pool)
        return lambda x: tm.TRUE_SYMBOL if x in chosen else tm.FALSE_SYMBOL

    subsets = [space.sigma(mask) for mask in range(len(space.problems))]
    tables = {pool: tuple(predicate_function(pool)(m) for m in members)
              for pool in subsets}
    injective = len(set(tables.values())) == len(subsets)
    preserved = all(
        tuple(m for m in members if predicate_function(pool)(m) == tm.TRUE_SYMBOL) == pool
        for pool in subsets)
    ident = identity_function()
    ident_outputs = tuple(ident.apply_host(m) for m in members)
    witness = "identity function has non-boolean outputs" if not _boolean_valued(
        ident_outputs) else "missing"
    checks.append(EmbeddingCheck("adapter→perceiver", injective, preserved, witness))

    # perceivers into learners: f embeds as the singleton {f}
    swap = ElementFunction("swap01", fn=_swap_function(members))
    catalog = [ident, swap]
    images = {fn.name: tuple(fn.apply_host(m) for m in members) for fn in catalog}
    injective = len(set(images.values())) == len(catalog)
    preserved = all(
        resolve(Learner((fn,)), problem, software=members, binding=RAW)
        == resolve(Perceiver(fn), problem, software=members, binding=RAW)
        for fn in catalog for problem in space.problems)
    pair = Learner((ident, swap))
    single_source = (members[0],)
    image = resolve(pair, space.problems[0], software=single_source, binding=RAW)
    witness = (f"{pair.describe()} maps one element to {len(image)} outputs, "
               "beyond any single function" if len(image) > 1 else "missing")
    checks.append(EmbeddingCheck("perceiver→learner", injective, preserved, witness))

    # learners into subjects: F embeds as its characteristic functional,
    # whose value on a function is a constant verdict function; evaluation
    # itself is the witness that subjects hold non-constant functionals
    function_sets = [(ident,), (swap,), (ident, swap)]
    characteristic = {
        tuple(f.name for f in fs): tuple(
            tm.TRUE_SYMBOL if g.name in {f.name for f in fs} else tm.FALSE_SYMBOL
            for g in catalog)
        for fs in function_sets}
    injective = len(set(characteristic.values())) == len(function_sets)
    alphabet = _single_char_alphabet(members)
    if alphabet is None:
        raise DomainError("the subject rung needs single-character members")
    ident_p = identity_function(alphabet)
    swap_p = machine_function(
        "swap01", tm.substitution_machine(alphabet, _swap_mapping(members)))
    preserved = all(
        resolve(Subject((fn,)), problem, software=members, binding=RAW)
        == resolve(Learner((fn,)), problem, software=members, binding=RAW)
        for fn in (ident_p, swap_p) for problem in space.problems)
    evaluated = [tuple(fn.apply_evaluated(m) for m in members)
                 for fn in (ident_p, swap_p)]
    distinct = len(set(evaluated)) == len(evaluated) and bool(evaluated)
    non_constant = distinct and not any(_boolean_valued(out) for out in evaluated)
    witness = ("evaluation sends different programs to different functions, "
               "never to a constant verdict" if non_constant else "missing")
    checks.append(EmbeddingCheck("learner→subject", injective, preserved, witness))

    return HierarchyReport(tuple(checks))


def _swap_function(members: tuple[str, ...]) -> Callable[[str], str]:
    a, b = members[0], members[1]

    def swap(x: str) -> str:
        if x == a:
            return b
        if x == b:
            return a
        return x

    return swap


def _swap_mapping(members: tuple[str, ...]) -> dict[str, str]:
    a, b = members[0], members[1]
    return {a: b, b: a}


def _single_char_alphabet(members: tuple[str, ...]):
    from .expr import Alphabet
    chars = sorted({ch for m in members for ch in m})
    if any(len(m) != 1 for m in members):
        return None
    blank = "_" if "_" not in chars else "!"
    return Alphabet(tuple(chars), blank)


@dataclass(frozen=True)
class ChainLink:
    lower: str
    upper: str
    relation: str  # "strict" or "equal"
    witness_mask: int | None


@dataclass(frozen=True)
class ChainReport:
    links: tuple[ChainLink, ...]

    def relations(self) -> tuple[str, ...]:
        return tuple(link.relation for link in self.links)


def evolution_chain(s: str, pool: Sequence[str], wider_pool: Sequence[str],
                    functions: Sequence[ElementFunction],
                    wider_functions: Sequence[ElementFunction],
                    space: ProblemSpace) -> ChainReport:
    """Verify the range ladder on a complete problem space.

    Requires the textbook growth conditions: ``{s} ⊂ pool ⊂ wider_pool`` of
    universe members, the identity among ``functions``, and ``functions ⊂
    wider_functions`` with every wider function program-backed.  Violations
    raise a configuration error naming the failed condition.
    """
    members = space.universe.members
    pool = tuple(pool)
    wider_pool = tuple(wider_pool)
    if s not in pool:
        raise ConfigurationError(f"{render(s)} must lie in the pool",
                                 condition="adapter condition", witness=s)
    if not set(pool) < set(wider_pool):
        raise ConfigurationError("pool must grow strictly into wider pool",
                                 condition="adapter condition")
    if not set(wider_pool) <= set(members):
        raise ConfigurationError("wider pool must stay inside the universe",
                                 condition="adapter condition")
    names = [f.name for f in functions]
    wider_names = [f.name for f in wider_functions]
    if "i" not in names:
        witness = _first_range_gap(
            Perceiver(identity_function()), Learner(tuple(functions)),
            space, wider_pool)
        raise ConfigurationError("the identity must be among the functions",
                                 condition="learner condition", witness=witness)
    if not set(names) < set(wider_names):
        raise ConfigurationError("functions must grow into wider functions",
                                 condition="subject condition")
    for fn in wider_functions:
        if fn.program is None:
            raise ConfigurationError(
                f"{fn.name} carries no program for the evaluator",
                condition="subject condition")

    rungs = [
        ("mechanism", Mechanism(s), None),
        ("adapter", Adapter(pool), None),
        ("perceiver[i]", Perceiver(identity_function()), wider_pool),
        ("learner", Learner(tuple(functions)), wider_pool),
        ("subject", Subject(tuple(wider_functions)), wider_pool),
    ]
    ranges = [set(range_of(r, space, software, TRIAL))
              for _, r, software in rungs]
    links = []
    for k in range(4):
        lower, upper = ranges[k], ranges[k + 1]
        if not lower <= upper:
            missing = sorted(lower - upper)[0]
            raise ConfigurationError(
                f"range of {rungs[k][0]} escapes {rungs[k + 1][0]} at mask {missing}",
                condition="chain inclusion", witness=missing)
        extra = sorted(upper - lower)
        links.append(ChainLink(
            rungs[k][0], rungs[k + 1][0],
            "strict" if extra else "equal",
            extra[0] if extra else None))
    return ChainReport(tuple(links))


def _first_range_gap(lower: Resolver, upper: Resolver, space: ProblemSpace,
                     software: Sequence[str]) -> int | None:
    low = set(range_of(lower, space, software, TRIAL))
    high = set(range_of(upper, space, software, TRIAL))
    gaps = sorted(low - high)
    return gaps[0] if gaps else None


# ---------------------------------------------------------------------------
# cross-module reductions

def analogy_via_perceivers(forward: ElementFunction, back: ElementFunction,
                           pool: Sequence[str], problem: Problem) -> tuple[str, ...]:
    """An elementable analogy as three perceiver applications: map the
    solutions forward, trial the pool against the image, map the survivors
    back."""
    sigma = trial(problem, tuple(problem.universe.members)
                  if isinstance(problem.universe, FiniteUniverse)
                  else tuple(pool))
    image = elementable_lift(forward.apply_host)(sigma)
    surviving = tuple(x for x in pool if x in set(image))
    return elementable_lift(back.apply_host)(surviving)


def meta_trial_via_learner(functions: Sequence[ElementFunction],
                           problem: Problem,
                           pool: Sequence[str]) -> tuple[ElementFunction, ...]:
    """The functions whose induced resolution (map the pool ∩ solutions)
    is valid for the problem; a meta-trial run on learner resources."""
    sigma = set(trial(problem, tuple(pool)))
    winners = []
    for fn in functions:
        produced = set(elementable_lift(fn.apply_host)(sorted(sigma)))
        if produced == set(solutions_of(problem)):
            winners.append(fn)
    return tuple(winners)


def solutions_of(problem: Problem) -> tuple[str, ...]:
    from .problem import solutions
    return solutions(problem)
