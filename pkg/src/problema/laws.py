"""Exhaustive small-scope law sweeps.

Every function returns a list of human-readable violation strings, empty
when the law holds.  The checks are deliberately written against the
brute-force solution oracle (set operations on explicitly computed solution
sets) so they stay independent of the operator implementations they verify.
The CLI ``verify`` command and the test suite both run these.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from . import machine as tm
from .expr import Alphabet, FiniteUniverse, expression_at, index_of
from .problem import (Problem, conjoin, contradiction, disjoin, equal, negate,
                      problem_of_set, solutions, tautology)
from .resolution import (AnalogyStep, Routine, Trial, chain, general_form,
                         identity_step, is_valid_resolution, meta_trial,
                         metaproblem, routine, trial)
from .resolver import (Adapter, Learner, Mechanism, Perceiver, ProblemSpace,
                       RAW, Subject, TRIAL, identity_function,
                       machine_function, power_of, range_of, resolve)


def subset_problems(universe: FiniteUniverse) -> list[Problem]:
    """All subset problems over a finite universe, in mask order."""
    out = []
    for mask in range(2 ** len(universe.members)):
        chosen = [m for i, m in enumerate(universe.members) if mask >> i & 1]
        out.append(problem_of_set(universe, chosen))
    return out


def small_universe(size: int) -> FiniteUniverse:
    return FiniteUniverse(tuple(str(i) for i in range(size)))


# ---------------------------------------------------------------------------
# expression layer

def check_expression_bijection(max_index: int = 10_000,
                               sizes: Sequence[int] = (1, 2, 3, 4)) -> list[str]:
    violations = []
    for size in sizes:
        alphabet = Alphabet(tuple("abcdefgh"[:size]))
        previous_len = 0
        for i in range(max_index):
            e = expression_at(alphabet, i)
            if index_of(alphabet, e) != i:
                violations.append(f"round trip failed at size {size}, index {i}")
                break
            if len(e) < previous_len:
                violations.append(f"length not monotone at size {size}, index {i}")
                break
            previous_len = len(e)
    return violations


def check_expression_counting(sizes: Sequence[int] = (1, 2, 3, 4),
                              max_len: int = 5) -> list[str]:
    violations = []
    for size in sizes:
        alphabet = Alphabet(tuple("abcdefgh"[:size]))
        cum = 0
        for n in range(max_len + 1):
            block = size ** n
            for i in range(cum, cum + block):
                if len(expression_at(alphabet, i)) != n:
                    violations.append(
                        f"size {size}: index {i} should have length {n}")
                    break
            cum += block
    return violations


# ---------------------------------------------------------------------------
# the Boolean algebra of problems

def check_boolean_algebra(size: int = 3) -> list[str]:
    """All ten laws, exhaustively over every problem triple of the
    universe."""
    universe = small_universe(size)
    problems = subset_problems(universe)
    top = tautology(universe)
    bottom = contradiction(universe)
    violations = []

    def eq(a: Problem, b: Problem, law: str, names: str) -> None:
        if not equal(a, b):
            violations.append(f"{law} failed on {names}")

    for i, p in enumerate(problems):
        eq(disjoin(p, bottom), p, "neutral ∨", f"p={i}")
        eq(conjoin(p, top), p, "neutral ∧", f"p={i}")
        eq(disjoin(p, negate(p)), top, "complement ∨", f"p={i}")
        eq(conjoin(p, negate(p)), bottom, "complement ∧", f"p={i}")
    for i, p in enumerate(problems):
        for j, q in enumerate(problems):
            eq(disjoin(p, q), disjoin(q, p), "commutativity ∨", f"p={i},q={j}")
            eq(conjoin(p, q), conjoin(q, p), "commutativity ∧", f"p={i},q={j}")
    for i, p in enumerate(problems):
        for j, q in enumerate(problems):
            for k, r in enumerate(problems):
                names = f"p={i},q={j},r={k}"
                eq(disjoin(disjoin(p, q), r), disjoin(p, disjoin(q, r)),
                   "associativity ∨", names)
                eq(conjoin(conjoin(p, q), r), conjoin(p, conjoin(q, r)),
                   "associativity ∧", names)
                eq(disjoin(p, conjoin(q, r)),
                   conjoin(disjoin(p, q), disjoin(p, r)),
                   "distributivity ∨ over ∧", names)
                eq(conjoin(p, disjoin(q, r)),
                   disjoin(conjoin(p, q), conjoin(p, r)),
                   "distributivity ∧ over ∨", names)
    return violations


def check_solution_homomorphism(size: int = 4) -> list[str]:
    """Composition of problems mirrors union/intersection/complement of
    solution sets; neutrals and the binary partition included."""
    universe = small_universe(size)
    problems = subset_problems(universe)
    full = set(universe.members)
    violations = []
    for i, p in enumerate(problems):
        sp = set(solutions(p))
        if set(solutions(negate(p))) != full - sp:
            violations.append(f"complement mismatch at p={i}")
        if sp | set(solutions(negate(p))) != full or sp & set(solutions(negate(p))):
            violations.append(f"binary partition broken at p={i}")
        for j, q in enumerate(problems):
            sq = set(solutions(q))
            if set(solutions(disjoin(p, q))) != sp | sq:
                violations.append(f"union mismatch at p={i},q={j}")
            if set(solutions(conjoin(p, q))) != sp & sq:
                violations.append(f"intersection mismatch at p={i},q={j}")
    if set(solutions(tautology(universe))) != full:
        violations.append("tautology misses members")
    if solutions(contradiction(universe)):
        violations.append("contradiction has solutions")
    return violations


def check_set_isomorphism(size: int = 4) -> list[str]:
    """solutions(problem_of_set(U, S)) = S for every subset S."""
    universe = small_universe(size)
    violations = []
    for mask in range(2 ** size):
        chosen = tuple(m for i, m in enumerate(universe.members) if mask >> i & 1)
        back = solutions(problem_of_set(universe, chosen))
        if set(back) != set(chosen):
            violations.append(f"subset {mask:b} did not round trip")
    return violations


# ---------------------------------------------------------------------------
# trials

def check_trial_intersection(size: int = 4) -> list[str]:
    """trial = pool ∩ solutions, with the monotone corollaries and the
    routine-as-trial identity, across every (problem, pool) pair."""
    universe = small_universe(size)
    problems = subset_problems(universe)
    violations = []
    for i, p in enumerate(problems):
        sigma = set(solutions(p))
        for mask in range(2 ** size):
            pool = tuple(m for k, m in enumerate(universe.members) if mask >> k & 1)
            got = set(trial(p, pool))
            if got != set(pool) & sigma:
                violations.append(f"trial ≠ intersection at p={i}, pool={mask:b}")
            if not got <= sigma:
                violations.append(f"trial escaped solutions at p={i}, pool={mask:b}")
            if (sigma <= set(pool)) != (got == sigma):
                violations.append(f"superset law failed at p={i}, pool={mask:b}")
        if tuple(trial(p, tuple(sorted(sigma)))) != routine(
                solutions(p)).apply(p):
            violations.append(f"routine-as-trial failed at p={i}")
    return violations


# ---------------------------------------------------------------------------
# analogies

def _modular_step(size: int, shift: int) -> AnalogyStep:
    """Relabel candidates by +shift (mod size); translator shifts back."""

    def fwd(x: str) -> str:
        return str((int(x) + shift) % size)

    def back(x: str) -> str:
        return str((int(x) - shift) % size)

    def transform(p: Problem) -> Problem:
        image = [fwd(x) for x in solutions(p)]
        return problem_of_set(p.universe, image)

    def translator(result: tuple) -> tuple:
        return tuple(back(x) for x in result)

    return AnalogyStep(f"shift+{shift}", transform, translator, (fwd, back))


def _mirror_step(size: int) -> AnalogyStep:
    def fwd(x: str) -> str:
        return str(size - 1 - int(x))

    def transform(p: Problem) -> Problem:
        return problem_of_set(p.universe, [fwd(x) for x in solutions(p)])

    def translator(result: tuple) -> tuple:
        return tuple(fwd(x) for x in result)

    return AnalogyStep("mirror", transform, translator, (fwd, fwd))


def analogy_catalog(size: int) -> list[AnalogyStep]:
    steps = [_modular_step(size, k) for k in range(1, size)]
    steps.append(_mirror_step(size))
    return steps


def check_translator_composition(size: int = 4, samples: int = 20,
                                 seed: int = 2024,
                                 inject_fault: bool = False) -> list[str]:
    """Chained application equals stepwise application for sampled pairs of
    analogy steps, on every problem of the universe."""
    universe = small_universe(size)
    problems = subset_problems(universe)
    catalog = analogy_catalog(size)
    rng = random.Random(seed)
    violations = []
    pool = universe.members
    for n in range(samples):
        s1, s2 = rng.choice(catalog), rng.choice(catalog)
        if inject_fault:
            s2 = AnalogyStep(s2.name + "!", s2.transform,
                             lambda result: tuple(result), s2.elementwise)
        composed = chain(s1, s2)
        for i, p in enumerate(problems):
            direct = general_form([composed], pool).apply(p)
            stepwise = general_form([s1, s2], pool).apply(p)
            if set(direct) != set(stepwise):
                violations.append(
                    f"sample {n} ({composed.name}): chained ≠ stepwise on p={i}")
                break
            if set(stepwise) != set(solutions(p)):
                violations.append(
                    f"sample {n} ({composed.name}): wrong answers on p={i}, "
                    f"got {sorted(stepwise)} want {sorted(solutions(p))}")
                break
    return violations


def check_general_form_reductions(size: int = 4) -> list[str]:
    """No steps over the full pool behaves as the exhaustive trial; no steps
    over the solution set behaves as the routine; identity wrapping changes
    nothing."""
    universe = small_universe(size)
    problems = subset_problems(universe)
    violations = []
    for i, p in enumerate(problems):
        sigma = solutions(p)
        if set(general_form([], universe.members).apply(p)) != set(sigma):
            violations.append(f"empty-chain exhaustive trial failed at p={i}")
        if set(general_form([], sigma).apply(p)) != set(routine(sigma).apply(p)):
            violations.append(f"empty-chain routine reduction failed at p={i}")
        wrapped = general_form([identity_step()], universe.members).apply(p)
        if set(wrapped) != set(trial(p, universe.members)):
            violations.append(f"identity wrapper changed the trial at p={i}")
    return violations


# ---------------------------------------------------------------------------
# metaproblems

def check_meta_trial_against_direct(fixtures) -> list[str]:
    """meta_trial output equals an independent loop re-deriving validity."""
    violations = []
    for n, (problem, candidate_family) in enumerate(fixtures):
        meta = metaproblem(problem, candidate_family)
        got = meta_trial(meta)
        sigma = set(solutions(problem))
        direct = []
        for _, r in candidate_family.members:
            try:
                ok = set(r.apply(problem)) == sigma
            except Exception:
                ok = False
            if ok:
                direct.append(r)
        if list(got) != direct:
            violations.append(f"fixture {n}: meta_trial disagrees with direct loop")
        solvable_meta = bool(got)
        resolvable_in_family = any(
            is_valid_resolution(r, problem) for _, r in candidate_family.members)
        if solvable_meta != resolvable_in_family:
            violations.append(f"fixture {n}: solvable↔resolvable mismatch")
    return violations


# ---------------------------------------------------------------------------
# machine layer

def machine_corpus() -> list[tuple[str, tm.TMachine]]:
    ab = Alphabet(("a", "b"))
    binary = Alphabet(("0", "1"))
    corpus = [
        ("identity-ab", tm.identity_machine(ab)),
        ("identity-01", tm.identity_machine(binary)),
        ("loop", tm.never_halting_machine(ab)),
        ("delta-a", tm.delta_machine("a", ab)),
        ("delta-b", tm.delta_machine("b", ab)),
        ("delta-ab", tm.delta_machine("ab", ab)),
        ("delta-ba", tm.delta_machine("ba", ab)),
        ("delta-aa", tm.delta_machine("aa", ab)),
        ("const-ab", tm.constant_machine(ab, "ab")),
        ("append-a", tm.append_machine(ab, "a")),
        ("swap-ab", tm.substitution_machine(ab, {"a": "b", "b": "a"})),
    ]
    return corpus


def corpus_inputs() -> list[str]:
    ab = Alphabet(("a", "b"))
    return [expression_at(ab, i) for i in range(15)]


def check_codec_round_trip() -> list[str]:
    violations = []
    seen = {}
    for name, machine in machine_corpus():
        program = tm.encode(machine)
        if tm.decode(program) != machine:
            violations.append(f"{name}: decode∘encode is not the identity")
        if program in seen:
            violations.append(f"{name} and {seen[program]} share an encoding")
        seen[program] = name
    return violations


def check_universal_property(fuel: int = 500) -> list[str]:
    """Evaluating the encoding matches running the machine, outcome by
    outcome, over the corpus."""
    violations = []
    for name, machine in machine_corpus():
        program = tm.encode(machine)
        for data in corpus_inputs():
            if not machine.alphabet.contains(data):
                continue
            direct = tm.run(machine, data, fuel)
            via_program = tm.universal_apply(program, data, fuel)
            if direct != via_program:
                violations.append(f"{name} on {data!r}: {direct} ≠ {via_program}")
    return violations


def check_delta_machines(max_target_len: int = 3, max_input_len: int = 4) -> list[str]:
    """Every equality decider halts on every input with the right verdict
    and has exactly len(target)+2 states."""
    ab = Alphabet(("a", "b"))
    violations = []
    targets = [expression_at(ab, i) for i in range(2 ** (max_target_len + 1) - 1)]
    targets = [t for t in targets if len(t) <= max_target_len]
    inputs = [expression_at(ab, i) for i in range(2 ** (max_input_len + 1) - 1)]
    inputs = [x for x in inputs if len(x) <= max_input_len]
    for target in targets:
        machine = tm.delta_machine(target, ab)
        if machine.n_states != len(target) + 2:
            violations.append(f"delta {target!r}: {machine.n_states} states")
        for data in inputs:
            outcome = tm.run(machine, data, len(data) + len(target) + 8)
            if isinstance(outcome, tm.OutOfFuel):
                violations.append(f"delta {target!r} hung on {data!r}")
                continue
            want = tm.TRUE_SYMBOL if data == target else tm.FALSE_SYMBOL
            if outcome.result != want:
                violations.append(f"delta {target!r} answered {outcome.result!r} on {data!r}")
            if outcome.steps > len(data) + 2:
                violations.append(f"delta {target!r} took {outcome.steps} steps on {data!r}")
    return violations


# ---------------------------------------------------------------------------
# resolver lemmas

def check_mechanism_lemmas(size: int = 3) -> list[str]:
    """Range is the problems the element solves; power is exactly the
    equality problem, for every element."""
    universe = small_universe(size)
    space = ProblemSpace.over(universe)
    violations = []
    for s in universe.members:
        mech = Mechanism(s)
        got_range = set(range_of(mech, space))
        want_range = {mask for mask in range(len(space.problems))
                      if s in space.sigma(mask)}
        if got_range != want_range:
            violations.append(f"mechanism[{s}] range mismatch")
        got_power = set(power_of(mech, space))
        delta_mask = space.mask_of((s,))
        if got_power != {delta_mask}:
            violations.append(f"mechanism[{s}] power is not the equality problem")
    return violations


def check_adapter_lemmas(size: int = 3) -> list[str]:
    """Range is the problems with a solution in the pool; power is the
    powerset of the pool; both monotone in the pool."""
    universe = small_universe(size)
    space = ProblemSpace.over(universe)
    n_masks = len(space.problems)
    violations = []
    subsets = [space.sigma(mask) for mask in range(n_masks)]
    for pool in subsets:
        adapter = Adapter(pool)
        got_range = set(range_of(adapter, space))
        want_range = {mask for mask in range(n_masks)
                      if set(pool) & set(space.sigma(mask))}
        if got_range != want_range:
            violations.append(f"adapter{set(pool)} range mismatch")
        got_power = set(power_of(adapter, space))
        want_power = {mask for mask in range(n_masks)
                      if set(space.sigma(mask)) <= set(pool)}
        if got_power != want_power:
            violations.append(f"adapter{set(pool)} power is not the powerset")
    for small in subsets:
        for large in subsets:
            if set(small) < set(large):
                if not set(range_of(Adapter(small), space)) <= set(
                        range_of(Adapter(large), space)):
                    violations.append(f"range not monotone {small}⊂{large}")
                if not set(power_of(Adapter(small), space)) <= set(
                        power_of(Adapter(large), space)):
                    violations.append(f"power not monotone {small}⊂{large}")
    return violations


def check_functional_identities(size: int = 3) -> list[str]:
    """The identity perceiver reproduces the adapter; a learner is the
    union of its perceivers; the subject evaluating programs reproduces the
    learner; and on solvable problems power implies range."""
    universe = small_universe(size)
    space = ProblemSpace.over(universe)
    alphabet = Alphabet(tuple(universe.members))
    ident = identity_function(alphabet)
    swap = machine_function(
        "swap01", tm.substitution_machine(alphabet, {"0": "1", "1": "0"}))
    const0 = machine_function("const0", tm.constant_machine(alphabet, "0"))
    violations = []
    subsets = [space.sigma(mask) for mask in range(len(space.problems))]
    for pool in subsets:
        for problem in space.problems:
            if resolve(Adapter(pool), problem, binding=RAW) != resolve(
                    Perceiver(ident), problem, software=pool, binding=RAW):
                violations.append(f"identity perceiver ≠ adapter on pool {set(pool)}")
                break
            if set(resolve(Adapter(pool), problem, binding=TRIAL)) != set(
                    resolve(Perceiver(ident), problem, software=pool, binding=TRIAL)):
                violations.append(f"identity perceiver trial mismatch on {set(pool)}")
                break
    function_sets = [(ident,), (swap,), (const0,), (ident, swap),
                     (swap, const0), (ident, swap, const0)]
    for functions in function_sets:
        learner = Learner(tuple(functions))
        subject = Subject(tuple(functions))
        for pool in subsets:
            for problem in space.problems:
                union = set()
                for fn in functions:
                    union |= set(resolve(Perceiver(fn), problem,
                                         software=pool, binding=RAW))
                got = set(resolve(learner, problem, software=pool, binding=RAW))
                if got != union:
                    violations.append(
                        f"learner ≠ union of perceivers on {set(pool)}")
                    break
                evaluated = set(resolve(subject, problem, software=pool, binding=RAW))
                if evaluated != got:
                    violations.append(
                        f"subject ≠ learner on {set(pool)}")
                    break
    for resolver in (Mechanism("0"), Adapter(("0", "1")),
                     Learner((ident, swap))):
        software = universe.members if not isinstance(
            resolver, (Mechanism, Adapter)) else None
        power_masks = set(power_of(resolver, space, software))
        range_masks = set(range_of(resolver, space, software))
        for mask in power_masks:
            if space.sigma(mask) and mask not in range_masks:
                violations.append(
                    f"{resolver.describe()}: solvable problem resolved but not solved")
    return violations


ALL_SUITES = {
    "expr": lambda **kw: (check_expression_bijection(kw.get("max_index", 10_000))
                          + check_expression_counting()),
    "algebra": lambda **kw: check_boolean_algebra(kw.get("size", 3)),
    "solutions": lambda **kw: (check_solution_homomorphism(kw.get("size", 4))
                               + check_set_isomorphism(kw.get("size", 4))),
    "trials": lambda **kw: check_trial_intersection(kw.get("size", 4)),
    "analogies": lambda **kw: (
        check_translator_composition(kw.get("size", 4),
                                     seed=kw.get("seed", 2024),
                                     inject_fault=kw.get("inject_fault", False))
        + check_general_form_reductions(kw.get("size", 4))),
    "machine": lambda **kw: (check_codec_round_trip()
                             + check_universal_property()
                             + check_delta_machines()),
    "resolvers": lambda **kw: (check_mechanism_lemmas(kw.get("size", 3))
                               + check_adapter_lemmas(kw.get("size", 3))
                               + check_functional_identities(kw.get("size", 3))),
}


def run_suite(name: str, **kwargs) -> list[str]:
    if name == "all":
        out = []
        for suite in ALL_SUITES.values():
            out.extend(suite(**kwargs))
        return out
    if name not in ALL_SUITES:
        raise KeyError(name)
    return ALL_SUITES[name](**kwargs)
