"""Command-line interface.

Subcommands map one-to-one onto module operations: ``classify`` runs the
problem classifier, ``tm run``/``tm encode`` drive machines, ``resolver
range|power|chain`` run the resolver sweeps, ``meta`` runs a metaproblem
over a declared family, and ``verify`` runs the exhaustive law suites.

Exit codes: 0 ok, 1 violation or counterexample, 2 usage or definition
error, 3 answer unknown at the given fuel.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import laws
from . import machine as tm
from .dsl import DslError, Workspace, parse_file
from .errors import ProblemaError, TmFormatError
from .expr import FiniteUniverse, render
from .resolution import meta_report, metaproblem
from .resolver import (ProblemSpace, evolution_chain, identity_function,
                       machine_function, range_power_report)
from .topology import UNKNOWN, Evidence, classify

SCHEMA = "problema/1"

OK, VIOLATION, USAGE, INCONCLUSIVE = 0, 1, 2, 3


def default_fuel(args_fuel: int | None) -> int:
    if args_fuel is not None:
        return args_fuel
    env = os.environ.get("PROBLEMA_FUEL")
    return int(env) if env else 10_000


def emit(args, command: str, status: str, result: dict, caveats=()) -> None:
    if args.json:
        payload = {
            "schema": SCHEMA,
            "command": command,
            "status": status,
            "result": result,
            "caveats": list(caveats),
        }
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))
    else:
        for key, value in result.items():
            print(f"{key}: {value}")
        for caveat in caveats:
            print(f"note: {caveat}")


def load_workspace(path: str) -> Workspace:
    return parse_file(Path(path))


def _require(workspace_dict: dict, name: str, kind: str):
    if name not in workspace_dict:
        raise DslError(f"no {kind} named {name!r} in the workspace", 0, 0)
    return workspace_dict[name]


# ---------------------------------------------------------------------------
# subcommand bodies

def cmd_parse(args) -> int:
    ws = load_workspace(args.file)
    result = {
        "universes": sorted(ws.universes),
        "problems": sorted(ws.problems),
        "machines": sorted(ws.machines),
        "resolvers": sorted(ws.resolvers),
        "families": sorted(ws.families),
    }
    emit(args, "parse", "ok", result)
    return OK


def cmd_classify(args) -> int:
    ws = load_workspace(args.workspace)
    problem = _require(ws.problems, args.problem, "problem")
    fuel = default_fuel(args.fuel)
    decider = ws.machines.get(args.decider) if args.decider else None
    report = classify(problem, Evidence(decider=decider), fuel)
    result = {
        "problem": problem.describe(),
        "solvable": report.solvable,
        "finite": report.finite,
        "expressible": report.expressible,
        "resolvable": report.resolvable,
        "place": report.place.value,
        "fuel": report.fuel,
    }
    unknown = UNKNOWN in (report.solvable, report.finite,
                          report.expressible, report.resolvable)
    status = "unknown-at-fuel" if unknown else "ok"
    emit(args, "classify", status, result, report.caveats)
    return INCONCLUSIVE if unknown else OK


def _load_machine(args, ws: Workspace | None = None) -> tm.TMachine:
    if args.machine:
        return tm.machine_from_text(Path(args.machine).read_text(encoding="utf-8"))
    if ws is not None and args.name:
        return _require(ws.machines, args.name, "machine")
    raise TmFormatError("no machine given (use --machine FILE)")


def cmd_tm_run(args) -> int:
    ws = load_workspace(args.workspace) if args.workspace else None
    machine = _load_machine(args, ws)
    fuel = default_fuel(args.fuel)
    outcome = tm.run(machine, args.input, fuel)
    if isinstance(outcome, tm.Halted):
        emit(args, "tm run", "ok",
             {"outcome": "halted", "result": render(outcome.result),
              "steps": outcome.steps, "fuel": fuel})
        return OK
    emit(args, "tm run", "unknown-at-fuel",
         {"outcome": "out-of-fuel", "steps": outcome.steps, "fuel": fuel})
    return INCONCLUSIVE


def cmd_tm_encode(args) -> int:
    machine = _load_machine(args)
    program = tm.encode(machine)
    round_trip = tm.decode(program) == machine
    emit(args, "tm encode", "ok" if round_trip else "violation",
         {"program": program, "round_trip": round_trip})
    return OK if round_trip else VIOLATION


def _space_for(args, ws: Workspace) -> ProblemSpace:
    universe = _require(ws.universes, args.universe, "universe")
    if not isinstance(universe, FiniteUniverse):
        raise DslError("resolver sweeps need a finite universe", 0, 0)
    return ProblemSpace.over(universe)


def cmd_resolver_sweep(args) -> int:
    ws = load_workspace(args.workspace)
    resolver = _require(ws.resolvers, args.resolver, "resolver")
    space = _space_for(args, ws)
    software = tuple(args.set.split(",")) if args.set else space.universe.members
    report = range_power_report(resolver, space, software)
    result = {
        "resolver": report.resolver_id,
        "universe": list(report.universe),
        "range": list(report.range_masks),
        "power": list(report.power_masks),
    }
    emit(args, f"resolver {args.which}", "ok", result)
    return OK


def cmd_resolver_chain(args) -> int:
    ws = load_workspace(args.workspace)
    space = _space_for(args, ws)
    members = space.universe.members
    if any(len(m) != 1 for m in members):
        raise DslError("the chain needs single-character universe members", 0, 0)
    pool = tuple(args.pool.split(","))
    wider = tuple(args.wider_pool.split(",")) if args.wider_pool else members
    from .expr import Alphabet
    alphabet = Alphabet(tuple(sorted({ch for m in members for ch in m})))
    ident = identity_function(alphabet)
    rotate = machine_function("rotate", tm.substitution_machine(
        alphabet, {m: members[(i + 1) % len(members)]
                   for i, m in enumerate(members)}))
    report = evolution_chain(args.element, pool, wider, (ident,),
                             (ident, rotate), space)
    result = {
        "links": [
            {"lower": link.lower, "upper": link.upper,
             "relation": link.relation, "witness_mask": link.witness_mask}
            for link in report.links
        ],
        "relations": list(report.relations()),
    }
    emit(args, "resolver chain", "ok", result)
    return OK


def cmd_meta(args) -> int:
    ws = load_workspace(args.workspace)
    problem_name, family = _require(ws.families, args.family, "family")
    problem = ws.problems[problem_name]
    fuel = default_fuel(args.fuel)
    report = meta_report(metaproblem(problem, family, fuel))
    result = {
        "problem": report.base_label,
        "fuel": report.fuel,
        "verdicts": [
            {"member": v.label, "valid": v.valid, "fuel_caveat": v.fuel_caveat,
             "produced_size": v.produced_size}
            for v in report.verdicts
        ],
        "valid": list(report.valid_labels()),
    }
    caveated = any(v.fuel_caveat for v in report.verdicts)
    emit(args, "meta", "unknown-at-fuel" if caveated else "ok", result)
    return INCONCLUSIVE if caveated else OK


def cmd_verify(args) -> int:
    kwargs = {}
    if args.size is not None:
        kwargs["size"] = args.size
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.limit is not None:
        kwargs["max_index"] = args.limit
    if args.inject_fault:
        kwargs["inject_fault"] = True
    try:
        violations = laws.run_suite(args.suite, **kwargs)
    except KeyError:
        print(f"unknown suite {args.suite!r}; pick from "
              f"{', '.join(sorted(laws.ALL_SUITES))} or all", file=sys.stderr)
        return USAGE
    status = "ok" if not violations else "violation"
    emit(args, f"verify {args.suite}", status,
         {"suite": args.suite, "violations": violations,
          "count": len(violations)})
    return OK if not violations else VIOLATION


# ---------------------------------------------------------------------------
# argument wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="problema",
        description="problems, resolutions, machines and resolvers at desk scale")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="structured output")
        p.add_argument("--fuel", type=int, default=None,
                       help="step budget (default: PROBLEMA_FUEL or 10000)")

    p = sub.add_parser("parse", help="parse a workspace file")
    common(p)
    p.add_argument("file")
    p.set_defaults(body=cmd_parse)

    p = sub.add_parser("classify", help="classify a problem")
    common(p)
    p.add_argument("--workspace", required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--decider", default=None,
                   help="name of a workspace machine offered as decider")
    p.set_defaults(body=cmd_classify)

    tm_parser = sub.add_parser("tm", help="machine operations")
    tm_sub = tm_parser.add_subparsers(dest="tm_command", required=True)
    p = tm_sub.add_parser("run", help="run a machine on an input")
    common(p)
    p.add_argument("--machine", default=None, help="machine definition file")
    p.add_argument("--workspace", default=None)
    p.add_argument("--name", default=None, help="workspace machine name")
    p.add_argument("--input", required=True)
    p.set_defaults(body=cmd_tm_run)
    p = tm_sub.add_parser("encode", help="encode a machine as a program")
    common(p)
    p.add_argument("--machine", required=True)
    p.set_defaults(body=cmd_tm_encode)

    resolver_parser = sub.add_parser("resolver", help="resolver sweeps")
    resolver_sub = resolver_parser.add_subparsers(dest="resolver_command",
                                                  required=True)
    for which in ("range", "power"):
        p = resolver_sub.add_parser(which, help=f"compute the {which} sweep")
        common(p)
        p.add_argument("--workspace", required=True)
        p.add_argument("--resolver", required=True)
        p.add_argument("--universe", required=True)
        p.add_argument("--set", default=None,
                       help="comma-separated software set for functional rungs")
        p.set_defaults(body=cmd_resolver_sweep, which=which)
    p = resolver_sub.add_parser("chain", help="verify the range ladder")
    common(p)
    p.add_argument("--workspace", required=True)
    p.add_argument("--universe", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--pool", required=True, help="comma-separated, must contain the element")
    p.add_argument("--wider-pool", default=None,
                   help="comma-separated, defaults to the whole universe")
    p.set_defaults(body=cmd_resolver_chain)

    p = sub.add_parser("meta", help="run a metaproblem over a family")
    common(p)
    p.add_argument("--workspace", required=True)
    p.add_argument("--family", required=True)
    p.set_defaults(body=cmd_meta)

    p = sub.add_parser("verify", help="run an exhaustive law suite")
    common(p)
    p.add_argument("suite", help=f"one of {', '.join(sorted(laws.ALL_SUITES))} or all")
    p.add_argument("--size", type=int, default=None, help="universe size override")
    p.add_argument("--seed", type=int, default=None, help="sampling seed")
    p.add_argument("--limit", type=int, default=None,
                   help="index bound for the expression suite")
    p.add_argument("--inject-fault", action="store_true",
                   help="break a translator on purpose (demonstrates detection)")
    p.set_defaults(body=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.body(args)
    except DslError as exc:
        print(f"definition error: {exc}", file=sys.stderr)
        return USAGE
    except (TmFormatError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return USAGE
    except ProblemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
