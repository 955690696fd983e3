"""Parser for the declarative workspace format (.pt files).

A workspace file is a sequence of newline-separated statements declaring
universes, problems, machines, resolvers and candidate families.  Example::

    universe U = 0..10
    problem p over U = x ? 2*x == x*x
    problem q over U = x ? 2*x == x*x and x > 2
    machine ident from "identity.tm"
    resolver m = mechanism(1)
    resolver a = adapter({0, 1})
    family F for p = { right: routine({0, 2}), all: exhaustive }

Predicates support integer arithmetic (+, * or ·) and comparisons (==, =,
<, >), string equality against quoted literals, membership ``x in {…}`` and
the combinators and/&&/∧, or/||/∨, not/!/¬.  Parse errors carry line and
column; name errors name the clash or the dangling reference.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import machine as tm
from .errors import ProblemaError, TmFormatError
from .expr import Alphabet, EnumeratedUniverse, FiniteUniverse, Universe
from .problem import NativeCondition, Problem
from .resolution import CandidateFamily, Resolution, Routine, Trial
from .resolver import (Adapter, ElementFunction, Learner, Mechanism,
                       Perceiver, Resolver, Subject, identity_function,
                       machine_function)


class DslError(ProblemaError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Workspace:
    universes: dict[str, Universe] = field(default_factory=dict)
    problems: dict[str, Problem] = field(default_factory=dict)
    machines: dict[str, tm.TMachine] = field(default_factory=dict)
    resolvers: dict[str, Resolver] = field(default_factory=dict)
    families: dict[str, tuple[str, CandidateFamily]] = field(default_factory=dict)
    problem_universes: dict[str, str] = field(default_factory=dict)


TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>"[^"\n]*")
  | (?P<op>\.\.|==|&&|\|\||->|[∧∨¬·{}(),=<>?*+!:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, line: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos + 1)
        pos = m.end()
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        tokens.append(Token(kind, m.group(), line, m.start() + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], line: int):
        self.tokens = tokens
        self.line = line
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        token = self.peek()
        if token is None:
            raise DslError("unexpected end of statement", self.line,
                           self.tokens[-1].column if self.tokens else 1)
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.next()
        if token.text != text:
            raise DslError(f"expected {text!r}, found {token.text!r}",
                           token.line, token.column)
        return token

    def expect_kind(self, kind: str) -> Token:
        token = self.next()
        if token.kind != kind:
            raise DslError(f"expected a {kind}, found {token.text!r}",
                           token.line, token.column)
        return token

    def done(self) -> None:
        token = self.peek()
        if token is not None:
            raise DslError(f"trailing input {token.text!r}", token.line, token.column)


# ---------------------------------------------------------------------------
# predicate expressions

AND_TOKENS = {"and", "&&", "∧"}
OR_TOKENS = {"or", "||", "∨"}
NOT_TOKENS = {"not", "!", "¬"}


@dataclass(frozen=True)
class Predicate:
    fn: Callable[[str], bool]
    text: str


def parse_predicate(stream: TokenStream, var: str) -> Predicate:
    pred = _parse_or(stream, var)
    return pred


def _parse_or(stream: TokenStream, var: str) -> Predicate:
    left = _parse_and(stream, var)
    while (token := stream.peek()) is not None and token.text in OR_TOKENS:
        stream.next()
        right = _parse_and(stream, var)
        lf, rf = left.fn, right.fn
        left = Predicate(lambda x, lf=lf, rf=rf: lf(x) or rf(x),
                         f"({left.text} ∨ {right.text})")
    return left


def _parse_and(stream: TokenStream, var: str) -> Predicate:
    left = _parse_not(stream, var)
    while (token := stream.peek()) is not None and token.text in AND_TOKENS:
        stream.next()
        right = _parse_not(stream, var)
        lf, rf = left.fn, right.fn
        left = Predicate(lambda x, lf=lf, rf=rf: lf(x) and rf(x),
                         f"({left.text} ∧ {right.text})")
    return left


def _parse_not(stream: TokenStream, var: str) -> Predicate:
    token = stream.peek()
    if token is not None and token.text in NOT_TOKENS:
        stream.next()
        inner = _parse_not(stream, var)
        return Predicate(lambda x, f=inner.fn: not f(x), f"¬{inner.text}")
    return _parse_atom(stream, var)


def _parse_atom(stream: TokenStream, var: str) -> Predicate:
    token = stream.peek()
    if token is None:
        raise DslError("expected a predicate", stream.line, 1)
    if token.text == "(":
        # could be a parenthesized predicate or a parenthesized arithmetic
        # term; try the predicate reading first
        saved = stream.pos
        stream.next()
        try:
            inner = _parse_or(stream, var)
            stream.expect(")")
            return inner
        except DslError:
            stream.pos = saved
    return _parse_comparison(stream, var)


def _parse_comparison(stream: TokenStream, var: str) -> Predicate:
    left_token = stream.peek()
    left = _parse_sum(stream, var)
    op_token = stream.next()
    if op_token.text == "in":
        stream.expect("{")
        literals = _parse_atom_list(stream)
        stream.expect("}")
        values = frozenset(literals)
        lf = left.fn
        return Predicate(lambda x, lf=lf: str(lf(x)) in values,
                         f"{left.text} ∈ {{{', '.join(sorted(values))}}}")
    if op_token.text not in ("==", "=", "<", ">"):
        raise DslError(f"expected a comparison, found {op_token.text!r}",
                       op_token.line, op_token.column)
    right = _parse_sum(stream, var)
    lf, rf = left.fn, right.fn
    if op_token.text in ("==", "="):
        fn = lambda x, lf=lf, rf=rf: _compare_equal(lf(x), rf(x))
        text = f"{left.text} = {right.text}"
    elif op_token.text == "<":
        fn = lambda x, lf=lf, rf=rf: _as_int(lf(x), left_token) < _as_int(rf(x), left_token)
        text = f"{left.text} < {right.text}"
    else:
        fn = lambda x, lf=lf, rf=rf: _as_int(lf(x), left_token) > _as_int(rf(x), left_token)
        text = f"{left.text} > {right.text}"
    return Predicate(fn, text)


def _compare_equal(a, b) -> bool:
    if isinstance(a, str) or isinstance(b, str):
        return str(a) == str(b)
    return a == b


def _as_int(value, token: Token | None):
    if isinstance(value, int):
        return value
    try:
        return int(value)
    except (TypeError, ValueError):
        where = (token.line, token.column) if token else (0, 0)
        raise DslError(f"{value!r} is not numeric", *where) from None


@dataclass(frozen=True)
class Term:
    fn: Callable[[str], object]
    text: str


def _parse_sum(stream: TokenStream, var: str) -> Term:
    left = _parse_product(stream, var)
    while (token := stream.peek()) is not None and token.text == "+":
        stream.next()
        right = _parse_product(stream, var)
        lf, rf = left.fn, right.fn
        left = Term(lambda x, lf=lf, rf=rf: _as_int(lf(x), token) + _as_int(rf(x), token),
                    f"{left.text} + {right.text}")
    return left


def _parse_product(stream: TokenStream, var: str) -> Term:
    left = _parse_factor(stream, var)
    while (token := stream.peek()) is not None and token.text in ("*", "·"):
        stream.next()
        right = _parse_factor(stream, var)
        lf, rf = left.fn, right.fn
        left = Term(lambda x, lf=lf, rf=rf: _as_int(lf(x), token) * _as_int(rf(x), token),
                    f"{left.text}·{right.text}")
    return left


def _parse_factor(stream: TokenStream, var: str) -> Term:
    token = stream.next()
    if token.kind == "number":
        value = int(token.text)
        return Term(lambda x, v=value: v, token.text)
    if token.kind == "string":
        value = token.text[1:-1]
        return Term(lambda x, v=value: v, token.text)
    if token.kind == "name":
        if token.text != var:
            raise DslError(f"unknown variable {token.text!r} (the bound one is {var!r})",
                           token.line, token.column)
        return Term(lambda x: x, var)
    if token.text == "(":
        inner = _parse_sum(stream, var)
        stream.expect(")")
        return inner
    raise DslError(f"expected a value, found {token.text!r}", token.line, token.column)


def _parse_atom_list(stream: TokenStream) -> list[str]:
    items: list[str] = []
    while True:
        token = stream.peek()
        if token is None or token.text == "}":
            return items
        if items:
            stream.expect(",")
        token = stream.next()
        if token.kind == "string":
            items.append(token.text[1:-1])
        elif token.kind in ("number", "name"):
            items.append(token.text)
        else:
            raise DslError(f"expected a member, found {token.text!r}",
                           token.line, token.column)


# ---------------------------------------------------------------------------
# statements

def parse(text: str, base_dir: Path | None = None) -> Workspace:
    """Parse a workspace definition; diagnostics carry line and column."""
    ws = Workspace()
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i]
        line_no = i + 1
        stripped = raw.strip()
        i += 1
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("machine") and stripped.endswith("{"):
            block: list[str] = []
            while i < len(lines) and lines[i].strip() != "}":
                block.append(lines[i])
                i += 1
            if i >= len(lines):
                raise DslError("unterminated machine block", line_no)
            i += 1  # consume the closing brace
            _parse_machine_block(ws, stripped, block, line_no)
            continue
        stream = TokenStream(tokenize(raw, line_no), line_no)
        keyword = stream.expect_kind("name").text
        if keyword == "universe":
            _parse_universe(ws, stream)
        elif keyword == "problem":
            _parse_problem(ws, stream)
        elif keyword == "machine":
            _parse_machine_file(ws, stream, base_dir)
        elif keyword == "resolver":
            _parse_resolver(ws, stream)
        elif keyword == "family":
            _parse_family(ws, stream)
        else:
            raise DslError(f"unknown statement {keyword!r}", line_no, 1)
    return ws


def _declare(ws_dict: dict, name: str, value, kind: str, token: Token) -> None:
    if name in ws_dict:
        raise DslError(f"duplicate {kind} name {name!r}", token.line, token.column)
    ws_dict[name] = value


def _parse_universe(ws: Workspace, stream: TokenStream) -> None:
    name_token = stream.expect_kind("name")
    stream.expect("=")
    token = stream.next()
    if token.kind == "number" and stream.peek() and stream.peek().text == "..":
        stream.expect("..")
        hi = stream.expect_kind("number")
        universe: Universe = FiniteUniverse(
            tuple(str(v) for v in range(int(token.text), int(hi.text) + 1)))
    elif token.text == "{":
        items = _parse_atom_list(stream)
        stream.expect("}")
        universe = FiniteUniverse(tuple(items))
    elif token.text == "alphabet":
        stream.expect("(")
        symbols = []
        while stream.peek() and stream.peek().text != ")":
            if symbols:
                stream.expect(",")
            symbols.append(stream.next().text)
        stream.expect(")")
        cap = None
        if stream.peek() and stream.peek().text == "cap":
            stream.next()
            cap = int(stream.expect_kind("number").text)
        universe = EnumeratedUniverse(Alphabet(tuple(symbols)), cap)
    else:
        raise DslError(f"expected a universe form, found {token.text!r}",
                       token.line, token.column)
    stream.done()
    _declare(ws.universes, name_token.text, universe, "universe", name_token)


def _parse_problem(ws: Workspace, stream: TokenStream) -> None:
    name_token = stream.expect_kind("name")
    stream.expect("over")
    universe_token = stream.expect_kind("name")
    if universe_token.text not in ws.universes:
        raise DslError(f"unknown universe {universe_token.text!r}",
                       universe_token.line, universe_token.column)
    stream.expect("=")
    var_token = stream.expect_kind("name")
    stream.expect("?")
    predicate = parse_predicate(stream, var_token.text)
    stream.done()
    problem = Problem(ws.universes[universe_token.text],
                      NativeCondition(predicate.fn, predicate.text),
                      label=f"{var_token.text} ? {predicate.text}")
    _declare(ws.problems, name_token.text, problem, "problem", name_token)
    ws.problem_universes[name_token.text] = universe_token.text


def _parse_machine_file(ws: Workspace, stream: TokenStream, base_dir: Path | None) -> None:
    name_token = stream.expect_kind("name")
    stream.expect("from")
    path_token = stream.expect_kind("string")
    stream.done()
    path = Path(path_token.text[1:-1])
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    try:
        machine = tm.machine_from_text(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DslError(f"machine file {path} not found",
                       path_token.line, path_token.column) from None
    except TmFormatError as exc:
        raise DslError(f"bad machine file {path}: {exc}",
                       path_token.line, path_token.column) from None
    _declare(ws.machines, name_token.text, machine, "machine", name_token)


def _parse_machine_block(ws: Workspace, header: str, block: list[str],
                         line_no: int) -> None:
    stream = TokenStream(tokenize(header[:-1], line_no), line_no)
    stream.expect("machine")
    name_token = stream.expect_kind("name")
    stream.done()
    try:
        machine = tm.machine_from_text("\n".join(block))
    except TmFormatError as exc:
        offset = exc.line if exc.line else 0
        raise DslError(f"bad machine block: {exc}", line_no + offset) from None
    _declare(ws.machines, name_token.text, machine, "machine", name_token)


def _parse_function_ref(ws: Workspace, stream: TokenStream) -> ElementFunction:
    token = stream.next()
    if token.text == "identity":
        return identity_function()
    if token.text == "machine":
        ref = stream.expect_kind("name")
        if ref.text not in ws.machines:
            raise DslError(f"unknown machine {ref.text!r}", ref.line, ref.column)
        return machine_function(ref.text, ws.machines[ref.text])
    if token.text == "const":
        stream.expect("(")
        value = stream.next().text
        stream.expect(")")
        return ElementFunction(f"const-{value}", fn=lambda x, v=value: v)
    raise DslError(f"expected a function reference, found {token.text!r}",
                   token.line, token.column)


def _parse_resolver(ws: Workspace, stream: TokenStream) -> None:
    name_token = stream.expect_kind("name")
    stream.expect("=")
    kind_token = stream.expect_kind("name")
    kind = kind_token.text
    stream.expect("(")
    resolver: Resolver
    if kind == "mechanism":
        value = stream.next().text
        resolver = Mechanism(value)
    elif kind == "adapter":
        stream.expect("{")
        items = _parse_atom_list(stream)
        stream.expect("}")
        resolver = Adapter(tuple(items))
    elif kind == "perceiver":
        resolver = Perceiver(_parse_function_ref(ws, stream))
    elif kind in ("learner", "subject"):
        functions = [_parse_function_ref(ws, stream)]
        while stream.peek() and stream.peek().text == ",":
            stream.next()
            functions.append(_parse_function_ref(ws, stream))
        resolver = (Learner(tuple(functions)) if kind == "learner"
                    else Subject(tuple(functions)))
    else:
        raise DslError(f"unknown resolver kind {kind!r}",
                       kind_token.line, kind_token.column)
    stream.expect(")")
    stream.done()
    _declare(ws.resolvers, name_token.text, resolver, "resolver", name_token)


def _parse_family(ws: Workspace, stream: TokenStream) -> None:
    name_token = stream.expect_kind("name")
    stream.expect("for")
    problem_token = stream.expect_kind("name")
    if problem_token.text not in ws.problems:
        raise DslError(f"unknown problem {problem_token.text!r}",
                       problem_token.line, problem_token.column)
    problem = ws.problems[problem_token.text]
    stream.expect("=")
    stream.expect("{")
    members: list[tuple[str, Resolution]] = []
    while True:
        token = stream.peek()
        if token is None:
            raise DslError("unterminated family", stream.line, 1)
        if token.text == "}":
            stream.next()
            break
        if members:
            stream.expect(",")
        label = stream.expect_kind("name").text
        stream.expect(":")
        members.append((label, _parse_resolution(ws, stream, problem)))
    stream.done()
    _declare(ws.families, name_token.text,
             (problem_token.text, CandidateFamily(tuple(members))),
             "family", name_token)


def _parse_resolution(ws: Workspace, stream: TokenStream, problem: Problem) -> Resolution:
    token = stream.next()
    if token.text == "routine":
        stream.expect("(")
        stream.expect("{")
        items = _parse_atom_list(stream)
        stream.expect("}")
        stream.expect(")")
        return Routine(tuple(items))
    if token.text == "trial":
        stream.expect("(")
        stream.expect("{")
        items = _parse_atom_list(stream)
        stream.expect("}")
        stream.expect(")")
        return Trial(tuple(items))
    if token.text == "exhaustive":
        universe = problem.universe
        if not isinstance(universe, FiniteUniverse):
            raise DslError("exhaustive trials need a finite universe",
                           token.line, token.column)
        return Trial(universe.members)
    raise DslError(f"unknown resolution form {token.text!r}",
                   token.line, token.column)


def parse_file(path: Path) -> Workspace:
    return parse(path.read_text(encoding="utf-8"), base_dir=path.parent)
