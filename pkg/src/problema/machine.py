"""Transition-table machines with fuel-bounded execution.

A machine is a finite table ``(state, read) -> (next state, write, move)``
over ``alphabet.symbols`` plus the blank.  Move ``h`` performs the write and
stops.  Fuel counts executed transitions; running out of fuel yields the
``OutOfFuel`` outcome, the honest stand-in for a computation that never
halts.

The module also owns the program codec (machines as expressions), the
universal evaluator, a handful of explicit constructions (identity machine,
string-equality deciders, constant writers, symbol substitutions), and
dovetailed execution of many program/input pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import DomainError, NotAProgramError, TmFormatError
from .expr import Alphabet

MOVES = ("l", "h", "r")

#: reserved verdict symbols written on tape by decider machines
TRUE_SYMBOL = "⊤"
FALSE_SYMBOL = "⊥"

#: codec separators; they may never occur inside a machine's tape alphabet
CELL_SEP = "."
ROW_SEP = ";"

Transition = tuple[int, str, str]
TransitionKey = tuple[int, str]


@dataclass(frozen=True)
class TMachine:
    """A processor: states 0..n_states-1, a designated start state, and a
    total transition table over alphabet symbols plus the blank."""

    n_states: int
    start: int
    alphabet: Alphabet
    transitions: tuple[tuple[TransitionKey, Transition], ...]

    def __post_init__(self) -> None:
        if self.n_states < 1:
            raise DomainError("a machine needs at least one state")
        if not 0 <= self.start < self.n_states:
            raise DomainError("start state out of range")
        table = dict(self.transitions)
        expected = {
            (state, sym)
            for state in range(self.n_states)
            for sym in self.tape_symbols
        }
        if set(table) != expected or len(table) != len(self.transitions):
            raise DomainError("transition table must cover every (state, symbol) pair exactly once")
        for (state, sym), (nxt, write, move) in table.items():
            if not 0 <= nxt < self.n_states:
                raise DomainError(f"transition from ({state},{sym!r}) targets unknown state {nxt}")
            if write not in self.tape_symbols:
                raise DomainError(f"transition from ({state},{sym!r}) writes foreign symbol {write!r}")
            if move not in MOVES:
                raise DomainError(f"transition from ({state},{sym!r}) has bad move {move!r}")

    @property
    def tape_symbols(self) -> tuple[str, ...]:
        return self.alphabet.symbols + (self.alphabet.blank,)

    @property
    def table(self) -> Mapping[TransitionKey, Transition]:
        return dict(self.transitions)


def make_machine(n_states: int, start: int, alphabet: Alphabet,
                 table: Mapping[TransitionKey, Transition]) -> TMachine:
    """Build a machine from a dict table, fixing the canonical row order."""
    rows = tuple(
        ((state, sym), table[(state, sym)])
        for state in range(n_states)
        for sym in alphabet.symbols + (alphabet.blank,)
        if (state, sym) in table
    )
    if len(rows) != len(table):
        raise DomainError("table contains rows for unknown states or symbols")
    return TMachine(n_states, start, alphabet, rows)


@dataclass(frozen=True)
class Halted:
    result: str
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    steps: int


RunOutcome = Halted | OutOfFuel


@dataclass
class MachineState:
    """Mutable execution state, advanced one transition at a time."""

    machine: TMachine
    tape: dict[int, str] = field(default_factory=dict)
    head: int = 0
    state: int = 0
    steps: int = 0
    halted: bool = False

    @classmethod
    def on_input(cls, machine: TMachine, data: str) -> "MachineState":
        machine.alphabet.validate(data)
        tape = {i: ch for i, ch in enumerate(data)}
        return cls(machine=machine, tape=tape, state=machine.start)

    def step(self) -> None:
        if self.halted:
            return
        blank = self.machine.alphabet.blank
        read = self.tape.get(self.head, blank)
        nxt, write, move = self.machine.table[(self.state, read)]
        if write == blank:
            self.tape.pop(self.head, None)
        else:
            self.tape[self.head] = write
        self.state = nxt
        self.steps += 1
        if move == "h":
            self.halted = True
        else:
            self.head += 1 if move == "r" else -1

    def reading(self) -> str:
        """Tape content from leftmost to rightmost non-blank cell.  Interior
        blanks, should a machine leave them, are kept as the blank symbol."""
        if not self.tape:
            return ""
        blank = self.machine.alphabet.blank
        lo, hi = min(self.tape), max(self.tape)
        return "".join(self.tape.get(i, blank) for i in range(lo, hi + 1))


def run(machine: TMachine, data: str, fuel: int) -> RunOutcome:
    """Execute up to ``fuel`` transitions.  Deterministic; a Halted outcome
    is stable under any fuel increase."""
    if fuel < 0:
        raise DomainError("fuel must be a natural")
    state = MachineState.on_input(machine, data)
    for _ in range(fuel):
        state.step()
        if state.halted:
            return Halted(state.reading(), state.steps)
    if state.halted:  # fuel == 0 and machine already halted cannot happen
        return Halted(state.reading(), state.steps)
    return OutOfFuel(fuel)


# ---------------------------------------------------------------------------
# program codec

def _encode_int(n: int) -> str:
    return str(n)


def _parse_int(text: str) -> int:
    if not text.isdigit() or (len(text) > 1 and text[0] == "0"):
        raise NotAProgramError(f"malformed number {text!r}")
    return int(text)


def encode(machine: TMachine) -> str:
    """Serialize a machine to its program expression.

    Layout: a header row ``n_states . start . blank . symbols`` followed by
    one row per (state, symbol) pair in canonical (state, symbol) order, each
    row being ``next . write . move``.  Rows are joined by ``;`` and cells by
    ``.``; both separators are required to be outside the tape alphabet.
    """
    for sym in machine.tape_symbols:
        if sym in (CELL_SEP, ROW_SEP):
            raise DomainError(f"tape symbol {sym!r} collides with a codec separator")
    header = CELL_SEP.join(
        [_encode_int(machine.n_states), _encode_int(machine.start),
         machine.alphabet.blank, "".join(machine.alphabet.symbols)]
    )
    rows = [header]
    table = machine.table
    for state in range(machine.n_states):
        for sym in machine.tape_symbols:
            nxt, write, move = table[(state, sym)]
            rows.append(CELL_SEP.join([_encode_int(nxt), write, move]))
    return ROW_SEP.join(rows)


def decode(program: str) -> TMachine:
    """Inverse of :func:`encode`; any deviation from the canonical layout
    raises NotAProgramError."""
    rows = program.split(ROW_SEP)
    header = rows[0].split(CELL_SEP)
    if len(header) != 4:
        raise NotAProgramError("header must have four cells")
    n_states = _parse_int(header[0])
    start = _parse_int(header[1])
    blank, symbols = header[2], header[3]
    if len(blank) != 1 or not symbols:
        raise NotAProgramError("bad blank or empty alphabet")
    if len(set(symbols)) != len(symbols) or blank in symbols:
        raise NotAProgramError("bad alphabet")
    try:
        alphabet = Alphabet(tuple(symbols), blank)
    except DomainError as exc:
        raise NotAProgramError(str(exc)) from None
    tape_symbols = alphabet.symbols + (blank,)
    expected_rows = n_states * len(tape_symbols)
    if n_states < 1 or len(rows) - 1 != expected_rows:
        raise NotAProgramError("row count does not match the header")
    table: dict[TransitionKey, Transition] = {}
    index = 1
    for state in range(n_states):
        for sym in tape_symbols:
            cells = rows[index].split(CELL_SEP)
            index += 1
            if len(cells) != 3:
                raise NotAProgramError(f"row {index - 1} must have three cells")
            nxt = _parse_int(cells[0])
            write, move = cells[1], cells[2]
            if not 0 <= nxt < n_states or write not in tape_symbols or move not in MOVES:
                raise NotAProgramError(f"row {index - 1} is not a transition")
            table[(state, sym)] = (nxt, write, move)
    try:
        return make_machine(n_states, start, alphabet, table)
    except DomainError as exc:  # start out of range etc.
        raise NotAProgramError(str(exc)) from None


def is_program(expr: str) -> bool:
    try:
        decode(expr)
        return True
    except NotAProgramError:
        return False


def universal_apply(program: str, data: str, fuel: int) -> RunOutcome:
    """Evaluate ``program`` on ``data``: outcome-equivalent to running the
    decoded machine.  A non-program evaluates to itself followed by the
    data, in zero steps."""
    try:
        machine = decode(program)
    except NotAProgramError:
        return Halted(program + data, 0)
    return run(machine, data, fuel)


# ---------------------------------------------------------------------------
# explicit constructions

def identity_machine(alphabet: Alphabet) -> TMachine:
    """Halts on the first transition leaving the tape untouched."""
    table = {(0, sym): (0, sym, "h") for sym in alphabet.symbols + (alphabet.blank,)}
    return make_machine(1, 0, alphabet, table)


def never_halting_machine(alphabet: Alphabet) -> TMachine:
    """No ``h`` anywhere in the table: every input is a paradox."""
    table = {(0, sym): (0, sym, "r") for sym in alphabet.symbols + (alphabet.blank,)}
    return make_machine(1, 0, alphabet, table)


def _verdict_alphabet(alphabet: Alphabet) -> Alphabet:
    if TRUE_SYMBOL in alphabet.symbols or FALSE_SYMBOL in alphabet.symbols:
        raise DomainError("input alphabet already uses the verdict symbols")
    return Alphabet(alphabet.symbols + (TRUE_SYMBOL, FALSE_SYMBOL), alphabet.blank)


def delta_machine(target: str, alphabet: Alphabet) -> TMachine:
    """Decider for "is the input exactly ``target``?".

    For ``n = len(target)`` the machine has exactly ``n + 2`` states: state
    ``i`` (1..n) expects the i-th symbol of ``target``, state ``n+1`` expects
    the end of the input, and state 0 is a reject sweep.  Every input is
    blanked as it is scanned and the machine always halts with a single
    verdict symbol on the tape.
    """
    alphabet.validate(target)
    ext = _verdict_alphabet(alphabet)
    blank = ext.blank
    n = len(target)
    table: dict[TransitionKey, Transition] = {}
    for i in range(1, n + 1):
        expected = target[i - 1]
        for sym in ext.symbols + (blank,):
            if sym == expected:
                table[(i, sym)] = (i + 1 if i < n else n + 1, blank, "r")
            else:
                table[(i, sym)] = (0, blank, "r")
    for sym in ext.symbols + (blank,):
        if sym == blank:
            table[(n + 1, sym)] = (0, TRUE_SYMBOL, "h")
        else:
            table[(n + 1, sym)] = (0, blank, "r")
    for sym in ext.symbols + (blank,):
        if sym == blank:
            table[(0, sym)] = (0, FALSE_SYMBOL, "h")
        else:
            table[(0, sym)] = (0, blank, "r")
    return make_machine(n + 2, 1, ext, table)


def constant_machine(alphabet: Alphabet, output: str) -> TMachine:
    """Erases the input and writes ``output``; halts on every input."""
    alphabet.validate(output)
    blank = alphabet.blank
    tape_symbols = alphabet.symbols + (blank,)
    n = len(output)
    table: dict[TransitionKey, Transition] = {}
    for sym in tape_symbols:
        if sym == blank:
            if n == 0:
                table[(0, sym)] = (0, blank, "h")
            elif n == 1:
                table[(0, sym)] = (0, output[0], "h")
            else:
                table[(0, sym)] = (1, output[0], "r")
        else:
            table[(0, sym)] = (0, blank, "r")
    for j in range(1, n):
        for sym in tape_symbols:
            if j < n - 1:
                table[(j, sym)] = (j + 1, output[j], "r")
            else:
                table[(j, sym)] = (0, output[j], "h")
    n_states = 1 if n <= 1 else n
    return make_machine(n_states, 0, alphabet, table)


def append_machine(alphabet: Alphabet, symbol: str) -> TMachine:
    """Walks to the end of the input and appends one symbol."""
    alphabet.validate(symbol)
    blank = alphabet.blank
    table: dict[TransitionKey, Transition] = {}
    for sym in alphabet.symbols + (blank,):
        if sym == blank:
            table[(0, sym)] = (0, symbol, "h")
        else:
            table[(0, sym)] = (0, sym, "r")
    return make_machine(1, 0, alphabet, table)


def substitution_machine(alphabet: Alphabet, mapping: Mapping[str, str]) -> TMachine:
    """Rewrites every symbol through ``mapping`` (identity where missing)."""
    blank = alphabet.blank
    for k, v in mapping.items():
        alphabet.validate(k)
        alphabet.validate(v)
    table: dict[TransitionKey, Transition] = {}
    for sym in alphabet.symbols + (blank,):
        if sym == blank:
            table[(0, sym)] = (0, blank, "h")
        else:
            table[(0, sym)] = (0, mapping.get(sym, sym), "r")
    return make_machine(1, 0, alphabet, table)


# ---------------------------------------------------------------------------
# behavioral comparisons and halting inspection

@dataclass(frozen=True)
class Equivalent:
    pass


@dataclass(frozen=True)
class Distinguished:
    witness: str


@dataclass(frozen=True)
class Inconclusive:
    witnesses: tuple[str, ...]


EquivalenceVerdict = Equivalent | Distinguished | Inconclusive


def behaviorally_equivalent(m1: TMachine, m2: TMachine, inputs: Iterable[str],
                            fuel: int) -> EquivalenceVerdict:
    """Compare input-to-outcome behavior on the given inputs.

    A differing halted result, or one side halting while the other runs out
    of fuel, distinguishes the machines at this fuel.  Inputs on which both
    run out of fuel are reported as inconclusive.
    """
    pending: list[str] = []
    for data in inputs:
        o1, o2 = run(m1, data, fuel), run(m2, data, fuel)
        if isinstance(o1, Halted) and isinstance(o2, Halted):
            if o1.result != o2.result:
                return Distinguished(data)
        elif isinstance(o1, Halted) != isinstance(o2, Halted):
            return Distinguished(data)
        else:
            pending.append(data)
    if pending:
        return Inconclusive(tuple(pending))
    return Equivalent()


@dataclass(frozen=True)
class AllHaltedOnTested:
    tested: int


@dataclass(frozen=True)
class Suspects:
    inputs: tuple[str, ...]


TerminatingStatus = AllHaltedOnTested | Suspects


def terminating_status(machine: TMachine, inputs: Iterable[str], fuel: int) -> TerminatingStatus:
    """Fuel-relative check of "always halts" over the tested inputs only."""
    suspects = []
    tested = 0
    for data in inputs:
        tested += 1
        if isinstance(run(machine, data, fuel), OutOfFuel):
            suspects.append(data)
    if suspects:
        return Suspects(tuple(suspects))
    return AllHaltedOnTested(tested)


@dataclass(frozen=True)
class HaltsWithin:
    steps: int


@dataclass(frozen=True)
class UnknownAtFuel:
    fuel: int


HaltingVerdict = HaltsWithin | UnknownAtFuel


def halting_condition(program: str, data: str, fuel: int) -> HaltingVerdict:
    """Semidecision of "program halts on data": positive answers are
    definitive, negative ones only say nothing halted within the fuel."""
    outcome = universal_apply(program, data, fuel)
    if isinstance(outcome, Halted):
        return HaltsWithin(outcome.steps)
    return UnknownAtFuel(fuel)


# ---------------------------------------------------------------------------
# dovetailing

def dovetail(pairs: Iterable[tuple[str, str]], budget: int) -> Iterator[tuple[tuple[str, str], int]]:
    """Interleave the execution of program/input pairs.

    Round ``i`` advances each of the first ``i`` pairs by one transition;
    a pair is emitted with its exact step count the moment it halts.  The
    budget counts individual transitions across all pairs, so every pair
    halting in ``k`` steps is emitted by any budget that allots it ``k``
    steps.  Emission order is by (round, pair index), hence deterministic.
    """
    if budget < 1:
        raise DomainError("budget must be at least 1")
    pair_list = list(pairs)
    states: list[MachineState | Halted | None] = [None] * len(pair_list)
    emitted = [False] * len(pair_list)
    spent = 0
    round_no = 0
    while spent < budget and pair_list:
        round_no += 1
        active = min(round_no, len(pair_list))
        progressed = False
        for j in range(active):
            if emitted[j]:
                continue
            if states[j] is None:
                program, data = pair_list[j]
                try:
                    machine = decode(program)
                    states[j] = MachineState.on_input(machine, data)
                except NotAProgramError:
                    states[j] = Halted(program + data, 0)
            slot = states[j]
            if isinstance(slot, Halted):
                emitted[j] = True
                yield pair_list[j], slot.steps
                continue
            slot.step()
            spent += 1
            progressed = True
            if slot.halted:
                emitted[j] = True
                yield pair_list[j], slot.steps
            if spent >= budget:
                return
        if not progressed and all(emitted[:active]) and active == len(pair_list):
            return


# ---------------------------------------------------------------------------
# machine definition files

def machine_to_text(machine: TMachine) -> str:
    lines = [
        f"states {machine.n_states} start {machine.start}",
        "alphabet " + " ".join(machine.alphabet.symbols),
        f"blank {machine.alphabet.blank}",
    ]
    table = machine.table
    for state in range(machine.n_states):
        for sym in machine.tape_symbols:
            nxt, write, move = table[(state, sym)]
            lines.append(f"{state} {sym} -> {nxt} {write} {move}")
    return "\n".join(lines) + "\n"


def machine_from_text(text: str) -> TMachine:
    """Parse the machine file format: a three-line header then one
    transition per line, ``state symbol -> state' symbol' move``."""
    n_states = start = None
    alphabet_symbols: tuple[str, ...] | None = None
    blank = None
    table: dict[TransitionKey, Transition] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "states":
            if len(parts) != 4 or parts[2] != "start":
                raise TmFormatError("expected 'states N start K'", lineno)
            n_states, start = int(parts[1]), int(parts[3])
        elif parts[0] == "alphabet":
            if len(parts) < 2:
                raise TmFormatError("alphabet needs at least one symbol", lineno)
            alphabet_symbols = tuple(parts[1:])
        elif parts[0] == "blank":
            if len(parts) != 2:
                raise TmFormatError("expected 'blank SYMBOL'", lineno)
            blank = parts[1]
        else:
            if len(parts) != 6 or parts[2] != "->":
                raise TmFormatError("expected 'state symbol -> state symbol move'", lineno)
            try:
                state = int(parts[0])
                nxt = int(parts[3])
            except ValueError:
                raise TmFormatError("states are integers", lineno) from None
            if parts[5] not in MOVES:
                raise TmFormatError(f"move must be one of {MOVES}", lineno)
            key = (state, parts[1])
            if key in table:
                raise TmFormatError(f"duplicate transition for {key}", lineno)
            table[key] = (nxt, parts[4], parts[5])
    if n_states is None or alphabet_symbols is None or blank is None:
        raise TmFormatError("missing header (states / alphabet / blank)")
    try:
        alphabet = Alphabet(alphabet_symbols, blank)
        return make_machine(n_states, start, alphabet, table)
    except DomainError as exc:
        raise TmFormatError(str(exc)) from None
