"""Single-tape Turing machines: execution, the {0,1,c} wire encoding, and a universal interpreter.

Wire encoding.  States are numbered 1..|Q| in declaration order and tape
symbols 1..|Gamma| with the blank always first.  The header is
``0^|Q| 1 0^|Gamma| 1 0^i_start 1 0^i_accept 1 0^i_reject``; each transition
``(q_i, a_j) -> (q_k, a_l, D)`` is ``0^i 1 0^j 1 0^k 1 0^l 1 0^d`` with d=1 for
L and d=2 for R.  Header and transitions are joined by single ``c``s, and
``encode_pair`` appends ``ccc`` followed by the input written as ``0^j``
symbol indices separated by ``1``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

L, R = "L", "R"

Action = tuple[str, str, str]  # (next state, written symbol, move)


class TuringError(ValueError):
    pass


class InvalidInputSymbol(TuringError):
    pass


class MalformedEncoding(TuringError):
    def __init__(self, position: int, reason: str):
        super().__init__(f"malformed encoding at {position}: {reason}")
        self.position = position
        self.reason = reason


class MachineSpecError(TuringError):
    pass


@dataclass(frozen=True, eq=False)
class TuringMachine:
    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    tape_alphabet: tuple[str, ...]
    delta: Mapping[tuple[str, str], Action]
    start: str
    accept: str
    reject: str
    blank: str = "_"

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise TuringError("duplicate state")
        if len(set(self.tape_alphabet)) != len(self.tape_alphabet):
            raise TuringError("duplicate tape symbol")
        for q in (self.start, self.accept, self.reject):
            if q not in self.states:
                raise TuringError(f"state {q!r} not in Q")
        if self.blank not in self.tape_alphabet:
            raise TuringError("blank must be a tape symbol")
        if self.blank in self.input_alphabet:
            raise TuringError("blank may not be an input symbol")
        if not set(self.input_alphabet) <= set(self.tape_alphabet):
            raise TuringError("input alphabet must be contained in the tape alphabet")
        for (q, a), (q2, b, d) in self.delta.items():
            if q in (self.accept, self.reject):
                raise TuringError(f"transition out of halting state {q!r}")
            if q not in self.states or q2 not in self.states:
                raise TuringError(f"unknown state in {(q, a)} -> {(q2, b, d)}")
            if a not in self.tape_alphabet or b not in self.tape_alphabet:
                raise TuringError(f"unknown symbol in {(q, a)} -> {(q2, b, d)}")
            if d not in (L, R):
                raise TuringError(f"move must be L or R, got {d!r}")
        object.__setattr__(self, "delta", dict(self.delta))

    @property
    def single_halt(self) -> bool:
        """accept == reject opts into the one-halting-state convention with tape output."""
        return self.accept == self.reject

    def __eq__(self, other):
        if not isinstance(other, TuringMachine):
            return NotImplemented
        return (self.states, self.input_alphabet, self.tape_alphabet, self.start, self.accept,
                self.reject, self.blank) == (other.states, other.input_alphabet, other.tape_alphabet,
                                             other.start, other.accept, other.reject, other.blank) \
            and self.delta == other.delta

    def __hash__(self):
        return hash((self.states, self.tape_alphabet, self.start, frozenset(self.delta.items())))

    def halting(self, state: str) -> bool:
        return state in (self.accept, self.reject)

    @classmethod
    def parse(cls, text: str) -> "TuringMachine":
        """Parse the line format ``q,a -> q',b,D`` with ``key: value`` header lines.

        Headers: ``start``, ``accept``, ``reject``, ``blank`` (required except
        blank, default ``_``), and optional ``states``, ``input``, ``tape``
        (whitespace-separated, fixing declaration order).
        """
        header: dict[str, str] = {}
        delta: dict[tuple[str, str], Action] = {}
        seen_states: list[str] = []
        seen_symbols: list[str] = []

        def note(lst, x):
            if x not in lst:
                lst.append(x)

        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" in line:
                lhs, rhs = (part.strip() for part in line.split("->", 1))
                left = [x.strip() for x in lhs.split(",")]
                right = [x.strip() for x in rhs.split(",")]
                if len(left) != 2 or len(right) != 3 or not all(left + right):
                    raise MachineSpecError(f"line {lineno}: expected 'q,a -> q2,b,D'")
                if right[2] not in (L, R):
                    raise MachineSpecError(f"line {lineno}: move must be L or R")
                key = (left[0], left[1])
                if key in delta:
                    raise MachineSpecError(f"line {lineno}: duplicate transition for {key}")
                delta[key] = (right[0], right[1], right[2])
                note(seen_states, left[0]); note(seen_states, right[0])
                note(seen_symbols, left[1]); note(seen_symbols, right[1])
            elif ":" in line:
                k, v = (part.strip() for part in line.split(":", 1))
                header[k.lower()] = v
            else:
                raise MachineSpecError(f"line {lineno}: cannot parse {line!r}")
        for k in ("start", "accept", "reject"):
            if k not in header:
                raise MachineSpecError(f"missing header '{k}:'")
        blank = header.get("blank", "_")
        if "states" in header:
            states = header["states"].split()
        else:
            states = []
            for q in [header["start"]] + seen_states + [header["accept"], header["reject"]]:
                note(states, q)
        if "tape" in header:
            tape = header["tape"].split()
        else:
            tape = [blank]
            extra = header.get("input", "").split()
            for s in extra + seen_symbols:
                note(tape, s)
        if "input" in header:
            sigma = header["input"].split()
        else:
            sigma = [s for s in tape if s != blank]
        try:
            return cls(tuple(states), tuple(sigma), tuple(tape), delta, header["start"], header["accept"],
                       header["reject"], blank)
        except TuringError as e:
            raise MachineSpecError(str(e)) from None

    @classmethod
    def load(cls, path: str | Path) -> "TuringMachine":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def dump(self) -> str:
        lines = [f"states: {' '.join(self.states)}", f"input: {' '.join(self.input_alphabet)}",
                 f"tape: {' '.join(self.tape_alphabet)}", f"blank: {self.blank}", f"start: {self.start}",
                 f"accept: {self.accept}", f"reject: {self.reject}"]
        for (q, a), (q2, b, d) in self.delta.items():
            lines.append(f"{q},{a} -> {q2},{b},{d}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TmConfiguration:
    left: tuple[str, ...]
    state: str
    right: tuple[str, ...]

    def canonical(self, blank: str) -> "TmConfiguration":
        left = list(self.left)
        i = 0
        while i < len(left) and left[i] == blank:
            i += 1
        right = list(self.right) or [blank]
        j = len(right)
        while j > 1 and right[j - 1] == blank:
            j -= 1
        return TmConfiguration(tuple(left[i:]), self.state, tuple(right[:j]))

    @property
    def head_symbol(self) -> str:
        return self.right[0]

    def render(self, sep: str = " ") -> str:
        return f"{''.join(self.left)}{sep}{self.state}{sep}{''.join(self.right)}"

    def __str__(self):
        return self.render()


def initial_configuration(m: TuringMachine, word: Sequence[str]) -> TmConfiguration:
    return TmConfiguration((), m.start, tuple(word) or (m.blank,))


def step(m: TuringMachine, c: TmConfiguration) -> TmConfiguration | None:
    """One transition, or ``None`` when delta is undefined (the machine has halted)."""
    right = c.right or (m.blank,)
    action = m.delta.get((c.state, right[0]))
    if action is None:
        return None
    q2, b, d = action
    if d == R:
        rest = right[1:] or (m.blank,)
        return TmConfiguration(c.left + (b,), q2, rest)
    if c.left:
        return TmConfiguration(c.left[:-1], q2, (c.left[-1], b) + right[1:])
    return TmConfiguration((), q2, (m.blank, b) + right[1:])


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    HALTED = "halted"                      # single-halt convention
    HALTED_UNDEFINED = "halted_undefined"  # no transition in a non-final state
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class RunOutcome:
    verdict: Verdict
    steps_used: int
    final: TmConfiguration
    trace: tuple[TmConfiguration, ...] | None = None
    output: tuple[str, ...] | None = None

    @property
    def halted(self) -> bool:
        return self.verdict is not Verdict.TIMEOUT


def _tape_output(m: TuringMachine, c: TmConfiguration) -> tuple[str, ...]:
    out = []
    for s in c.right:
        if s == m.blank:
            break
        out.append(s)
    return tuple(out)


def run(m: TuringMachine, word: str | Sequence[str], bound: int, record_trace: bool = False) -> RunOutcome:
    word = tuple(word)
    for i, s in enumerate(word):
        if s not in m.input_alphabet:
            raise InvalidInputSymbol(f"input symbol {s!r} at {i} not in the input alphabet")
    c = initial_configuration(m, word)
    trace = [c] if record_trace else None
    steps = 0
    while True:
        if m.halting(c.state):
            if m.single_halt:
                return RunOutcome(Verdict.HALTED, steps, c, _tup(trace), _tape_output(m, c))
            verdict = Verdict.ACCEPTED if c.state == m.accept else Verdict.REJECTED
            return RunOutcome(verdict, steps, c, _tup(trace))
        nxt = step(m, c)
        if nxt is None:
            return RunOutcome(Verdict.HALTED_UNDEFINED, steps, c, _tup(trace))
        if steps >= bound:
            return RunOutcome(Verdict.TIMEOUT, steps, c, _tup(trace))
        c = nxt
        steps += 1
        if trace is not None:
            trace.append(c)


def _tup(trace):
    return tuple(trace) if trace is not None else None


# -- encoding ---------------------------------------------------------------

def _symbol_order(m: TuringMachine) -> list[str]:
    return [m.blank] + [s for s in m.tape_alphabet if s != m.blank]


def _unary(i: int) -> str:
    return "0" * i


def encode_tm(m: TuringMachine) -> str:
    qi = {q: i for i, q in enumerate(m.states, 1)}
    si = {s: i for i, s in enumerate(_symbol_order(m), 1)}
    header = "1".join(_unary(n) for n in (len(m.states), len(si), qi[m.start], qi[m.accept], qi[m.reject]))
    parts = [header]
    for (q, a), (q2, b, d) in sorted(m.delta.items(), key=lambda kv: (qi[kv[0][0]], si[kv[0][1]])):
        parts.append("1".join(_unary(n) for n in (qi[q], si[a], qi[q2], si[b], 1 if d == L else 2)))
    return "c".join(parts)


def encode_word(m: TuringMachine, word: Sequence[str]) -> str:
    si = {s: i for i, s in enumerate(_symbol_order(m), 1)}
    try:
        return "1".join(_unary(si[s]) for s in word)
    except KeyError as e:
        raise InvalidInputSymbol(f"{e.args[0]!r} is not a tape symbol") from None


def encode_pair(m: TuringMachine, word: Sequence[str]) -> str:
    return encode_tm(m) + "ccc" + encode_word(m, word)


DEFAULT_SYMBOL_NAMES = ("_", "0", "1", "c")


def symbol_names(count: int, names: Sequence[str] = DEFAULT_SYMBOL_NAMES) -> tuple[str, ...]:
    """Names for decoded symbol indices 1..count: the given names, then ``s5``, ``s6``, ..."""
    return tuple(names[i] if i < len(names) else f"s{i + 1}" for i in range(count))


def _fields(segment: str, offset: int, expected: int) -> list[int]:
    if not re.fullmatch(r"0+(10+)*", segment):
        raise MalformedEncoding(offset, f"segment {segment[:20]!r} is not 1-separated unary fields")
    values = [len(f) for f in segment.split("1")]
    if len(values) != expected:
        raise MalformedEncoding(offset, f"expected {expected} fields, found {len(values)}")
    return values


def decode_tm(s: str, names: Sequence[str] = DEFAULT_SYMBOL_NAMES) -> TuringMachine:
    """Inverse of :func:`encode_tm`; states come back as ``q1..qn`` and symbols as ``names``."""
    bad = re.search(r"[^01c]", s)
    if bad:
        raise MalformedEncoding(bad.start(), f"character {bad.group()!r} outside {{0,1,c}}")
    run_ = re.search(r"cc+", s)
    if run_:
        raise MalformedEncoding(run_.start(), f"separator run of {len(run_.group())} c's inside a machine")
    segments = s.split("c")
    offsets = []
    pos = 0
    for seg in segments:
        offsets.append(pos)
        pos += len(seg) + 1
    nq, ng, i0, iacc, irej = _fields(segments[0], 0, 5)
    if nq < 2:
        raise MalformedEncoding(0, "a machine needs at least two states")
    for i in (i0, iacc, irej):
        if i > nq:
            raise MalformedEncoding(0, f"state index {i} exceeds |Q|={nq}")
    states = tuple(f"q{i}" for i in range(1, nq + 1))
    symbols = symbol_names(ng, names)
    delta: dict[tuple[str, str], Action] = {}
    for seg, off in zip(segments[1:], offsets[1:]):
        q, a, q2, b, d = _fields(seg, off, 5)
        if q > nq or q2 > nq or a > ng or b > ng:
            raise MalformedEncoding(off, "index out of range")
        if d not in (1, 2):
            raise MalformedEncoding(off, f"move code {d} is neither 1 (L) nor 2 (R)")
        key = (states[q - 1], symbols[a - 1])
        if key in delta:
            raise MalformedEncoding(off, f"duplicate transition for {key}")
        delta[key] = (states[q2 - 1], symbols[b - 1], L if d == 1 else R)
    try:
        return TuringMachine(states, symbols[1:], symbols, delta, states[i0 - 1], states[iacc - 1],
                             states[irej - 1], symbols[0])
    except TuringError as e:
        raise MalformedEncoding(0, str(e)) from None


def decode_word(m: TuringMachine, s: str, offset: int = 0) -> tuple[str, ...]:
    if s == "":
        return ()
    if not re.fullmatch(r"0+(10+)*", s):
        raise MalformedEncoding(offset, "input is not 1-separated unary symbol indices")
    order = _symbol_order(m)
    out = []
    for f in s.split("1"):
        if len(f) > len(order):
            raise MalformedEncoding(offset, f"symbol index {len(f)} exceeds |Gamma|={len(order)}")
        out.append(order[len(f) - 1])
    return tuple(out)


def split_pair(s: str, names: Sequence[str] = DEFAULT_SYMBOL_NAMES) -> tuple[TuringMachine, tuple[str, ...]]:
    i = s.find("ccc")
    if i < 0:
        raise MalformedEncoding(len(s), "no 'ccc' separator between machine and input")
    m = decode_tm(s[:i], names)
    word = s[i + 3:]
    if "c" in word:
        raise MalformedEncoding(i + 3 + word.index("c"), "'c' inside the encoded input")
    return m, decode_word(m, word, i + 3)


def universal_run(enc: str, bound: int, record_trace: bool = False) -> RunOutcome:
    """Decode ``[M, w]`` and interpret M on w; a Timeout is an honest 'unknown'."""
    m, word = split_pair(enc)
    return run(m, word, bound, record_trace)


def isomorphic(a: TuringMachine, b: TuringMachine) -> bool:
    """Equal up to renaming states and symbols, matching by declaration order (blank first)."""
    if len(a.states) != len(b.states) or len(a.tape_alphabet) != len(b.tape_alphabet):
        return False
    qmap = dict(zip(a.states, b.states))
    smap = dict(zip(_symbol_order(a), _symbol_order(b)))
    if (qmap[a.start], qmap[a.accept], qmap[a.reject]) != (b.start, b.accept, b.reject):
        return False
    mapped = {(qmap[q], smap[s]): (qmap[q2], smap[t], d) for (q, s), (q2, t, d) in a.delta.items()}
    return mapped == dict(b.delta)


def machine(transitions: Iterable[str], *, start="q0", accept="qa", reject="qr", blank="_",
            input_alphabet: Sequence[str] | None = None, tape: Sequence[str] | None = None,
            states: Sequence[str] | None = None) -> TuringMachine:
    """Convenience constructor from ``"q,a -> q2,b,D"`` lines."""
    head = [f"start: {start}", f"accept: {accept}", f"reject: {reject}", f"blank: {blank}"]
    if input_alphabet is not None:
        head.append(f"input: {' '.join(input_alphabet)}")
    if tape is not None:
        head.append(f"tape: {' '.join(tape)}")
    if states is not None:
        head.append(f"states: {' '.join(states)}")
    return TuringMachine.parse("\n".join(head + list(transitions)))
