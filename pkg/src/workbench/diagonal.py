"""Runnable diagonal arguments: decision tables, inverters, and refutations of candidate deciders.

Undecidability itself cannot be executed.  What can be executed is, for any
concrete candidate decider p that always answers:

* the inverter V built from p, run on its own encoding, which by construction
  does the opposite of what p predicts for it; and
* for time-bounded candidates, an ordinary machine that halts one step after
  the candidate gives up.

Subjects.  Everything that can sit in a row of a decision table is a
*subject*: it has a wire encoding over {0,1,c} and a bounded ``run`` on input
words over {0,1,c}.  Turing machines use the machine encoding (which never
contains ``cc``); other subjects are tagged ``cc`` followed by the bits of a
UTF-8 descriptor.  The pair ``[M, w]`` is ``[M] ccc`` followed by ``w`` with
its symbols written as 1-separated unary indices (0 -> ``00``, 1 -> ``000``,
c -> ``0000``), the same layout the universal interpreter reads.

Cost model.  Steps are the currency of every budget.  A machine step costs 1.
A decider query costs one step plus whatever simulation it performs.  The
inverter spends ``len(w)`` steps forming ``[w, w]`` and one step acting on
the answer.  Nested runs receive what is left of their caller's budget, so a
subject simulating a copy of itself always terminates.
"""
from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterator, Mapping, Protocol, Sequence

from . import machines
from .ca.core import CaVerdict, Periodic, eca_from_wolfram_code, run_until
from .ca.termination import Polarity, TerminationCondition, fixed_point, limit_cycle, spatial, swap_all
from .godel import SymbolTable, diag, encode_substituted, goedel_encode, as_symbols
from .turing import (DEFAULT_SYMBOL_NAMES, L, MalformedEncoding, R, TuringMachine, decode_tm,
                     encode_tm, initial_configuration, step as tm_step)


class DiagonalError(ValueError):
    pass


class ObservationInconclusive(DiagonalError):
    pass


class Answer(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"

    def inverted(self) -> "Answer":
        return Answer.REJECT if self is Answer.ACCEPT else Answer.ACCEPT


class Outcome(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class Observation:
    outcome: Outcome
    steps: int
    certified_loop: bool = False     # a repeated configuration proves the run never halts


# -- wire formats -------------------------------------------------------------

_INDEX = {s: i for i, s in enumerate(DEFAULT_SYMBOL_NAMES, 1)}
_NAME = {i: s for s, i in _INDEX.items()}
TAG = "cc"


def encode_input(word: str) -> str:
    for i, s in enumerate(word):
        if s not in "01c":
            raise DiagonalError(f"input symbol {s!r} at {i} is not in {{0,1,c}}")
    return "1".join("0" * _INDEX[s] for s in word)


def decode_input(s: str) -> str:
    if s == "":
        return ""
    out = []
    for pos, f in enumerate(s.split("1")):
        if f.strip("0") or not 2 <= len(f) <= 4:
            raise MalformedEncoding(pos, "input is not 1-separated unary indices of 0, 1, c")
        out.append(_NAME[len(f)])
    return "".join(out)


def make_pair(machine_encoding: str, word: str) -> str:
    return machine_encoding + "ccc" + encode_input(word)


def split_pair(pair: str) -> tuple[str, str]:
    i = pair.find("ccc", len(TAG) if pair.startswith(TAG) else 0)
    if i < 0:
        raise MalformedEncoding(len(pair), "no 'ccc' between machine and input")
    return pair[:i], decode_input(pair[i + 3:])


def tag(descriptor: str) -> str:
    return TAG + "".join(f"{b:08b}" for b in descriptor.encode("utf-8"))


def untag(encoding: str) -> str:
    bits = encoding[len(TAG):]
    if not encoding.startswith(TAG) or len(bits) % 8 or set(bits) - {"0", "1"}:
        raise MalformedEncoding(0, "not a tagged subject encoding")
    try:
        return bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8)).decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedEncoding(0, "tag is not UTF-8") from None


# -- subjects -----------------------------------------------------------------

class Subject(Protocol):
    encoding: str
    label: str

    def run(self, word: str, budget: int) -> Observation: ...


class TmSubject:
    """A machine whose behaviour is, by definition, that of its decoded wire form."""

    def __init__(self, m: TuringMachine | str, label: str | None = None):
        self.encoding = m if isinstance(m, str) else encode_tm(m)
        self.machine = decode_tm(self.encoding)
        self.label = label or "tm"

    def run(self, word: str, budget: int) -> Observation:
        m = self.machine
        if any(s not in m.input_alphabet for s in word):
            return Observation(Outcome.REJECT, 0)     # the machine cannot even read this input
        c = initial_configuration(m, tuple(word))
        seen = {c.canonical(m.blank)}
        for t in range(budget + 1):
            if m.halting(c.state):
                return Observation(Outcome.REJECT if c.state == m.reject and not m.single_halt
                                   else Outcome.ACCEPT, t)
            nxt = tm_step(m, c)
            if nxt is None:
                return Observation(Outcome.REJECT, t)
            if t == budget:
                break
            c = nxt
            key = c.canonical(m.blank)
            if key in seen:
                return Observation(Outcome.TIMEOUT, budget, certified_loop=True)
            seen.add(key)
        return Observation(Outcome.TIMEOUT, budget)


CA_PRESETS = {"fp": lambda: (fixed_point(0, 1),), "cycle": lambda: (limit_cycle(0, 1),)}


class CaSubject:
    """An elementary rule run on a ring holding the encoded input, with preset termination."""

    def __init__(self, code: int, preset: str = "cycle", min_ring: int = 8):
        if preset not in CA_PRESETS:
            raise DiagonalError(f"unknown termination preset {preset!r}")
        self.code, self.preset, self.min_ring = code, preset, min_ring
        self.automaton = eca_from_wolfram_code(code)
        self.termination = CA_PRESETS[preset]()
        self.encoding = tag(f"eca;{code};{preset};{min_ring}")
        self.label = f"rule {code}"

    def ring(self, word: str) -> Periodic:
        bits = encode_input(word)
        return Periodic.from_bits(bits + "0" * max(0, self.min_ring - len(bits)))

    def run(self, word: str, budget: int) -> Observation:
        out = run_until(self.automaton, self.ring(word), budget, termination=self.termination)
        return Observation({CaVerdict.ACCEPTED: Outcome.ACCEPT, CaVerdict.REJECTED: Outcome.REJECT,
                            CaVerdict.TIMEOUT: Outcome.TIMEOUT}[out.verdict], out.steps)


_REGISTRY: dict[str, object] = {}


def decode_subject(encoding: str) -> Subject:
    if encoding in _REGISTRY:
        return _REGISTRY[encoding]
    if not encoding.startswith(TAG):
        return TmSubject(encoding)
    parts = untag(encoding).split(";")
    if parts[0] == "eca" and len(parts) == 4:
        return CaSubject(int(parts[1]), parts[2], int(parts[3]))
    if parts[0] == "inv" and len(parts) == 3 and parts[2].startswith("timeout:"):
        return Inverter(TimeoutDecider(int(parts[2].split(":", 1)[1])), parts[1])
    raise MalformedEncoding(0, f"unknown subject descriptor {';'.join(parts)!r}")


# -- candidate deciders -------------------------------------------------------

class Decider(Protocol):
    concurrent_safe: bool

    def describe(self) -> str: ...

    def decide(self, pair: str, budget: int | None = None) -> tuple[Answer, int] | None:
        """``(answer, cost)``, or None when ``budget`` runs out first."""


@dataclass(frozen=True)
class TimeoutDecider:
    """Answers Accept iff the subject accepts within ``k`` steps."""
    k: int
    concurrent_safe: bool = True

    def describe(self) -> str:
        return f"timeout:{self.k}"

    def decide(self, pair, budget=None):
        if budget is not None and budget < 1:
            return None
        try:
            enc, word = split_pair(pair)
            subject = decode_subject(enc)
        except (MalformedEncoding, DiagonalError):
            return Answer.REJECT, 1
        limit = self.k if budget is None else min(self.k, budget - 1)
        obs = subject.run(word, limit)
        if obs.outcome is Outcome.TIMEOUT and limit < self.k:
            return None
        return (Answer.ACCEPT if obs.outcome is Outcome.ACCEPT else Answer.REJECT), obs.steps + 1


@dataclass(frozen=True)
class TableDecider:
    """A finite lookup of pair encodings; anything else gets ``default``."""
    entries: Mapping[str, Answer]
    default: Answer = Answer.REJECT
    concurrent_safe: bool = True

    def describe(self) -> str:
        blob = json.dumps(sorted((k, v.value) for k, v in self.entries.items()) + [self.default.value])
        return "table:" + hashlib.sha256(blob.encode()).hexdigest()[:16]

    def decide(self, pair, budget=None):
        if budget is not None and budget < 1:
            return None
        return self.entries.get(pair, self.default), 1


@dataclass(frozen=True)
class External:
    """A caller-supplied ``(machine encoding, input word) -> Answer`` that must always answer."""
    callback: Callable[[str, str], Answer]
    name: str = "external"
    concurrent_safe: bool = False

    def describe(self) -> str:
        return f"external:{self.name}"

    def decide(self, pair, budget=None):
        if budget is not None and budget < 1:
            return None
        enc, word = split_pair(pair)
        ans = self.callback(enc, word)
        if not isinstance(ans, Answer):
            raise DiagonalError(f"candidate returned {ans!r}, not an Answer")
        return ans, 1


def parse_candidate(text: str) -> Decider:
    kind, _, arg = text.partition(":")
    if kind == "timeout":
        return TimeoutDecider(int(arg))
    if kind in ("always-accept", "always-reject"):
        return TableDecider({}, Answer.ACCEPT if kind == "always-accept" else Answer.REJECT)
    raise DiagonalError(f"unknown candidate {text!r} (try timeout:K, always-accept, always-reject)")


# -- the inverter -------------------------------------------------------------

# F+ and F- oscillator signatures designating the two attractor classes
F_PLUS = "01101001101000"
F_MINUS = "10010110010111"
READOUT_RULE = 204        # identity: the signature placed on the ring stays put


def decider_termination() -> tuple[TerminationCondition, ...]:
    """The termination condition of the simulation the inverter reads p's answer from."""
    return (spatial(F_PLUS, Polarity.ACCEPT), spatial(F_MINUS, Polarity.REJECT))


def readout_ring(answer: Answer) -> Periodic:
    return Periodic.from_bits((F_PLUS if answer is Answer.ACCEPT else F_MINUS) + ("00" if answer is Answer.ACCEPT else "11"))


class Inverter:
    """V: on input w, ask p about ``[w, w]`` and do the opposite.

    TM mode: Accept is answered by entering a two-state spin loop whose
    repeated configuration certifies non-halting; Reject by accepting.
    CA mode: the rule and the configuration are untouched and only the
    termination polarity is swapped, so the attractor p calls accepted is
    designated rejected and vice versa.
    """

    def __init__(self, decider: Decider, framework: str = "tm"):
        if framework not in ("tm", "ca"):
            raise DiagonalError("framework is 'tm' or 'ca'")
        self.decider, self.framework = decider, framework
        self.encoding = tag(f"inv;{framework};{decider.describe()}")
        self.label = f"V[{decider.describe()}]"
        self.readout = eca_from_wolfram_code(READOUT_RULE)
        self.termination = swap_all(decider_termination())
        _REGISTRY.setdefault(self.encoding, self)

    def action(self, answer: Answer) -> str:
        if self.framework == "tm":
            return "loop" if answer is Answer.ACCEPT else "accept"
        return "reject" if answer is Answer.ACCEPT else "accept"

    def run(self, word: str, budget: int) -> Observation:
        overhead = len(word)
        if budget < overhead:
            return Observation(Outcome.TIMEOUT, budget)
        try:
            pair = make_pair(word, word)
        except DiagonalError:
            return Observation(Outcome.REJECT, overhead)
        res = self.decider.decide(pair, budget - overhead)
        if res is None:
            return Observation(Outcome.TIMEOUT, budget)
        answer, cost = res
        used = overhead + cost
        if used + 1 > budget:
            return Observation(Outcome.TIMEOUT, budget)
        if self.framework == "tm":
            if answer is Answer.ACCEPT:
                gadget = TmSubject(machines.spin(), "spin").run("", budget - used)
                return Observation(Outcome.TIMEOUT, budget, certified_loop=gadget.certified_loop)
            return Observation(Outcome.ACCEPT, used + 1)
        out = run_until(self.readout, readout_ring(answer), budget - used - 1, termination=self.termination)
        if out.verdict is CaVerdict.TIMEOUT:
            return Observation(Outcome.TIMEOUT, budget)
        return Observation(Outcome.ACCEPT if out.verdict is CaVerdict.ACCEPTED else Outcome.REJECT,
                           used + 1 + out.steps)


def construct_inverter(p: Decider, framework: str = "tm") -> Inverter:
    return Inverter(p, framework)


# -- refutation ---------------------------------------------------------------

@dataclass(frozen=True)
class RefutationWitness:
    candidate: str
    framework: str
    inverter_encoding: str
    query: str                         # [V, [V]]
    candidate_answer: str
    constructed_action: str
    observation_bound: int
    observed: str
    observed_steps: int
    evidence: str
    counterexample: dict | None = None
    designation: dict | None = None     # CA mode: signature -> outcome, before and after the swap
    verdict: str = "Contradiction"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)


def _consistent(answer: Answer, action: str) -> bool:
    """Would ``action`` agree with the candidate's answer about it?"""
    return (answer is Answer.ACCEPT) == (action == "accept")


def refute(p: Decider, framework: str = "tm", observation_bound: int | None = None) -> RefutationWitness:
    v = construct_inverter(p, framework)
    venc = v.encoding
    query = make_pair(venc, venc)
    res = p.decide(query)
    if res is None:
        raise DiagonalError("candidate failed to answer without a budget")
    answer, _ = res
    action = v.action(answer)
    assert not _consistent(answer, action)
    k = p.k if isinstance(p, TimeoutDecider) else 1
    bound = observation_bound if observation_bound is not None else 10 * k + len(venc) + 10
    obs = v.run(venc, bound)
    observed = ("loop" if obs.certified_loop else obs.outcome.value)
    if observed == action:
        evidence = ("spin gadget entered; its configuration repeats, so V never halts" if action == "loop"
                    else f"V reached '{action}' after {obs.steps} steps")
    elif isinstance(p, External):
        raise ObservationInconclusive(f"bounded run of V shows {observed!r}, construction says {action!r}")
    else:
        evidence = f"not observed within {bound} steps; the contradiction stands by construction"
    counter = None
    if isinstance(p, TimeoutDecider) and framework == "tm":
        counter = counterexample(p)
    designation = None
    if framework == "ca":
        designation = {"decider": _designation(decider_termination()), "inverter": _designation(v.termination)}
    return RefutationWitness(p.describe(), framework, venc, query, answer.value, action, bound, observed,
                             obs.steps, evidence, counter, designation)


def _designation(conds) -> dict:
    return {"".join(map(str, c.kind.pattern)): c.kind.polarity.value for c in conds}


def counterexample(p: TimeoutDecider) -> dict:
    """A machine halting at exactly step k+1, which the k-step candidate rejects."""
    m = machines.counter(p.k)
    enc = encode_tm(m)
    answer, _ = p.decide(make_pair(enc, ""))
    real = TmSubject(enc).run("", p.k + 1)
    return {"machine_encoding": enc, "input": "", "candidate_answer": answer.value,
            "actual": real.outcome.value, "halt_step": real.steps,
            "misclassified": answer.value != real.outcome.value}


# -- enumeration --------------------------------------------------------------

def enumeration_size(states: int, symbols: int) -> int:
    """Machines with ``states`` working states plus accept/reject over the first ``symbols`` of _,0,1,c."""
    if states < 1 or symbols < 1:
        return 0
    if symbols > 4:
        raise DiagonalError("at most 4 symbols (_, 0, 1, c)")
    return (1 + (states + 2) * symbols * 2) ** (states * symbols)


def machine_at(index: int, states: int, symbols: int) -> TuringMachine:
    """The ``index``-th machine in canonical (mixed-radix, first entry most significant) order."""
    n = enumeration_size(states, symbols)
    if not 0 <= index < n:
        raise IndexError(index)
    names = [f"q{i}" for i in range(states)] + ["qa", "qr"]
    syms = DEFAULT_SYMBOL_NAMES[:symbols]
    base = 1 + (states + 2) * symbols * 2
    keys = [(q, a) for q in names[:states] for a in syms]
    digits = []
    for _ in keys:
        index, d = divmod(index, base)
        digits.append(d)
    delta = {}
    for key, d in zip(keys, reversed(digits)):
        if d:
            d -= 1
            nxt, rest = divmod(d, symbols * 2)
            write, move = divmod(rest, 2)
            delta[key] = (names[nxt], syms[write], R if move else L)
    return TuringMachine(tuple(names), ("0", "1", "c"), DEFAULT_SYMBOL_NAMES, delta, "q0", "qa", "qr", "_")


def enumerate_machines(states: int, symbols: int) -> Iterator[TuringMachine]:
    for i in range(enumeration_size(states, symbols)):
        yield machine_at(i, states, symbols)


def sample_machines(states: int, symbols: int, count: int) -> list[tuple[int, TuringMachine]]:
    """``count`` evenly spaced machines from the enumeration, with their indices."""
    n = enumeration_size(states, symbols)
    count = min(count, n)
    return [(i * n // count, machine_at(i * n // count, states, symbols)) for i in range(count)]


# -- decision tables ----------------------------------------------------------

@dataclass(frozen=True)
class DecisionTable:
    labels: tuple[str, ...]
    encodings: tuple[str, ...]
    entries: tuple[tuple[Outcome, ...], ...]
    bound: int
    inverter_row: int | None = None

    def entry(self, i: int, j: int) -> Outcome:
        return self.entries[i][j]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "label", "encoding"] + [f"[M{j + 1}]" for j in range(len(self.labels))])
        for i, (lab, enc, row) in enumerate(zip(self.labels, self.encodings, self.entries)):
            w.writerow([i + 1, lab, enc] + [e.value for e in row])
        w.writerow(["bound", self.bound, "inverter_row", "" if self.inverter_row is None else self.inverter_row + 1])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DecisionTable":
        rows = list(csv.reader(io.StringIO(text)))
        body, meta = rows[1:-1], rows[-1]
        return cls(tuple(r[1] for r in body), tuple(r[2] for r in body),
                   tuple(tuple(Outcome(v) for v in r[3:]) for r in body), int(meta[1]),
                   int(meta[3]) - 1 if meta[3] else None)

    def render_grid(self) -> str:
        """Accept or blank per cell (blank if the row subject rejects or does not halt within the bound)."""
        cells = [["accept" if e is Outcome.ACCEPT else "" for e in row] for row in self.entries]
        if self.inverter_row is not None:
            k = self.inverter_row
            cells[k][k] = "?"
        return _grid(self.labels, cells)


def _grid(labels, cells) -> str:
    heads = [f"[M{j + 1}]" for j in range(len(labels))]
    width = max([6] + [len(h) for h in heads] + [len(c) for row in cells for c in row])
    rowlab = [f"M{i + 1}" for i in range(len(labels))]
    lw = max(len(r) for r in rowlab)
    out = [" " * lw + " | " + " ".join(h.ljust(width) for h in heads)]
    out.append("-" * len(out[0]))
    for lab, row in zip(rowlab, cells):
        out.append(lab.ljust(lw) + " | " + " ".join(c.ljust(width) for c in row).rstrip())
    return "\n".join(out) + "\n"


def build_table(subjects: Sequence[Subject], bound: int, threads: int = 1,
                inverter: Inverter | None = None) -> DecisionTable:
    subjects = list(subjects)
    if inverter is not None:
        subjects.append(inverter)
    if not subjects:
        raise DiagonalError("a table needs at least one subject")
    n = len(subjects)
    cells = [(i, j) for i in range(n) for j in range(n)]

    def one(ij):
        i, j = ij
        return subjects[i].run(subjects[j].encoding, bound).outcome

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            flat = list(pool.map(one, cells))
    else:
        flat = [one(ij) for ij in cells]
    entries = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
    return DecisionTable(tuple(s.label for s in subjects), tuple(s.encoding for s in subjects), entries, bound,
                         n - 1 if inverter is not None else None)


def decider_view(table: DecisionTable, p: Decider, threads: int = 1) -> list[list[str]]:
    """p's answers filling the table; the inverter row holds the inverse of p's diagonal, with '?' at (k, k)."""
    n = len(table.encodings)
    cells = [(i, j) for i in range(n) for j in range(n)]
    pool_ok = threads > 1 and p.concurrent_safe

    def one(ij):
        i, j = ij
        return p.decide(make_pair(table.encodings[i], table.encodings[j]))[0].value

    if pool_ok:
        with ThreadPoolExecutor(threads) as pool:
            flat = list(pool.map(one, cells))
    else:
        flat = [one(ij) for ij in cells]
    grid = [flat[i * n:(i + 1) * n] for i in range(n)]
    k = table.inverter_row
    if k is not None:
        for j in range(n):
            grid[k][j] = Answer(grid[j][j]).inverted().value
        grid[k][k] = "?"
    return grid


def render_decider_view(table: DecisionTable, p: Decider, threads: int = 1) -> str:
    return _grid(table.labels, decider_view(table, p, threads))


# -- the formal-system face ---------------------------------------------------

@dataclass(frozen=True)
class FormulaTable:
    templates: tuple[str, ...]
    numbers: tuple[int, ...]                # G(W_k(x))
    entries: tuple[tuple[int, ...], ...]    # G(W_i(numeral of G(W_j)))

    def diagonal_holds(self, table: SymbolTable, free_var: str = "x") -> bool:
        return all(self.entries[k][k] == int(diag(self.numbers[k], table, free_var))
                   for k in range(len(self.templates)))


def formula_table(templates: Sequence[str], table: SymbolTable, free_var: str = "x",
                  numeral_budget: int = 5000) -> FormulaTable:
    """Rows W_i(x), columns the numerals of G(W_j(x)); cell (k, k) is G(W_k(<G(W_k)>)) = diag(G(W_k))."""
    forms = [as_symbols(t) for t in templates]
    numbers = [int(goedel_encode(f, table)) for f in forms]
    for t, g in zip(templates, numbers):
        if g > numeral_budget:
            raise DiagonalError(f"G({t}) = {g} exceeds the numeral budget {numeral_budget}")
    entries = tuple(tuple(encode_substituted(f, free_var, g, table) for g in numbers) for f in forms)
    return FormulaTable(tuple(templates), tuple(numbers), entries)
