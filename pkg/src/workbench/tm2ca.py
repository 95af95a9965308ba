"""Compile a Turing machine into a radius-2 elementary-style CA by interleaving the state into the tape.

A configuration ``u q a v`` is laid out as the cells ``u, q, a, v`` with the
head reading the cell right of the state symbol.  One CA step is one TM step:

* right move ``(q, a) -> (q2, b, R)``: the state cell becomes ``b`` and the
  read cell becomes ``q2``;
* left move ``(q, a) -> (q2, b, L)`` with left neighbour ``x``: the ``x`` cell
  becomes ``q2``, the state cell becomes ``x`` and the read cell becomes ``b``.

Every other window copies its centre, so halting states are inert.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .ca.core import CellularAutomaton, FiniteSupport, find_pattern
from .ca.core import step as ca_step
from .ca.termination import Polarity, spatial
from .turing import L, R, TmConfiguration, TuringMachine, Verdict, initial_configuration
from .turing import step as tm_step


class AlphabetCollision(ValueError):
    pass


@dataclass(frozen=True)
class CompiledCa:
    machine: TuringMachine
    automaton: CellularAutomaton
    state_cell: dict        # TM state -> CA symbol
    cell_state: dict        # CA symbol -> TM state

    def embed(self, c: TmConfiguration) -> FiniteSupport:
        cells = {}
        for i, s in enumerate(c.left):
            cells[i] = s
        pos = len(c.left)
        cells[pos] = self.state_cell[c.state]
        for i, s in enumerate(c.right or (self.machine.blank,), pos + 1):
            cells[i] = s
        return FiniteSupport(1, self.machine.blank, cells, 0)

    def heads(self, c: FiniteSupport) -> list[int]:
        return sorted(i for i, v in c.cells.items() if v in self.cell_state)

    def project(self, c: FiniteSupport) -> TmConfiguration:
        """Partial inverse of :meth:`embed`; defined when exactly one state symbol is present."""
        heads = self.heads(c)
        if len(heads) != 1:
            raise ValueError(f"expected one state symbol, found {len(heads)}")
        pos = heads[0]
        lo, hi = c.bbox
        left = tuple(c.get(i) for i in range(min(lo, pos), pos))
        right = tuple(c.get(i) for i in range(pos + 1, max(hi, pos + 1) + 1))
        blank = self.machine.blank
        return TmConfiguration(left, self.cell_state[c.get(pos)], right).canonical(blank)

    def rule_table(self) -> str:
        """The active windows as ``w-2 w-1 w0 w1 w2 -> out`` lines.

        ``*`` matches anything; an output of ``@-1`` or ``@0`` copies the
        left neighbour or the centre.  The last line is the copy default.
        """
        lines = []
        m = self.machine
        for (q, a), (q2, b, d) in sorted(m.delta.items()):
            sq, sq2 = self.state_cell[q], self.state_cell[q2]
            if d == R:
                lines.append(f"* * {sq} {a} * -> {b}")
                lines.append(f"* {sq} {a} * * -> {sq2}")
            else:
                lines.append(f"* * {sq} {a} * -> @-1")
                lines.append(f"* {sq} {a} * * -> {b}")
                lines.append(f"* * * {sq} {a} -> {sq2}")
        lines.append("* * * * * -> @0")
        return "\n".join(lines) + "\n"


def _rename(m: TuringMachine, rename: bool) -> dict:
    clash = set(m.states) & set(m.tape_alphabet)
    if clash and not rename:
        raise AlphabetCollision(f"states and tape symbols overlap: {sorted(clash)}")
    if not clash:
        return {q: q for q in m.states}
    out = {}
    for q in m.states:
        name = f"<{q}>"
        while name in m.tape_alphabet:
            name = f"<{name}>"
        out[q] = name
    return out


def compile_tm(m: TuringMachine, rename: bool = True) -> CompiledCa:
    state_cell = _rename(m, rename)
    cell_state = {v: k for k, v in state_cell.items()}
    delta = {(state_cell[q], a): (state_cell[q2], b, d) for (q, a), (q2, b, d) in m.delta.items()}

    def rule(w):
        _, left, centre, right, right2 = w
        act = delta.get((centre, right))
        if act is not None:                       # I hold the state
            return act[1] if act[2] == R else left
        act = delta.get((left, centre))
        if act is not None:                       # I am the read cell
            return act[0] if act[2] == R else act[1]
        act = delta.get((right, right2))
        if act is not None and act[2] == L:       # the state moves onto me
            return act[0]
        return centre

    alphabet = tuple(m.tape_alphabet) + tuple(state_cell[q] for q in m.states)
    conditions = [spatial((state_cell[m.accept],), Polarity.ACCEPT)]
    if not m.single_halt:
        conditions.append(spatial((state_cell[m.reject],), Polarity.REJECT))
    ca = CellularAutomaton(alphabet, 1, 2, rule, m.blank, tuple(conditions), name="compiled TM")
    return CompiledCa(m, ca, state_cell, cell_state)


@dataclass(frozen=True)
class CosimReport:
    agree: bool
    steps_compared: int
    tm_verdict: str
    ca_verdict: str
    tm_halt_step: int | None
    ca_halt_step: int | None
    divergence: dict | None = None
    final: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)


def _ca_halt(comp: CompiledCa, c: FiniteSupport) -> Polarity | None:
    for cond in comp.automaton.termination:
        if find_pattern(c, cond.kind.pattern) is not None:
            return cond.kind.polarity
    return None


def _first_difference(a: FiniteSupport, b: FiniteSupport) -> int:
    keys = sorted(set(a.cells) | set(b.cells))
    return next(i for i in keys if a.get(i) != b.get(i))


# a TM stuck without a transition shows up in the CA as a fixed point
_CORRESPONDS = {Verdict.HALTED_UNDEFINED.value: "fixed_point"}


def cosimulate(m: TuringMachine, word, steps: int, compiled: CompiledCa | None = None) -> CosimReport:
    """Run the machine and its compiled CA in lock step, comparing after every step."""
    comp = compiled or compile_tm(m)
    tm = initial_configuration(m, tuple(word))
    ca = comp.embed(tm)
    tm_verdict = ca_verdict = "timeout"
    tm_halt = ca_halt = None
    t = 0
    while True:
        if comp.project(ca) != tm.canonical(m.blank):
            expected = comp.embed(tm)
            # both sides are laid out with the same origin, so cell indices line up
            cell = _first_difference(expected, ca)
            return CosimReport(False, t, tm_verdict, ca_verdict, tm_halt, ca_halt,
                               {"step": t, "cell": cell, "tm": tm.render(), "ca": comp.project(ca).render()})
        fired = _ca_halt(comp, ca)
        if fired is not None and ca_halt is None:
            ca_halt, ca_verdict = t, ("accepted" if fired is Polarity.ACCEPT else "rejected")
        if m.halting(tm.state):
            tm_halt = t
            tm_verdict = (Verdict.HALTED if m.single_halt else
                          Verdict.ACCEPTED if tm.state == m.accept else Verdict.REJECTED).value
            if m.single_halt and ca_verdict == "accepted":
                ca_verdict = "halted"
            break
        nxt = tm_step(m, tm)
        if nxt is None:
            tm_halt, tm_verdict = t, Verdict.HALTED_UNDEFINED.value
            if ca_step(comp.automaton, ca).key() == ca.key():
                ca_halt, ca_verdict = t, "fixed_point"
            break
        if t >= steps:
            break
        tm, ca = nxt, ca_step(comp.automaton, ca)
        t += 1
    agree = tm_halt == ca_halt and _CORRESPONDS.get(tm_verdict, tm_verdict) == ca_verdict
    return CosimReport(agree, t, tm_verdict, ca_verdict, tm_halt, ca_halt, None, tm.canonical(m.blank).render())
