"""Cellular automata over finite-support and periodic configuration spaces."""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Mapping, Sequence

from .termination import (FixedPoint, LimitCycle, Polarity, SpatialPattern, TemporalSequence,
                          TerminationCondition)


class CaError(ValueError):
    pass


class AlphabetMismatch(CaError):
    pass


class NonQuiescentRule(CaError):
    pass


class HistoryBudgetExceeded(CaError):
    pass


# -- configurations ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteSupport:
    """All cells equal ``background`` except the finitely many stored in ``cells``.

    Indices are ints in 1D and ``(row, col)`` pairs in 2D.
    """
    dim: int
    background: Any
    cells: Mapping[Any, Any]
    time: int = 0

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise CaError("dimension must be 1 or 2")
        object.__setattr__(self, "cells", {k: v for k, v in self.cells.items() if v != self.background})

    def get(self, index):
        return self.cells.get(index, self.background)

    @property
    def bbox(self):
        """``(lo, hi)`` inclusive, as ints (1D) or ``(row, col)`` pairs (2D); None when empty."""
        if not self.cells:
            return None
        if self.dim == 1:
            return min(self.cells), max(self.cells)
        rows = [r for r, _ in self.cells]
        cols = [c for _, c in self.cells]
        return (min(rows), min(cols)), (max(rows), max(cols))

    def key(self):
        return ("F", self.background, frozenset(self.cells.items()))

    def __eq__(self, other):
        return isinstance(other, FiniteSupport) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def symbols(self) -> set:
        return set(self.cells.values()) | {self.background}

    def at_time(self, t: int) -> "FiniteSupport":
        return replace(self, time=t)

    def shifted(self, offset) -> "FiniteSupport":
        if self.dim == 1:
            cells = {i + offset: v for i, v in self.cells.items()}
        else:
            dr, dc = offset
            cells = {(r + dr, c + dc): v for (r, c), v in self.cells.items()}
        return FiniteSupport(self.dim, self.background, cells, self.time)

    @classmethod
    def from_bits(cls, bits: str | Sequence, origin: int = 0, background=0) -> "FiniteSupport":
        values = [int(ch) for ch in bits] if isinstance(bits, str) else list(bits)
        return cls(1, background, {origin + i: v for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows: Sequence, origin=(0, 0), background=0) -> "FiniteSupport":
        cells = {}
        for r, row in enumerate(rows):
            values = [int(ch) for ch in row] if isinstance(row, str) else list(row)
            for c, v in enumerate(values):
                cells[(origin[0] + r, origin[1] + c)] = v
        return cls(2, background, cells)

    @classmethod
    def from_live(cls, live: Iterable[tuple[int, int]], time: int = 0) -> "FiniteSupport":
        return cls(2, 0, {cell: 1 for cell in live}, time)

    def live(self) -> frozenset:
        return frozenset(k for k, v in self.cells.items() if v == 1)

    def window(self, lo, hi) -> list:
        """Cell values over the inclusive index range (1D) or rectangle (2D)."""
        if self.dim == 1:
            return [self.get(i) for i in range(lo, hi + 1)]
        return [[self.get((r, c)) for c in range(lo[1], hi[1] + 1)] for r in range(lo[0], hi[0] + 1)]

    def to_bits(self) -> tuple[str, int]:
        """The 1D support as a 0/1 string plus the index of its first character."""
        if self.bbox is None:
            return "", 0
        lo, hi = self.bbox
        return "".join(str(v) for v in self.window(lo, hi)), lo


@dataclass(frozen=True, eq=False)
class Periodic:
    """A ring (1D) or torus (2D); ``cells`` is a tuple (1D) or a tuple of row tuples (2D)."""
    extent: tuple[int, ...]
    cells: tuple
    time: int = 0

    def __post_init__(self):
        if not self.extent or any(n < 1 for n in self.extent):
            raise CaError("periodic extents must be >= 1")
        if len(self.extent) == 1:
            object.__setattr__(self, "cells", tuple(self.cells))
            if len(self.cells) != self.extent[0]:
                raise CaError("cell count does not match extent")
        else:
            rows = tuple(tuple(r) for r in self.cells)
            if len(rows) != self.extent[0] or any(len(r) != self.extent[1] for r in rows):
                raise CaError("cell array does not match extent")
            object.__setattr__(self, "cells", rows)

    @property
    def dim(self) -> int:
        return len(self.extent)

    def get(self, index):
        if self.dim == 1:
            return self.cells[index % self.extent[0]]
        r, c = index
        return self.cells[r % self.extent[0]][c % self.extent[1]]

    def key(self):
        return ("P", self.extent, self.cells)

    def __eq__(self, other):
        return isinstance(other, Periodic) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def symbols(self) -> set:
        if self.dim == 1:
            return set(self.cells)
        return {v for row in self.cells for v in row}

    def at_time(self, t: int) -> "Periodic":
        return replace(self, time=t)

    @classmethod
    def from_bits(cls, bits: str | Sequence) -> "Periodic":
        values = [int(ch) for ch in bits] if isinstance(bits, str) else list(bits)
        return cls((len(values),), tuple(values))

    def to_bits(self) -> str:
        return "".join(str(v) for v in self.cells)


LatticeConfiguration = FiniteSupport | Periodic


# -- automata ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CellularAutomaton:
    alphabet: tuple
    dimension: int
    radius: int
    local_rule: Callable[[tuple], Any]
    quiescent: Any = 0          # None: no homogeneous fixed state
    termination: tuple[TerminationCondition, ...] = ()
    name: str = ""
    table: Mapping[tuple, Any] | None = None
    wolfram_code: int | None = None
    birth: frozenset | None = None
    survive: frozenset | None = None

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise CaError("dimension must be 1 or 2")
        if self.quiescent is None:
            pass
        elif self.quiescent not in self.alphabet:
            raise CaError("quiescent symbol must belong to the alphabet")
        elif self.rule((self.quiescent,) * self.window_size) != self.quiescent:
            raise NonQuiescentRule(f"{self.name or 'rule'}: quiescent symbol is not fixed")
        object.__setattr__(self, "termination", tuple(self.termination))

    @property
    def window_size(self) -> int:
        return (2 * self.radius + 1) ** self.dimension

    @property
    def life_like(self) -> bool:
        return self.birth is not None

    def rule(self, window: tuple):
        if self.table is not None:
            return self.table[window]
        return self.local_rule(window)

    def with_termination(self, *conditions: TerminationCondition) -> "CellularAutomaton":
        return replace(self, termination=tuple(conditions))

    def check_total(self) -> bool:
        """Evaluate the rule on every window over the alphabet (small alphabets only)."""
        for w in itertools.product(self.alphabet, repeat=self.window_size):
            if self.rule(w) not in self.alphabet:
                return False
        return True


def eca_from_wolfram_code(code: int, require_quiescent: bool = False) -> CellularAutomaton:
    """Elementary CA whose truth table, read over neighborhoods 111..000, is ``code`` in binary."""
    if not 0 <= code <= 255:
        raise CaError("Wolfram codes run from 0 to 255")
    if code & 1 and require_quiescent:
        raise NonQuiescentRule(f"rule {code} maps 000 to 1, so the zero background is not preserved")
    table = {(a, b, c): (code >> (4 * a + 2 * b + c)) & 1 for a in (0, 1) for b in (0, 1) for c in (0, 1)}
    if not code & 1:
        quiescent = 0
    elif (code >> 7) & 1:
        quiescent = 1
    else:
        quiescent = None  # 000->1 and 111->0: no homogeneous state survives, rings only
    return CellularAutomaton((0, 1), 1, 1, table.__getitem__, quiescent, name=f"rule {code}",
                             table=table, wolfram_code=code)


def truth_table(ca: CellularAutomaton) -> tuple[int, ...]:
    """Outputs for neighborhoods in the order 111, 110, ..., 000."""
    return tuple(ca.rule(((v >> 2) & 1, (v >> 1) & 1, v & 1)) for v in range(7, -1, -1))


def wolfram_code(ca: CellularAutomaton) -> int:
    if ca.dimension != 1 or ca.radius != 1 or set(ca.alphabet) != {0, 1}:
        raise CaError("Wolfram codes describe binary radius-1 1D rules")
    return sum(bit << (7 - i) for i, bit in enumerate(truth_table(ca)))


def life_like(birth: Iterable[int], survive: Iterable[int]) -> CellularAutomaton:
    b, s = frozenset(birth), frozenset(survive)
    if not b | s <= set(range(9)):
        raise CaError("neighbor counts run from 0 to 8")
    if 0 in b:
        raise NonQuiescentRule("B0 rules do not preserve the dead background")

    def rule(window):
        centre = window[4]
        n = sum(window) - centre
        return int(n in s) if centre else int(n in b)

    name = "B" + "".join(map(str, sorted(b))) + "/S" + "".join(map(str, sorted(s)))
    return CellularAutomaton((0, 1), 2, 1, rule, 0, name=name, birth=b, survive=s)


def game_of_life() -> CellularAutomaton:
    return life_like({3}, {2, 3})


def parse_rule_string(text: str) -> CellularAutomaton:
    """``B3/S23`` (either order, any case) or the older ``23/3`` survive/birth form."""
    t = text.strip().upper().replace(" ", "")
    parts = t.split("/")
    if len(parts) != 2:
        raise CaError(f"cannot parse rule {text!r}")
    birth = survive = None
    for p in parts:
        if p.startswith("B"):
            birth = p[1:]
        elif p.startswith("S"):
            survive = p[1:]
    if birth is None or survive is None:
        survive, birth = parts
    if not (birth + survive).isdigit() and (birth + survive):
        raise CaError(f"cannot parse rule {text!r}")
    return life_like({int(ch) for ch in birth}, {int(ch) for ch in survive})


# -- dynamics ---------------------------------------------------------------

def _check_alphabet(ca: CellularAutomaton, c: LatticeConfiguration):
    if c.dim != ca.dimension:
        raise AlphabetMismatch(f"configuration is {c.dim}D, automaton is {ca.dimension}D")
    extra = c.symbols() - set(ca.alphabet)
    if extra:
        raise AlphabetMismatch(f"symbols {sorted(map(str, extra))} are not in the automaton's alphabet")


def step(ca: CellularAutomaton, c: LatticeConfiguration) -> LatticeConfiguration:
    """One synchronous application of the global map."""
    _check_alphabet(ca, c)
    return _step(ca, c)


def _step(ca: CellularAutomaton, c: LatticeConfiguration) -> LatticeConfiguration:
    if ca.life_like:
        from .life import naive_advance
        return naive_advance(ca, c, 1)
    if isinstance(c, Periodic):
        return _step_periodic(ca, c)
    return _step_finite(ca, c)


def _step_finite(ca: CellularAutomaton, c: FiniteSupport) -> FiniteSupport:
    r, bg = ca.radius, c.background
    if ca.rule((bg,) * ca.window_size) != bg:
        raise NonQuiescentRule(f"background {bg!r} is not fixed by {ca.name or 'the rule'}")
    rule, get = ca.rule, c.cells.get
    out = {}
    if c.cells:
        if c.dim == 1:
            lo, hi = c.bbox
            for i in range(lo - r, hi + r + 1):
                v = rule(tuple(get(j, bg) for j in range(i - r, i + r + 1)))
                if v != bg:
                    out[i] = v
        else:
            (r0, c0), (r1, c1) = c.bbox
            offs = [(dr, dc) for dr in range(-r, r + 1) for dc in range(-r, r + 1)]
            for i in range(r0 - r, r1 + r + 1):
                for j in range(c0 - r, c1 + r + 1):
                    v = rule(tuple(get((i + dr, j + dc), bg) for dr, dc in offs))
                    if v != bg:
                        out[(i, j)] = v
    return FiniteSupport(c.dim, bg, out, c.time + 1)


def _step_periodic(ca: CellularAutomaton, c: Periodic) -> Periodic:
    r, rule = ca.radius, ca.rule
    if c.dim == 1:
        n = c.extent[0]
        cells = c.cells
        if r == 1:
            new = tuple(rule((cells[i - 1], cells[i], cells[(i + 1) % n])) for i in range(n))
        else:
            new = tuple(rule(tuple(cells[(i + k) % n] for k in range(-r, r + 1))) for i in range(n))
        return Periodic(c.extent, new, c.time + 1)
    h, w = c.extent
    offs = [(dr, dc) for dr in range(-r, r + 1) for dc in range(-r, r + 1)]
    g = c.cells
    rows = tuple(tuple(rule(tuple(g[(i + dr) % h][(j + dc) % w] for dr, dc in offs)) for j in range(w))
                 for i in range(h))
    return Periodic(c.extent, rows, c.time + 1)


def evolve(ca: CellularAutomaton, c: LatticeConfiguration, steps: int) -> list[LatticeConfiguration]:
    """``[c^0, c^1, ..., c^steps]``."""
    _check_alphabet(ca, c)
    out = [c]
    for _ in range(steps):
        c = _step(ca, c)
        out.append(c)
    return out


def advance(ca: CellularAutomaton, c: LatticeConfiguration, steps: int) -> LatticeConfiguration:
    _check_alphabet(ca, c)
    if ca.life_like:
        from .life import naive_advance
        return naive_advance(ca, c, steps)
    for _ in range(steps):
        c = _step(ca, c)
    return c


class CaVerdict(enum.Enum):
    ACCEPTED = "accepted_attractor"
    REJECTED = "rejected_attractor"
    TIMEOUT = "timeout"

    @classmethod
    def of(cls, p: Polarity) -> "CaVerdict":
        return cls.ACCEPTED if p is Polarity.ACCEPT else cls.REJECTED


@dataclass(frozen=True)
class CaRunOutcome:
    verdict: CaVerdict
    terminal: LatticeConfiguration
    steps: int
    cycle_period: int | None = None
    fired: int | None = None          # index of the condition that fired

    @property
    def timed_out(self) -> bool:
        return self.verdict is CaVerdict.TIMEOUT


def run_until(ca: CellularAutomaton, c0: LatticeConfiguration, bound: int, history_budget: int = 100_000,
              termination: Sequence[TerminationCondition] | None = None) -> CaRunOutcome:
    """Iterate the global map, testing the termination conditions after every step.

    Conditions are tried in order and the first one to fire decides the
    outcome.  Pattern conditions are also tested on ``c0``.
    """
    conds = tuple(termination) if termination is not None else ca.termination
    if not conds:
        raise CaError("run_until needs at least one termination condition")
    _check_alphabet(ca, c0)
    watchers = []
    for cond in conds:
        k = cond.kind
        if isinstance(k, LimitCycle) and k.max_period is not None and k.max_period > history_budget:
            raise HistoryBudgetExceeded(f"max_period {k.max_period} exceeds history budget {history_budget}")
        watchers.append(_Watcher(cond, history_budget))
    c = c0.at_time(0) if c0.time != 0 else c0
    prev = None
    for t in range(bound + 1):
        if t > 0:
            prev, c = c, _step(ca, c)
        for idx, w in enumerate(watchers):
            fired = w.observe(c, prev, t)
            if fired is not None:
                polarity, period = fired
                return CaRunOutcome(CaVerdict.of(polarity), c, t, period, idx)
    return CaRunOutcome(CaVerdict.TIMEOUT, c, bound)


class _Watcher:
    def __init__(self, cond: TerminationCondition, history_budget: int):
        self.cond = cond
        self.budget = history_budget
        k = cond.kind
        self.seen: dict = {}
        self.order: deque = deque()
        if isinstance(k, TemporalSequence):
            self.trace: deque = deque(maxlen=len(k.sequence))

    def observe(self, c, prev, t):
        k = self.cond.kind
        if isinstance(k, FixedPoint):
            if prev is not None and c.key() == prev.key():
                return self.cond.partition.classify(c), 1
        elif isinstance(k, LimitCycle):
            key = c.key()
            first = self.seen.get(key)
            if first is not None:
                return self.cond.partition.classify(c), t - first
            self.seen[key] = t
            self.order.append(key)
            limit = k.max_period if k.max_period is not None else self.budget
            if len(self.order) > limit:
                if k.max_period is None:
                    raise HistoryBudgetExceeded(f"more than {self.budget} configurations stored at t={t}")
                del self.seen[self.order.popleft()]
        elif isinstance(k, SpatialPattern):
            if find_pattern(c, k.pattern) is not None:
                return k.polarity, None
        elif isinstance(k, TemporalSequence):
            self.trace.append(c.get(k.cell))
            if len(self.trace) == len(k.sequence) and tuple(self.trace) == k.sequence:
                return k.polarity, None
        return None


# -- pattern search ---------------------------------------------------------

def find_pattern(c: LatticeConfiguration, pattern) -> Any:
    """First offset (row-major) at which ``pattern`` occurs, by translation only.

    On finite-support spaces only placements overlapping the support are
    considered; on periodic spaces placements wrap around.
    """
    pattern = tuple(pattern)
    if not pattern:
        raise CaError("pattern must be nonempty")
    if c.dim == 1:
        m = len(pattern)
        if isinstance(c, Periodic):
            n, cells = c.extent[0], c.cells
            for i in range(n):
                if all(cells[(i + k) % n] == pattern[k] for k in range(m)):
                    return i
            return None
        if not c.cells:
            return None
        lo, hi = c.bbox
        get, bg = c.cells.get, c.background
        for i in range(lo - m + 1, hi + 1):
            if all(get(i + k, bg) == pattern[k] for k in range(m)):
                return i
        return None
    rows = tuple(tuple(r) for r in pattern)
    ph, pw = len(rows), len(rows[0])
    if isinstance(c, Periodic):
        h, w = c.extent
        origins = ((i, j) for i in range(h) for j in range(w))
    else:
        if not c.cells:
            return None
        (r0, c0), (r1, c1) = c.bbox
        origins = ((i, j) for i in range(r0 - ph + 1, r1 + 1) for j in range(c0 - pw + 1, c1 + 1))
    get = c.get
    for i, j in origins:
        if all(get((i + a, j + b)) == rows[a][b] for a in range(ph) for b in range(pw)):
            return (i, j)
    return None
