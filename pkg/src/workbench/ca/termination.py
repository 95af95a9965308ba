"""Termination conditions: decidable predicates over a bounded configuration history.

A condition has a *kind* saying when it fires and a way to say which side of
the accepted/rejected partition the firing configuration is on.  Attractor
kinds (fixed point, limit cycle) consult a :class:`DesignatedCell`; pattern
kinds carry their own polarity.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Sequence


class Polarity(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"

    def flipped(self) -> "Polarity":
        return Polarity.REJECT if self is Polarity.ACCEPT else Polarity.ACCEPT


@dataclass(frozen=True)
class DesignatedCell:
    """Accept iff the cell at ``index`` holds ``symbol`` (``polarity`` says which side that is)."""
    index: Any = 0
    symbol: Any = 1
    polarity: Polarity = Polarity.ACCEPT

    def classify(self, config) -> Polarity:
        return self.polarity if config.get(self.index) == self.symbol else self.polarity.flipped()

    def swapped(self) -> "DesignatedCell":
        return replace(self, polarity=self.polarity.flipped())


@dataclass(frozen=True)
class FixedPoint:
    pass


@dataclass(frozen=True)
class LimitCycle:
    """Fires on the first repeated configuration; ``max_period`` bounds the remembered window."""
    max_period: int | None = None


@dataclass(frozen=True)
class SpatialPattern:
    pattern: tuple
    polarity: Polarity = Polarity.ACCEPT

    def swapped(self) -> "SpatialPattern":
        return replace(self, polarity=self.polarity.flipped())


@dataclass(frozen=True)
class TemporalSequence:
    """Fires once the values of one cell over time contain ``sequence`` contiguously."""
    cell: Any
    sequence: tuple
    polarity: Polarity = Polarity.ACCEPT

    def swapped(self) -> "TemporalSequence":
        return replace(self, polarity=self.polarity.flipped())


Kind = FixedPoint | LimitCycle | SpatialPattern | TemporalSequence


@dataclass(frozen=True)
class TerminationCondition:
    kind: Kind
    partition: DesignatedCell = field(default_factory=DesignatedCell)

    def swapped(self) -> "TerminationCondition":
        """Exchange the accepted and rejected outcomes, leaving when it fires unchanged."""
        kind = self.kind.swapped() if isinstance(self.kind, (SpatialPattern, TemporalSequence)) else self.kind
        return TerminationCondition(kind, self.partition.swapped())

    @property
    def attractor(self) -> bool:
        return isinstance(self.kind, (FixedPoint, LimitCycle))


def swap_all(conditions: Sequence[TerminationCondition]) -> tuple[TerminationCondition, ...]:
    return tuple(c.swapped() for c in conditions)


def fixed_point(index=0, symbol=1) -> TerminationCondition:
    return TerminationCondition(FixedPoint(), DesignatedCell(index, symbol))


def limit_cycle(index=0, symbol=1, max_period=None) -> TerminationCondition:
    return TerminationCondition(LimitCycle(max_period), DesignatedCell(index, symbol))


def spatial(pattern, polarity=Polarity.ACCEPT) -> TerminationCondition:
    return TerminationCondition(SpatialPattern(_freeze(pattern), polarity))


def temporal(cell, sequence, polarity=Polarity.ACCEPT) -> TerminationCondition:
    return TerminationCondition(TemporalSequence(cell, _freeze(sequence), polarity))


def _freeze(p):
    """Bit strings become int tuples; nested sequences become 2D row tuples."""
    if isinstance(p, str):
        return parse_bits(p)
    items = tuple(p)
    if items and isinstance(items[0], (list, tuple)):
        return tuple(tuple(row) for row in items)
    return items


def parse_bits(text: str) -> tuple[int, ...]:
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"expected a 0/1 string, got {text!r}")
    return tuple(int(ch) for ch in text)

