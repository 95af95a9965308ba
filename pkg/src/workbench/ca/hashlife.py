"""Memoized quadtree engine for life-like rules on the infinite plane.

Nodes are interned: two nodes with the same children are the same object, so
children tuples can key the memo tables directly.  ``successor(node, j)``
returns the central half of a level-k node advanced ``2**j`` generations
(``j <= k - 2``).  One :class:`QuadtreeEngine` is shared per rule; its tables
only ever grow with pure-function results, so concurrent callers can at worst
duplicate work, never observe different answers.
"""
from __future__ import annotations

import threading
from collections import defaultdict

from .core import CellularAutomaton, FiniteSupport, game_of_life


class Node:
    __slots__ = ("k", "a", "b", "c", "d", "n", "__weakref__")

    def __init__(self, k, a, b, c, d, n):
        self.k, self.a, self.b, self.c, self.d, self.n = k, a, b, c, d, n

    def __repr__(self):
        return f"Node(k={self.k}, n={self.n})"


ON = Node(0, None, None, None, None, 1)
OFF = Node(0, None, None, None, None, 0)


class QuadtreeEngine:
    """a=NW, b=NE, c=SW, d=SE; cell (row, col) grows downward and rightward."""

    _engines: dict = {}
    _lock = threading.Lock()

    def __init__(self, ca: CellularAutomaton, max_nodes: int = 2_000_000):
        if not ca.life_like:
            raise ValueError("the quadtree engine handles life-like rules only")
        self.birth, self.survive = ca.birth, ca.survive
        self.max_nodes = max_nodes
        self.clear()

    def clear(self):
        """Drop the memo tables.  Nodes already handed out stay valid."""
        self._join: dict = {}
        self._zero: dict = {0: OFF}
        self._succ: dict = {}

    @property
    def size(self) -> int:
        return len(self._join)

    @classmethod
    def for_rule(cls, ca: CellularAutomaton) -> "QuadtreeEngine":
        key = (ca.birth, ca.survive)
        with cls._lock:
            eng = cls._engines.get(key)
            if eng is None:
                eng = cls._engines[key] = cls(ca)
        return eng

    # -- node construction --------------------------------------------------

    def join(self, a, b, c, d) -> Node:
        key = (a, b, c, d)
        node = self._join.get(key)
        if node is None:
            node = self._join.setdefault(key, Node(a.k + 1, a, b, c, d, a.n + b.n + c.n + d.n))
        return node

    def zero(self, k: int) -> Node:
        z = self._zero.get(k)
        if z is None:
            z = self.zero(k - 1)
            z = self._zero.setdefault(k, self.join(z, z, z, z))
        return z

    def centre(self, m: Node) -> Node:
        return self.join(m.a.d, m.b.c, m.c.b, m.d.a)

    def expand(self, m: Node) -> Node:
        """The level k+1 node with ``m`` in its middle."""
        z = self.zero(m.k - 1)
        return self.join(self.join(z, z, z, m.a), self.join(z, z, m.b, z),
                         self.join(z, m.c, z, z), self.join(m.d, z, z, z))

    def padded(self, m: Node) -> bool:
        """True when every live cell lies in the central half of ``m``."""
        if m.k < 2:
            return m.n == 0
        return (m.a.a.n + m.a.b.n + m.a.c.n + m.b.a.n + m.b.b.n + m.b.d.n
                + m.c.a.n + m.c.c.n + m.c.d.n + m.d.b.n + m.d.c.n + m.d.d.n) == 0

    # -- evolution ----------------------------------------------------------

    def _rule(self, alive: int, n: int) -> int:
        return int(n in self.survive) if alive else int(n in self.birth)

    def _base(self, m: Node) -> Node:
        # 4x4 -> centre 2x2 after one generation
        g = [[0] * 4 for _ in range(4)]
        for qr, qc, q in ((0, 0, m.a), (0, 2, m.b), (2, 0, m.c), (2, 2, m.d)):
            g[qr][qc], g[qr][qc + 1], g[qr + 1][qc], g[qr + 1][qc + 1] = q.a.n, q.b.n, q.c.n, q.d.n
        out = []
        for r in (1, 2):
            for c in (1, 2):
                n = sum(g[r + dr][c + dc] for dr in (-1, 0, 1) for dc in (-1, 0, 1)) - g[r][c]
                out.append(ON if self._rule(g[r][c], n) else OFF)
        return self.join(*out)

    def successor(self, m: Node, j: int) -> Node:
        if m.n == 0:
            return m.a
        j = min(j, m.k - 2)
        key = (m, j)
        s = self._succ.get(key)
        if s is not None:
            return s
        if m.k == 2:
            s = self._base(m)
        else:
            join, succ = self.join, self.successor
            a, b, c, d = m.a, m.b, m.c, m.d
            c1 = succ(a, j)
            c2 = succ(join(a.b, b.a, a.d, b.c), j)
            c3 = succ(b, j)
            c4 = succ(join(a.c, a.d, c.a, c.b), j)
            c5 = succ(join(a.d, b.c, c.b, d.a), j)
            c6 = succ(join(b.c, b.d, d.a, d.b), j)
            c7 = succ(c, j)
            c8 = succ(join(c.b, d.a, c.d, d.c), j)
            c9 = succ(d, j)
            if j < m.k - 2:
                s = join(join(c1.d, c2.c, c4.b, c5.a), join(c2.d, c3.c, c5.b, c6.a),
                         join(c4.d, c5.c, c7.b, c8.a), join(c5.d, c6.c, c8.b, c9.a))
            else:
                s = join(succ(join(c1, c2, c4, c5), j), succ(join(c2, c3, c5, c6), j),
                         succ(join(c4, c5, c7, c8), j), succ(join(c5, c6, c8, c9), j))
        return self._succ.setdefault(key, s)

    # -- conversion ---------------------------------------------------------

    def build(self, live) -> "Pattern":
        live = list(live)
        if not live:
            return Pattern(self, self.zero(1), 0, 0)
        r0 = min(r for r, _ in live)
        c0 = min(c for _, c in live)
        span = max(max(r for r, _ in live) - r0, max(c for _, c in live) - c0) + 1
        k = max(1, (span - 1).bit_length())
        level = {(r - r0, c - c0): ON for r, c in live}
        for lvl in range(1, k + 1):
            zero = self.zero(lvl - 1)
            groups: dict = defaultdict(lambda: [zero, zero, zero, zero])
            for (r, c), node in level.items():
                groups[(r >> 1, c >> 1)][(r & 1) * 2 + (c & 1)] = node
            level = {pos: self.join(*kids) for pos, kids in groups.items()}
        return Pattern(self, level[(0, 0)], r0, c0)

    def cells(self, m: Node, r0: int, c0: int) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        stack = [(m, r0, c0)]
        while stack:
            node, r, c = stack.pop()
            if node.n == 0:
                continue
            if node.k == 0:
                out.append((r, c))
                continue
            h = 1 << (node.k - 1)
            stack.extend(((node.a, r, c), (node.b, r, c + h), (node.c, r + h, c), (node.d, r + h, c + h)))
        return out


class Pattern:
    """A node plus the plane coordinates of its top-left cell."""

    def __init__(self, engine: QuadtreeEngine, node: Node, row: int, col: int, generation: int = 0):
        self.engine, self.node, self.row, self.col, self.generation = engine, node, row, col, generation

    @property
    def population(self) -> int:
        return self.node.n

    def live(self) -> frozenset:
        return frozenset(self.engine.cells(self.node, self.row, self.col))

    def _expanded(self, node, row, col):
        half = 1 << (node.k - 1)
        return self.engine.expand(node), row - half, col - half

    def advance(self, gens: int) -> "Pattern":
        """Exactly ``gens`` generations later, composed from power-of-two jumps."""
        eng = self.engine
        if eng.size > eng.max_nodes:
            eng.clear()
        node, row, col = self.node, self.row, self.col
        remaining, j = gens, 0
        while remaining:
            if remaining & 1:
                while node.k < j + 2 or not eng.padded(node):
                    node, row, col = self._expanded(node, row, col)
                node, row, col = self._expanded(node, row, col)
                quarter = 1 << (node.k - 2)
                node = eng.successor(node, j)
                row, col = row + quarter, col + quarter
            remaining >>= 1
            j += 1
        return Pattern(eng, node, row, col, self.generation + gens)


def quad_advance(ca: CellularAutomaton, c: FiniteSupport, gens: int) -> FiniteSupport:
    """Same contract as the array engine's plane evolution, computed on the quadtree."""
    eng = QuadtreeEngine.for_rule(ca)
    p = eng.build(c.live()).advance(gens)
    return FiniteSupport.from_live(p.live(), c.time + gens)


def default_engine() -> QuadtreeEngine:
    return QuadtreeEngine.for_rule(game_of_life())
