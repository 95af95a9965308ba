"""Direct array engine for life-like rules: the semantic reference for the quadtree engine."""
from __future__ import annotations

import numpy as np

from .core import CellularAutomaton, FiniteSupport, Periodic


def _lookup(ca: CellularAutomaton) -> np.ndarray:
    # next state indexed by (alive, neighbor count)
    table = np.zeros((2, 9), dtype=np.uint8)
    for n in range(9):
        table[0, n] = n in ca.birth
        table[1, n] = n in ca.survive
    return table


def step_torus(grid: np.ndarray, table: np.ndarray) -> np.ndarray:
    n = sum(np.roll(np.roll(grid, dr, 0), dc, 1)
            for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0))
    return table[grid, n]


def step_plane(grid: np.ndarray, table: np.ndarray) -> np.ndarray:
    """One generation on the infinite plane; the result is 1 cell larger on every side."""
    h, w = grid.shape
    p = np.zeros((h + 4, w + 4), dtype=np.uint8)
    p[2:-2, 2:-2] = grid
    n = np.zeros((h + 2, w + 2), dtype=np.uint8)
    for dr in (0, 1, 2):
        for dc in (0, 1, 2):
            if (dr, dc) != (1, 1):
                n += p[dr:dr + h + 2, dc:dc + w + 2]
    return table[p[1:-1, 1:-1], n]


def _trim(grid: np.ndarray, r0: int, c0: int):
    rows = np.flatnonzero(grid.any(axis=1))
    if rows.size == 0:
        return np.zeros((0, 0), dtype=np.uint8), 0, 0
    cols = np.flatnonzero(grid.any(axis=0))
    return (grid[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1], r0 + int(rows[0]), c0 + int(cols[0]))


def to_array(c: FiniteSupport):
    if not c.cells:
        return np.zeros((0, 0), dtype=np.uint8), 0, 0
    (r0, c0), (r1, c1) = c.bbox
    grid = np.zeros((r1 - r0 + 1, c1 - c0 + 1), dtype=np.uint8)
    for (r, col), v in c.cells.items():
        grid[r - r0, col - c0] = v
    return grid, r0, c0


def from_array(grid: np.ndarray, r0: int, c0: int, time: int = 0) -> FiniteSupport:
    rr, cc = np.nonzero(grid)
    return FiniteSupport(2, 0, {(int(r) + r0, int(c) + c0): 1 for r, c in zip(rr, cc)}, time)


def run_plane(grid: np.ndarray, r0: int, c0: int, gens: int, table: np.ndarray):
    for _ in range(gens):
        if grid.size == 0:
            break
        grid, r0, c0 = _trim(step_plane(grid, table), r0 - 1, c0 - 1)
    return grid, r0, c0


def naive_advance(ca: CellularAutomaton, c, gens: int):
    table = _lookup(ca)
    if isinstance(c, Periodic):
        grid = np.array(c.cells, dtype=np.uint8)
        for _ in range(gens):
            grid = step_torus(grid, table)
        return Periodic(c.extent, tuple(map(tuple, grid.tolist())), c.time + gens)
    if c.background != 0:
        from .core import NonQuiescentRule
        raise NonQuiescentRule("life-like planes need a dead background")
    grid, r0, c0 = to_array(c)
    grid, r0, c0 = run_plane(grid, r0, c0, gens, table)
    return from_array(grid, r0, c0, c.time + gens)
