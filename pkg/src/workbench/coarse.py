"""Supercell projections and exact checks of coarse-grained emulation.

A coarse-graining groups ``block`` neighbouring fine cells into one coarse
cell through a projection P and claims that T fine steps followed by P agree
with P followed by one coarse step:  P . Phi^T = Phi' . P.  In 1D the claim is
checked exhaustively over every fine context that determines one coarse cell
on both sides.
"""
from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from .ca.core import CellularAutomaton, FiniteSupport, Periodic, eca_from_wolfram_code


class CoarseError(ValueError):
    pass


class UnsupportedDimension(CoarseError):
    pass


class MisalignedLattice(CoarseError):
    pass


@dataclass(frozen=True)
class CoarseGraining:
    fine: CellularAutomaton
    coarse: CellularAutomaton
    block: int
    time_factor: int
    projection: Mapping[tuple, object]

    def __post_init__(self):
        if self.block < 1 or self.time_factor < 1:
            raise CoarseError("block and time factor must be >= 1")
        if self.fine.dimension != 1 or self.coarse.dimension != 1:
            raise UnsupportedDimension("exhaustive verification is 1D only; use sampled_check for 2D")
        for blk in itertools.product(self.fine.alphabet, repeat=self.block):
            if blk not in self.projection:
                raise CoarseError(f"projection undefined on block {blk}")

    def project(self, cells) -> tuple:
        b = self.block
        return tuple(self.projection[tuple(cells[i:i + b])] for i in range(0, len(cells) - b + 1, b))


@dataclass(frozen=True)
class Valid:
    contexts_checked: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class CounterexampleBlock:
    context: tuple          # fine cells, the coarse cell's own block in the middle
    fine_block: tuple       # that block after T fine steps
    expected: object        # P(fine_block)
    coarse_says: object     # coarse rule applied to the projected neighbourhood

    def __bool__(self):
        return False


def _evolve_open(ca: CellularAutomaton, cells: tuple, steps: int) -> tuple:
    """``steps`` updates of a finite window; each step loses ``radius`` cells per side."""
    r, rule = ca.radius, ca.rule
    for _ in range(steps):
        cells = tuple(rule(cells[i - r:i + r + 1]) for i in range(r, len(cells) - r))
    return cells


def context_blocks(cg: CoarseGraining) -> int:
    """Blocks on each side of the centre needed to determine one coarse cell both ways."""
    return max(cg.coarse.radius, math.ceil(cg.fine.radius * cg.time_factor / cg.block))


def verify_coarse_graining(cg: CoarseGraining) -> Valid | CounterexampleBlock:
    b, T, rf, rc = cg.block, cg.time_factor, cg.fine.radius, cg.coarse.radius
    m = context_blocks(cg)
    width = (2 * m + 1) * b
    centre = m * b
    cut = m * b - rf * T          # cells dropped per side of the evolved window before the centre block
    n = 0
    for ctx in itertools.product(cg.fine.alphabet, repeat=width):
        n += 1
        evolved = _evolve_open(cg.fine, ctx, T)
        block = evolved[cut:cut + b]
        expected = cg.projection[block]
        neigh = tuple(cg.projection[ctx[centre + k * b:centre + (k + 1) * b]] for k in range(-rc, rc + 1))
        got = cg.coarse.rule(neigh)
        if got != expected:
            return CounterexampleBlock(ctx, block, expected, got)
    return Valid(n)


def identity(ca: CellularAutomaton) -> CoarseGraining:
    return CoarseGraining(ca, ca, 1, 1, {(a,): a for a in ca.alphabet})


BLOCKS_2 = tuple(itertools.product((0, 1), repeat=2))
SINGLE_CELL_PROJECTIONS = ("0011", "1100", "0101", "1010")   # x, not x, y, not y


def surjective_projections(block: int = 2) -> list[dict]:
    """All maps {0,1}^block -> {0,1} hitting both values, in lexicographic order of their output vectors."""
    blocks = tuple(itertools.product((0, 1), repeat=block))
    out = []
    for values in itertools.product((0, 1), repeat=len(blocks)):
        if 0 in values and 1 in values:
            out.append(dict(zip(blocks, values)))
    return out


def projection_label(p: Mapping[tuple, int]) -> str:
    """``"0001"``: the images of 00, 01, 10, 11 in that order."""
    return "".join(str(p[k]) for k in sorted(p))


def derive_coarse_code(fine_code: int, projection: Mapping[tuple, int], block: int = 2,
                       time_factor: int = 2) -> int | None:
    """The unique coarse ECA compatible with the projection, or None when fine contexts disagree."""
    fine = eca_from_wolfram_code(fine_code)
    probe = CoarseGraining(fine, fine, block, time_factor, projection)
    m = context_blocks(probe)
    if m != 1:
        raise CoarseError("coarse ECA derivation needs exactly one context block per side")
    width = 3 * block
    cut = block - fine.radius * time_factor
    table: dict[tuple, int] = {}
    for ctx in itertools.product((0, 1), repeat=width):
        evolved = _evolve_open(fine, ctx, time_factor)
        out = projection[evolved[cut:cut + block]]
        neigh = tuple(projection[ctx[k * block:(k + 1) * block]] for k in range(3))
        if table.setdefault(neigh, out) != out:
            return None
    return sum(table[(a, b, c)] << (4 * a + 2 * b + c) for a, b, c in itertools.product((0, 1), repeat=3))


@dataclass(frozen=True)
class SearchResult:
    fine: int
    projection: str
    coarse: int

    @property
    def nontrivial(self) -> bool:
        """The coarse rule is not constant and the projection reads both cells of the block."""
        return self.coarse not in (0, 255) and self.projection not in SINGLE_CELL_PROJECTIONS


def search_coarse_grainings(fine_code: int, block: int = 2, time_factor: int = 2,
                            threads: int = 1) -> list[SearchResult]:
    if (block, time_factor) != (2, 2):
        raise CoarseError("search covers block 2, time factor 2")
    projections = surjective_projections(block)

    def one(p):
        code = derive_coarse_code(fine_code, p, block, time_factor)
        return None if code is None else SearchResult(fine_code, projection_label(p), code)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            found = list(pool.map(one, projections))
    else:
        found = [one(p) for p in projections]
    return [r for r in found if r is not None]


def search_all(block: int = 2, time_factor: int = 2, threads: int = 1) -> list[SearchResult]:
    out = []
    for code in range(256):
        out += search_coarse_grainings(code, block, time_factor, threads)
    return out


def result_graining(r: SearchResult) -> CoarseGraining:
    proj = dict(zip(BLOCKS_2, (int(ch) for ch in r.projection)))
    return CoarseGraining(eca_from_wolfram_code(r.fine), eca_from_wolfram_code(r.coarse), 2, 2, proj)


def to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fine", "projection", "coarse"])
    for r in results:
        w.writerow([r.fine, r.projection, r.coarse])
    return buf.getvalue()


def from_csv(text: str) -> list[SearchResult]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [SearchResult(int(r["fine"]), r["projection"], int(r["coarse"])) for r in rows]


# -- 2D sampling check --------------------------------------------------------

def sampled_check(fine: CellularAutomaton, coarse: CellularAutomaton, block: int, time_factor: int,
                  projection, soups: int = 20, size: int = 8, seed: int = 0) -> bool:
    """Non-exhaustive 2D check on random tori whose sides are multiples of ``block``."""
    import numpy as np
    from .ca.core import advance
    rng = np.random.default_rng(seed)
    n = size * block
    for _ in range(soups):
        grid = rng.integers(0, 2, (n, n)).tolist()
        c = Periodic((n, n), grid)
        lhs = _project_2d(advance(fine, c, time_factor), block, projection)
        rhs = advance(coarse, _project_2d(c, block, projection), 1)
        if lhs != rhs:
            return False
    return True


def _project_2d(c: Periodic, b: int, projection) -> Periodic:
    h, w = c.extent
    rows = tuple(tuple(projection[tuple(c.cells[i + di][j + dj] for di in range(b) for dj in range(b))]
                       for j in range(0, w, b)) for i in range(0, h, b))
    return Periodic((h // b, w // b), rows)


# -- metapixel lens -----------------------------------------------------------

class Sampling(enum.Enum):
    EXACT = "exact"
    POPULATION = "population"


UNKNOWN = "?"


@dataclass(frozen=True)
class MetaLens:
    """Reads a 2D configuration as a grid of unit cells (tiles).

    Each tile is classified by looking only at its sentinel sub-rectangle
    ``(row, col, height, width)``.  EXACT sampling compares the live cells of
    the sentinel against each template (a tuple of 0/1 rows); POPULATION
    sampling matches the first template whose ``(lo, hi)`` live-count range
    contains the sentinel's population.  ``phase`` records the generation
    (mod the unit period) at which the templates were taken.
    """
    unit_extent: tuple[int, int]            # (width, height)
    templates: Mapping[object, object]
    sentinel: tuple[int, int, int, int]
    sampling: Sampling = Sampling.EXACT
    offset: tuple[int, int] = (0, 0)        # (row, col) of the top-left tile's corner
    phase: int = 0
    period: int | None = None

    def __post_init__(self):
        w, h = self.unit_extent
        r, c, sh, sw = self.sentinel
        if not (0 <= r and 0 <= c and r + sh <= h and c + sw <= w and sh > 0 and sw > 0):
            raise CoarseError("sentinel must lie inside the unit cell")
        if self.sampling is Sampling.EXACT:
            seen = set()
            for sym, t in self.templates.items():
                t = tuple(tuple(row) for row in t)
                if (len(t), len(t[0]) if t else 0) != (sh, sw):
                    raise CoarseError(f"template for {sym!r} does not have the sentinel's shape")
                if t in seen:
                    raise CoarseError("templates must be pairwise distinguishable")
                seen.add(t)
        else:
            ranges = sorted(self.templates.values())
            for (lo1, hi1), (lo2, hi2) in zip(ranges, ranges[1:]):
                if lo2 <= hi1:
                    raise CoarseError("population ranges must not overlap")

    def classify(self, sample) -> object:
        if self.sampling is Sampling.EXACT:
            for sym, t in self.templates.items():
                if tuple(tuple(row) for row in t) == sample:
                    return sym
            return UNKNOWN
        pop = sum(map(sum, sample))
        for sym, (lo, hi) in self.templates.items():
            if lo <= pop <= hi:
                return sym
        return UNKNOWN

    def sample(self, c, tile_row: int, tile_col: int) -> tuple:
        w, h = self.unit_extent
        r, col, sh, sw = self.sentinel
        top = self.offset[0] + tile_row * h + r
        left = self.offset[1] + tile_col * w + col
        return tuple(tuple(c.get((top + i, left + j)) for j in range(sw)) for i in range(sh))


def meta_read(lens: MetaLens, c) -> FiniteSupport | Periodic:
    """Classify every tile; tiles no template matches read as ``UNKNOWN``."""
    w, h = lens.unit_extent
    if c.dim != 2:
        raise UnsupportedDimension("meta_read works on 2D configurations")
    if isinstance(c, Periodic):
        H, W = c.extent
        if H % h or W % w:
            raise MisalignedLattice(f"torus {H}x{W} is not a whole number of {h}x{w} tiles")
        rows = tuple(tuple(lens.classify(lens.sample(c, i, j)) for j in range(W // w)) for i in range(H // h))
        return Periodic((H // h, W // w), rows, c.time)
    empty = FiniteSupport(2, c.background, {})
    background = lens.classify(lens.sample(empty, 0, 0))
    cells = {}
    if c.cells:
        (r0, c0), (r1, c1) = c.bbox
        oy, ox = lens.offset
        for i in range((r0 - oy) // h, (r1 - oy) // h + 1):
            for j in range((c0 - ox) // w, (c1 - ox) // w + 1):
                cells[(i, j)] = lens.classify(lens.sample(c, i, j))
    return FiniteSupport(2, background, cells, c.time)
