"""Life-in-Life check with OTCA metapixels.

Lays out a 5x5 grid of metapixel tiles (an OFF tile in the middle with three
ON tiles above it, everything else OFF), advances one full metapixel period
with the quadtree engine and reads the tiles back through a population lens.
Under the B3/S23 meta-rule the middle tile must read ON afterwards.

The ON and OFF tiles are not shipped; export them from Golly (the metapixel
pattern set, programmed for B3/S23) and pass the two RLE paths.

    python scripts/otca_metapixel.py metapixel-on.rle metapixel-off.rle

Expect hours of run time at the full period.
"""
import argparse
import sys
import time

from workbench.ca.core import FiniteSupport, game_of_life
from workbench.ca.hashlife import QuadtreeEngine
from workbench.ca.rle import load_rle
from workbench.coarse import MetaLens, Sampling, meta_read

PERIOD = 35328
UNIT = 2048

# meta-grid: 1 = ON; the centre (2, 2) is OFF with exactly three ON neighbours
LAYOUT = [
    [0, 0, 0, 0, 0],
    [0, 1, 1, 1, 0],
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
]


def layout(on_cells, off_cells, grid, unit):
    live = set()
    for i, row in enumerate(grid):
        for j, v in enumerate(row):
            for r, c in (on_cells if v else off_cells):
                live.add((r + i * unit, c + j * unit))
    return live


def population(cells, sentinel):
    r0, c0, h, w = sentinel
    return sum(1 for r, c in cells if r0 <= r < r0 + h and c0 <= c < c0 + w)


def life_step(grid):
    n, m = len(grid), len(grid[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            k = sum(grid[i + a][j + b] for a in (-1, 0, 1) for b in (-1, 0, 1)
                    if (a or b) and 0 <= i + a < n and 0 <= j + b < m)
            out[i][j] = int(k == 3 or (grid[i][j] and k == 2))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("on", help="RLE of one ON metapixel")
    ap.add_argument("off", help="RLE of one OFF metapixel")
    ap.add_argument("--unit", type=int, default=UNIT)
    ap.add_argument("--generations", type=int, default=PERIOD)
    ap.add_argument("--sentinel", default=None,
                    help="row,col,height,width inside the unit (default: the central half of the tile)")
    args = ap.parse_args(argv)

    on = {k for k, v in load_rle(args.on).cells.items() if v}
    off = {k for k, v in load_rle(args.off).cells.items() if v}
    u = args.unit
    sentinel = (tuple(int(x) for x in args.sentinel.split(",")) if args.sentinel
                else (u // 4, u // 4, u // 2, u // 2))
    pop_on, pop_off = population(on, sentinel), population(off, sentinel)
    if pop_on == pop_off:
        print("ON and OFF tiles have the same sentinel population; choose another --sentinel", file=sys.stderr)
        return 2
    lo, hi = sorted((pop_on, pop_off))
    cut = (lo + hi) // 2
    ranges = {1: (cut + 1, 10**9), 0: (0, cut)} if pop_on > pop_off else {1: (0, cut), 0: (cut + 1, 10**9)}
    lens = MetaLens((u, u), ranges, sentinel, Sampling.POPULATION)
    print(f"sentinel {sentinel}: ON population {pop_on}, OFF population {pop_off}, cut at {cut}")

    eng = QuadtreeEngine.for_rule(game_of_life())
    start = FiniteSupport.from_live(layout(on, off, LAYOUT, u))
    before = meta_read(lens, start)
    print("generation 0:")
    for i in range(5):
        print("  " + " ".join(str(before.get((i, j))) for j in range(5)))

    t0 = time.perf_counter()
    after_pattern = eng.build(start.live()).advance(args.generations)
    after = meta_read(lens, FiniteSupport.from_live(after_pattern.live()))
    print(f"generation {args.generations} ({time.perf_counter() - t0:.0f}s):")
    for i in range(5):
        print("  " + " ".join(str(after.get((i, j))) for j in range(5)))

    expected = life_step(LAYOUT)
    inner = all(after.get((i, j)) == expected[i][j] for i in range(1, 4) for j in range(1, 4))
    centre = after.get((2, 2))
    print(f"inner 3x3 matches one B3/S23 meta-step: {inner}")
    print(f"centre tile reads {'ON' if centre == 1 else 'OFF' if centre == 0 else 'unknown'}"
          f" ({'PASS' if centre == 1 else 'FAIL'})")
    return 0 if centre == 1 else 1


if __name__ == "__main__":
    sys.exit(main())
