"""Heuristic four-class labelling of elementary rules.

Exact classification is undecidable, so this only measures behaviour on
random rings and applies thresholds.  The measurements:

* whether every trial settles into a homogeneous fixed point (class I);
* how fast the disagreement between two runs that differ in one cell spreads,
  as the width of the damaged region over ``2 * horizon``.  Localized damage
  means class II, near-light-speed spreading class III, and slow, irregular
  spreading class IV.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class ClassifierConfig:
    trials: int = 16
    ring_size: int = 401
    max_steps: int = 300
    seed: int = 0
    localized_below: float = 0.05
    chaotic_from: float = 0.4


@dataclass(frozen=True)
class Classification:
    code: int
    label: str
    homogeneous_fraction: float
    cycled_fraction: float
    mean_transient: float | None
    periods: tuple[int, ...]
    damage_speed: float
    damage_speed_std: float
    damage_density: float
    heuristic: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["periods"] = list(self.periods)
        return d


def _table(code: int) -> np.ndarray:
    return np.array([(code >> i) & 1 for i in range(8)], dtype=np.uint8)


def _step(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    return t[(np.roll(x, 1) << 2) | (x << 1) | np.roll(x, -1)]


def classify_heuristic(code: int, trials: int | None = None, ring_size: int | None = None,
                       max_steps: int | None = None, config: ClassifierConfig | None = None) -> Classification:
    cfg = config or ClassifierConfig()
    trials = cfg.trials if trials is None else trials
    n = cfg.ring_size if ring_size is None else ring_size
    steps = cfg.max_steps if max_steps is None else max_steps
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= code <= 255:
        raise ValueError("Wolfram codes run from 0 to 255")
    t = _table(code)
    rng = np.random.default_rng(cfg.seed)
    warmup = steps // 2
    horizon = max(1, min(steps - warmup, (n - 1) // 2))

    homogeneous = cycled = 0
    transients, periods, speeds, densities = [], [], [], []
    for _ in range(trials):
        x = rng.integers(0, 2, n, dtype=np.uint8)
        seen = {x.tobytes(): 0}
        a = x
        cycle = None
        for s in range(1, steps + 1):
            a = _step(a, t)
            key = a.tobytes()
            if cycle is None and key in seen:
                cycle = (seen[key], s - seen[key])
                if a.min() == a.max() and cycle[1] == 1:
                    homogeneous += 1
                break
            seen[key] = s
        if cycle is not None:
            cycled += 1
            transients.append(cycle[0])
            periods.append(cycle[1])

        a = x
        for _ in range(warmup):
            a = _step(a, t)
        b = a.copy()
        b[n // 2] ^= 1
        for _ in range(horizon):
            a, b = _step(a, t), _step(b, t)
        diff = np.flatnonzero(a != b)
        width = int(diff[-1] - diff[0] + 1) if diff.size else 0
        speeds.append(width / (2 * horizon))
        densities.append(diff.size / width if width else 0.0)

    speed = float(np.mean(speeds))
    if homogeneous == trials:
        label = "I"
    elif speed < cfg.localized_below:
        label = "II"
    elif speed >= cfg.chaotic_from:
        label = "III"
    else:
        label = "IV"
    return Classification(
        code=code, label=label,
        homogeneous_fraction=homogeneous / trials,
        cycled_fraction=cycled / trials,
        mean_transient=float(np.mean(transients)) if transients else None,
        periods=tuple(sorted(set(periods))),
        damage_speed=round(speed, 4),
        damage_speed_std=round(float(np.std(speeds)), 4),
        damage_density=round(float(np.mean(densities)), 4),
    )
