"""Spacetime diagrams: portable bitmap text and JSON traces."""
from __future__ import annotations

import json
from typing import Sequence

from .core import FiniteSupport, Periodic


def _span(history: Sequence) -> tuple[int, int]:
    lo, hi = None, None
    for c in history:
        if isinstance(c, Periodic):
            return 0, c.extent[0] - 1
        if c.bbox is not None:
            a, b = c.bbox
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
    return (0, 0) if lo is None else (lo, hi)


def spacetime_rows(history: Sequence, span: tuple[int, int] | None = None) -> list[list]:
    """One row of cell values per timestep over a common 1D index window."""
    if any(c.dim != 1 for c in history):
        raise ValueError("spacetime diagrams are for 1D configurations")
    lo, hi = span or _span(history)
    rows = []
    for c in history:
        if isinstance(c, Periodic):
            rows.append(list(c.cells))
        else:
            rows.append(c.window(lo, hi))
    return rows


def to_pbm(history: Sequence, span: tuple[int, int] | None = None) -> str:
    """Plain PBM (P1); any non-background symbol prints as 1."""
    rows = spacetime_rows(history, span)
    width = len(rows[0]) if rows else 0
    bg = history[0].background if history and isinstance(history[0], FiniteSupport) else 0
    lines = ["P1", f"{width} {len(rows)}"]
    lines += [" ".join("0" if v == bg else "1" for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def to_text(history: Sequence, span: tuple[int, int] | None = None, on: str = "#", off: str = ".") -> str:
    rows = spacetime_rows(history, span)
    bg = history[0].background if history and isinstance(history[0], FiniteSupport) else 0
    return "\n".join("".join(off if v == bg else on for v in row) for row in rows) + "\n"


def _cell_json(c) -> dict:
    if isinstance(c, Periodic):
        return {"time": c.time, "space": "periodic", "extent": list(c.extent),
                "cells": [list(r) for r in c.cells] if c.dim == 2 else list(c.cells)}
    if c.dim == 1:
        bits, origin = c.to_bits() if set(c.cells.values()) <= {0, 1} else (None, None)
        if bits is not None:
            return {"time": c.time, "space": "finite", "background": c.background, "origin": origin, "bits": bits}
    cells = sorted(c.cells.items(), key=lambda kv: str(kv[0]))
    return {"time": c.time, "space": "finite", "background": c.background,
            "cells": [[list(k) if isinstance(k, tuple) else k, v] for k, v in cells]}


def to_json_trace(history: Sequence, **meta) -> str:
    return json.dumps({**meta, "steps": [_cell_json(c) for c in history]}, indent=1, sort_keys=True)
