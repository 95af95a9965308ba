"""Golly-compatible RLE pattern files."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .core import FiniteSupport


class RleError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class RlePattern:
    cells: dict              # (row, col) -> state (1 for 'o', 1..24 for A..X)
    width: int
    height: int
    rule: str | None = None
    comments: tuple[str, ...] = ()

    def configuration(self, origin=(0, 0)) -> FiniteSupport:
        r0, c0 = origin
        return FiniteSupport(2, 0, {(r + r0, c + c0): v for (r, c), v in self.cells.items()})


_HEADER = re.compile(r"^\s*x\s*=\s*(\d+)\s*,\s*y\s*=\s*(\d+)\s*(?:,\s*rule\s*=\s*([^\s,]+))?\s*$", re.I)


def parse_rle(text: str) -> RlePattern:
    lines = text.splitlines()
    comments = []
    header = None
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("#"):
            comments.append(line)
        elif line.strip():
            m = _HEADER.match(line)
            if not m:
                raise RleError(i + 1, 1, "expected header 'x = <w>, y = <h>[, rule = <rule>]'")
            header = (int(m.group(1)), int(m.group(2)), m.group(3))
            i += 1
            break
        i += 1
    if header is None:
        raise RleError(len(lines) or 1, 1, "missing header line")
    width, height, rule = header
    cells = {}
    row = col = 0
    count = ""
    done = False
    for lineno in range(i, len(lines)):
        line = lines[lineno]
        for colno, ch in enumerate(line, 1):
            if done:
                break
            if ch.isdigit():
                count += ch
                continue
            n = int(count) if count else 1
            if ch.isspace():
                if count:
                    raise RleError(lineno + 1, colno, "whitespace between run count and tag")
                continue
            count = ""
            if ch in "b.":
                col += n
            elif ch == "o" or "A" <= ch <= "X":
                if row >= height or col + n > width:
                    raise RleError(lineno + 1, colno, f"pattern exceeds declared size {width}x{height}")
                state = 1 if ch == "o" else ord(ch) - ord("A") + 1
                for k in range(n):
                    cells[(row, col + k)] = state
                col += n
            elif ch == "$":
                row += n
                col = 0
            elif ch == "!":
                done = True
            else:
                raise RleError(lineno + 1, colno, f"unexpected character {ch!r}")
        if done:
            break
    if not done:
        raise RleError(len(lines), len(lines[-1]) if lines else 1, "missing '!' terminator")
    return RlePattern(cells, width, height, rule, tuple(comments))


def load_rle(path: str | Path) -> RlePattern:
    return parse_rle(Path(path).read_text(encoding="utf-8"))


def _runs(values):
    out = []
    prev, n = None, 0
    for v in values:
        if v == prev:
            n += 1
        else:
            if prev is not None:
                out.append((n, prev))
            prev, n = v, 1
    if prev is not None:
        out.append((n, prev))
    return out


def write_rle(c: FiniteSupport, rule: str = "B3/S23", line_width: int = 70) -> str:
    if not c.cells:
        return f"x = 0, y = 0, rule = {rule}\n!\n"
    (r0, c0), (r1, c1) = c.bbox
    width, height = c1 - c0 + 1, r1 - r0 + 1
    tokens = []
    blank_rows = 0
    for r in range(r0, r1 + 1):
        row = [c.get((r, col)) for col in range(c0, c1 + 1)]
        while row and row[-1] == 0:
            row.pop()
        if not row:
            blank_rows += 1
            continue
        if tokens or blank_rows:
            n = blank_rows + 1
            tokens.append(f"{n if n > 1 else ''}$")
        blank_rows = 0
        for n, v in _runs(row):
            tag = "b" if v == 0 else "o" if v == 1 else chr(ord("A") + v - 1)
            tokens.append(f"{n if n > 1 else ''}{tag}")
    tokens.append("!")
    body, line = [], ""
    for t in tokens:
        if len(line) + len(t) > line_width:
            body.append(line)
            line = ""
        line += t
    body.append(line)
    return f"x = {width}, y = {height}, rule = {rule}\n" + "\n".join(body) + "\n"
