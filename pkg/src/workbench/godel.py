"""Arithmetization of symbol strings.

Formulas are tuples of symbols. A :class:`SymbolTable` assigns every symbol a
positive code, and the Gödel number of ``s_1 s_2 ... s_n`` is
``2**code(s_1) * 3**code(s_2) * ... * p_n**code(s_n)``.  Codes are required to
be >= 1 so that every prime up to the last one appears in the factorization;
decoding peels consecutive primes and stops at the first one that is absent.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

Formula = tuple[str, ...]

SUCCESSOR = "S"
ZERO = "0"


class GoedelError(ValueError):
    pass


class UnregisteredSymbol(GoedelError):
    def __init__(self, position: int, symbol: str):
        super().__init__(f"symbol {symbol!r} at position {position} has no code")
        self.position = position
        self.symbol = symbol


class NotAGoedelNumber(GoedelError):
    pass


class MissingPrimitive(GoedelError):
    pass


class SymbolTableError(GoedelError):
    pass


def as_symbols(text: str | Sequence[str]) -> Formula:
    """Split ``text`` into symbols.

    Strings containing whitespace are split on it (multi-character symbols);
    otherwise every character is one symbol.
    """
    if not isinstance(text, str):
        return tuple(text)
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    return tuple(text)


def primes() -> Iterator[int]:
    """Consecutive primes 2, 3, 5, ... (incremental sieve)."""
    composites: dict[int, int] = {}
    yield 2
    for n in itertools.count(3, 2):
        step = composites.pop(n, None)
        if step is None:
            composites[n * n] = 2 * n
            yield n
        else:
            m = n + step
            while m in composites:
                m += step
            composites[m] = step


@dataclass(frozen=True)
class SymbolTable:
    symbols: tuple[str, ...]
    codes: Mapping[str, int] = field(compare=False)

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise SymbolTableError("duplicate symbol")
        if set(self.codes) != set(self.symbols):
            raise SymbolTableError("codes must cover exactly the registered symbols")
        values = [self.codes[s] for s in self.symbols]
        if any(not isinstance(v, int) or v < 1 for v in values):
            raise SymbolTableError("codes must be positive integers")
        if len(set(values)) != len(values):
            raise SymbolTableError("duplicate code")
        object.__setattr__(self, "_by_code", {self.codes[s]: s for s in self.symbols})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "SymbolTable":
        pairs = list(pairs)
        symbols = tuple(s for s, _ in pairs)
        codes = {}
        for s, c in pairs:
            if s in codes:
                raise SymbolTableError(f"duplicate symbol {s!r}")
            codes[s] = c
        return cls(symbols, codes)

    @classmethod
    def load(cls, path: str | Path) -> "SymbolTable":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def parse(cls, text: str) -> "SymbolTable":
        """Parse ``<symbol><TAB><code>`` lines; blank lines and ``#`` comments are skipped."""
        pairs = []
        seen_codes: dict[int, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise SymbolTableError(f"line {lineno}: expected '<symbol>\\t<code>'")
            sym, code_text = parts[0], parts[1].strip()
            try:
                code = int(code_text)
            except ValueError:
                raise SymbolTableError(f"line {lineno}: code {code_text!r} is not an integer") from None
            if code in seen_codes:
                raise SymbolTableError(f"line {lineno}: code {code} already used by {seen_codes[code]!r}")
            if any(sym == s for s, _ in pairs):
                raise SymbolTableError(f"line {lineno}: duplicate symbol {sym!r}")
            seen_codes[code] = sym
            pairs.append((sym, code))
        return cls.from_pairs(pairs)

    def dump(self) -> str:
        return "".join(f"{s}\t{self.codes[s]}\n" for s in self.symbols)

    def code(self, symbol: str) -> int:
        return self.codes[symbol]

    def symbol(self, code: int) -> str | None:
        return self._by_code.get(code)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.codes


@dataclass(frozen=True, order=True)
class GoedelNumber:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise NotAGoedelNumber(f"{self.value} < 1")

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Numeral:
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("numerals name naturals")


def _product(factors: list[int]) -> int:
    """Balanced product; far faster than a running product for long formulas."""
    if not factors:
        return 1
    while len(factors) > 1:
        pairs = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            pairs.append(factors[-1])
        factors = pairs
    return factors[0]


def goedel_encode(formula: str | Sequence[str], table: SymbolTable) -> GoedelNumber:
    factors = []
    for i, (sym, p) in enumerate(zip(as_symbols(formula), primes())):
        if sym not in table:
            raise UnregisteredSymbol(i, sym)
        factors.append(p ** table.code(sym))
    return GoedelNumber(_product(factors))


def goedel_decode(n: GoedelNumber | int, table: SymbolTable) -> Formula:
    value = int(n)
    if value < 1:
        raise NotAGoedelNumber(f"{value} is not a positive integer")
    out = []
    for p in primes():
        if value == 1:
            break
        exponent = 0
        while value % p == 0:
            value //= p
            exponent += 1
        if exponent == 0:
            # p is absent but the remaining cofactor still has larger primes
            raise NotAGoedelNumber(f"{int(n)}: prime {p} missing (gap at position {len(out)})")
        sym = table.symbol(exponent)
        if sym is None:
            raise NotAGoedelNumber(f"{int(n)}: exponent {exponent} of prime {p} is not a symbol code")
        out.append(sym)
    return tuple(out)


def is_goedel_number(n: int, table: SymbolTable) -> bool:
    if n < 1:
        return False
    try:
        goedel_decode(n, table)
    except NotAGoedelNumber:
        return False
    return True


def numeral_of(n: int | GoedelNumber) -> Numeral:
    return Numeral(int(n))


def render_numeral(m: Numeral, table: SymbolTable, successor: str = SUCCESSOR,
                   zero: str = ZERO) -> Formula:
    for prim in (successor, zero):
        if prim not in table:
            raise MissingPrimitive(f"{prim!r} is not registered")
    return (successor,) * m.count + (zero,)


def substitute(formula: Sequence[str], var: str, replacement: Sequence[str]) -> Formula:
    out: list[str] = []
    for sym in formula:
        if sym == var:
            out.extend(replacement)
        else:
            out.append(sym)
    return tuple(out)


def quote(formula: Sequence[str], table: SymbolTable, successor: str = SUCCESSOR,
          zero: str = ZERO) -> Formula:
    """The numeral naming the Gödel number of ``formula``."""
    return render_numeral(numeral_of(goedel_encode(formula, table)), table, successor, zero)


def diag(n: GoedelNumber | int, table: SymbolTable, free_var: str = "x",
         successor: str = SUCCESSOR, zero: str = ZERO) -> GoedelNumber | int:
    """Map G(W(x)) to G(W(<numeral of G(W(x))>)).

    Numbers that are not Gödel numbers map to themselves (0 included, returned
    as a plain int).
    """
    value = int(n)
    if value < 0:
        raise ValueError("diag is defined on naturals")
    if not is_goedel_number(value, table):
        return GoedelNumber(value) if value else 0
    formula = goedel_decode(value, table)
    if free_var not in formula:
        return GoedelNumber(value)
    numeral = render_numeral(Numeral(value), table, successor, zero)
    return goedel_encode(substitute(formula, free_var, numeral), table)


def encode_substituted(formula: Sequence[str], var: str, numeral_count: int, table: SymbolTable,
                       successor: str = SUCCESSOR, zero: str = ZERO) -> int:
    """G(formula[var := numeral]) computed position by position, without building the string.

    Used as an independent arithmetic path when checking diagonal identities.
    """
    s_code, z_code = table.code(successor), table.code(zero)
    factors = []
    gen = primes()
    for sym in formula:
        if sym == var:
            for _ in range(numeral_count):
                factors.append(next(gen) ** s_code)
            factors.append(next(gen) ** z_code)
        else:
            factors.append(next(gen) ** table.code(sym))
    return _product(factors)


def toy_table() -> SymbolTable:
    """Small codes for self-reference experiments: numerals stay short."""
    return SymbolTable.from_pairs([
        ("x", 1), ("d", 2), ("Q", 3), ("S", 4), ("0", 5), ("N", 6), ("=", 7),
        ("(", 8), (")", 9),
    ])


def example_table() -> SymbolTable:
    """The worked-example codes: '0' -> 1, '=' -> 5, plus a successor and a variable."""
    return SymbolTable.from_pairs([("0", 1), ("S", 3), ("=", 5), ("x", 7), ("(", 9), (")", 11)])
