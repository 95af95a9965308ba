import pytest
from hypothesis import assume, given, strategies as st

from workbench.godel import (GoedelNumber, MissingPrimitive, NotAGoedelNumber, SymbolTable, SymbolTableError,
                             UnregisteredSymbol, as_symbols, diag, encode_substituted, goedel_decode,
                             goedel_encode, is_goedel_number, numeral_of, example_table, primes, quote,
                             render_numeral, substitute, toy_table)


def nth_primes(n):
    out, k = [], 2
    while len(out) < n:
        if all(k % p for p in out if p * p <= k):
            out.append(k)
        k += 1
    return out


def oracle_encode(symbols, codes):
    value = 1
    for p, s in zip(nth_primes(len(symbols)), symbols):
        value *= p ** codes[s]
    return value


def oracle_decode(n, codes):
    inv = {v: k for k, v in codes.items()}
    out, k = [], 2
    while n > 1:
        e = 0
        while n % k == 0:
            n //= k
            e += 1
        out.append(inv[e])
        k += 1
        while any(k % d == 0 for d in range(2, int(k ** 0.5) + 1)):
            k += 1
    return tuple(out)


def test_worked_example():
    t = example_table()
    assert int(goedel_encode("0=0", t)) == 2430
    assert goedel_decode(2430, t) == ("0", "=", "0")


def test_primes_prefix():
    gen = primes()
    assert [next(gen) for _ in range(200)] == nth_primes(200)


toy_formulas = st.lists(st.sampled_from(toy_table().symbols), min_size=0, max_size=8).map(tuple)


@given(toy_formulas)
def test_round_trip_and_oracle(f):
    t = toy_table()
    g = goedel_encode(f, t)
    assert int(g) == oracle_encode(f, t.codes)
    assert goedel_decode(g, t) == f
    assert oracle_decode(int(g), t.codes) == f


@given(toy_formulas, toy_formulas)
def test_injective(a, b):
    t = toy_table()
    assert (goedel_encode(a, t) == goedel_encode(b, t)) == (a == b)


def test_empty_formula_is_one():
    assert int(goedel_encode("", example_table())) == 1
    assert goedel_decode(1, example_table()) == ()


def test_decode_errors():
    t = example_table()
    with pytest.raises(NotAGoedelNumber):
        goedel_decode(7, t)          # prime 2 missing
    with pytest.raises(NotAGoedelNumber):
        goedel_decode(4, t)          # exponent 2 is not a code
    with pytest.raises(NotAGoedelNumber):
        GoedelNumber(0)
    assert not is_goedel_number(0, t)
    assert is_goedel_number(2430, t)


def test_unregistered_symbol_position():
    with pytest.raises(UnregisteredSymbol) as e:
        goedel_encode("0=y", example_table())
    assert e.value.position == 2 and e.value.symbol == "y"


def test_table_parse_errors():
    with pytest.raises(SymbolTableError):
        SymbolTable.parse("a\t1\nb\t1\n")
    with pytest.raises(SymbolTableError):
        SymbolTable.parse("a\t0\n")
    with pytest.raises(SymbolTableError):
        SymbolTable.parse("a 1\n")
    t = SymbolTable.parse("# c\na\t2\nb\t3\n")
    assert SymbolTable.parse(t.dump()) == t


def test_data_tables(data_dir):
    assert SymbolTable.load(data_dir / "toy.tbl").codes == dict(example_table().codes)
    assert SymbolTable.load(data_dir / "templates.tbl").codes == dict(toy_table().codes)


def test_multichar_symbols():
    assert as_symbols("forall x ( x )") == ("forall", "x", "(", "x", ")")
    assert as_symbols("0=0") == ("0", "=", "0")


@given(st.integers(0, 300))
def test_numeral_length(n):
    t = toy_table()
    m = render_numeral(numeral_of(n), t)
    assert len(m) == n + 1 and m[-1] == "0" and set(m[:-1]) <= {"S"}


def test_numeral_needs_primitives():
    t = SymbolTable.from_pairs([("0", 1)])
    with pytest.raises(MissingPrimitive):
        render_numeral(numeral_of(1), t)


def test_quote_names_goedel_number():
    t = toy_table()
    assert len(quote("x", t)) == 2 + 1


@given(st.lists(st.sampled_from(("x", "S", "0", "=", "N")), min_size=1, max_size=3).map(tuple))
def test_diag_matches_oracle(f):
    t = toy_table()
    g = oracle_encode(f, t.codes)
    assume(g <= 2000)
    expected = oracle_encode(substitute(f, "x", ("S",) * g + ("0",)), t.codes)
    assert int(diag(g, t)) == expected == encode_substituted(f, "x", g, t)


def test_diag_non_goedel_numbers_fixed():
    t = toy_table()
    assert diag(0, t) == 0
    assert int(diag(7, t)) == 7
    # no free variable: diag is the identity
    g = int(goedel_encode("0=0", t))
    assert int(diag(g, t)) == g
