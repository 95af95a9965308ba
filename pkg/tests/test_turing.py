import random

import pytest
from hypothesis import given, strategies as st

from helpers import random_machine, random_word
from workbench import machines
from workbench.turing import (InvalidInputSymbol, MalformedEncoding, TmConfiguration, TuringMachine, Verdict,
                              decode_tm, encode_pair, encode_tm, initial_configuration, isomorphic, run,
                              split_pair, step, universal_run, _symbol_order)


def oracle_step(m, left, state, head, right):
    """Tape as a dict around a head index; returns the same shape."""
    tape = {i: s for i, s in enumerate(left)}
    pos = len(left)
    tape[pos] = head
    for i, s in enumerate(right, pos + 1):
        tape[i] = s
    act = m.delta.get((state, head))
    if act is None:
        return None
    q2, b, d = act
    tape[pos] = b
    pos += 1 if d == "R" else -1
    return tape, pos, q2


def tape_string(tape, pos, blank):
    keys = [k for k, v in tape.items() if v != blank] + [pos]
    lo, hi = min(keys), max(keys)
    return "".join(tape.get(i, blank) for i in range(lo, pos)), "".join(tape.get(i, blank) for i in range(pos, hi + 1))


def canon_str(c, blank):
    cc = c.canonical(blank)
    return "".join(cc.left).lstrip(blank), "".join(cc.right)


def test_config_example():
    c = TmConfiguration(tuple("11"), "q1", tuple("011"))
    m = TuringMachine(("q1", "q2", "qa", "qr"), ("0", "1"), ("_", "0", "1"),
                       {("q1", "0"): ("q2", "1", "R")}, "q1", "qa", "qr")
    assert step(m, c).render() == "111 q2 11"


@given(st.integers(0, 10**6))
def test_step_matches_dict_oracle(seed):
    rng = random.Random(seed)
    m = random_machine(rng, density=1.0)
    left = random_word(rng, m.tape_alphabet)
    right = random_word(rng, m.tape_alphabet)
    head = rng.choice(m.tape_alphabet)
    state = rng.choice(["q0", "q1", "q2"])
    c = TmConfiguration(left, state, (head,) + right)
    got = step(m, c)
    want = oracle_step(m, left, state, head, right)
    assert (got is None) == (want is None)
    if got is not None:
        tape, pos, q2 = want
        assert got.state == q2
        wl, wr = tape_string(tape, pos, m.blank)
        gl, gr = canon_str(got, m.blank)
        assert (gl, gr.rstrip(m.blank)) == (wl.lstrip(m.blank), wr.rstrip(m.blank))


def test_sample_runs():
    assert run(machines.binary_increment(), "1011", 100).final.canonical("_").render() == " qa 1100"
    out = run(machines.unary_increment(), "111", 100)
    assert out.verdict is Verdict.HALTED and out.output == tuple("1111")
    assert run(machines.palindrome(), "1001", 200).verdict is Verdict.ACCEPTED
    assert run(machines.palindrome(), "1011", 200).verdict is Verdict.REJECTED
    assert run(machines.starts_with_one(), "0", 5).verdict is Verdict.REJECTED
    assert run(machines.spin(), "", 1000).verdict is Verdict.TIMEOUT


def test_palindrome_oracle():
    from workbench.formal import enumerate_strings
    m = machines.palindrome()
    for w in enumerate_strings("01", 7):
        v = run(m, w, 10_000).verdict
        assert (v is Verdict.ACCEPTED) == (tuple(w) == tuple(reversed(w)))


def test_binary_increment_oracle():
    m = machines.binary_increment()
    for n in range(1, 80):
        out = run(m, format(n, "b"), 1000)
        assert out.verdict is Verdict.ACCEPTED
        c = out.final.canonical("_")
        assert int("".join(c.left + c.right).strip("_"), 2) == n + 1


def test_invalid_input():
    with pytest.raises(InvalidInputSymbol):
        run(machines.starts_with_one(), "2", 5)


def test_bound_zero_is_timeout_unless_halted():
    assert run(machines.spin(), "", 0).verdict is Verdict.TIMEOUT
    assert run(machines.spin(), "", 0).steps_used == 0


@given(st.integers(0, 10**6), st.integers(0, 40), st.integers(0, 40))
def test_timeout_monotone(seed, b1, extra):
    rng = random.Random(seed)
    m = random_machine(rng)
    w = random_word(rng)
    a, b = run(m, w, b1), run(m, w, b1 + extra)
    if a.halted:
        assert (b.verdict, b.steps_used, b.final) == (a.verdict, a.steps_used, a.final)


def test_encoding_round_trip_500():
    rng = random.Random(1)
    for _ in range(500):
        m = random_machine(rng, rng.randint(1, 4), density=rng.random())
        enc = encode_tm(m)
        assert set(enc) <= set("01c")
        back = decode_tm(enc)
        assert isomorphic(m, back)
        assert encode_tm(back) == enc


@given(st.integers(0, 10**6))
def test_universal_run_matches_direct(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    w = random_word(rng)
    direct = run(m, w, 200)
    uni = universal_run(encode_pair(m, w), 200)
    mapping = dict(zip(_symbol_order(m), _symbol_order(decode_tm(encode_tm(m)))))
    qmap = dict(zip(m.states, decode_tm(encode_tm(m)).states))
    assert uni.verdict == direct.verdict and uni.steps_used == direct.steps_used
    f = direct.final
    assert uni.final == TmConfiguration(tuple(mapping[s] for s in f.left), qmap[f.state],
                                        tuple(mapping[s] for s in f.right))


def test_split_pair():
    m = machines.accept_all()
    mm, w = split_pair(encode_pair(m, "01c"))
    assert isomorphic(m, mm) and w == ("0", "1", "c")


def test_own_encoding_as_input():
    m = machines.accept_all()
    enc = encode_tm(m)
    assert run(m, enc, 10).verdict is Verdict.ACCEPTED


@pytest.mark.parametrize("bad", ["cccc", "", "0102", "01", "000100100010001c0c0"])
def test_malformed(bad):
    with pytest.raises(MalformedEncoding):
        decode_tm(bad)


def test_malformed_position():
    with pytest.raises(MalformedEncoding) as e:
        decode_tm("00100010010100x")
    assert e.value.position == 14


def test_parse_dump_round_trip(data_dir):
    for path in sorted((data_dir / "machines").glob("*.tm")):
        m = TuringMachine.load(path)
        assert TuringMachine.parse(m.dump()) == m
    assert TuringMachine.load(data_dir / "machines" / "inc.tm") == machines.unary_increment()


def test_initial_configuration_empty_word():
    c = initial_configuration(machines.spin(), ())
    assert c.right == ("_",)
