import json
import random

import pytest
from hypothesis import given, strategies as st

from helpers import random_machine, random_word
from workbench import machines
from workbench.ca.core import step as ca_step
from workbench.tm2ca import AlphabetCollision, compile_tm, cosimulate
from workbench.turing import TuringMachine, initial_configuration, machine, step as tm_step


def test_right_move_rule_pair():
    m = machine(["q1,a -> q2,b,R"], start="q1", input_alphabet=("a", "b"), states=["q1", "q2", "qa", "qr"])
    rule = compile_tm(m).automaton.rule
    assert rule(("_", "_", "q1", "a", "_")) == "b"     # head cell writes
    assert rule(("_", "q1", "a", "_", "_")) == "q2"    # state moves right


def test_compiled_shape():
    comp = compile_tm(machines.palindrome())
    ca = comp.automaton
    assert ca.radius == 2 and ca.dimension == 1 and ca.quiescent == "_"
    assert set(ca.alphabet) == set(machines.palindrome().tape_alphabet) | set(machines.palindrome().states)
    table = comp.rule_table()
    assert table.rstrip().endswith("* * * * * -> @0")
    assert "* * q0 0 * -> _" in table


@given(st.integers(0, 10**6))
def test_one_step_correspondence(seed):
    rng = random.Random(seed)
    m = random_machine(rng, density=1.0)
    comp = compile_tm(m)
    c = initial_configuration(m, random_word(rng))
    for _ in range(rng.randint(0, 30)):
        n = tm_step(m, c)
        if n is None or m.halting(c.state):
            break
        c = n
    nxt = tm_step(m, c)
    if nxt is not None and not m.halting(c.state):
        assert comp.project(ca_step(comp.automaton, comp.embed(c))) == nxt.canonical(m.blank)


def test_embed_single_head_and_inverse():
    m = machines.binary_increment()
    comp = compile_tm(m)
    c = initial_configuration(m, tuple("1011"))
    e = comp.embed(c)
    assert len(comp.heads(e)) == 1
    assert comp.project(e) == c.canonical(m.blank)


def test_random_machines_1000_steps():
    rng = random.Random(7)
    for _ in range(10):
        m = random_machine(rng, n_states=4, density=1.0)
        rep = cosimulate(m, random_word(rng), 1000)
        assert rep.agree, rep


def test_single_head_invariant():
    m = machines.palindrome()
    comp = compile_tm(m)
    c = comp.embed(initial_configuration(m, tuple("0110")))
    for _ in range(40):
        assert len(comp.heads(c)) == 1
        c = ca_step(comp.automaton, c)


@pytest.mark.parametrize("make,word,verdict", [
    (machines.binary_increment, "1011", "accepted"),
    (machines.palindrome, "1001", "accepted"),
    (machines.palindrome, "1011", "rejected"),
    (machines.unary_increment, "111", "halted"),
    (machines.starts_with_one, "0", "rejected"),
])
def test_cosim_samples(make, word, verdict):
    rep = cosimulate(make(), word, 1000)
    assert rep.agree and rep.tm_verdict == rep.ca_verdict == verdict
    assert rep.tm_halt_step == rep.ca_halt_step


def test_cosim_zero_steps_and_loop():
    rep = cosimulate(machines.binary_increment(), "1011", 0)
    assert rep.agree and rep.steps_compared == 0
    rep = cosimulate(machines.spin(), "", 1000)
    assert rep.agree and rep.tm_verdict == "timeout" and rep.steps_compared == 1000
    assert json.loads(rep.to_json())["agree"] is True


def test_empty_delta_fixed_point():
    m = TuringMachine(("q0", "qa", "qr"), ("0",), ("_", "0"), {}, "q0", "qa", "qr")
    comp = compile_tm(m)
    e = comp.embed(initial_configuration(m, ("0", "0")))
    assert ca_step(comp.automaton, e) == e.at_time(1)
    rep = cosimulate(m, "00", 10)
    assert rep.agree and rep.ca_verdict == "fixed_point"


def test_collision_renamed_or_refused():
    m = machine(["a,a -> qa,a,R"], start="a", input_alphabet=("a",), states=["a", "qa", "qr"])
    with pytest.raises(AlphabetCollision):
        compile_tm(m, rename=False)
    comp = compile_tm(m)
    assert comp.state_cell["a"] != "a"
    assert cosimulate(m, "a", 10).agree


def test_left_edge_extension():
    m = machine(["q0,0 -> q1,1,L", "q1,_ -> qa,0,L"], input_alphabet=("0",), states=["q0", "q1", "qa", "qr"])
    rep = cosimulate(m, "0", 10)
    assert rep.agree and rep.final == " qa _01"
