"""Reference machines used by the tests, the scripts and the CLI."""
from __future__ import annotations

from .turing import TuringMachine, machine

BITS = ("0", "1")
WIRE = ("0", "1", "c")


def starts_with_one() -> TuringMachine:
    return machine(["q0,1 -> qa,1,R", "q0,0 -> qr,0,R", "q0,_ -> qr,_,R"], input_alphabet=BITS)


def binary_increment() -> TuringMachine:
    """Adds one to a binary numeral (most significant bit first) and accepts."""
    return machine([
        "q0,0 -> q0,0,R", "q0,1 -> q0,1,R", "q0,_ -> q1,_,L",
        "q1,1 -> q1,0,L", "q1,0 -> qa,1,L", "q1,_ -> qa,1,L",
    ], input_alphabet=BITS, states=["q0", "q1", "qa", "qr"])


def unary_increment() -> TuringMachine:
    """Single-halt convention: halts in ``h`` with the head on the leftmost 1 of n+1 ones."""
    return machine([
        "q0,1 -> q0,1,R", "q0,_ -> q1,1,L",
        "q1,1 -> q1,1,L", "q1,_ -> h,_,R",
    ], accept="h", reject="h", input_alphabet=("1",), states=["q0", "q1", "h"])


def palindrome() -> TuringMachine:
    return machine([
        "q0,_ -> qa,_,R", "q0,0 -> q1,_,R", "q0,1 -> q2,_,R",
        "q1,0 -> q1,0,R", "q1,1 -> q1,1,R", "q1,_ -> q3,_,L",
        "q2,0 -> q2,0,R", "q2,1 -> q2,1,R", "q2,_ -> q4,_,L",
        "q3,0 -> q5,_,L", "q3,1 -> qr,1,R", "q3,_ -> qa,_,R",
        "q4,1 -> q5,_,L", "q4,0 -> qr,0,R", "q4,_ -> qa,_,R",
        "q5,0 -> q5,0,L", "q5,1 -> q5,1,L", "q5,_ -> q0,_,R",
    ], input_alphabet=BITS, states=["q0", "q1", "q2", "q3", "q4", "q5", "qa", "qr"])


def spin(input_alphabet=WIRE) -> TuringMachine:
    """Steps right then left forever; the configuration repeats every two steps."""
    tape = ("_",) + tuple(input_alphabet)
    lines = [f"q0,{s} -> q1,{s},R" for s in tape] + [f"q1,{s} -> q0,{s},L" for s in tape]
    return machine(lines, input_alphabet=input_alphabet, tape=tape, states=["q0", "q1", "qa", "qr"])


def counter(k: int, input_alphabet=WIRE) -> TuringMachine:
    """Straight-line machine: on the empty input it moves right through ``k + 1`` states, accepting at step ``k + 1``.

    Only blank transitions are defined, so any nonempty input halts at once.
    """
    tape = ("_",) + tuple(input_alphabet)
    states = [f"q{i}" for i in range(k + 1)]
    lines = [f"{states[i]},_ -> {states[i + 1] if i < k else 'qa'},_,R" for i in range(k + 1)]
    return machine(lines, start="q0", input_alphabet=input_alphabet, tape=tape, states=states + ["qa", "qr"])


def accept_all(input_alphabet=WIRE) -> TuringMachine:
    tape = ("_",) + tuple(input_alphabet)
    return machine([f"q0,{s} -> qa,{s},R" for s in tape], input_alphabet=input_alphabet, tape=tape,
                   states=["q0", "qa", "qr"])


def reject_all(input_alphabet=WIRE) -> TuringMachine:
    tape = ("_",) + tuple(input_alphabet)
    return machine([f"q0,{s} -> qr,{s},R" for s in tape], input_alphabet=input_alphabet, tape=tape,
                   states=["q0", "qa", "qr"])


CATALOGUE = {
    "starts_with_one": starts_with_one,
    "binary_increment": binary_increment,
    "unary_increment": unary_increment,
    "palindrome": palindrome,
    "spin": spin,
    "accept_all": accept_all,
    "reject_all": reject_all,
}
