"""Random machines shared by several test modules."""
import random

from workbench.turing import TuringMachine


def random_machine(rng: random.Random, n_states: int = 3, tape=("_", "0", "1", "c"), density: float = 0.8,
                   input_alphabet=("0", "1", "c")) -> TuringMachine:
    work = [f"q{i}" for i in range(n_states)]
    states = work + ["qa", "qr"]
    delta = {}
    for q in work:
        for a in tape:
            if rng.random() < density:
                delta[(q, a)] = (rng.choice(states), rng.choice(tape), rng.choice("LR"))
    return TuringMachine(tuple(states), tuple(input_alphabet), tuple(tape), delta, "q0", "qa", "qr", tape[0])


def random_word(rng: random.Random, alphabet=("0", "1", "c"), max_len: int = 6) -> tuple:
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


def ring_successor(code: int, cells: tuple) -> tuple:
    n = len(cells)
    return tuple((code >> (4 * cells[i - 1] + 2 * cells[i] + cells[(i + 1) % n])) & 1 for i in range(n))


def state_graph(code: int, n: int) -> dict:
    """For every ring state: (transient length, cycle period), from the functional graph on 2**n nodes."""
    states = [tuple((v >> (n - 1 - i)) & 1 for i in range(n)) for v in range(2 ** n)]
    succ = {s: ring_successor(code, s) for s in states}
    on_cycle = set()
    for s in states:
        x = s
        for _ in range(2 ** n):
            x = succ[x]
        on_cycle.add(x)          # after 2**n steps every orbit sits on its cycle
    period = {}
    for s in on_cycle:
        if s in period:
            continue
        cyc, x = [s], succ[s]
        while x != s:
            cyc.append(x)
            x = succ[x]
        for y in cyc:
            period[y] = len(cyc)
    out = {}
    for s in states:
        t, x = 0, s
        while x not in on_cycle:
            x = succ[x]
            t += 1
        out[s] = (t, period[x])
    return out
