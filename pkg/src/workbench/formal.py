"""Grammars, well-formedness, and bounded forward-chaining derivations."""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .godel import (Formula, SymbolTable, as_symbols, diag, encode_substituted, goedel_encode,
                    numeral_of, render_numeral, substitute)

HOLE = "·"
EPSILON = "ε"


class FormalSystemError(ValueError):
    pass


class UnsupportedGrammar(FormalSystemError):
    pass


class NotAWff(FormalSystemError):
    pass


class EncodingOverflowBudget(FormalSystemError):
    pass


def is_metavar(token: str) -> bool:
    return token.startswith("?") and len(token) > 1


@dataclass(frozen=True)
class Production:
    head: Formula
    body: Formula

    def __str__(self):
        return f"{' '.join(self.head)} -> {' '.join(self.body) or EPSILON}"


@dataclass(frozen=True)
class Grammar:
    terminals: frozenset[str]
    nonterminals: frozenset[str]
    productions: tuple[Production, ...]
    start: str

    def __post_init__(self):
        if self.terminals & self.nonterminals:
            raise FormalSystemError(f"terminals and nonterminals overlap: {sorted(self.terminals & self.nonterminals)}")
        if self.start not in self.nonterminals:
            raise FormalSystemError(f"start symbol {self.start!r} is not a nonterminal")
        known = self.terminals | self.nonterminals
        for p in self.productions:
            if not any(s in self.nonterminals for s in p.head):
                raise FormalSystemError(f"production head {p.head} has no nonterminal")
            unknown = [s for s in p.head + p.body if s not in known]
            if unknown:
                raise FormalSystemError(f"production {p} uses undeclared symbols {unknown}")

    @classmethod
    def build(cls, terminals: Iterable[str], nonterminals: Iterable[str],
              productions: Iterable[tuple[str | Sequence[str], str | Sequence[str]]],
              start: str | None = None) -> "Grammar":
        nts = tuple(nonterminals)
        prods = tuple(Production(as_symbols(h), as_symbols(b)) for h, b in productions)
        return cls(frozenset(terminals), frozenset(nts), prods, start if start is not None else nts[0])

    @property
    def context_free(self) -> bool:
        return all(len(p.head) == 1 for p in self.productions)

    @property
    def noncontracting(self) -> bool:
        return all(len(p.body) >= len(p.head) for p in self.productions)


def is_wff(s: str | Sequence[str], g: Grammar) -> bool:
    """Earley recognition of ``s`` from ``g.start``."""
    if not g.context_free:
        raise UnsupportedGrammar("membership needs single-nonterminal production heads")
    tokens = as_symbols(s)
    by_head: dict[str, list[Formula]] = {}
    for p in g.productions:
        by_head.setdefault(p.head[0], []).append(p.body)
    nullable = _nullable(g)

    # item: (head, body, dot, origin)
    n = len(tokens)
    chart: list[set] = [set() for _ in range(n + 1)]
    root = ("<start>", (g.start,), 0, 0)
    chart[0].add(root)
    for i in range(n + 1):
        agenda = list(chart[i])
        while agenda:
            head, body, dot, origin = agenda.pop()
            if dot < len(body):
                sym = body[dot]
                if sym in g.nonterminals:
                    for alt in by_head.get(sym, ()):
                        item = (sym, alt, 0, i)
                        if item not in chart[i]:
                            chart[i].add(item)
                            agenda.append(item)
                    if sym in nullable:
                        item = (head, body, dot + 1, origin)
                        if item not in chart[i]:
                            chart[i].add(item)
                            agenda.append(item)
                elif i < n and tokens[i] == sym:
                    chart[i + 1].add((head, body, dot + 1, origin))
            else:
                for h2, b2, d2, o2 in list(chart[origin]):
                    if d2 < len(b2) and b2[d2] == head:
                        item = (h2, b2, d2 + 1, o2)
                        if item not in chart[i]:
                            chart[i].add(item)
                            agenda.append(item)
    return ("<start>", (g.start,), 1, 0) in chart[n]


def _nullable(g: Grammar) -> set[str]:
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.head[0] not in nullable and all(s in nullable for s in p.body):
                nullable.add(p.head[0])
                changed = True
    return nullable


def generate_wffs(g: Grammar, max_len: int, form_slack: int | None = None) -> set[Formula]:
    """All terminal strings of length <= max_len derivable from the start symbol.

    Sentential forms longer than ``max_len + form_slack`` are pruned.  For
    noncontracting grammars the slack defaults to 0, which is exact; grammars
    with shrinking productions get ``max_len`` extra symbols by default.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if form_slack is None:
        form_slack = 0 if g.noncontracting else max_len
    limit = max_len + form_slack
    start: Formula = (g.start,)
    seen = {start}
    queue = deque([start])
    out: set[Formula] = set()
    while queue:
        form = queue.popleft()
        if not any(s in g.nonterminals for s in form):
            if len(form) <= max_len:
                out.add(form)
            continue
        for p in g.productions:
            k = len(p.head)
            for i in range(len(form) - k + 1):
                if form[i:i + k] == p.head:
                    nxt = form[:i] + p.body + form[i + k:]
                    if len(nxt) <= limit and nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return out


@dataclass(frozen=True)
class InferenceRule:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self):
        bound = {t for prem in self.premises for t in prem if is_metavar(t)}
        free = [t for t in self.conclusion if is_metavar(t) and t not in bound]
        if free:
            raise FormalSystemError(f"conclusion metavariables {free} do not occur in any premise")

    @classmethod
    def parse(cls, text: str) -> "InferenceRule":
        """``p1 ; p2 => c`` with whitespace-separated tokens and ``?name`` metavariables."""
        if "=>" not in text:
            raise FormalSystemError(f"rule {text!r} lacks '=>'")
        lhs, rhs = text.split("=>", 1)
        premises = tuple(tuple(p.split()) for p in lhs.split(";") if p.strip())
        return cls(premises, tuple(rhs.split()))

    def __str__(self):
        return f"{' ; '.join(' '.join(p) for p in self.premises)} => {' '.join(self.conclusion)}"


def match(pattern: Sequence[str], formula: Sequence[str], bindings: Mapping[str, Formula] | None = None
          ) -> Iterator[dict[str, Formula]]:
    """Yield every extension of ``bindings`` under which ``pattern`` equals ``formula``.

    Metavariables stand for nonempty symbol subsequences.
    """
    env = dict(bindings or {})
    yield from _match(tuple(pattern), tuple(formula), 0, 0, env)


def _match(pat: Formula, f: Formula, i: int, j: int, env: dict) -> Iterator[dict]:
    if i == len(pat):
        if j == len(f):
            yield dict(env)
        return
    tok = pat[i]
    if not is_metavar(tok):
        if j < len(f) and f[j] == tok:
            yield from _match(pat, f, i + 1, j + 1, env)
        return
    if tok in env:
        val = env[tok]
        if f[j:j + len(val)] == val:
            yield from _match(pat, f, i + 1, j + len(val), env)
        return
    # leave room for the fixed-length minimum of the rest of the pattern
    rest_min = len(pat) - i - 1
    for end in range(j + 1, len(f) - rest_min + 1):
        env[tok] = f[j:end]
        yield from _match(pat, f, i + 1, end, env)
        del env[tok]


def instantiate(pattern: Sequence[str], env: Mapping[str, Formula]) -> Formula:
    out: list[str] = []
    for tok in pattern:
        if is_metavar(tok):
            out.extend(env[tok])
        else:
            out.append(tok)
    return tuple(out)


@dataclass(frozen=True)
class FormalSystem:
    grammar: Grammar
    axioms: frozenset[Formula]
    rules: tuple[InferenceRule, ...]

    def __post_init__(self):
        if self.grammar.context_free:
            bad = [a for a in self.axioms if not is_wff(a, self.grammar)]
            if bad:
                raise NotAWff(f"axioms {bad} are not well formed")

    def wff(self, s: Sequence[str]) -> bool:
        return is_wff(s, self.grammar) if self.grammar.context_free else True

    @classmethod
    def parse(cls, text: str) -> "FormalSystem":
        sections: dict[str, list[str]] = {}
        current = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip().lower()
                sections.setdefault(current, [])
            elif current is None:
                raise FormalSystemError(f"line {lineno}: content before first section")
            else:
                sections[current].append(line)
        terminals = [t for line in sections.get("terminals", []) for t in line.split()]
        nonterminals = [t for line in sections.get("nonterminals", []) for t in line.split()]
        if not nonterminals:
            raise FormalSystemError("no nonterminals declared")
        start = sections.get("start", [nonterminals[0]])[0].split()[0]
        productions = []
        for line in sections.get("productions", []):
            if "->" not in line:
                raise FormalSystemError(f"production {line!r} lacks '->'")
            head, body = line.split("->", 1)
            body_tokens = tuple(t for t in body.split() if t != EPSILON)
            productions.append(Production(tuple(head.split()), body_tokens))
        grammar = Grammar(frozenset(terminals), frozenset(nonterminals), tuple(productions), start)
        axioms = frozenset(as_symbols(line) for line in sections.get("axioms", []))
        rules = tuple(InferenceRule.parse(line) for line in sections.get("rules", []))
        return cls(grammar, axioms, rules)

    @classmethod
    def load(cls, path: str | Path) -> "FormalSystem":
        return cls.parse(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class Axiom:
    pass


@dataclass(frozen=True)
class RuleApplication:
    rule: int
    premises: tuple[int, ...]


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Axiom | RuleApplication


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def to_json(self) -> str:
        rows = []
        for s in self.steps:
            just = "axiom" if isinstance(s.justification, Axiom) else {
                "rule": s.justification.rule, "premises": list(s.justification.premises)}
            rows.append({"formula": " ".join(s.formula), "justification": just})
        return json.dumps({"steps": rows}, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Derivation":
        steps = []
        for row in json.loads(text)["steps"]:
            just = row["justification"]
            j = Axiom() if just == "axiom" else RuleApplication(just["rule"], tuple(just["premises"]))
            steps.append(Step(tuple(row["formula"].split()), j))
        return cls(tuple(steps))


@dataclass(frozen=True)
class Proved:
    derivation: Derivation


@dataclass(frozen=True)
class Unknown:
    rounds: int
    known: int


def _order(f: Formula):
    return (len(f), f)


def derive(fs: FormalSystem, target: str | Sequence[str], bound: int, *, max_new_per_round: int = 10_000,
           max_symbols: int = 64) -> Proved | Unknown:
    """Breadth-first saturation for ``bound`` rounds.

    ``Unknown`` only says the target was not reached; it is never a claim that
    the target is not a theorem.
    """
    goal = as_symbols(target)
    if not fs.wff(goal):
        raise NotAWff(f"target {' '.join(goal)!r} is not well formed")
    origin: dict[Formula, Axiom | tuple[int, tuple[Formula, ...]]] = {}
    known: list[Formula] = []
    for ax in sorted(fs.axioms, key=_order):
        origin[ax] = Axiom()
        known.append(ax)
    rounds = 0
    while goal not in origin and rounds < bound:
        rounds += 1
        fresh: dict[Formula, tuple[int, tuple[Formula, ...]]] = {}
        snapshot = list(known)
        for idx, rule in enumerate(fs.rules):
            for env, used in _premise_matches(rule.premises, snapshot):
                concl = instantiate(rule.conclusion, env)
                if concl in origin or concl in fresh or len(concl) > max_symbols:
                    continue
                if not fs.wff(concl):
                    continue
                fresh[concl] = (idx, used)
        if not fresh:
            break
        for concl in sorted(fresh, key=_order)[:max_new_per_round]:
            origin[concl] = fresh[concl]
            known.append(concl)
    if goal not in origin:
        return Unknown(rounds, len(known))
    return Proved(_extract(goal, origin, known))


def _premise_matches(premises: tuple[Formula, ...], pool: list[Formula]
                     ) -> Iterator[tuple[dict, tuple[Formula, ...]]]:
    def go(i, env, used):
        if i == len(premises):
            yield env, tuple(used)
            return
        for f in pool:
            for env2 in match(premises[i], f, env):
                yield from go(i + 1, env2, used + [f])
    yield from go(0, {}, [])


def _extract(goal: Formula, origin: dict, known: list[Formula]) -> Derivation:
    rank = {f: i for i, f in enumerate(known)}
    needed: set[Formula] = set()
    stack = [goal]
    while stack:
        f = stack.pop()
        if f in needed:
            continue
        needed.add(f)
        src = origin[f]
        if not isinstance(src, Axiom):
            stack.extend(src[1])
    ordered = sorted(needed, key=rank.__getitem__)
    position = {f: i for i, f in enumerate(ordered)}
    steps = []
    for f in ordered:
        src = origin[f]
        if isinstance(src, Axiom):
            steps.append(Step(f, Axiom()))
        else:
            steps.append(Step(f, RuleApplication(src[0], tuple(position[p] for p in src[1]))))
    return Derivation(tuple(steps))


def check_derivation(fs: FormalSystem, d: Derivation) -> bool:
    if not d.steps:
        return False
    for i, step in enumerate(d.steps):
        if not fs.wff(step.formula):
            return False
        just = step.justification
        if isinstance(just, Axiom):
            if step.formula not in fs.axioms:
                return False
            continue
        if not (0 <= just.rule < len(fs.rules)):
            return False
        rule = fs.rules[just.rule]
        if len(just.premises) != len(rule.premises):
            return False
        if any(not (0 <= p < i) for p in just.premises):
            return False
        cited = [d.steps[p].formula for p in just.premises]
        if not _rule_yields(rule, cited, step.formula):
            return False
    return True


def _rule_yields(rule: InferenceRule, cited: list[Formula], conclusion: Formula) -> bool:
    def go(i, env):
        if i == len(cited):
            return instantiate(rule.conclusion, env) == conclusion
        return any(go(i + 1, env2) for env2 in match(rule.premises[i], cited[i], env))
    return go(0, {})


@dataclass(frozen=True)
class FixedPointCertificate:
    v_number: int
    lhs: int                 # diag(G(V(x))) via decode/substitute/encode
    rhs: int                 # G(gamma) from the assembled string
    arithmetic: int          # G(gamma) computed position by position

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs == self.arithmetic


@dataclass(frozen=True)
class Skeleton:
    v_formula: Formula
    gamma: Formula
    certificate: FixedPointCertificate


def self_application(q_template: Sequence[str], free_var: str = "x", diag_symbol: str = "d") -> Formula:
    """Plug the term ``diag_symbol free_var`` into the template's hole."""
    template = tuple(q_template)
    if template.count(HOLE) != 1:
        raise FormalSystemError(f"template must contain exactly one {HOLE!r}")
    i = template.index(HOLE)
    return template[:i] + (diag_symbol, free_var) + template[i + 1:]


def godel_sentence_skeleton(q_template: str | Sequence[str], table: SymbolTable, free_var: str = "x", *,
                            diag_symbol: str = "d", numeral_budget: int = 10**6) -> Skeleton:
    """Build V(x) = Q(d x) and gamma = V(numeral of G(V(x))).

    The ``d`` term inside gamma is applied to the numeral of G(V(x)); the
    certificate shows that diag of that number equals G(gamma), so gamma
    mentions (the numeral of) its own Gödel number through ``d``.
    """
    v = self_application(as_symbols(q_template), free_var, diag_symbol)
    n = int(goedel_encode(v, table))
    if n + 1 > numeral_budget:
        raise EncodingOverflowBudget(f"numeral of {n} has {n + 1} symbols, budget is {numeral_budget}")
    gamma = substitute(v, free_var, render_numeral(numeral_of(n), table))
    cert = FixedPointCertificate(
        v_number=n,
        lhs=int(diag(n, table, free_var)),
        rhs=int(goedel_encode(gamma, table)),
        arithmetic=encode_substituted(v, free_var, n, table),
    )
    return Skeleton(v, gamma, cert)


def skeleton_size(q_template: Sequence[str], table: SymbolTable, free_var: str = "x",
                  diag_symbol: str = "d") -> int:
    """G(V(x)) for the template, i.e. the numeral length minus one."""
    return int(goedel_encode(self_application(q_template, free_var, diag_symbol), table))


def example_grammar() -> Grammar:
    return Grammar.build("ab", ["S"], [("S", "aSb"), ("S", "ba")])


def modus_ponens_system() -> FormalSystem:
    """Atoms a, b, c with implications; axioms a and a -> b; modus ponens."""
    g = Grammar.build(["a", "b", "c", "→", "(", ")"], ["F"],
                      [("F", "a"), ("F", "b"), ("F", "c"), ("F", "( F → F )"), ("F", "F → F")])
    rule = InferenceRule.parse("?p ; ?p → ?q => ?q")
    return FormalSystem(g, frozenset({("a",), ("a", "→", "b")}), (rule,))


def enumerate_strings(alphabet: Sequence[str], max_len: int) -> Iterator[Formula]:
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)
