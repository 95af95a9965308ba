
import pytest
from hypothesis import given, strategies as st

from workbench.formal import (Derivation, FormalSystem, Grammar, NotAWff, Proved, Unknown, UnsupportedGrammar,
                              check_derivation, derive, enumerate_strings, generate_wffs, godel_sentence_skeleton,
                              is_wff, match, modus_ponens_system, example_grammar, self_application, EncodingOverflowBudget)
from workbench.godel import toy_table


def in_anbn_ba(s):
    """Oracle for S -> aSb | ba: a^n ba b^n."""
    n = (len(s) - 2) // 2
    return len(s) >= 2 and len(s) % 2 == 0 and s == ("a",) * n + ("b", "a") + ("b",) * n


def test_example_language():
    assert generate_wffs(example_grammar(), 6) == {tuple("ba"), tuple("abab"), tuple("aababb")}


def test_generate_empty_at_small_bound():
    assert generate_wffs(example_grammar(), 1) == set()
    with pytest.raises(ValueError):
        generate_wffs(example_grammar(), 0)


def test_membership_matches_oracle_exhaustively():
    g = example_grammar()
    for s in enumerate_strings("ab", 9):
        assert is_wff(s, g) == in_anbn_ba(s), s


@given(st.integers(1, 12))
def test_generate_agrees_with_recognizer(n):
    g = example_grammar()
    gen = generate_wffs(g, n)
    assert gen == {s for s in enumerate_strings("ab", n) if is_wff(s, g)}


def test_nullable_grammar():
    g = Grammar.build("ab", ["S"], [("S", ""), ("S", "aSb")])
    assert is_wff("", g) and is_wff("aabb", g) and not is_wff("aab", g)
    assert generate_wffs(g, 4) == {(), tuple("ab"), tuple("aabb")}


def test_non_cf_membership_unsupported():
    g = Grammar.build("ab", ["S", "A"], [("S", "aA"), ("aA", "ab")])
    with pytest.raises(UnsupportedGrammar):
        is_wff("ab", g)
    assert generate_wffs(g, 3) == {tuple("ab")}


def test_modus_ponens_derivation():
    fs = modus_ponens_system()
    res = derive(fs, "b", 3)
    assert isinstance(res, Proved)
    assert res.derivation.conclusion == ("b",)
    assert check_derivation(fs, res.derivation)
    assert Derivation.from_json(res.derivation.to_json()) == res.derivation


def test_underivable_is_unknown():
    fs = modus_ponens_system()
    res = derive(fs, "c", 5)
    assert isinstance(res, Unknown)


def test_target_must_be_wff():
    with pytest.raises(NotAWff):
        derive(modus_ponens_system(), "→ a", 2)


def test_tampered_derivation_rejected():
    fs = modus_ponens_system()
    d = derive(fs, "b", 3).derivation
    bad = Derivation(d.steps[:-1] + (type(d.steps[-1])(("c",), d.steps[-1].justification),))
    assert not check_derivation(fs, bad)


def test_derive_bound_monotone():
    fs = modus_ponens_system()
    first = next(b for b in range(10) if isinstance(derive(fs, "b", b), Proved))
    assert all(isinstance(derive(fs, "b", b), Proved) for b in range(first, first + 5))


def test_load_matches_builtins(data_dir):
    fs = FormalSystem.load(data_dir / "modus_ponens.fs")
    assert fs.axioms == modus_ponens_system().axioms
    g = FormalSystem.load(data_dir / "grammar_anbn.fs").grammar
    assert generate_wffs(g, 6) == generate_wffs(example_grammar(), 6)


def test_match_binds_consistently():
    envs = list(match(("?p", "→", "?p"), ("a", "→", "a")))
    assert envs and envs[0]["?p"] == ("a",)
    assert list(match(("?p", "→", "?p"), ("a", "→", "b"))) == []


def test_skeleton_certificate():
    t = toy_table()
    sk = godel_sentence_skeleton("N ·", t)
    assert sk.v_formula == ("N", "d", "x")
    assert sk.certificate.holds
    assert sk.gamma[:2] == ("N", "d") and len(sk.gamma) == 2 + sk.certificate.v_number + 1


def test_skeleton_budget():
    with pytest.raises(EncodingOverflowBudget):
        godel_sentence_skeleton("N ·", toy_table(), numeral_budget=100)
    assert self_application(("Q", "·")) == ("Q", "d", "x")
