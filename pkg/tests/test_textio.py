import random

import pytest
from hypothesis import given, settings, strategies as st

from forestslp.ac_equiv import AcTheory
from forestslp.errors import CycleError, GrammarSyntaxError
from forestslp.samples import (
    ac_pair_texts,
    spine_doubling,
    spine_doubling_text,
    string_sample,
    topdag_sample,
    topdag_sample_text,
)
from forestslp.textio import (
    parse_fslp,
    parse_sslp,
    parse_theory,
    parse_topdag,
    print_fslp,
    print_sslp,
    print_theory,
    print_topdag,
)
from forestslp.generators import random_fslp

from helpers import random_sslp, random_topdag

seeds = st.integers(min_value=0, max_value=10**9)


def test_sslp_round_trip_sample():
    g, symbols = string_sample()
    text = print_sslp(g, symbols)
    g2, symbols2 = parse_sslp(text)
    assert symbols2 == symbols
    assert g2.eval() == g.eval()
    assert print_sslp(g2, symbols2) == text


def test_sslp_terminals_numbered_by_text():
    g, symbols = parse_sslp("start S\nS -> 'z' A \"b\"\nA -> 'b'\n")
    assert symbols == ("b", "z")
    assert g.eval() == (1, 0, 0)


def test_forward_references_and_comments():
    f = parse_fslp("# value a(b)\nstart S\nS -> node a B  # root\nB -> node b\n")
    assert str(f.eval()) == "a(b)"


def test_cycles_rejected():
    with pytest.raises(CycleError):
        parse_fslp("start S\nS -> h A A\nA -> h S S\n")


@pytest.mark.parametrize("text, line", [
    ("start S\nS -> node\n", 2),
    ("start S\nS -> h A\nA -> eps\n", 2),
    ("start S\nS -> frob A\n", 2),
    ("start S\nS -> node a\nS -> node b\n", 3),
    ("start S\nS -> node a(\n", 2),
])
def test_fslp_syntax_errors_carry_line(text, line):
    with pytest.raises(GrammarSyntaxError) as exc:
        parse_fslp(text)
    assert exc.value.line == line


def test_undefined_variable():
    with pytest.raises(GrammarSyntaxError):
        parse_fslp("start S\nS -> h A B\nA -> eps\n")


def test_fslp_sample_texts_parse():
    for n in range(3):
        assert print_fslp(parse_fslp(spine_doubling_text(n))) == print_fslp(spine_doubling(n))
    for text in ac_pair_texts(1):
        parse_fslp(text).validate()


def test_topdag_round_trip_sample():
    text = topdag_sample_text(2)
    d = parse_topdag(text)
    assert d.eval() == topdag_sample(2).eval()
    assert parse_topdag(print_topdag(d)).eval() == d.eval()


def test_theory_round_trip():
    th = parse_theory("# example\nassoc: e\ncomm: d e\n")
    assert th == AcTheory.of({"e"}, {"d", "e"})
    assert parse_theory(print_theory(th)) == th
    assert parse_theory("") == AcTheory()
    with pytest.raises(GrammarSyntaxError):
        parse_theory("assoc e\n")
    with pytest.raises(GrammarSyntaxError):
        parse_theory("comm: (\n")


@settings(max_examples=200)
@given(seeds)
def test_fslp_round_trip_random(seed):
    rng = random.Random(seed)
    f = random_fslp(rng, rng.randrange(3, 40), max_nodes=500)
    text = print_fslp(f)
    g = parse_fslp(text)
    assert g.eval() == f.eval()
    assert print_fslp(g) == text


@settings(max_examples=100)
@given(seeds)
def test_sslp_round_trip_random(seed):
    rng = random.Random(seed)
    g = random_sslp(rng, rng.randrange(1, 30), max_len=2000)
    symbols = ("a", "b", "c")
    h, syms = parse_sslp(print_sslp(g, symbols))
    assert [syms[c] for c in h.eval()] == [symbols[c] for c in g.eval()]


@settings(max_examples=100)
@given(seeds)
def test_topdag_round_trip_random(seed):
    rng = random.Random(seed)
    d = random_topdag(rng, rng.randrange(1, 30))
    text = print_topdag(d)
    d2 = parse_topdag(text)
    assert d2.eval() == d.eval()
    assert print_topdag(d2) == text
