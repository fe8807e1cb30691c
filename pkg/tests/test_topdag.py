import random

import pytest
from hypothesis import given, settings, strategies as st

from forestslp.errors import (
    BottomLabelMismatch,
    ExplosionGuardError,
    NotATreeError,
    RankViolation,
    RootLabelMismatch,
    TreeTooSmallError,
)
from forestslp.forest_core import PARAM, Forest, parse_forest, print_forest, substitute
from forestslp.fslp import FSLP, from_forest_exact
from forestslp.generators import random_forest
from forestslp.samples import topdag_sample, wide_labels
from forestslp.topdag import Cluster, TopDag, _mark_bottom, fslp_to_topdag, top_dag_of_tree, topdag_to_fslp

from helpers import from_nested, random_topdag, random_tree_fslp, to_nested

seeds = st.integers(min_value=0, max_value=10**9)

# measured worst cases: |fslp| <= 2|D| + 1 and |D| <= 0.2 * sigma * |F|
C1 = 2
C2 = 1


def td(*rules, start=None):
    return TopDag(tuple(rules), len(rules) - 1 if start is None else start)


# -- validation ----------------------------------------------------------------------

def test_vertical_merge_defined():
    d = td(("atomb", "a", "b"), ("atom", "b", "c"), ("vm", 0, 1))
    info = d.validate()
    assert info[2].rank == 0
    assert str(d.eval()) == "a(b(c))"


def test_root_label_mismatch():
    with pytest.raises(RootLabelMismatch):
        td(("atom", "a", "b"), ("atom", "c", "d"), ("hm", 0, 1)).validate()


def test_rank_violations():
    with pytest.raises(RankViolation):
        td(("atomb", "a", "b"), ("atomb", "a", "c"), ("hm", 0, 1)).validate()
    with pytest.raises(RankViolation):
        td(("atom", "a", "a"), ("atom", "a", "b"), ("vm", 0, 1)).validate()
    with pytest.raises(RankViolation):
        td(("atomb", "a", "b"),).validate()


def test_bottom_label_mismatch():
    with pytest.raises(BottomLabelMismatch):
        td(("atomb", "a", "b"), ("atom", "c", "d"), ("vm", 0, 1)).validate()


# -- evaluation ----------------------------------------------------------------------

def _abc_cluster():
    # a(b c([a] b)) as rules 0..5; returns rules and the index of the top rule
    return [
        ("atom", "a", "b"),      # 0 a(b)
        ("atomb", "a", "c"),     # 1 a([c])
        ("atomb", "c", "a"),     # 2 c([a])
        ("atom", "c", "b"),      # 3 c(b)
        ("hm", 2, 3),            # 4 c([a] b)
        ("vm", 1, 4),            # 5 a(c([a] b))
        ("hm", 0, 5),            # 6 a(b c([a] b))
    ]


def test_merge_examples():
    rules = _abc_cluster()
    d = TopDag(tuple(rules), 6)
    assert str(d.eval(6)) == "a(b c([a] b))"
    # horizontal merge with a(b c)
    h = rules + [("atom", "a", "c"), ("hm", 0, 7), ("hm", 6, 8)]
    assert str(TopDag(tuple(h), 0).eval(9)) == "a(b c([a] b) b c)"
    # vertical merge with a(b [c])
    v = rules + [("atomb", "a", "c"), ("hm", 0, 7), ("vm", 6, 8)]
    assert str(TopDag(tuple(v), 0).eval(9)) == "a(b c(a(b [c]) b))"


def test_atom_eval():
    assert str(td(("atom", "a", "b")).eval()) == "a(b)"


def spine_pattern(n: int) -> str:
    # b(a^m b(a^m ... b(c) ... a^m) a^m) with 2^n + 1 occurrences of b, m = 2^n
    m = " ".join(["a"] * 2**n)
    text = "b(c)"
    for _ in range(2**n):
        text = f"b({m} {text} {m})"
    return text


def test_worked_sample():
    assert print_forest(topdag_sample(1).eval().tree) == "b(a a b(a a b(c) a a) a a)"
    for n in range(4):
        t = topdag_sample(n).eval().tree
        assert t == parse_forest(spine_pattern(n))
        assert t.tokens.count("b") == 2**n + 1


def test_eval_guard():
    with pytest.raises(ExplosionGuardError):
        topdag_sample(30).eval()


# -- explicit cluster algebra (test oracle) --------------------------------------------
# A rank-1 cluster with bottom leaf b is written as the context with b(x).

def to_ctx(c: Cluster) -> Forest:
    if c.bottom is None:
        return c.tree
    toks = c.tree.tokens
    k = -1
    for i, t in enumerate(toks):
        if t not in ("(", ")"):
            k += 1
            if k == c.bottom:
                return Forest(toks[: i + 1] + ("(", PARAM, ")") + toks[i + 1:])
    raise AssertionError("bottom index out of range")


def from_ctx(f: Forest) -> Cluster:
    return _mark_bottom(f.tokens)


def psi(ctx: Forest, a: str) -> Cluster:
    """The parameter of a rank-1 tree replaced by a bottom leaf labelled a."""
    return from_ctx(substitute(ctx, parse_forest(f"{a}(x)")))


def vmerge(s: Cluster, t: Cluster) -> Cluster:
    toks = to_ctx(s).tokens
    i = toks.index(PARAM)
    assert toks[i - 2] == t.tree.tokens[0]
    hole = Forest(toks[: i - 2] + (PARAM,) + toks[i + 2:])
    return from_ctx(substitute(hole, to_ctx(t)))


def test_cluster_context_round_trip():
    c = Cluster(parse_forest("a(b c(a b))"), 3)
    assert str(c) == "a(b c([a] b))"
    assert print_forest(to_ctx(c)) == "a(b c(a(x) b))"
    assert from_ctx(to_ctx(c)) == c


@settings(max_examples=200)
@given(seeds)
def test_psi_identity(seed):
    # psi_a(s<t>) = psi_b(s) vm psi_a(t), b the root label of t
    rng = random.Random(seed)

    def rank1_tree():
        t = to_nested(random_forest(rng, rng.randrange(1, 8)))[:1]
        nodes = []

        def walk(n):
            nodes.append(n)
            for k in n[1]:
                walk(k)

        walk(t[0])
        rng.choice(nodes)[1].append([PARAM, []])
        return from_nested(t)

    s, t = rank1_tree(), rank1_tree()
    a = rng.choice("abc")
    b = t.tokens[0]
    lhs = psi(substitute(s, t), a)
    rhs = vmerge(psi(s, b), psi(t, a))
    assert lhs == rhs


# -- translations --------------------------------------------------------------------

def test_topdag_to_fslp_sample():
    d = topdag_sample(2)
    f = topdag_to_fslp(d)
    assert f.eval() == d.eval().tree


def test_topdag_to_fslp_atom():
    f = topdag_to_fslp(td(("atom", "a", "b")))
    assert f.eval() == parse_forest("a(b)")


def test_fslp_to_topdag_two_leaves():
    d = fslp_to_topdag(from_forest_exact(parse_forest("a(b c)")))
    assert str(d.eval()) == "a(b c)"
    assert sorted(r[0] for r in d.rules) == ["atom", "atom", "hm"]


def test_fslp_to_topdag_preconditions():
    with pytest.raises(NotATreeError):
        fslp_to_topdag(from_forest_exact(parse_forest("a b")))
    with pytest.raises(TreeTooSmallError):
        fslp_to_topdag(from_forest_exact(parse_forest("a")))
    with pytest.raises(NotATreeError):
        fslp_to_topdag(FSLP((("eps",),), 0))


def test_round_trip_sample():
    for n in range(4):
        d = topdag_sample(n)
        f = topdag_to_fslp(d)
        d2 = fslp_to_topdag(f)
        assert d2.eval() == d.eval()


def test_wide_labels_growth():
    sizes = [fslp_to_topdag(wide_labels(n)).size for n in range(4, 9)]
    assert all(b > a for a, b in zip(sizes, sizes[1:]))
    assert all(s >= 3 * n for s, n in zip(sizes, range(4, 9)))


@settings(max_examples=300)
@given(seeds)
def test_topdag_to_fslp_random(seed):
    rng = random.Random(seed)
    d = random_topdag(rng, rng.randrange(1, 40))
    f = topdag_to_fslp(d)
    assert f.eval() == d.eval().tree
    assert f.size <= C1 * d.size + 1


@settings(max_examples=300)
@given(seeds)
def test_fslp_to_topdag_random(seed):
    rng = random.Random(seed)
    f = random_tree_fslp(rng, rng.randrange(3, 40))
    d = fslp_to_topdag(f)
    assert d.eval().tree == f.eval()
    assert d.eval().bottom is None
    sigma = len(f.labels())
    assert d.size <= C2 * sigma * f.size


@settings(max_examples=50)
@given(seeds)
def test_top_dag_of_tree(seed):
    rng = random.Random(seed)
    t = parse_forest("r(" + print_forest(random_forest(rng, rng.randrange(1, 80))) + ")")
    assert top_dag_of_tree(t).eval().tree == t
