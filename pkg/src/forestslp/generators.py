"""Random and parametrised inputs for tests, demos and benchmarks."""

from __future__ import annotations

import random

from .forest_core import Forest, parse_forest
from .fslp import FSLP, Emitter


def random_forest(rng: random.Random, n: int, labels=("a", "b", "c"), max_kids: int = 3) -> Forest:
    """Rank-0 forest with ``n`` nodes, grown by attaching nodes at random."""
    if n == 0:
        return Forest(())
    lab = [rng.choice(labels) for _ in range(n)]
    kids: list[list[int]] = [[] for _ in range(n)]
    roots = [0]
    for u in range(1, n):
        parent = rng.randrange(-1, u)
        if parent < 0 or len(kids[parent]) >= max_kids:
            roots.append(u)
        else:
            kids[parent].append(u)
    tokens: list[str] = []
    stack = list(reversed(roots))
    while stack:
        u = stack.pop()
        if isinstance(u, str):
            tokens.append(u)
            continue
        tokens.append(lab[u])
        if kids[u]:
            tokens.append("(")
            stack.append(")")
            stack.extend(reversed(kids[u]))
    return Forest(tuple(tokens))


def random_fslp(rng: random.Random, n_rules: int, labels=("a", "b", "c"),
                max_nodes: int = 2000) -> FSLP:
    """Well-formed FSLP using every operation, with values of at most
    ``max_nodes`` nodes; the start derives a rank-0 forest."""
    rules: list[tuple] = [("eps",), ("x",)]
    ranks = [0, 1]
    counts = [0, 1]
    zero = [0]
    one = [1]

    def push(rhs, rank, count):
        rules.append(rhs)
        ranks.append(rank)
        counts.append(count)
        (one if rank else zero).append(len(rules) - 1)

    for a in labels:
        push(("node", a, ()), 0, 1)
    while len(rules) < n_rules:
        op = rng.choice(("h", "h", "v", "v", "node", "node2"))
        a = rng.choice(labels)
        if op == "h":
            b = rng.choice(zero + one)
            c = rng.choice(zero if ranks[b] else zero + one)
            if rng.random() < 0.5:
                b, c = c, b
            rhs, rank, count = ("h", b, c), ranks[b] + ranks[c], counts[b] + counts[c]
        elif op == "v":
            b = rng.choice(one)
            c = rng.choice(zero + one)
            rhs, rank, count = ("v", b, c), ranks[c], counts[b] + counts[c] - 1
        elif op == "node":
            k = rng.randrange(3)
            kids = [rng.choice(zero + one) for _ in range(k)]
            if sum(ranks[o] for o in kids) > 1:
                kids = kids[:1]
            rhs = ("node", a, tuple(kids))
            rank, count = sum(ranks[o] for o in kids), 1 + sum(counts[o] for o in kids)
        else:
            b, c = rng.choice(zero), rng.choice(zero)
            rhs, rank, count = ("node2", a, b, c), 1, 2 + counts[b] + counts[c]
        if count > max_nodes:
            continue
        push(rhs, rank, count)
    start = zero[-1]
    return FSLP(tuple(rules), start)


def example_family(n: int) -> FSLP:
    """FSLP of size O(n) for the forest ``a^{2^n}(c^{2^n})`` style family:
    a chain of ``2^n`` a-nodes above ``2^n`` c-leaves, built by doubling."""
    e = Emitter()
    ctx = e.node("a", e.x())
    leaves = e.node("c")
    for _ in range(n):
        ctx = e.v(ctx, ctx)
        leaves = e.h(leaves, leaves)
    return e.build(e.v(ctx, leaves))


def comb(n: int, label: str = "a", leaf: str = "b") -> Forest:
    """Right comb ``a(b a(b ... a(b b)))`` with ``n`` internal nodes."""
    text = leaf
    for _ in range(n):
        text = f"{label}({leaf} {text})"
    return parse_forest(text)
