"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random

from forestslp.forest_core import Forest, node_arrays, parse_forest
from forestslp.fslp import FSLP
from forestslp.generators import random_fslp
from forestslp.sslp import SSLP, term
from forestslp.topdag import TopDag

LABELS = ("a", "b", "c")


def random_sslp(rng: random.Random, n_rules: int, alphabet: int = 3, max_len: int = 10**4) -> SSLP:
    """Random SSLP whose last variable is the start; values at most ``max_len``."""
    rules: list[tuple] = []
    lengths: list[int] = []
    while len(rules) < n_rules:
        k = rng.randrange(0, 4)
        items = []
        for _ in range(k):
            if rules and rng.random() < 0.7:
                items.append(rng.randrange(len(rules)))
            else:
                items.append(term(rng.randrange(alphabet)))
        n = sum(1 if it < 0 else lengths[it] for it in items)
        if n > max_len:
            continue
        rules.append(tuple(items))
        lengths.append(n)
    return SSLP(tuple(rules), len(rules) - 1)


def random_tree_fslp(rng: random.Random, n_rules: int, max_nodes: int = 2000) -> FSLP:
    """Random FSLP whose value is one tree with at least two nodes."""
    f = random_fslp(rng, n_rules, LABELS, max_nodes)
    good = [
        v for v in range(len(f.rules))
        if not f.ranks[v] and f.tree_counts[v] == 1 and f.node_counts[v] >= 2
    ]
    if good and rng.random() < 0.8:
        return f.with_start(rng.choice(good))
    # put the whole value under a fresh root next to a leaf
    rules = list(f.rules)
    rules.append(("node", "b", ()))
    rules.append(("h", f.start, len(rules) - 1))
    rules.append(("node", rng.choice(LABELS), (len(rules) - 1,)))
    return FSLP(tuple(rules), len(rules) - 1)


def random_topdag(rng: random.Random, n_rules: int, labels=LABELS, max_nodes: int = 2000) -> TopDag:
    """Random valid top dag; the start is the last rank-0 variable."""
    rules: list[tuple] = []
    info: list[tuple] = []  # (rank, root, bottom, nodes)
    while len(rules) < n_rules or not any(i[0] == 0 for i in info):
        op = rng.choice(("atom", "atomb", "hm", "hm", "vm", "vm"))
        if op in ("atom", "atomb") or not rules:
            a, b = rng.choice(labels), rng.choice(labels)
            if op == "atomb":
                rules.append(("atomb", a, b))
                info.append((1, a, b, 2))
            else:
                rules.append(("atom", a, b))
                info.append((0, a, None, 2))
            continue
        if op == "hm":
            b = rng.randrange(len(rules))
            cands = [c for c in range(len(rules))
                     if info[c][1] == info[b][1] and info[b][0] + info[c][0] <= 1]
            if not cands:
                continue
            c = rng.choice(cands)
            if rng.random() < 0.5:
                b, c = c, b
            n = info[b][3] + info[c][3] - 1
            if n > max_nodes:
                continue
            rules.append(("hm", b, c))
            info.append((info[b][0] + info[c][0], info[b][1], info[b][2] or info[c][2], n))
        else:
            ones = [b for b in range(len(rules)) if info[b][0] == 1]
            if not ones:
                continue
            b = rng.choice(ones)
            cands = [c for c in range(len(rules)) if info[c][1] == info[b][2]]
            if not cands:
                continue
            c = rng.choice(cands)
            n = info[b][3] + info[c][3] - 1
            if n > max_nodes:
                continue
            rules.append(("vm", b, c))
            info.append((info[c][0], info[b][1], info[c][2], n))
    start = max(i for i in range(len(rules)) if info[i][0] == 0)
    return TopDag(tuple(rules), start)


# -- nested trees ------------------------------------------------------------------

def to_nested(f: Forest) -> list:
    labels, children, roots = node_arrays(f)

    def build(u):
        return [labels[u], [build(c) for c in children[u]]]

    return [build(r) for r in roots]


def from_nested(trees: list) -> Forest:
    def text(t):
        lab, kids = t
        return lab + ("(" + " ".join(text(k) for k in kids) + ")" if kids else "")

    return parse_forest(" ".join(text(t) for t in trees))


def _all_nodes(trees, out=None):
    out = [] if out is None else out
    for t in trees:
        out.append(t)
        _all_nodes(t[1], out)
    return out


def perturb(rng: random.Random, f: Forest, assoc, comm, steps: int = 1) -> Forest:
    """Apply random single rewrites that hold modulo the theory: swap two
    adjacent children of a commutative node, flatten an associative child
    into its equally labelled parent, or group a run of children of an
    associative node under a new node with the same label."""
    trees = to_nested(f)
    for _ in range(steps):
        moves = []
        for t in _all_nodes(trees):
            lab, kids = t
            if lab in comm and len(kids) >= 2:
                moves.append(("swap", t))
            if lab in assoc and any(k[0] == lab for k in kids):
                moves.append(("flat", t))
            if lab in assoc and kids:
                moves.append(("group", t))
        if not moves:
            break
        kind, t = rng.choice(moves)
        kids = t[1]
        if kind == "swap":
            i = rng.randrange(len(kids) - 1)
            kids[i], kids[i + 1] = kids[i + 1], kids[i]
        elif kind == "flat":
            i = rng.choice([j for j, k in enumerate(kids) if k[0] == t[0]])
            kids[i:i + 1] = kids[i][1]
        else:
            i = rng.randrange(len(kids))
            j = rng.randrange(i, len(kids)) + 1
            kids[i:j] = [[t[0], kids[i:j]]]
    return from_nested(trees)


def unordered_canon(f: Forest) -> tuple:
    """Canonical form of a forest as a multiset of unordered trees."""
    labels, children, roots = node_arrays(f)
    canon: list = [None] * len(labels)
    for u in range(len(labels) - 1, -1, -1):
        canon[u] = (labels[u], tuple(sorted(canon[c] for c in children[u])))
    return tuple(sorted(canon[r] for r in roots))


def shuffle_children(rng: random.Random, f: Forest) -> Forest:
    trees = to_nested(f)
    for t in _all_nodes(trees):
        rng.shuffle(t[1])
    rng.shuffle(trees)
    return from_nested(trees)

