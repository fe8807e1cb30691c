"""Equality of compressed forests modulo associative and commutative labels.

Pipeline: flatten associative labels (:func:`nf_assoc`), bring the result
into strong normal form, sort the children of commutative labels
(:func:`canonize_comm`) and compare the two canonical forests as term
strings (:func:`compare_forests`).  Nothing is decompressed unless a value
is small.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import GrammarError
from .forest_core import LabelSet
from .fslp import ALIAS, FSLP, NORMAL, assemble, hor_sslp, operands, require_normal_form
from .normal_form import build_strong_normal_form, normal_form
from .recompression import LlexComparator
from .sslp import EQ, GT, LT, SSLP

# values whose term string is at most this long are compared directly
DIRECT_LIMIT = 4096


@dataclass(frozen=True)
class AcTheory:
    assoc: frozenset = frozenset()
    comm: frozenset = frozenset()

    @classmethod
    def of(cls, assoc: Iterable[str] = (), comm: Iterable[str] = ()) -> "AcTheory":
        return cls(frozenset(assoc), frozenset(comm))


# -- associative flattening ----------------------------------------------------

def nf_assoc(f: FSLP, assoc: Iterable[str]) -> FSLP:
    """FSLP for the forest in which every node with an associative label
    ``a`` absorbs the children of its ``a``-labelled children.

    Every variable ``A`` gets copies ``A_a``: the value of ``A`` flattened
    under a parent labelled ``a``.  Copies for non-associative parents all
    coincide, so they share one subscript (None).  Only copies reachable
    from the start are built.
    """
    assoc = frozenset(assoc)
    f = normal_form(f)
    rules = f.rules
    r = f.ranks
    # label above the parameter of every rank-1 variable
    above: list = [None] * len(rules)
    for i, rhs in enumerate(rules):
        if rhs[0] == "node2":
            above[i] = rhs[1]
        elif rhs[0] == "v" and r[rhs[2]]:
            above[i] = above[rhs[2]]

    def sub(a):
        return a if a in assoc else None

    defs: dict = {}
    start = ("A", f.start, None)
    todo = [start]
    while todo:
        key = todo.pop()
        if key in defs:
            continue
        _, i, a = key
        rhs = rules[i]
        op = rhs[0]
        if op == "eps":
            d = ("eps",)
        elif op == "h":
            d = ("h", ("A", rhs[1], a), ("A", rhs[2], a))
        elif op == "v":
            d = ("v", ("A", rhs[1], a), ("A", rhs[2], sub(above[rhs[1]])))
        elif op == "node":
            b = rhs[1]
            if b in assoc and b == a:
                d = (ALIAS, ("A", rhs[2][0], a))
            else:
                d = ("node", b, (("A", rhs[2][0], sub(b)),))
        else:
            b, bk, ck = rhs[1], rhs[2], rhs[3]
            if b in assoc and b == a:
                # B_a x C_a
                defs[key + ("bx",)] = ("h", ("A", bk, a), ("X",))
                d = ("h", key + ("bx",), ("A", ck, a))
            else:
                d = ("node2", b, ("A", bk, sub(b)), ("A", ck, sub(b)))
        defs[key] = d
        deps = (d[1],) if d[0] == ALIAS else operands(d)
        for dep in deps:
            if dep[0] == "A":
                todo.append(dep)
        if key + ("bx",) in defs:
            todo.extend(x for x in operands(defs[key + ("bx",)]) if x[0] == "A")
    defs["X",] = ("x",)
    return assemble(defs, start)


# -- term strings ----------------------------------------------------------------

class GammaProgram:
    """Incremental SSLP over term-string codes for keyed FSLP rules.

    A rank-0 key owns one SSLP variable; a rank-1 key owns the pair of
    variables deriving the text left and right of the parameter.
    """

    def __init__(self, labels: LabelSet):
        self.labels = labels
        self.rules: list[tuple] = []
        self.lengths: list[int] = []
        self.of: dict = {}
        self.rank: dict = {}
        self.count: dict = {}
        self._open = self._add((~0,))
        self._close = self._add((~1,))
        self._direct: dict = {}

    def _add(self, items) -> int:
        items = tuple(it for it in items if it < 0 or self.lengths[it])
        if len(items) == 1 and items[0] >= 0:
            return items[0]
        self.rules.append(items)
        self.lengths.append(sum(1 if it < 0 else self.lengths[it] for it in items))
        return len(self.rules) - 1

    def define(self, key, rhs):
        """Register ``key`` with a keyed right-hand side (operands already defined)."""
        op = rhs[0]
        of, rank, count = self.of, self.rank, self.count
        if op == ALIAS:
            t = rhs[1]
            of[key], rank[key], count[key] = of[t], rank[t], count[t]
            return
        if op == "eps":
            of[key], rank[key], count[key] = self._add(()), 0, 0
        elif op == "h":
            b, c = rhs[1], rhs[2]
            if rank[b] or rank[c]:
                raise GrammarError("term strings of rank-1 concatenations are not supported")
            of[key], rank[key], count[key] = self._add((of[b], of[c])), 0, count[b] + count[c]
        elif op == "node":
            a = ~self.labels.gamma(rhs[1])
            kids = rhs[2]
            if any(rank[k] for k in kids):
                raise GrammarError("term strings of rank-1 node arguments are not supported")
            n = sum(count[k] for k in kids)
            if n == 0:
                of[key] = self._add((a,))
            else:
                of[key] = self._add((a, self._open) + tuple(of[k] for k in kids) + (self._close,))
            rank[key], count[key] = 0, n + 1
        elif op == "node2":
            a = ~self.labels.gamma(rhs[1])
            b, c = rhs[2], rhs[3]
            of[key] = (self._add((a, self._open, of[b])), self._add((of[c], self._close)))
            rank[key], count[key] = 1, 2 + count[b] + count[c]
        else:
            b, c = rhs[1], rhs[2]
            b1, b2 = of[b]
            if rank[c]:
                c1, c2 = of[c]
                of[key] = (self._add((b1, c1)), self._add((c2, b2)))
            else:
                if count[c] == 0:
                    raise GrammarError("substituting the empty forest is not supported here")
                of[key] = self._add((b1, of[c], b2))
            rank[key], count[key] = rank[c], count[b] + count[c] - 1

    def sslp(self) -> SSLP:
        return SSLP(tuple(self.rules))

    def length(self, key) -> int:
        return self.lengths[self.of[key]]

    def direct(self, key) -> tuple:
        v = self.of[key]
        s = self._direct.get(v)
        if s is None:
            out: list[int] = []
            stack = [v]
            rules = self.rules
            while stack:
                it = stack.pop()
                if it < 0:
                    out.append(~it)
                else:
                    stack.extend(reversed(rules[it]))
            s = self._direct[v] = tuple(out)
        return s

    def compare(self, k1, k2) -> int:
        """llex relation of the values of two rank-0 keys."""
        v1, v2 = self.of[k1], self.of[k2]
        if v1 == v2:
            return EQ
        n1, n2 = self.lengths[v1], self.lengths[v2]
        if n1 != n2:
            return LT if n1 < n2 else GT
        if n1 <= DIRECT_LIMIT:
            s1, s2 = self.direct(k1), self.direct(k2)
            return (s1 > s2) - (s1 < s2)
        return LlexComparator(self.sslp(), [v1, v2]).compare(0, 1)


def forest_string_sslp(f: FSLP, var: int | None = None, labels: LabelSet | None = None) -> SSLP:
    """SSLP over term-string codes (see :meth:`LabelSet.gamma`) whose start
    derives the term string of the rank-0 variable ``var``."""
    require_normal_form(f)
    var = f.start if var is None else var
    if f.ranks[var]:
        raise GrammarError("term strings are defined for rank-0 variables")
    labels = labels or LabelSet.of(f.labels())
    g = GammaProgram(labels)
    reach = f.reachable([var])
    for i, rhs in enumerate(f.rules):
        if reach[i]:
            g.define(i, _keyed_rhs(rhs, lambda o: o))
    return SSLP(tuple(g.rules), g.of[var])


def _keyed_rhs(rhs, k):
    op = rhs[0]
    if op in ("h", "v"):
        return (op, k(rhs[1]), k(rhs[2]))
    if op == "node":
        return (op, rhs[1], tuple(k(o) for o in rhs[2]))
    if op == "node2":
        return (op, rhs[1], k(rhs[2]), k(rhs[3]))
    return rhs


def compare_forests(f1: FSLP, a1: int | None, f2: FSLP, a2: int | None,
                    labels: LabelSet | None = None) -> int:
    """LT, EQ or GT for the llex order of the term strings of two rank-0 values."""
    labels = labels or LabelSet.of(f1.labels(), f2.labels())
    g = GammaProgram(labels)
    roots = []
    for tag, f, a in (("1", f1, a1), ("2", f2, a2)):
        if a is not None and a != f.start:
            f = f.with_start(a)
        f = normal_form(f)
        a = f.start
        reach = f.reachable([a])
        for i, rhs in enumerate(f.rules):
            if reach[i]:
                g.define((tag, i), _keyed_rhs(rhs, lambda o, t=tag: (t, o)))
        roots.append((tag, a))
    return g.compare(*roots)


# -- commutative canonization ---------------------------------------------------

class _Order:
    """Sorted list of equivalence classes of canonized rank-0 values."""

    def __init__(self, gamma: GammaProgram):
        self.gamma = gamma
        self.classes: list = []
        self.class_of: dict = {}

    def insert(self, key):
        if key in self.class_of:
            return
        lo, hi = 0, len(self.classes)
        while lo < hi:
            mid = (lo + hi) // 2
            c = self.gamma.compare(key, self.classes[mid][0])
            if c == EQ:
                self.classes[mid].append(key)
                self.class_of[key] = self.classes[mid][0]
                return
            if c == LT:
                hi = mid
            else:
                lo = mid + 1
        self.classes.insert(lo, [key])
        self.class_of[key] = key

    def sort(self, keys):
        for k in keys:
            self.insert(k)
        pos = {c[0]: i for i, c in enumerate(self.classes)}
        return sorted(keys, key=lambda k: (pos[self.class_of[k]], k))


def canonize_comm(f: FSLP, comm: Iterable[str], labels: LabelSet | None = None) -> FSLP:
    """FSLP for the forest in which the children of every node with a
    commutative label are sorted by the llex order of their term strings.

    The input is rebuilt into strong normal form; then every commutative
    node gets its child sequence replaced by a counting program that lists
    each distinct child variable as often as it occurs, in sorted order.
    A commutative ``a(B x C)`` becomes ``a(sorted(BC) x)``: the tree that
    replaces ``x`` always contains the context itself as a subtree, so its
    term string is longer than that of every sibling.
    """
    comm = frozenset(comm)
    f = normal_form(f)
    if not comm & f.labels():
        return f
    f = build_strong_normal_form(f)
    labels = labels or LabelSet.of(f.labels())
    hs, hmap = hor_sslp(f)
    syms = hs.symbol_sets
    rules = f.rules
    r = f.ranks
    gamma = GammaProgram(labels)
    order = _Order(gamma)
    defs: dict = {}

    def define(key, rhs):
        if key not in defs:
            defs[key] = rhs
            gamma.define(key, rhs)

    define(("E",), ("eps",))

    def letters(v):
        return syms[hmap[v]] if v in hmap else frozenset((v,))

    def power(v, a):
        # output key for the occurrences of letter a in hor(v), in order
        if v not in hmap:
            return ("F", v)
        stack = [v]
        while stack:
            u = stack[-1]
            key = ("P", u, a)
            if key in defs:
                stack.pop()
                continue
            kids = [o for o in rules[u][1:] if a in letters(o)]
            missing = [o for o in kids if o in hmap and ("P", o, a) not in defs]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            parts = [("P", o, a) if o in hmap else ("F", o) for o in kids]
            define(key, (ALIAS, parts[0]) if len(parts) == 1 else ("h", parts[0], parts[1]))
        return ("P", v, a)

    def sorted_word(vs):
        delta = set()
        for v in vs:
            delta |= letters(v)
        acc = ("E",)
        for a in order.sort([("F", d) for d in delta]):
            d = a[1]
            for v in vs:
                if d in letters(v):
                    nxt = ("W", acc, v, d)
                    define(nxt, ("h", acc, power(v, d)) if acc != ("E",) else (ALIAS, power(v, d)))
                    acc = nxt
        return acc

    for i, rhs in enumerate(rules):
        op = rhs[0]
        key = ("F", i)
        if op == "node" and rhs[1] in comm:
            define(key, ("node", rhs[1], (sorted_word([rhs[2][0]]),)))
        elif op == "node2" and rhs[1] in comm:
            define(key, ("node2", rhs[1], sorted_word([rhs[2], rhs[3]]), ("E",)))
        elif op == "v" and not r[rhs[2]] and rules[rhs[1]][0] == "node2" and rules[rhs[1]][1] in comm:
            _, a, d, e = rules[rhs[1]]
            define(key, ("node", a, (sorted_word([d, rhs[2], e]),)))
        else:
            define(key, _keyed_rhs(rhs, lambda o: ("F", o)))
    return assemble(defs, ("F", f.start), NORMAL)


# -- decision procedure -------------------------------------------------------------

def ac_canonical(f: FSLP, theory: AcTheory, labels: LabelSet | None = None) -> FSLP:
    """FSLP for the canonical representative of the value modulo the theory."""
    g = nf_assoc(f, theory.assoc) if theory.assoc else f
    return canonize_comm(g, theory.comm, labels)


def ac_equal(f1: FSLP, f2: FSLP, theory: AcTheory | None = None) -> bool:
    """Whether the two values are equal modulo associativity of the labels
    in ``theory.assoc`` and commutativity of those in ``theory.comm``."""
    theory = theory or AcTheory()
    labels = LabelSet.of(f1.labels(), f2.labels())
    g1 = ac_canonical(f1, theory, labels)
    g2 = ac_canonical(f2, theory, labels)
    return compare_forests(g1, None, g2, None, labels) == EQ


__all__ = [
    "AcTheory",
    "DIRECT_LIMIT",
    "GammaProgram",
    "ac_canonical",
    "ac_equal",
    "canonize_comm",
    "compare_forests",
    "forest_string_sslp",
    "nf_assoc",
]
