"""Conversion of FSLPs into normal form and strong normal form.

Normal form allows only these right-hand sides:

    rank 0, top     eps, BC (B, C rank 0)
    rank 0, bottom  a(B) with B rank 0, B<C> with C a rank-0 bottom variable
    rank 1, top     B<C> with B and C rank 1
    rank 1, bottom  a(B x C) with B, C rank 0

The conversion first rewrites everything into four shapes (eps, ``a(x)``,
``B x C`` and ``B<C>``), then factorizes every vertical chain around its
``a(x)`` letters and reassembles the pieces.
"""

from __future__ import annotations

from .errors import GrammarError
from .fslp import (
    ALIAS,
    FSLP,
    NORMAL,
    STRONG,
    assemble,
    compact,
    is_normal_form,
    spine_sslp,
)
from .sslp import SSLP, Builder, _cut_into, factorize, term

_E = "E"


class _Weak:
    """Hash-consed program over eps, a(x), sib(B, C) = B x C and v(B, C)."""

    def __init__(self):
        self.rules: list[tuple] = []
        self.ranks: list[int] = []
        self.counts: list[int] = []
        self._ids: dict = {}
        self.eps = self._add(("eps",), 0, 0)

    def _add(self, rhs, rank, count):
        i = self._ids.get(rhs)
        if i is None:
            i = self._ids[rhs] = len(self.rules)
            self.rules.append(rhs)
            self.ranks.append(rank)
            self.counts.append(count)
        return i

    def ax(self, a):
        return self._add(("ax", a), 1, 2)

    def sib(self, b, c):
        return self._add(("sib", b, c), 1, self.counts[b] + self.counts[c] + 1)

    def v(self, b, c):
        return self._add(("v", b, c), self.ranks[c], self.counts[b] + self.counts[c] - 1)

    def h(self, b, c):
        if self.ranks[b] == 0 and self.counts[b] == 0:
            return c
        if self.ranks[c] == 0 and self.counts[c] == 0:
            return b
        if self.ranks[b] == 0:
            return self.v(self.sib(b, self.eps), c)
        return self.v(self.sib(self.eps, c), b)


def _weak_form(f: FSLP) -> tuple[_Weak, int]:
    f.validate()
    w = _Weak()
    m: list[int] = []
    for rhs in f.rules:
        op = rhs[0]
        if op == "eps":
            m.append(w.eps)
        elif op == "x":
            m.append(w.sib(w.eps, w.eps))
        elif op == "h":
            m.append(w.h(m[rhs[1]], m[rhs[2]]))
        elif op == "v":
            m.append(w.v(m[rhs[1]], m[rhs[2]]))
        elif op == "node":
            kids = w.eps
            for o in rhs[2]:
                kids = w.h(kids, m[o])
            m.append(w.v(w.ax(rhs[1]), kids))
        else:
            m.append(w.v(w.ax(rhs[1]), w.sib(m[rhs[2]], m[rhs[3]])))
    return w, m[f.start]


def normal_form(f: FSLP) -> FSLP:
    """Equivalent FSLP in normal form, of size O(|f|)."""
    if is_normal_form(f):
        f.validate()
        if f.tag in (NORMAL, STRONG):
            return f
        return compact(f.rules, f.start, NORMAL)
    w, start = _weak_form(f)
    # vertical chains of the weak program: terminals are a(x) and B x C ids
    sp_rules: list[tuple] = []
    sp_of: dict = {}
    for i, rhs in enumerate(w.rules):
        if rhs[0] == "v" and w.ranks[rhs[2]]:
            sp_of[i] = len(sp_rules)
            sp_rules.append(tuple(sp_of[o] if o in sp_of else term(o) for o in rhs[1:]))
    fac = factorize(SSLP(tuple(sp_rules)), [i for i, r in enumerate(w.rules) if r[0] == "ax"])
    fr = fac.sslp.rules

    defs: dict = {_E: ("eps",)}
    for g, rhs in enumerate(fr):
        k = fac.kind[g]
        if k == "L":
            if not rhs:
                defs["Ll", g] = defs["Lr", g] = (ALIAS, _E)
            elif len(rhs) == 1:
                _, c, d = w.rules[~rhs[0]]
                defs["Ll", g] = (ALIAS, ("W", c))
                defs["Lr", g] = (ALIAS, ("W", d))
            else:
                p, q = rhs
                defs["Ll", g] = ("h", ("Ll", p), ("Ll", q))
                defs["Lr", g] = ("h", ("Lr", q), ("Lr", p))
        elif k == "U":
            p, q = rhs
            if p < 0:
                defs["U", g] = ("node2", w.rules[~p][1], ("Ll", q), ("Lr", q))
            else:
                defs["U", g] = ("v", ("U", p), ("U", q))

    def wrap(key, inner, low):
        # Ll(low) inner Lr(low)
        defs[key + ("1",)] = ("h", ("Ll", low), inner)
        defs[key] = ("h", key + ("1",), ("Lr", low))

    for i, rhs in enumerate(w.rules):
        if w.ranks[i]:
            continue
        key = ("W", i)
        if rhs[0] == "eps":
            defs[key] = (ALIAS, _E)
            continue
        b, a0 = rhs[1], ("W", rhs[2])
        brhs = w.rules[b]
        if brhs[0] == "ax":
            defs[key] = ("node", brhs[1], (a0,))
        elif brhs[0] == "sib":
            defs[key + ("1",)] = ("h", ("W", brhs[1]), a0)
            defs[key] = ("h", key + ("1",), ("W", brhs[2]))
        else:
            l, mid, s, r = fac.parts[sp_of[b]]
            if s is None:
                wrap(key, a0, l)
                continue
            wrap(key + ("r",), a0, r)
            defs[key + ("n",)] = ("node", w.rules[s][1], (key + ("r",),))
            inner = key + ("n",)
            if mid is not None:
                defs[key + ("m",)] = ("v", ("U", mid), inner)
                inner = key + ("m",)
            wrap(key, inner, l)
    return assemble(defs, ("W", start), NORMAL)


def strong_normal_form_violation(f: FSLP) -> str | None:
    """Why a normal-form ``f`` is not strong, or None."""
    sp, mp = spine_sslp(f)
    counts = f.node_counts
    r = f.ranks
    for i, rhs in enumerate(f.rules):
        if rhs[0] == "v" and not r[rhs[2]] and rhs[1] in mp:
            need = max(counts[d] for d in sp.symbol_sets[mp[rhs[1]]]) - 1
            if counts[rhs[2]] < need:
                return f"{f.name(i)}: argument has {counts[rhs[2]]} nodes, spine needs {need}"
    return None


def strong_normal_form(f: FSLP) -> FSLP:
    """Equivalent FSLP in strong normal form.

    Every tree ``B<C>`` whose spine ``B`` has more than one letter is rebuilt
    from the last occurrences ``D1 ... Dm`` of its letters (read from the
    end): ``C1 = D1<C>``, ``Ci = Di<A(i-1)>`` and ``Ai = Ei<Ci>``, where
    ``Ei`` is the part of the spine between the last occurrences of
    ``D(i+1)`` and ``Di``.  ``Ci`` then contains every letter of ``Ei`` as a
    subtree.
    """
    if f.tag == STRONG and is_normal_form(f):
        f.validate()
        return f
    return build_strong_normal_form(f)


def build_strong_normal_form(f: FSLP) -> FSLP:
    """Run the strong normal form construction even on inputs that already
    satisfy the size condition.

    Its output has a property the size condition alone does not give: the
    tree substituted into any spine letter ``D`` contains an instance of
    ``D`` as a subtree.  Commutative canonization relies on it.
    """
    f = normal_form(f)
    sp, mp = spine_sslp(f)
    inv = {k: v for v, k in mp.items()}
    n0 = len(sp.rules)
    r = f.ranks
    targets = [
        (i, rhs[1], rhs[2])
        for i, rhs in enumerate(f.rules)
        if rhs[0] == "v" and not r[rhs[2]] and rhs[1] in mp
    ]
    need = sp.reachable([mp[b] for _, b, _ in targets])
    lengths = sp.lengths
    # distance from the end of the last occurrence of every letter
    dist: list = [None] * n0
    for k, rhs in enumerate(sp.rules):
        if not need[k]:
            continue
        d: dict = {}
        after = 0
        for it in reversed(rhs):
            if it < 0:
                d.setdefault(~it, after)
                after += 1
            else:
                for s, x in dist[it].items():
                    d.setdefault(s, x + after)
                after += lengths[it]
        dist[k] = d

    b = Builder(sp.rules)

    def item_key(it):
        if it < 0:
            return ("F", ~it)
        if it < n0:
            return ("F", inv[it])
        return ("S", it)

    defs: dict = {}
    for i, rhs in enumerate(f.rules):
        defs["F", i] = _keyed(rhs)
    for i, bvar, c in targets:
        k = mp[bvar]
        n = lengths[k]
        last = sorted(dist[k].items(), key=lambda sx: sx[1])
        pos = [n - x for _, x in last] + [0]
        prev = ("F", c)
        for j, (sym, _) in enumerate(last):
            ck = ("C", i, j)
            defs[ck] = ("v", ("F", sym), prev)
            piece = _cut_into(b, lengths, k, pos[j + 1], pos[j] - 1)
            if piece is None:
                prev = ck
            else:
                defs["A", i, j] = ("v", item_key(piece), ck)
                prev = ("A", i, j)
        defs["F", i] = (ALIAS, prev)
    for v in range(n0, len(b.rules)):
        items = b.rules[v]
        cur = item_key(items[0])
        for j in range(1, len(items)):
            defs["S", v, j] = ("v", cur, item_key(items[j]))
            cur = ("S", v, j)
        defs["S", v] = (ALIAS, cur)
    out = assemble(defs, ("F", f.start), STRONG)
    if strong_normal_form_violation(out) is not None:
        raise GrammarError("internal error: strong normal form construction failed")
    return out


def _keyed(rhs: tuple) -> tuple:
    op = rhs[0]
    if op in ("h", "v"):
        return (op, ("F", rhs[1]), ("F", rhs[2]))
    if op == "node":
        return (op, rhs[1], tuple(("F", o) for o in rhs[2]))
    if op == "node2":
        return (op, rhs[1], ("F", rhs[2]), ("F", rhs[3]))
    return rhs


__all__ = [
    "normal_form",
    "strong_normal_form",
    "build_strong_normal_form",
    "strong_normal_form_violation",
]
