"""Deterministic comparison of grammar-compressed strings by recompression.

All root strings are compressed simultaneously, phase after phase, by
replacing maximal runs ``c^k`` with fresh block letters and a selected set
of two-letter factors ``ab`` with fresh pair letters.  Letters are
hash-consed (the same run or pair always yields the same letter), so at the
end two roots derive the same string exactly when they end as the same
letter.  The lexicographic first mismatch is found by expanding the two final
letters top-down while skipping equal prefixes.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .sslp import SSLP, LT, EQ, GT

_ORIG, _PAIR, _BLOCK = 0, 1, 2


class LlexComparator:
    """Compress the values of ``roots`` in ``g`` and compare them.

    ``key`` maps terminal symbols of ``g`` to comparable values.
    """

    def __init__(self, g: SSLP, roots: Sequence[int], key: Callable = lambda s: s):
        self.key = key
        self.kind: list[int] = []
        self.left: list = []
        self.right: list = []
        self.size: list[int] = []
        self._orig: dict = {}
        self._pairs: dict = {}
        self._blocks: dict = {}
        self.root_letters = self._run(g, roots)

    # letters ---------------------------------------------------------------

    def _letter(self, kind, a, b, size):
        self.kind.append(kind)
        self.left.append(a)
        self.right.append(b)
        self.size.append(size)
        return len(self.kind) - 1

    def _orig_letter(self, s):
        lt = self._orig.get(s)
        if lt is None:
            lt = self._orig[s] = self._letter(_ORIG, s, None, 1)
        return lt

    def _pair(self, a, b):
        lt = self._pairs.get((a, b))
        if lt is None:
            lt = self._pairs[a, b] = self._letter(_PAIR, a, b, self.size[a] + self.size[b])
        return lt

    def _block(self, c, k):
        if k == 1:
            return c
        lt = self._blocks.get((c, k))
        if lt is None:
            lt = self._blocks[c, k] = self._letter(_BLOCK, c, k, self.size[c] * k)
        return lt

    # compression -------------------------------------------------------------

    def _run(self, g: SSLP, roots):
        # nonterminal bodies; letters are ints >= 0, nonterminal refs are ~v
        reach = g.reachable(roots)
        index: dict = {}
        bodies: list[list[int]] = []
        for v, rhs in enumerate(g.rules):
            if not reach[v]:
                continue
            body = []
            for it in rhs:
                if it < 0:
                    body.append(self._orig_letter(~it))
                elif g.lengths[it] > 0:
                    body.append(~index[it])
            index[v] = len(bodies)
            bodies.append(body)
        texts = [[~index[r]] if g.lengths[r] > 0 else [] for r in roots]
        bodies, texts = _inline(bodies, texts)
        while any(len(t) > 1 or (t and t[0] < 0) for t in texts):
            bodies, texts = self._block_phase(bodies, texts)
            bodies, texts = _inline(bodies, texts)
            if not any(len(t) > 1 or (t and t[0] < 0) for t in texts):
                break
            bodies, texts = self._pair_phase(bodies, texts)
            bodies, texts = _inline(bodies, texts)
        return [t[0] if t else None for t in texts]

    def _block_phase(self, bodies, texts):
        pre: list = [None] * len(bodies)
        suf: list = [None] * len(bodies)
        alive = [True] * len(bodies)

        def expand(body):
            # substitute popped runs; returns list of ints (nonterminals) and [c, k] runs
            out: list = []
            for it in body:
                if it >= 0:
                    _push_run(out, it, 1)
                    continue
                v = ~it
                if pre[v] is not None:
                    _push_run(out, *pre[v])
                if alive[v]:
                    out.append(it)
                if suf[v] is not None:
                    _push_run(out, *suf[v])
            return out

        new_bodies: list = []
        for v, body in enumerate(bodies):
            items = expand(body)
            if items and not isinstance(items[0], int):
                pre[v] = tuple(items.pop(0))
            if items and not isinstance(items[-1], int):
                suf[v] = tuple(items.pop())
            alive[v] = bool(items)
            new_bodies.append(items)
        new_texts = [expand(t) for t in texts]

        def finish(items):
            return [it if isinstance(it, int) else self._block(it[0], it[1]) for it in items]

        return [finish(b) for b in new_bodies], [finish(t) for t in new_texts]

    def _pair_phase(self, bodies, texts):
        n = len(bodies)
        first: list = [None] * n
        last: list = [None] * n
        for v, body in enumerate(bodies):
            h, t = body[0], body[-1]
            first[v] = h if h >= 0 else first[~h]
            last[v] = t if t >= 0 else last[~t]
        # derivation multiplicity of each nonterminal
        occ = [0] * n
        for t in texts:
            for it in t:
                if it < 0:
                    occ[~it] += 1
        for v in range(n - 1, -1, -1):
            if occ[v]:
                for it in bodies[v]:
                    if it < 0:
                        occ[~it] += occ[v]
        weight: dict = {}

        def count(seq, w):
            prev = None
            for it in seq:
                a = it if it >= 0 else first[~it]
                if prev is not None:
                    weight[prev, a] = weight.get((prev, a), 0) + w
                prev = it if it >= 0 else last[~it]

        for v in range(n):
            if occ[v]:
                count(bodies[v], occ[v])
        for t in texts:
            count(t, 1)
        left, right = _choose_partition(weight)

        popl: list = [None] * n
        popr: list = [None] * n
        alive = [True] * n

        def expand(body):
            out = []
            for it in body:
                if it >= 0:
                    out.append(it)
                    continue
                v = ~it
                if popl[v] is not None:
                    out.append(popl[v])
                if alive[v]:
                    out.append(it)
                if popr[v] is not None:
                    out.append(popr[v])
            return out

        def replace(items):
            out = []
            i = 0
            while i < len(items):
                a = items[i]
                if i + 1 < len(items) and a >= 0 and a in left:
                    b = items[i + 1]
                    if b >= 0 and b in right:
                        out.append(self._pair(a, b))
                        i += 2
                        continue
                out.append(a)
                i += 1
            return out

        new_bodies = []
        for v, body in enumerate(bodies):
            items = expand(body)
            if items and items[0] >= 0 and items[0] in right:
                popl[v] = items.pop(0)
            if items and items[-1] >= 0 and items[-1] in left:
                popr[v] = items.pop()
            alive[v] = bool(items)
            new_bodies.append(replace(items))
        new_texts = [replace(expand(t)) for t in texts]
        return new_bodies, new_texts

    # comparison --------------------------------------------------------------

    def compare(self, i: int, j: int) -> int:
        a, b = self.root_letters[i], self.root_letters[j]
        if a == b:
            return EQ
        if a is None or b is None:
            return LT if a is None else GT
        if self.size[a] != self.size[b]:
            return LT if self.size[a] < self.size[b] else GT
        sa: list = [[a, 1]]
        sb: list = [[b, 1]]
        kind, size = self.kind, self.size
        while sa and sb:
            x, y = sa[-1], sb[-1]
            if x[0] == y[0]:
                k = min(x[1], y[1])
                x[1] -= k
                y[1] -= k
                if not x[1]:
                    sa.pop()
                if not y[1]:
                    sb.pop()
                continue
            kx, ky = kind[x[0]], kind[y[0]]
            if kx == _ORIG and ky == _ORIG:
                ka, kb = self.key(self.left[x[0]]), self.key(self.left[y[0]])
                return LT if ka < kb else GT
            if kx != _ORIG and (ky == _ORIG or size[x[0]] >= size[y[0]]):
                self._expand(sa)
            else:
                self._expand(sb)
        return EQ

    def _expand(self, stack):
        top = stack[-1]
        c = top[0]
        top[1] -= 1
        if not top[1]:
            stack.pop()
        if self.kind[c] == _PAIR:
            stack.append([self.right[c], 1])
            stack.append([self.left[c], 1])
        else:
            stack.append([self.left[c], self.right[c]])

    def expand_letter(self, c) -> list:
        """Original symbols derived by letter ``c`` (for debugging and tests)."""
        out = []
        stack = [[c, 1]]
        while stack:
            top = stack[-1]
            if self.kind[top[0]] == _ORIG:
                out.extend([self.left[top[0]]] * top[1])
                stack.pop()
            else:
                self._expand(stack)
        return out


def _push_run(out, c, k):
    if out and not isinstance(out[-1], int) and out[-1][0] == c:
        out[-1][1] += k
    else:
        out.append([c, k])


def _inline(bodies, texts):
    """Drop unreferenced nonterminals and inline those with one-item bodies."""
    n = len(bodies)
    repl: list = [None] * n
    used = [0] * n
    for t in texts:
        for it in t:
            if it < 0:
                used[~it] += 1
    for v in range(n - 1, -1, -1):
        if used[v]:
            for it in bodies[v]:
                if it < 0:
                    used[~it] += 1
    index = [0] * n
    out_bodies: list = []
    for v in range(n):
        if not used[v]:
            continue
        body = []
        for it in bodies[v]:
            if it >= 0:
                body.append(it)
            elif repl[~it] is not None:
                body.extend(repl[~it])
            else:
                body.append(~index[~it])
        if len(body) <= 1:
            repl[v] = body
        else:
            index[v] = len(out_bodies)
            repl[v] = None
            out_bodies.append(body)

    def fix(t):
        res = []
        for it in t:
            if it >= 0:
                res.append(it)
            elif repl[~it] is not None:
                res.extend(repl[~it])
            else:
                res.append(~index[~it])
        return res

    return out_bodies, [fix(t) for t in texts]


def _choose_partition(weight: dict) -> tuple[set, set]:
    """Greedy split of the letters so that many weighted pairs ab have
    a on the left side and b on the right side."""
    adj: dict = {}
    for (a, b), w in weight.items():
        adj.setdefault(a, []).append((b, w))
        adj.setdefault(b, []).append((a, w))
    # undirected greedy cut (at least half the weight), then the better of
    # the two orientations (at least a quarter)
    side: dict = {}
    for c in sorted(adj):
        to_left = to_right = 0
        for d, w in adj[c]:
            s = side.get(d)
            if s == "L":
                to_left += w
            elif s == "R":
                to_right += w
        side[c] = "R" if to_left >= to_right else "L"
    left = {c for c, s in side.items() if s == "L"}
    right = {c for c, s in side.items() if s == "R"}
    fwd = sum(w for (a, b), w in weight.items() if a in left and b in right)
    bwd = sum(w for (a, b), w in weight.items() if a in right and b in left)
    if bwd > fwd:
        left, right = right, left
    return left, right
