"""Forest straight-line programs.

Right-hand sides are tagged tuples whose operands are variable ids smaller
than the defining variable:

    ("eps",)                empty forest
    ("x",)                  the parameter
    ("h", B, C)             horizontal concatenation BC
    ("v", B, C)             vertical concatenation B<C>
    ("node", a, (B, ...))   a(B...) with zero, one or two operands
    ("node2", a, B, C)      a(B x C)

Sizes count operations: ``eps``, ``x``, ``h``, ``v`` and a leaf are 1,
``a(B)`` is 1, ``a(BC)`` is 2 and ``a(BxC)`` is 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    ExplosionGuardError,
    GrammarError,
    NotNormalFormError,
    RankViolation,
)
from .forest_core import CLOSE, OPEN, PARAM, Forest, check_label_name, node_arrays
from .sslp import DEFAULT_CAP, SSLP, term

GENERAL, NORMAL, STRONG = "general", "normal", "strong"

EPS = ("eps",)
X = ("x",)


def rule_size(rhs: tuple) -> int:
    op = rhs[0]
    if op == "node":
        return max(1, len(rhs[2]))
    if op == "node2":
        return 4
    return 1


def operands(rhs: tuple) -> tuple[int, ...]:
    op = rhs[0]
    if op in ("h", "v"):
        return rhs[1:]
    if op == "node":
        return rhs[2]
    if op == "node2":
        return rhs[2:]
    return ()


def _check_rhs(i: int, rhs: tuple):
    op = rhs[0]
    ok = (
        (op in ("eps", "x") and len(rhs) == 1)
        or (op in ("h", "v") and len(rhs) == 3)
        or (op == "node" and len(rhs) == 3 and isinstance(rhs[2], tuple) and len(rhs[2]) <= 2)
        or (op == "node2" and len(rhs) == 4)
    )
    if not ok:
        raise GrammarError(f"variable {i}: malformed right-hand side {rhs!r}")
    if op in ("node", "node2"):
        check_label_name(rhs[1])
    for o in operands(rhs):
        if not isinstance(o, int) or not 0 <= o < i:
            raise GrammarError(f"variable {i}: operand {o!r} must be an earlier variable")


@dataclass(frozen=True)
class FSLP:
    rules: tuple
    start: int
    names: tuple[str, ...] | None = None
    tag: str = GENERAL

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        for i, rhs in enumerate(self.rules):
            _check_rhs(i, rhs)
        if not 0 <= self.start < len(self.rules):
            raise GrammarError("start variable out of range")
        if self.names is not None and len(self.names) != len(self.rules):
            raise GrammarError("one name per variable expected")

    def __len__(self):
        return len(self.rules)

    def name(self, var: int) -> str:
        return self.names[var] if self.names else f"V{var}"

    @property
    def size(self) -> int:
        return sum(rule_size(r) for r in self.rules)

    # -- sorts --------------------------------------------------------------

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        """Rank of every variable; raises when an operation is undefined."""
        r: list[int] = []
        for i, rhs in enumerate(self.rules):
            op = rhs[0]
            if op == "eps":
                r.append(0)
            elif op == "x":
                r.append(1)
            elif op == "h":
                if r[rhs[1]] and r[rhs[2]]:
                    raise RankViolation(self.name(i), "horizontal concatenation of two rank-1 forests")
                r.append(r[rhs[1]] + r[rhs[2]])
            elif op == "v":
                if not r[rhs[1]]:
                    raise RankViolation(self.name(i), "vertical concatenation needs a rank-1 left operand")
                r.append(r[rhs[2]])
            elif op == "node":
                s = sum(r[o] for o in rhs[2])
                if s > 1:
                    raise RankViolation(self.name(i), "children contain two parameters")
                r.append(s)
            else:
                if r[rhs[2]] or r[rhs[3]]:
                    raise RankViolation(self.name(i), "a(BxC) needs rank-0 B and C")
                r.append(1)
        return tuple(r)

    def validate(self) -> "SortInfo":
        """Check every operation is defined and the start derives a rank-0 forest."""
        if self.ranks[self.start]:
            raise RankViolation(self.name(self.start), "start variable must derive a rank-0 forest")
        return SortInfo.of(self)

    @cached_property
    def node_counts(self) -> tuple[int, ...]:
        """Exact number of nodes of every value (the parameter counts)."""
        out: list[int] = []
        for rhs in self.rules:
            op = rhs[0]
            if op == "eps":
                out.append(0)
            elif op == "x":
                out.append(1)
            elif op in ("h", "v"):
                n = out[rhs[1]] + out[rhs[2]]
                out.append(n - 1 if op == "v" else n)
            elif op == "node":
                out.append(1 + sum(out[o] for o in rhs[2]))
            else:
                out.append(2 + out[rhs[2]] + out[rhs[3]])
        return tuple(out)

    @cached_property
    def tree_counts(self) -> tuple[int, ...]:
        """Number of trees of every value; a parameter at the top level counts as a tree."""
        out: list[int] = []
        top = self._param_on_top
        for rhs in self.rules:
            op = rhs[0]
            if op == "eps":
                out.append(0)
            elif op == "h":
                out.append(out[rhs[1]] + out[rhs[2]])
            elif op == "v":
                b, c = rhs[1], rhs[2]
                out.append(out[b] - 1 + out[c] if top[b] else out[b])
            else:
                out.append(1)
        return tuple(out)

    @cached_property
    def _param_on_top(self) -> tuple[bool, ...]:
        out: list[bool] = []
        r = self.ranks
        for rhs in self.rules:
            op = rhs[0]
            if op == "x":
                out.append(True)
            elif op == "h":
                b, c = rhs[1], rhs[2]
                out.append(out[b] if r[b] else out[c])
            elif op == "v":
                out.append(out[rhs[1]] and out[rhs[2]])
            else:
                out.append(False)
        return tuple(out)

    def labels(self) -> set[str]:
        return {rhs[1] for rhs in self.rules if rhs[0] in ("node", "node2")}

    def reachable(self, roots: Iterable[int] | None = None) -> list[bool]:
        seen = [False] * len(self.rules)
        for r in (roots if roots is not None else [self.start]):
            seen[r] = True
        for i in range(len(self.rules) - 1, -1, -1):
            if seen[i]:
                for o in operands(self.rules[i]):
                    seen[o] = True
        return seen

    # -- evaluation ---------------------------------------------------------

    def eval(self, var: int | None = None, cap: int = DEFAULT_CAP) -> Forest:
        var = self.start if var is None else var
        self.ranks  # noqa: B018  (validates)
        n = self.node_counts[var]
        if n > cap:
            raise ExplosionGuardError(n, cap)
        return Forest(expand(self.rules, var))

    def with_start(self, start: int) -> "FSLP":
        return FSLP(self.rules, start, self.names, GENERAL)


def expand(rules: Sequence[tuple], var: int) -> tuple[str, ...]:
    """Term tokens of the value of ``var``, without materializing sub-values.

    The parameter of a context is expanded lazily from an environment stack,
    so memory stays proportional to the output.
    """
    out: list[str] = []
    # work items: (var, env) or a literal token; env is a linked list (var, env)
    work: list = [(var, None)]
    while work:
        item = work.pop()
        if isinstance(item, str):
            if item == CLOSE and out and out[-1] == OPEN:
                out.pop()
            else:
                out.append(item)
            continue
        v, env = item
        rhs = rules[v]
        op = rhs[0]
        if op == "eps":
            continue
        if op == "x":
            if env is None:
                out.append(PARAM)
            else:
                work.append(env)
            continue
        if op == "h":
            work.append((rhs[2], env))
            work.append((rhs[1], env))
        elif op == "v":
            # C is evaluated in the current environment, B sees C as its argument
            work.append((rhs[1], (rhs[2], env)))
        elif op == "node":
            out.append(rhs[1])
            if rhs[2]:
                out.append(OPEN)
                work.append(CLOSE)
                for o in reversed(rhs[2]):
                    work.append((o, env))
        else:
            out.append(rhs[1])
            out.append(OPEN)
            work.append(CLOSE)
            work.append((rhs[3], None))
            work.append(env if env is not None else PARAM)
            work.append((rhs[2], None))
    return tuple(out)


@dataclass(frozen=True)
class SortInfo:
    """Rank of every variable and, for normal-form grammars, the top/bottom split.

    ``kind[i]`` is one of ``"V0top"``, ``"V0bot"``, ``"V1top"``, ``"V1bot"``
    (or None when the grammar is not in normal form).
    """

    ranks: tuple[int, ...]
    kind: tuple[str | None, ...]

    @classmethod
    def of(cls, f: FSLP) -> "SortInfo":
        ranks = f.ranks
        kind = []
        for rhs in f.rules:
            op = rhs[0]
            if op in ("eps", "h"):
                kind.append("V0top")
            elif op == "node":
                kind.append("V0bot")
            elif op == "node2":
                kind.append("V1bot")
            elif op == "v":
                kind.append("V1top" if ranks[rhs[2]] else "V0bot")
            else:
                kind.append(None)
        return cls(ranks, tuple(kind))


# -- normal-form shape checks -------------------------------------------------

def normal_form_violation(f: FSLP) -> str | None:
    """Why ``f`` is not in normal form, or None."""
    r = f.ranks
    rules = f.rules
    for i, rhs in enumerate(rules):
        op = rhs[0]
        if op == "eps":
            continue
        if op == "h":
            if r[rhs[1]] or r[rhs[2]]:
                return f"{f.name(i)}: BC with a rank-1 operand"
        elif op == "v":
            b, c = rhs[1], rhs[2]
            if not r[b]:
                return f"{f.name(i)}: B<C> with rank-0 B"
            if not r[c] and _is_top0(rules[c]):
                return f"{f.name(i)}: B<C> whose argument is not a single tree variable"
        elif op == "node":
            if len(rhs[2]) != 1 or r[rhs[2][0]]:
                return f"{f.name(i)}: node must have exactly one rank-0 operand"
        elif op == "node2":
            pass
        else:
            return f"{f.name(i)}: bare parameter"
    return None


def _is_top0(rhs) -> bool:
    return rhs[0] in ("eps", "h")


def is_normal_form(f: FSLP) -> bool:
    return normal_form_violation(f) is None


def require_normal_form(f: FSLP):
    why = normal_form_violation(f)
    if why is not None:
        raise NotNormalFormError(why)


# -- spine and horizontal programs ---------------------------------------------

def spine_sslp(f: FSLP) -> tuple[SSLP, dict]:
    """The vertical SSLP of a normal-form FSLP.

    Terminals are FSLP ids of bottom rank-1 variables.  Returns the SSLP and
    a map from FSLP ids of top rank-1 variables to SSLP variables.
    """
    require_normal_form(f)
    r = f.ranks
    rules = []
    mp: dict = {}
    for i, rhs in enumerate(f.rules):
        if rhs[0] == "v" and r[rhs[2]]:
            items = tuple(mp[o] if o in mp else term(o) for o in rhs[1:])
            mp[i] = len(rules)
            rules.append(items)
    return SSLP(tuple(rules)), mp


def hor_sslp(f: FSLP) -> tuple[SSLP, dict]:
    """The horizontal SSLP: rank-0 top variables over rank-0 bottom ones."""
    require_normal_form(f)
    rules = []
    mp: dict = {}
    for i, rhs in enumerate(f.rules):
        if rhs[0] == "eps":
            mp[i] = len(rules)
            rules.append(())
        elif rhs[0] == "h":
            items = tuple(mp[o] if o in mp else term(o) for o in rhs[1:])
            mp[i] = len(rules)
            rules.append(items)
    return SSLP(tuple(rules)), mp


def spine(f: FSLP, var: int) -> tuple[int, ...]:
    g, mp = spine_sslp(f)
    if var in mp:
        return g.eval(mp[var])
    return (var,)


def hor(f: FSLP, var: int) -> tuple[int, ...]:
    g, mp = hor_sslp(f)
    if var in mp:
        return g.eval(mp[var])
    return (var,)


# -- construction helpers ------------------------------------------------------

class Emitter:
    """Append-only, hash-consing rule table for building FSLPs.

    Tracks rank and node count of every emitted variable, and drops empty
    operands of horizontal concatenations.
    """

    def __init__(self):
        self.rules: list[tuple] = []
        self.ranks: list[int] = []
        self.counts: list[int] = []
        self._ids: dict = {}

    def add(self, rhs: tuple) -> int:
        i = self._ids.get(rhs)
        if i is not None:
            return i
        op = rhs[0]
        r, c = self.ranks, self.counts
        if op == "eps":
            rank, count = 0, 0
        elif op == "x":
            rank, count = 1, 1
        elif op == "h":
            rank, count = r[rhs[1]] + r[rhs[2]], c[rhs[1]] + c[rhs[2]]
        elif op == "v":
            rank, count = r[rhs[2]], c[rhs[1]] + c[rhs[2]] - 1
        elif op == "node":
            rank, count = sum(r[o] for o in rhs[2]), 1 + sum(c[o] for o in rhs[2])
        else:
            rank, count = 1, 2 + c[rhs[2]] + c[rhs[3]]
        i = self._ids[rhs] = len(self.rules)
        self.rules.append(rhs)
        self.ranks.append(rank)
        self.counts.append(count)
        return i

    def is_empty(self, v: int) -> bool:
        return self.counts[v] == 0

    def eps(self) -> int:
        return self.add(EPS)

    def x(self) -> int:
        return self.add(X)

    def h(self, b: int, c: int) -> int:
        if self.counts[b] == 0:
            return c
        if self.counts[c] == 0:
            return b
        return self.add(("h", b, c))

    def v(self, b: int, c: int) -> int:
        return self.add(("v", b, c))

    def node(self, a: str, *kids: int) -> int:
        return self.add(("node", a, tuple(kids)))

    def node2(self, a: str, b: int, c: int) -> int:
        return self.add(("node2", a, b, c))

    def hseq(self, items: Sequence[int]) -> int:
        """Balanced horizontal concatenation (eps for no items)."""
        level = [it for it in items if self.counts[it]]
        if not level:
            return self.eps()
        while len(level) > 1:
            nxt = [self.h(level[k], level[k + 1]) for k in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def emit(self, rhs: tuple) -> int:
        """Emit a rule given in the tagged-tuple format (operands already ids)."""
        op = rhs[0]
        if op == "h":
            return self.h(rhs[1], rhs[2])
        return self.add(rhs)

    def build(self, start: int, tag: str = GENERAL) -> FSLP:
        return compact(self.rules, start, tag)


ALIAS = "alias"


def assemble(defs: dict, start, tag: str = GENERAL, emitter: Emitter | None = None) -> FSLP:
    """Turn keyed rule definitions into an FSLP.

    ``defs`` maps hashable keys to right-hand sides in the tagged-tuple
    format whose operands are keys, or to ``("alias", key)``.  Only keys
    reachable from ``start`` are emitted, in dependency order (iterative
    depth-first post-order, so ids are reproducible).
    """
    e = emitter or Emitter()
    ids: dict = {}
    stack = [(start, False)]
    while stack:
        key, ready = stack.pop()
        if key in ids:
            continue
        rhs = defs[key]
        if rhs[0] == ALIAS:
            deps = (rhs[1],)
        else:
            deps = operands(rhs)
        if not ready:
            stack.append((key, True))
            for d in reversed(deps):
                if d not in ids:
                    stack.append((d, False))
            continue
        if rhs[0] == ALIAS:
            ids[key] = ids[rhs[1]]
        else:
            ids[key] = e.emit(_remap(rhs, ids))
    return e.build(ids[start], tag)


def compact(rules: Sequence[tuple], start: int, tag: str = GENERAL) -> FSLP:
    """Drop variables unreachable from ``start`` and renumber densely."""
    n = len(rules)
    seen = [False] * n
    seen[start] = True
    for i in range(n - 1, -1, -1):
        if seen[i]:
            for o in operands(rules[i]):
                seen[o] = True
    new_id = [0] * n
    out = []
    for i in range(n):
        if seen[i]:
            new_id[i] = len(out)
            out.append(_remap(rules[i], new_id))
    return FSLP(tuple(out), new_id[start], None, tag)


def _remap(rhs: tuple, m) -> tuple:
    op = rhs[0]
    if op in ("h", "v"):
        return (op, m[rhs[1]], m[rhs[2]])
    if op == "node":
        return (op, rhs[1], tuple(m[o] for o in rhs[2]))
    if op == "node2":
        return (op, rhs[1], m[rhs[2]], m[rhs[3]])
    return rhs


def from_forest_exact(f: Forest) -> FSLP:
    """Direct (uncompressed) FSLP for ``f``: one node rule per node."""
    e = Emitter()
    labels, children, roots = node_arrays(f)
    ids = [0] * len(labels)
    for u in range(len(labels) - 1, -1, -1):
        if labels[u] == PARAM:
            ids[u] = e.x()
        elif children[u]:
            ids[u] = e.node(labels[u], e.hseq([ids[c] for c in children[u]]))
        else:
            ids[u] = e.node(labels[u])
    return e.build(e.hseq([ids[r] for r in roots]))


def build_baseline(f: Forest) -> FSLP:
    """Compress a rank-0 forest: minimal dag of subtrees plus run-length
    doubling of equal consecutive siblings, joined by balanced concatenation."""
    if f.rank:
        raise ValueError("build_baseline expects a rank-0 forest")
    labels, children, roots = node_arrays(f)
    e = Emitter()
    ident = [0] * len(labels)
    powers: dict = {}

    def power(v: int, k: int) -> int:
        key = (v, k)
        if key in powers:
            return powers[key]
        if k == 1:
            res = v
        else:
            half = power(v, k // 2)
            res = e.h(half, half)
            if k % 2:
                res = e.h(res, v)
        powers[key] = res
        return res

    def runs(seq):
        items = []
        i = 0
        while i < len(seq):
            j = i
            while j < len(seq) and seq[j] == seq[i]:
                j += 1
            items.append(power(seq[i], j - i))
            i = j
        return e.hseq(items)

    for u in range(len(labels) - 1, -1, -1):
        if children[u]:
            ident[u] = e.node(labels[u], runs([ident[c] for c in children[u]]))
        else:
            ident[u] = e.node(labels[u])
    return e.build(runs([ident[r] for r in roots]))


def baseline_bound(f: Forest) -> int:
    """The size bound promised for :func:`build_baseline`:
    4 * (dag nodes + edges) * log2(longest run of equal siblings + 1)."""
    labels, children, roots = node_arrays(f)
    ident = [0] * len(labels)
    table: dict = {}
    edges = 0
    for u in range(len(labels) - 1, -1, -1):
        key = (labels[u], tuple(ident[c] for c in children[u]))
        if key not in table:
            table[key] = len(table)
            edges += len(children[u])
        ident[u] = table[key]
    longest = 0
    for seq in list(children) + [roots]:
        run = 0
        for k, c in enumerate(seq):
            run = run + 1 if k and ident[seq[k - 1]] == ident[c] else 1
            longest = max(longest, run)
    dag = len(table) + edges
    return 4 * max(1, dag) * max(1, math.ceil(math.log2(longest + 1)))
