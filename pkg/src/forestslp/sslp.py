"""String straight-line programs.

Rules are stored densely: variable ``i`` has right-hand side ``rules[i]``, a
tuple of items.  An item ``v >= 0`` references variable ``v`` (which must be
smaller than ``i``), an item ``v < 0`` is the terminal symbol ``~v``.
Terminal symbols are plain non-negative integers; what they mean is up to
the caller (labels, brackets, FSLP variables, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError as _GraphCycle, TopologicalSorter
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import CycleError, ExplosionGuardError

DEFAULT_CAP = 10**8

LT, EQ, GT = -1, 0, 1


def term(symbol: int) -> int:
    return ~symbol


def is_term(item: int) -> bool:
    return item < 0


def toposort(deps: Mapping[Hashable, Iterable[Hashable]]) -> list:
    """Keys of ``deps`` ordered so that every key follows its dependencies."""
    ts = TopologicalSorter()
    for k, ds in deps.items():
        ts.add(k, *ds)
    try:
        order = list(ts.static_order())
    except _GraphCycle as exc:
        raise CycleError(f"cyclic definition through {exc.args[1]!r}") from None
    missing = [k for k in order if k not in deps]
    if missing:
        raise KeyError(f"undefined variable {missing[0]!r}")
    return order


@dataclass(frozen=True)
class SSLP:
    rules: tuple[tuple[int, ...], ...]
    start: int | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        for i, rhs in enumerate(self.rules):
            for it in rhs:
                if it >= i:
                    raise CycleError(f"variable {i} references {it}, which is not defined before it")
        if self.start is not None and not 0 <= self.start < len(self.rules):
            raise ValueError("start variable out of range")

    @classmethod
    def from_rules(cls, rules: Mapping[str, Sequence], start: str | None = None) -> "SSLP":
        """Build from named rules; items are variable names or ``("t", symbol)``."""
        deps = {k: [it for it in rhs if not isinstance(it, tuple)] for k, rhs in rules.items()}
        order = toposort(deps)
        ids = {k: i for i, k in enumerate(order)}
        out = []
        for k in order:
            out.append(tuple(term(it[1]) if isinstance(it, tuple) else ids[it] for it in rules[k]))
        return cls(tuple(out), ids[start] if start is not None else None, tuple(order))

    def __len__(self):
        return len(self.rules)

    @property
    def size(self) -> int:
        """Concatenations plus terminal occurrences; an empty rule counts as one."""
        total = 0
        for rhs in self.rules:
            if not rhs:
                total += 1
            else:
                total += len(rhs) - 1 + sum(1 for it in rhs if it < 0)
        return total

    @cached_property
    def lengths(self) -> tuple[int, ...]:
        out: list[int] = []
        for rhs in self.rules:
            out.append(sum(1 if it < 0 else out[it] for it in rhs))
        return tuple(out)

    def length(self, var: int | None = None) -> int:
        return self.lengths[self._var(var)]

    def _var(self, var):
        if var is None:
            if self.start is None:
                raise ValueError("no start variable")
            return self.start
        return var

    def eval(self, var: int | None = None, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
        var = self._var(var)
        n = self.lengths[var]
        if n > cap:
            raise ExplosionGuardError(n, cap)
        out: list[int] = []
        stack = [var]
        rules = self.rules
        while stack:
            it = stack.pop()
            if it < 0:
                out.append(~it)
            else:
                stack.extend(reversed(rules[it]))
        return tuple(out)

    @cached_property
    def symbol_sets(self) -> tuple[frozenset, ...]:
        out: list[frozenset] = []
        for rhs in self.rules:
            s: set = set()
            for it in rhs:
                if it < 0:
                    s.add(~it)
                else:
                    s |= out[it]
            out.append(frozenset(s))
        return tuple(out)

    def reachable(self, roots: Iterable[int]) -> list[bool]:
        seen = [False] * len(self.rules)
        for r in roots:
            seen[r] = True
        for i in range(len(self.rules) - 1, -1, -1):
            if seen[i]:
                for it in self.rules[i]:
                    if it >= 0:
                        seen[it] = True
        return seen

    def extend(self, new_rules: Sequence[tuple[int, ...]], start: int | None = None) -> "SSLP":
        return SSLP(self.rules + tuple(new_rules), start)


class Builder:
    """Append-only rule list used by the constructions below."""

    def __init__(self, rules: Sequence[tuple[int, ...]] = ()):
        self.rules: list[tuple[int, ...]] = list(rules)

    def add(self, rhs: Sequence[int]) -> int:
        self.rules.append(tuple(rhs))
        return len(self.rules) - 1

    def concat(self, items: Sequence[int]) -> int | None:
        """Variable for the concatenation of ``items``; a lone variable is reused."""
        if not items:
            return None
        if len(items) == 1 and items[0] >= 0:
            return items[0]
        return self.add(items)

    def balanced(self, items: Sequence[int]) -> int | None:
        """Binary balanced concatenation of ``items`` (variables or terminals)."""
        level = list(items)
        if not level:
            return None
        while len(level) > 1 or level[0] < 0:
            if len(level) == 1:
                return self.add(level)
            nxt = []
            for k in range(0, len(level) - 1, 2):
                nxt.append(self.add((level[k], level[k + 1])))
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def build(self, start: int | None = None) -> SSLP:
        return SSLP(tuple(self.rules), start)


# -- cutting ----------------------------------------------------------------

def cut(g: SSLP, var: int, i: int, j: int) -> tuple[SSLP, int | None]:
    """Extend ``g`` by a variable deriving ``eval(var)[i:j]``.

    Fully covered sub-variables are reused, so O(depth) rules are added.
    Returns the extended SSLP and the new variable (None for an empty cut).
    A single terminal result is wrapped in a one-item rule.
    """
    n = g.lengths[var]
    if not (0 <= i <= j <= n):
        raise IndexError(f"cut [{i}:{j}] outside length {n}")
    b = Builder(g.rules)
    res = _cut_into(b, g.lengths, var, i, j)
    if res is not None and res < 0:
        res = b.add((res,))
    return b.build(g.start), res


def _cut_into(b: Builder, lengths, var: int, i: int, j: int) -> int | None:
    """Item (variable or terminal) deriving [i:j] of var, adding rules to b."""
    if i == j:
        return None
    rules = b.rules
    # descend while the range is inside one item
    while True:
        if i == 0 and j == lengths[var]:
            return var
        pos = 0
        for it in rules[var]:
            ln = 1 if it < 0 else lengths[it]
            if pos <= i and j <= pos + ln:
                if it < 0:
                    return it
                var, i, j = it, i - pos, j - pos
                break
            pos += ln
        else:
            break
    pieces: list[int] = []
    pos = 0
    for it in rules[var]:
        ln = 1 if it < 0 else lengths[it]
        lo, hi = max(i, pos), min(j, pos + ln)
        if lo < hi:
            if lo == pos and hi == pos + ln:
                pieces.append(it)
            elif lo == pos:
                p = _prefix(b, lengths, it, hi - pos)
                if p is not None:
                    pieces.append(p)
            else:
                s = _suffix(b, lengths, it, lo - pos, hi - pos)
                if s is not None:
                    pieces.append(s)
        pos += ln
    return b.concat(pieces) if len(pieces) != 1 else pieces[0]


def _prefix(b: Builder, lengths, var: int, j: int) -> int | None:
    # path of (kept items) from var down to the partial item
    levels: list[list[int]] = []
    while True:
        if j == lengths[var]:
            tail = var
            break
        kept: list[int] = []
        pos = 0
        nxt = None
        for it in b.rules[var]:
            ln = 1 if it < 0 else lengths[it]
            if pos + ln <= j:
                kept.append(it)
            else:
                if pos < j:
                    nxt = (it, j - pos)
                break
            pos += ln
        levels.append(kept)
        if nxt is None:
            tail = None
            break
        var, j = nxt
    return _fold(b, levels, tail, left=True)


def _suffix(b: Builder, lengths, var: int, i: int, j: int) -> int | None:
    # here [i:j] reaches the end of var
    levels: list[list[int]] = []
    while True:
        if i == 0:
            tail = var
            break
        kept: list[int] = []
        pos = 0
        nxt = None
        for it in b.rules[var]:
            ln = 1 if it < 0 else lengths[it]
            if pos >= i:
                kept.append(it)
            elif pos + ln > i:
                nxt = (it, i - pos)
            pos += ln
        levels.append(kept)
        if nxt is None:
            tail = None
            break
        var, i = nxt
    return _fold(b, levels, tail, left=False)


def _fold(b: Builder, levels, tail, left: bool):
    cur = tail
    for kept in reversed(levels):
        items = list(kept)
        if cur is not None:
            if left:
                items.append(cur)
            else:
                items.insert(0, cur)
        if not items:
            cur = None
        elif len(items) == 1:
            cur = items[0]
        else:
            cur = b.add(items)
    return cur


# -- factorization ----------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """Result of :func:`factorize`.

    ``sslp`` contains a copy of every original variable (``of[A]``) together
    with the upper and lower helper variables.  ``parts[A]`` is the tuple
    ``(l, m, s, r)``: lower variables ``l`` and ``r``, the upper variable
    ``m`` (None when its value is empty) and the last distinguished symbol
    ``s`` (None when there is none).
    """

    sslp: SSLP
    kind: tuple[str, ...]
    of: dict
    parts: dict
    empty: int = field(default=0)


def factorize(g: SSLP, sigma1: Iterable[int]) -> Factorization:
    """Split every value ``v0 a1 v1 ... an vn`` around symbols of ``sigma1``.

    Lower variables derive words without ``sigma1`` symbols, upper variables
    derive words in ``(sigma1 sigma2*)*`` and each original variable becomes
    ``l``, ``l s r`` or ``l m s r``.
    """
    sigma1 = frozenset(sigma1)
    rules: list[tuple[int, ...]] = []
    kind: list[str] = []
    lengths: list[int] = []

    def add(rhs, k):
        rules.append(tuple(rhs))
        kind.append(k)
        lengths.append(sum(1 if it < 0 else lengths[it] for it in rhs))
        return len(rules) - 1

    eps = add((), "L")
    lower_cache: dict = {}

    def lower(items):
        # concatenation of lower variables, skipping empty ones
        items = [it for it in items if lengths[it] > 0]
        if not items:
            return eps
        acc = items[0]
        for it in items[1:]:
            key = (acc, it)
            if key not in lower_cache:
                lower_cache[key] = add((acc, it), "L")
            acc = lower_cache[key]
        return acc

    def upper(items):
        items = [it for it in items if it is not None]
        if not items:
            return None
        acc = items[0]
        for it in items[1:]:
            acc = add((acc, it), "U")
        return acc

    term_lower: dict = {}
    # per original variable: (Kl, Km, Ks, Kr); Kl/Kr lower ids, Km upper id or None
    info: list[tuple] = []

    def item_info(it):
        if it >= 0:
            return info[it]
        s = ~it
        if s in sigma1:
            return (eps, None, s, eps)
        if s not in term_lower:
            term_lower[s] = add((it,), "L")
        return (term_lower[s], None, None, eps)

    def combine(u, v):
        lu, mu, su, ru = u
        lv, mv, sv, rv = v
        if su is None:
            return (lower([lu, lv]), mv, sv, rv)
        if sv is None:
            return (lu, mu, su, lower([ru, lv]))
        mid_low = lower([ru, lv])
        u_bc = add((~su, mid_low), "U")
        return (lu, upper([mu, u_bc, mv]), sv, rv)

    for rhs in g.rules:
        if not rhs:
            info.append((eps, None, None, eps))
            continue
        acc = item_info(rhs[0])
        for it in rhs[1:]:
            acc = combine(acc, item_info(it))
        info.append(acc)

    of: dict = {}
    parts: dict = {}
    for a, (l, m, s, r) in enumerate(info):
        if s is None:
            rhs = (l,)
        elif m is None:
            rhs = (l, ~s, r)
        else:
            rhs = (l, m, ~s, r)
        of[a] = add(rhs, "V")
        parts[a] = (l, m, s, r)
    start = of[g.start] if g.start is not None else None
    return Factorization(SSLP(tuple(rules), start), tuple(kind), of, parts, eps)


# -- sorting ----------------------------------------------------------------

def _order_key(order) -> Callable[[int], object]:
    if order is None:
        return lambda s: s
    if callable(order):
        return order
    if isinstance(order, Mapping):
        return order.__getitem__
    rank = {s: i for i, s in enumerate(order)}
    return rank.__getitem__


def sort(g: SSLP, var: int | None = None, order=None) -> SSLP:
    """SSLP whose start derives the symbols of ``eval(var)`` in ascending order.

    For every reachable variable ``A`` and symbol ``a`` a copy ``A_a``
    derives ``a`` repeated as often as it occurs in ``eval(A)``; copies with
    no occurrence are dropped and single-item copies are aliased.  The
    result has at most ``(|delta| + 1) * |g|`` rules.
    """
    var = g._var(var)
    key = _order_key(order)
    delta = sorted(g.symbol_sets[var], key=key)
    reach = g.reachable([var])
    b = Builder()
    copy: dict = {}
    syms = g.symbol_sets
    for x, rhs in enumerate(g.rules):
        if not reach[x]:
            continue
        for a in syms[x]:
            items = []
            for it in rhs:
                if it < 0:
                    if ~it == a:
                        items.append(it)
                elif a in syms[it]:
                    items.append(copy[it, a])
            copy[x, a] = b.concat(items) if len(items) > 1 or items[0] >= 0 else b.add(items)
    top = [copy[var, a] for a in delta]
    if not top:
        start = b.add(())
    elif len(top) == 1:
        start = top[0]
    else:
        start = b.add(top)
    return b.build(start)


# -- length-lexicographic comparison ----------------------------------------

def compare_llex(g1: SSLP, a1: int | None, g2: SSLP, a2: int | None,
                 order=None, method: str = "recompression") -> int:
    """LT, EQ or GT for the llex relation of ``eval(a1)`` and ``eval(a2)``.

    ``order`` ranks terminal symbols (callable key, mapping, or a sequence
    listing symbols from smallest to largest); default is integer order.
    ``method="decompress"`` expands both strings and is meant for testing.
    """
    a1 = g1._var(a1)
    a2 = g2._var(a2)
    n1, n2 = g1.lengths[a1], g2.lengths[a2]
    if n1 != n2:
        return LT if n1 < n2 else GT
    if n1 == 0:
        return EQ
    key = _order_key(order)
    if method == "decompress":
        s1 = [key(s) for s in g1.eval(a1)]
        s2 = [key(s) for s in g2.eval(a2)]
        return (s1 > s2) - (s1 < s2)
    if method != "recompression":
        raise ValueError(f"unknown method {method!r}")
    from .recompression import LlexComparator

    merged, (r1, r2) = merge(g1, [a1], g2, [a2])
    return LlexComparator(merged, [r1, r2], key).compare(0, 1)


def merge(g1: SSLP, roots1: Sequence[int], g2: SSLP, roots2: Sequence[int]):
    """Disjoint union of two SSLPs; returns it and the relocated roots."""
    off = len(g1.rules)
    rules = list(g1.rules)
    for rhs in g2.rules:
        rules.append(tuple(it if it < 0 else it + off for it in rhs))
    return SSLP(tuple(rules)), list(roots1) + [r + off for r in roots2]
