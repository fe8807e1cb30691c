"""Explicit ordered forests, their term syntax, the fcns encoding, and
brute-force normal forms used as test oracles for the compressed algorithms.

A forest is stored flat, as its term string: a tuple of tokens where each
token is a label name, ``"("``, ``")"`` or the parameter ``"x"``.  A leaf is
the bare label (``a`` rather than ``a()``).  The flat layout keeps equality,
hashing and substitution non-recursive, so forests of depth 10^5 are fine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ForestSyntaxError, UnknownLabelError

PARAM = "x"
BOT = "_bot"
OPEN = "("
CLOSE = ")"

_NAME_RE = re.compile(r"[A-Za-z0-9_]+")
_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(\()|(\))|(\S))")


def check_label_name(name: str) -> str:
    if not _NAME_RE.fullmatch(name):
        raise ValueError(f"invalid label name {name!r}")
    if name == PARAM:
        raise ValueError("'x' is reserved for the parameter")
    return name


@dataclass(frozen=True)
class LabelSet:
    """Ordered label alphabet.

    Labels get dense ids in the given order.  The order on the bracket
    alphabet used by length-lexicographic comparison is
    ``'(' < ')' < _bot < labels by id``.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        for n in self.names:
            check_label_name(n)
            if n == BOT:
                raise ValueError("_bot is implicit in every LabelSet")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate label names")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def of(cls, *collections: Iterable[str]) -> "LabelSet":
        """Labels of all collections, sorted by name (``_bot`` dropped)."""
        found = set()
        for c in collections:
            found.update(c)
        found.discard(BOT)
        return cls(tuple(sorted(found)))

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name == BOT or name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownLabelError(name) from None

    def gamma(self, token: str) -> int:
        """Integer code of a term-string token; respects the fixed order."""
        if token == OPEN:
            return 0
        if token == CLOSE:
            return 1
        if token == BOT:
            return 2
        return 3 + self.index(token)

    def token(self, code: int) -> str:
        if code == 0:
            return OPEN
        if code == 1:
            return CLOSE
        if code == 2:
            return BOT
        return self.names[code - 3]


@dataclass(frozen=True)
class Forest:
    tokens: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        """Number of nodes, the parameter leaf included."""
        return sum(1 for t in self.tokens if t != OPEN and t != CLOSE)

    @property
    def rank(self) -> int:
        return 1 if PARAM in self.tokens else 0

    def labels(self) -> set[str]:
        return {t for t in self.tokens if t not in (OPEN, CLOSE, PARAM)}

    def trees(self) -> Iterator["Forest"]:
        depth = 0
        start = 0
        for i, t in enumerate(self.tokens):
            if t == OPEN:
                depth += 1
            elif t == CLOSE:
                depth -= 1
            if depth == 0 and (i + 1 == len(self.tokens) or self.tokens[i + 1] != OPEN):
                yield Forest(self.tokens[start:i + 1])
                start = i + 1

    @property
    def num_trees(self) -> int:
        return sum(1 for _ in self.trees())

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return print_forest(self)

    def __repr__(self):
        return f"Forest({print_forest(self)!r})"


EMPTY = Forest(())


def leaf(label: str) -> Forest:
    return Forest((label,))


def node(label: str, children: Forest = EMPTY) -> Forest:
    if not children.tokens:
        return Forest((label,))
    return Forest((label, OPEN) + children.tokens + (CLOSE,))


def concat(*forests: Forest) -> Forest:
    out: tuple[str, ...] = ()
    for f in forests:
        out += f.tokens
    return Forest(out)


def substitute(context: Forest, arg: Forest) -> Forest:
    """Vertical concatenation: replace the parameter of ``context`` by ``arg``."""
    toks = context.tokens
    i = toks.index(PARAM)
    return Forest(splice(toks, i, arg.tokens))


def splice(toks: tuple, i: int, arg: tuple) -> tuple:
    # a(x) with x := eps must collapse to the leaf a
    if not arg and 0 < i < len(toks) - 1 and toks[i - 1] == OPEN and toks[i + 1] == CLOSE:
        return toks[:i - 1] + toks[i + 2:]
    return toks[:i] + arg + toks[i + 1:]


def drop_empty_parens(tokens: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for t in tokens:
        if t == CLOSE and out and out[-1] == OPEN:
            out.pop()
        else:
            out.append(t)
    return tuple(out)


# -- text syntax ------------------------------------------------------------

def parse_forest(text: str, labels: LabelSet | None = None) -> Forest:
    """Parse ``forest := tree*; tree := name | name '(' forest ')' | 'x'``.

    With ``labels`` given, names outside the set raise UnknownLabelError.
    """
    raw = text.encode("utf-8")
    tokens: list[str] = []
    depth = 0
    seen_param = False
    pos = 0
    prev_name = False
    n = len(text)
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        name, op, cl, bad = m.groups()
        start = m.start(m.lastindex)
        offset = len(text[:start].encode("utf-8"))
        pos = m.end()
        if bad is not None:
            raise ForestSyntaxError(f"unexpected character {bad!r}", offset)
        if name is not None:
            if name == PARAM:
                if seen_param:
                    raise ForestSyntaxError("parameter x occurs more than once", offset)
                seen_param = True
            elif labels is not None and name not in labels:
                raise UnknownLabelError(name)
            tokens.append(name)
            prev_name = True
            continue
        if op is not None:
            if not prev_name:
                raise ForestSyntaxError("'(' must follow a label", offset)
            if tokens[-1] == PARAM:
                raise ForestSyntaxError("parameter x cannot have children", offset)
            depth += 1
            tokens.append(OPEN)
        else:
            if depth == 0:
                raise ForestSyntaxError("unbalanced ')'", offset)
            depth -= 1
            tokens.append(CLOSE)
        prev_name = False
    if pos < n and text[pos:].strip():
        raise ForestSyntaxError("trailing garbage", len(text[:pos].encode("utf-8")))
    if depth:
        raise ForestSyntaxError("unbalanced '('", len(raw))
    return Forest(drop_empty_parens(tokens))


def print_forest(f: Forest) -> str:
    parts: list[str] = []
    prev = None
    for t in f.tokens:
        if t not in (OPEN, CLOSE) and prev is not None and prev != OPEN:
            parts.append(" ")
        parts.append(t)
        prev = t
    return "".join(parts)


# -- node arrays ------------------------------------------------------------

def node_arrays(f: Forest) -> tuple[list[str], list[list[int]], list[int]]:
    """Preorder node labels, children lists and root list of ``f``."""
    labels: list[str] = []
    children: list[list[int]] = []
    roots: list[int] = []
    stack: list[int] = []
    for t in f.tokens:
        if t == OPEN:
            stack.append(len(labels) - 1)
        elif t == CLOSE:
            stack.pop()
        else:
            (children[stack[-1]] if stack else roots).append(len(labels))
            labels.append(t)
            children.append([])
    return labels, children, roots


def _emit(labels: Sequence[str], children: Sequence[Sequence[int]], seq: Sequence[int]) -> tuple:
    out: list[str] = []
    work: list = [(seq, 0)]
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        s, k = item
        if k == len(s):
            continue
        u = s[k]
        work.append((s, k + 1))
        out.append(labels[u])
        if children[u]:
            out.append(OPEN)
            work.append(CLOSE)
            work.append((children[u], 0))
    return tuple(out)


def dag_size(f: Forest) -> int:
    """Nodes plus edges of the minimal dag of ``f`` (multi-edges counted)."""
    labels, children, _ = node_arrays(f)
    ident: list[int] = [0] * len(labels)
    table: dict = {}
    edges = 0
    for u in range(len(labels) - 1, -1, -1):
        key = (labels[u], tuple(ident[c] for c in children[u]))
        if key not in table:
            table[key] = len(table)
            edges += len(children[u])
        ident[u] = table[key]
    return len(table) + edges


# -- first-child/next-sibling -----------------------------------------------

def fcns(f: Forest) -> Forest:
    if f.rank != 0:
        raise ValueError("fcns is defined on rank-0 forests only")
    if BOT in f.tokens:
        raise ValueError("_bot may not occur in the input of fcns")
    labels, children, roots = node_arrays(f)
    out: list[str] = []
    work: list = [(roots, 0)]
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        seq, k = item
        if k == len(seq):
            out.append(BOT)
            continue
        u = seq[k]
        out.append(labels[u])
        out.append(OPEN)
        work.append(CLOSE)
        work.append((seq, k + 1))
        work.append((children[u], 0))
    return Forest(tuple(out))


def fcns_inverse(t: Forest) -> Forest:
    labels, children, roots = node_arrays(t)
    if len(roots) != 1:
        raise ValueError("an fcns image is a single binary tree")
    for u, lab in enumerate(labels):
        if lab == PARAM:
            raise ValueError("parameter inside an fcns image")
        if lab == BOT:
            if children[u]:
                raise ValueError("_bot node with children")
        elif len(children[u]) != 2:
            raise ValueError(f"label {lab} has {len(children[u])} children, expected 2")
    out: list[str] = []
    work: list = [roots[0]]
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        if labels[item] == BOT:
            continue
        left, right = children[item]
        out.append(labels[item])
        out.append(OPEN)
        work.append(right)
        work.append(CLOSE)
        work.append(left)
    return Forest(drop_empty_parens(out))


# -- reference normal forms -------------------------------------------------

def ref_nf_assoc(f: Forest, assoc: Iterable[str]) -> Forest:
    """Flatten nested occurrences of associative labels (pull children up)."""
    if f.rank != 0:
        raise ValueError("rank-0 forest expected")
    assoc = frozenset(assoc)
    toks = f.tokens
    out: list[str] = []
    # one entry per open bracket: (label of the node, node was dropped)
    ctx: list[tuple] = []
    n = len(toks)
    i = 0
    while i < n:
        t = toks[i]
        if t == CLOSE:
            _, dropped = ctx.pop()
            if not dropped:
                if out[-1] == OPEN:
                    out.pop()
                else:
                    out.append(CLOSE)
            i += 1
            continue
        above = ctx[-1][0] if ctx else None
        merge = t in assoc and t == above
        has_kids = i + 1 < n and toks[i + 1] == OPEN
        if has_kids:
            ctx.append((t, merge))
            if not merge:
                out.append(t)
                out.append(OPEN)
            i += 2
        else:
            if not merge:
                out.append(t)
            i += 1
    return Forest(tuple(out))


def _coded(f: Forest, order: LabelSet) -> tuple[list[int], list[list[int]], list[int]]:
    labels, children, roots = node_arrays(f)
    return [order.gamma(lab) for lab in labels], children, roots


def _llex_key(code: tuple) -> tuple:
    return (len(code), code)


def ref_nf_comm(f: Forest, comm: Iterable[str], order: LabelSet | None = None) -> Forest:
    """Sort children of commutative labels by llex order of their term strings."""
    if f.rank != 0:
        raise ValueError("rank-0 forest expected")
    comm = frozenset(comm)
    if order is None:
        order = LabelSet.of(f.labels())
    codes, children, roots = _coded(f, order)
    comm_codes = {order.gamma(c) for c in comm if c in order}
    canon: list[tuple] = [()] * len(codes)
    for u in range(len(codes) - 1, -1, -1):
        kids = [canon[c] for c in children[u]]
        if not kids:
            canon[u] = (codes[u],)
            continue
        if codes[u] in comm_codes:
            kids.sort(key=_llex_key)
        parts = [(codes[u], 0)]
        parts.extend(kids)
        parts.append((1,))
        canon[u] = sum(parts, ())
        for c in children[u]:
            canon[c] = ()
    top = sum((canon[r] for r in roots), ())
    return Forest(tuple(order.token(c) for c in top))


def ref_ac_equal(f1: Forest, f2: Forest, assoc: Iterable[str] = (), comm: Iterable[str] = ()) -> bool:
    order = LabelSet.of(f1.labels(), f2.labels())
    g1 = ref_nf_comm(ref_nf_assoc(f1, assoc), comm, order)
    g2 = ref_nf_comm(ref_nf_assoc(f2, assoc), comm, order)
    return g1 == g2


def llex_compare_forests(f1: Forest, f2: Forest, order: LabelSet | None = None) -> int:
    """-1, 0, 1 for the llex relation of the two term strings."""
    if order is None:
        order = LabelSet.of(f1.labels(), f2.labels())
    a = tuple(order.gamma(t) for t in f1.tokens)
    b = tuple(order.gamma(t) for t in f2.tokens)
    ka, kb = _llex_key(a), _llex_key(b)
    return (ka > kb) - (ka < kb)
