"""Top dags: straight-line programs over clusters, and their translations
to and from FSLPs.

A cluster is a tree with at least two nodes; a rank-1 cluster additionally
marks one leaf as its bottom boundary.  Right-hand sides:

    ("atom", a, b)    a(b)
    ("atomb", a, b)   a(b) with b the bottom boundary
    ("hm", B, C)      horizontal merge: a(f) and a(g) give a(fg)
    ("vm", B, C)      vertical merge: the bottom boundary of B is replaced by C
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BottomLabelMismatch,
    ExplosionGuardError,
    GrammarError,
    NotATreeError,
    RankViolation,
    RootLabelMismatch,
    TreeTooSmallError,
)
from .forest_core import CLOSE, OPEN, PARAM, Forest, check_label_name
from .fslp import ALIAS, FSLP, Emitter
from .normal_form import normal_form
from .sslp import DEFAULT_CAP


def _operands(rhs):
    return rhs[1:] if rhs[0] in ("hm", "vm") else ()


@dataclass(frozen=True)
class Cluster:
    """A tree plus the preorder index of its bottom boundary leaf (or None)."""

    tree: Forest
    bottom: int | None = None

    @property
    def rank(self) -> int:
        return 0 if self.bottom is None else 1

    def __str__(self):
        out = []
        k = 0
        toks = self.tree.tokens
        for t in toks:
            if t in (OPEN, CLOSE):
                out.append(t)
                continue
            if out and out[-1] not in (OPEN,):
                out.append(" ")
            out.append(f"[{t}]" if k == self.bottom else t)
            k += 1
        return "".join(out).replace(" )", ")").replace("( ", "(")


@dataclass(frozen=True)
class ClusterInfo:
    rank: int
    root: str
    bottom: str | None


@dataclass(frozen=True)
class TopDag:
    rules: tuple
    start: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(tuple(r) for r in self.rules))
        for i, rhs in enumerate(self.rules):
            op = rhs[0]
            if op in ("atom", "atomb") and len(rhs) == 3:
                check_label_name(rhs[1])
                check_label_name(rhs[2])
            elif op in ("hm", "vm") and len(rhs) == 3:
                for o in rhs[1:]:
                    if not isinstance(o, int) or not 0 <= o < i:
                        raise GrammarError(f"variable {i}: operand {o!r} must be an earlier variable")
            else:
                raise GrammarError(f"variable {i}: malformed right-hand side {rhs!r}")
        if not 0 <= self.start < len(self.rules):
            raise GrammarError("start variable out of range")

    def __len__(self):
        return len(self.rules)

    def name(self, var: int) -> str:
        return self.names[var] if self.names else f"V{var}"

    @property
    def size(self) -> int:
        return len(self.rules)

    def labels(self) -> set[str]:
        out = set()
        for rhs in self.rules:
            if rhs[0] in ("atom", "atomb"):
                out.update(rhs[1:])
        return out

    @cached_property
    def info(self) -> tuple[ClusterInfo, ...]:
        """Rank, root label and bottom label of every variable."""
        out: list[ClusterInfo] = []
        for i, rhs in enumerate(self.rules):
            op = rhs[0]
            if op == "atom":
                out.append(ClusterInfo(0, rhs[1], None))
            elif op == "atomb":
                out.append(ClusterInfo(1, rhs[1], rhs[2]))
            elif op == "hm":
                b, c = out[rhs[1]], out[rhs[2]]
                if b.rank + c.rank > 1:
                    raise RankViolation(self.name(i), "horizontal merge of two rank-1 clusters")
                if b.root != c.root:
                    raise RootLabelMismatch(self.name(i), f"root labels {b.root!r} and {c.root!r} differ")
                out.append(ClusterInfo(b.rank + c.rank, b.root, b.bottom or c.bottom))
            else:
                b, c = out[rhs[1]], out[rhs[2]]
                if b.rank != 1:
                    raise RankViolation(self.name(i), "vertical merge needs a rank-1 left operand")
                if b.bottom != c.root:
                    raise BottomLabelMismatch(
                        self.name(i), f"bottom label {b.bottom!r} differs from root label {c.root!r}")
                out.append(ClusterInfo(c.rank, b.root, c.bottom))
        return tuple(out)

    def validate(self) -> tuple[ClusterInfo, ...]:
        info = self.info
        if info[self.start].rank:
            raise RankViolation(self.name(self.start), "start variable must derive a rank-0 cluster")
        return info

    @cached_property
    def node_counts(self) -> tuple[int, ...]:
        out: list[int] = []
        for rhs in self.rules:
            if rhs[0] in ("atom", "atomb"):
                out.append(2)
            elif rhs[0] == "hm":
                out.append(out[rhs[1]] + out[rhs[2]] - 1)
            else:
                out.append(out[rhs[1]] + out[rhs[2]] - 1)
        return tuple(out)

    def eval(self, var: int | None = None, cap: int = DEFAULT_CAP) -> Cluster:
        var = self.start if var is None else var
        info = self.info
        n = self.node_counts[var]
        if n > cap:
            raise ExplosionGuardError(n, cap)
        e, start = _to_fslp(self, var)
        body = FSLP(tuple(e.rules), start).eval(start, cap=cap + 1)
        toks = (info[var].root, OPEN) + body.tokens + (CLOSE,)
        return _mark_bottom(toks)


def _mark_bottom(toks) -> Cluster:
    """Turn the leaf ``b(x)`` into a bottom boundary ``b``."""
    if PARAM not in toks:
        return Cluster(Forest(toks))
    i = toks.index(PARAM)
    toks = toks[: i - 1] + toks[i + 2:]
    bottom = sum(1 for t in toks[: i - 2] if t not in (OPEN, CLOSE))
    return Cluster(Forest(toks), bottom)


def cluster_to_forest(c: Cluster) -> Forest:
    """The tree of a cluster (the boundary marker is dropped)."""
    return c.tree


# -- top dag -> FSLP ---------------------------------------------------------------

def _to_fslp(d: TopDag, var: int) -> tuple[Emitter, int]:
    # each variable derives its cluster without the root; a bottom leaf b becomes b(x)
    e = Emitter()
    ids: list[int] = []
    for rhs in d.rules:
        op = rhs[0]
        if op == "atom":
            ids.append(e.node(rhs[2]))
        elif op == "atomb":
            ids.append(e.node(rhs[2], e.x()))
        elif op == "hm":
            ids.append(e.add(("h", ids[rhs[1]], ids[rhs[2]])))
        else:
            ids.append(e.v(ids[rhs[1]], ids[rhs[2]]))
    return e, ids[var]


def topdag_to_fslp(d: TopDag) -> FSLP:
    """FSLP with the same tree; one rule per top dag rule plus the root."""
    info = d.validate()
    e, s = _to_fslp(d, d.start)
    return e.build(e.node(info[d.start].root, s))


# -- FSLP -> top dag ---------------------------------------------------------------

def fslp_to_topdag(f: FSLP) -> TopDag:
    """Top dag for the tree of ``f`` (at least two nodes); O(labels * |f|) rules.

    Families of new variables, built on demand from the start:
      T(A)        the tree of a bottom rank-0 variable with at least two nodes
      up(A, a)    the cluster a(value of A) for a nonempty rank-0 A
      psi(A, a)   a rank-1 A with its parameter replaced by a bottom boundary a
      psi0(A, a)  the same with a plain leaf a (a rank-0 cluster)
    """
    f.validate()
    if f.tree_counts[f.start] != 1:
        raise NotATreeError(f"the value is a forest of {f.tree_counts[f.start]} trees")
    if f.node_counts[f.start] < 2:
        raise TreeTooSmallError("a top dag needs a tree with at least two nodes")
    f = normal_form(f)
    rules = f.rules
    n = f.node_counts
    root: list = [None] * len(rules)
    for i, rhs in enumerate(rules):
        if rhs[0] in ("node", "node2"):
            root[i] = rhs[1]
        elif rhs[0] == "v":
            root[i] = root[rhs[1]]

    def tree_var(v):
        # the bottom variable of a rank-0 variable deriving one tree
        while rules[v][0] == "h":
            _, b, c = rules[v]
            v = c if n[b] == 0 else b
        return v

    defs: dict = {}
    top = ("T", tree_var(f.start))
    todo = [top]

    def put(key, d):
        defs[key] = d
        todo.extend((d[1],) if d[0] == ALIAS else _operands(d))

    def merge_chain(key, parts):
        cur = parts[0]
        for j in range(1, len(parts)):
            nxt = key if j == len(parts) - 1 else key + (j,)
            put(nxt, ("hm", cur, parts[j]))
            cur = nxt

    while todo:
        key = todo.pop()
        if key in defs:
            continue
        kind = key[0]
        if kind == "at":
            defs[key] = ("atom", key[1], key[2])
            continue
        if kind == "atb":
            defs[key] = ("atomb", key[1], key[2])
            continue
        v = key[1]
        rhs = rules[v]
        op = rhs[0]
        if kind == "T":
            if op == "node":
                put(key, (ALIAS, ("up", rhs[2][0], rhs[1])))
            else:
                b, c = rhs[1], rhs[2]
                if n[c] == 1:
                    put(key, (ALIAS, ("psi0", b, root[c])))
                else:
                    put(key, ("vm", ("psi", b, root[c]), ("T", c)))
        elif kind == "up":
            a = key[2]
            if op == "h":
                b, c = rhs[1], rhs[2]
                if not n[b] or not n[c]:
                    put(key, (ALIAS, ("up", c if not n[b] else b, a)))
                else:
                    put(key, ("hm", ("up", b, a), ("up", c, a)))
            elif n[v] == 1:
                put(key, (ALIAS, ("at", a, root[v])))
            else:
                put(key, ("vm", ("atb", a, root[v]), ("T", v)))
        else:
            a = key[2]
            if op == "v":
                b, c = rhs[1], rhs[2]
                put(key, ("vm", ("psi", b, root[c]), (kind, c, a)))
            else:
                b, bk, ck = rhs[1], rhs[2], rhs[3]
                parts = [("up", bk, b)] if n[bk] else []
                parts.append(("atb" if kind == "psi" else "at", b, a))
                if n[ck]:
                    parts.append(("up", ck, b))
                if len(parts) == 1:
                    put(key, (ALIAS, parts[0]))
                else:
                    merge_chain(key, parts)
    return _assemble_topdag(defs, top)


def _assemble_topdag(defs: dict, start) -> TopDag:
    ids: dict = {}
    out: list = []
    table: dict = {}
    stack = [(start, False)]
    while stack:
        key, ready = stack.pop()
        if key in ids:
            continue
        d = defs[key]
        deps = (d[1],) if d[0] == ALIAS else _operands(d)
        if not ready:
            stack.append((key, True))
            stack.extend((x, False) for x in reversed(deps) if x not in ids)
            continue
        if d[0] == ALIAS:
            ids[key] = ids[d[1]]
            continue
        rhs = d if d[0] in ("atom", "atomb") else (d[0], ids[d[1]], ids[d[2]])
        if rhs not in table:
            table[rhs] = len(out)
            out.append(rhs)
        ids[key] = table[rhs]
    return TopDag(tuple(out), ids[start])


def top_dag_of_tree(t: Forest) -> TopDag:
    """Top dag built from an explicit tree (via its exact FSLP)."""
    from .fslp import from_forest_exact

    return fslp_to_topdag(from_forest_exact(t))


__all__ = [
    "Cluster",
    "ClusterInfo",
    "TopDag",
    "cluster_to_forest",
    "fslp_to_topdag",
    "top_dag_of_tree",
    "topdag_to_fslp",
]
