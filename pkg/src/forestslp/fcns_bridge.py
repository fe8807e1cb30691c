"""Translations between FSLPs and TSLPs of first-child/next-sibling encodings.

A TSLP here is an FSLP whose right-hand sides are leaves ``a``, binary
nodes ``a(BC)``, ``a(xB)``, ``a(Bx)`` (with ``x`` the parameter variable)
and vertical concatenations ``B<C>``.
"""

from __future__ import annotations

from .errors import NotAnFcnsImageError
from .forest_core import BOT
from .fslp import ALIAS, FSLP, Emitter, assemble
from .normal_form import normal_form


def tslp_shape_violation(t: FSLP) -> str | None:
    """Why ``t`` is not a TSLP, or None."""
    rules = t.rules
    r = t.ranks
    for i, rhs in enumerate(rules):
        op = rhs[0]
        if op == "x" or op == "v":
            continue
        if op == "node":
            kids = rhs[2]
            if not kids:
                continue
            if len(kids) == 2:
                params = [k for k in kids if rules[k][0] == "x"]
                if len(params) <= 1 and all(rules[k][0] == "x" or not r[k] for k in kids):
                    continue
        return f"{t.name(i)}: {op} is not a TSLP right-hand side"
    return None


def is_tslp(t: FSLP) -> bool:
    return tslp_shape_violation(t) is None


def fslp_to_fcns_tslp(f: FSLP) -> FSLP:
    """TSLP for the fcns encoding of the value of ``f``; O(|f|) rules.

    For every variable the construction keeps
      chop(A)   fcns of the children of the tree A (for rank 1: a context
                waiting for the encoding of the parameter and its right
                siblings)
      cont(A)   the context fcns(A .) (None when it is the identity)
    and sibl(A), the variable deriving the right siblings of the parameter.
    """
    f = normal_form(f)
    rules = f.rules
    r = f.ranks
    e = Emitter()
    xv = e.x()
    bot = e.node(BOT)
    root: list = [None] * len(rules)
    sibl: list = [None] * len(rules)
    chop: list = [None] * len(rules)
    cont: list = [None] * len(rules)

    def vcat(b, c):
        # vertical concatenation where None stands for the identity context
        if b is None:
            return c
        if c is None:
            return b
        return e.v(b, c)

    def closed(c):
        # c<bot>
        return bot if c is None else e.v(c, bot)

    for i, rhs in enumerate(rules):
        op = rhs[0]
        if op == "eps":
            cont[i] = None
        elif op == "h":
            cont[i] = vcat(cont[rhs[1]], cont[rhs[2]])
        elif op == "node":
            root[i] = rhs[1]
            chop[i] = closed(cont[rhs[2][0]])
        elif op == "node2":
            root[i] = rhs[1]
            sibl[i] = rhs[3]
            chop[i] = cont[rhs[2]]
        else:
            b, c = rhs[1], rhs[2]
            root[i] = root[b]
            rest = closed(cont[sibl[b]])
            if r[c]:
                sibl[i] = sibl[c]
                chop[i] = vcat(chop[b], vcat(e.node(root[c], xv, rest), chop[c]))
            else:
                chop[i] = vcat(chop[b], e.node(root[c], chop[c], rest))
        if op in ("node", "v") and not r[i]:
            cont[i] = e.node(root[i], chop[i], xv)
    return e.build(closed(cont[f.start]))


def fcns_tslp_to_fslp(t: FSLP) -> FSLP:
    """FSLP for the forest whose fcns encoding is the value of ``t``.

    Works for any FSLP over the labels plus ``_bot``; whether the value is
    an fcns encoding is checked on the grammar (every horizontal word has
    length at most two, ``_bot`` only at leaves, other nodes binary).
    """
    f = normal_form(t)
    rules = f.rules
    r = f.ranks
    # horizontal words, bounded by two
    hor: dict = {}
    for i, rhs in enumerate(rules):
        op = rhs[0]
        if op == "eps":
            hor[i] = ()
        elif op == "h":
            w = hor[rhs[1]] + hor[rhs[2]]
            if len(w) > 2:
                raise NotAnFcnsImageError(f.name(i), "a node would have more than two children")
            hor[i] = w
        elif not r[i]:
            hor[i] = (i,)

    defs: dict = {"X": ("x",), "E": ("eps",)}

    def key(v):
        return ("F", v)

    for i, rhs in enumerate(rules):
        op = rhs[0]
        if op in ("eps", "h"):
            continue
        k = key(i)
        if op == "node":
            a, w = rhs[1], hor[rhs[2][0]]
            if a == BOT:
                if w:
                    raise NotAnFcnsImageError(f.name(i), "_bot node with children")
                defs[k] = (ALIAS, "E")
            else:
                if len(w) != 2:
                    raise NotAnFcnsImageError(f.name(i), f"{a} node with {len(w)} children")
                defs[k + ("n",)] = ("node", a, (key(w[0]),))
                defs[k] = ("h", k + ("n",), key(w[1]))
        elif op == "node2":
            a = rhs[1]
            wb, wc = hor[rhs[2]], hor[rhs[3]]
            if a == BOT:
                raise NotAnFcnsImageError(f.name(i), "_bot node with children")
            if len(wb) + len(wc) != 1:
                raise NotAnFcnsImageError(f.name(i), f"{a} node with {len(wb) + len(wc) + 1} children")
            if wb:
                defs[k + ("n",)] = ("node", a, (key(wb[0]),))
                defs[k] = ("h", k + ("n",), "X")
            else:
                defs[k + ("n",)] = ("node", a, ("X",))
                defs[k] = ("h", k + ("n",), key(wc[0]))
        else:
            defs[k] = ("v", key(rhs[1]), key(rhs[2]))
    w = hor[f.start] if f.start in hor else (f.start,)
    if len(w) != 1:
        raise NotAnFcnsImageError(f.name(f.start), "the value is not a single binary tree")
    return assemble(defs, key(w[0]))


__all__ = [
    "fcns_tslp_to_fslp",
    "fslp_to_fcns_tslp",
    "is_tslp",
    "tslp_shape_violation",
]
