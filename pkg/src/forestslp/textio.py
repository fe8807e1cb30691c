"""Text formats for grammars, trees and theories.

All grammar kinds share one line format::

    # comment
    start S
    S -> h A B
    A -> node a
    B -> node b A

Variables may be defined in any order; printing emits them in dependency
order with the start header first, so print(parse(text)) is canonical and
parse(print(g)) == g.

SSLP right-hand sides are items: a quoted terminal (``'a'`` or ``"a"``) or
a variable name.  Terminals become the integers 0, 1, ... in sorted order of
their text.  FSLP keywords: ``eps``, ``x``, ``h A B``, ``v A B``,
``node a [A [B]]``, ``node2 a A B`` (for a(AxB)).  Top dag keywords:
``atom a b``, ``atomb a b`` (b is the bottom boundary), ``hm A B``, ``vm A B``.
Theory files hold ``assoc: a e`` and ``comm: d`` lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ac_equiv import AcTheory
from .errors import GrammarError, GrammarSyntaxError
from .forest_core import check_label_name
from .fslp import FSLP, operands as fslp_operands
from .sslp import SSLP, is_term, term, toposort
from .topdag import TopDag

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")
_ITEM = re.compile(r"'([^']*)'|\"([^\"]*)\"|(\S+)")


@dataclass
class _Line:
    name: str
    items: list  # (is_terminal, text)
    line: int


def _read(text: str) -> tuple[list[_Line], str | None]:
    rules: list[_Line] = []
    seen: set = set()
    start = None
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "->" not in body:
            parts = body.split()
            if len(parts) == 2 and parts[0] == "start":
                if start is not None:
                    raise GrammarSyntaxError("second start header", no)
                start = _var_name(parts[1], no)
                continue
            raise GrammarSyntaxError(f"expected 'NAME -> ...' or 'start NAME', got {body!r}", no)
        lhs, rhs = body.split("->", 1)
        name = _var_name(lhs.strip(), no)
        if name in seen:
            raise GrammarSyntaxError(f"variable {name} defined twice", no)
        seen.add(name)
        items = []
        for m in _ITEM.finditer(rhs):
            if m.group(3) is None:
                items.append((True, m.group(1) if m.group(1) is not None else m.group(2)))
            else:
                items.append((False, m.group(3)))
        rules.append(_Line(name, items, no))
    if not rules:
        raise GrammarSyntaxError("no rules")
    if start is None:
        raise GrammarSyntaxError("missing 'start NAME' header")
    if start not in seen:
        raise GrammarSyntaxError(f"start variable {start} is not defined")
    return rules, start


def _var_name(s: str, no: int) -> str:
    if not _NAME.match(s):
        raise GrammarSyntaxError(f"bad variable name {s!r}", no)
    return s


def _order(rules: list[_Line], deps: dict) -> list[_Line]:
    """File order when every variable is defined before use, else a topological order."""
    by_name = {r.name: r for r in rules}
    for r in rules:
        for d in deps[r.name]:
            if d not in by_name:
                raise GrammarSyntaxError(f"undefined variable {d}", r.line)
    pos = {r.name: i for i, r in enumerate(rules)}
    if all(pos[d] < pos[r.name] for r in rules for d in deps[r.name]):
        return rules
    return [by_name[k] for k in toposort(deps)]


def _names_or_default(names, n, prefix="V"):
    return list(names) if names else [f"{prefix}{i}" for i in range(n)]


def _emit(names, start, bodies) -> str:
    lines = [f"start {names[start]}"]
    lines += [f"{names[i]} -> {b}".rstrip() for i, b in enumerate(bodies)]
    return "\n".join(lines) + "\n"


# -- SSLP --------------------------------------------------------------------------

def parse_sslp(text: str) -> tuple[SSLP, tuple[str, ...]]:
    """SSLP plus the terminal texts; terminal ``i`` is ``symbols[i]``."""
    rules, start = _read(text)
    deps = {r.name: [t for is_t, t in r.items if not is_t] for r in rules}
    for r in rules:
        for d in deps[r.name]:
            _var_name(d, r.line)
    rules = _order(rules, deps)
    symbols = tuple(sorted({t for r in rules for is_t, t in r.items if is_t}))
    sym_id = {s: i for i, s in enumerate(symbols)}
    ids = {r.name: i for i, r in enumerate(rules)}
    out = [tuple(term(sym_id[t]) if is_t else ids[t] for is_t, t in r.items) for r in rules]
    return SSLP(tuple(out), ids[start], tuple(r.name for r in rules)), symbols


def print_sslp(g: SSLP, symbols=None) -> str:
    if g.start is None:
        raise GrammarError("an SSLP needs a start variable to be printed")
    names = _names_or_default(g.names, len(g.rules))

    def item(it):
        if is_term(it):
            s = str(symbols[~it]) if symbols is not None else str(~it)
            return f'"{s}"' if "'" in s else f"'{s}'"
        return names[it]

    return _emit(names, g.start, [" ".join(item(it) for it in rhs) for rhs in g.rules])


# -- FSLP --------------------------------------------------------------------------

_FSLP_ARITY = {"eps": (0, 0), "x": (0, 0), "h": (0, 2), "v": (0, 2), "node": (1, None), "node2": (1, 2)}


def _plain(r: _Line) -> list[str]:
    for is_t, t in r.items:
        if is_t:
            raise GrammarSyntaxError("quoted items are only allowed in SSLPs", r.line)
    return [t for _, t in r.items]


def _fslp_rhs_names(r: _Line) -> tuple:
    toks = _plain(r)
    if not toks:
        raise GrammarSyntaxError("empty right-hand side", r.line)
    op, args = toks[0], toks[1:]
    if op not in _FSLP_ARITY:
        raise GrammarSyntaxError(f"unknown FSLP keyword {op!r}", r.line)
    nlab, nvar = _FSLP_ARITY[op]
    if op == "node":
        ok = 1 <= len(args) <= 3
    else:
        ok = len(args) == nlab + nvar
    if not ok:
        raise GrammarSyntaxError(f"wrong number of arguments for {op}", r.line)
    labels = args[:nlab]
    for a in labels:
        try:
            check_label_name(a)
        except (GrammarError, ValueError) as exc:
            raise GrammarSyntaxError(str(exc), r.line) from None
    vars_ = [_var_name(v, r.line) for v in args[nlab:]]
    return op, labels, vars_


def parse_fslp(text: str) -> FSLP:
    rules, start = _read(text)
    parsed = {r.name: _fslp_rhs_names(r) for r in rules}
    deps = {k: v[2] for k, v in parsed.items()}
    rules = _order(rules, deps)
    ids = {r.name: i for i, r in enumerate(rules)}
    out = []
    for r in rules:
        op, labels, vs = parsed[r.name]
        vs = [ids[v] for v in vs]
        if op in ("eps", "x"):
            out.append((op,))
        elif op in ("h", "v"):
            out.append((op, vs[0], vs[1]))
        elif op == "node":
            out.append((op, labels[0], tuple(vs)))
        else:
            out.append((op, labels[0], vs[0], vs[1]))
    f = FSLP(tuple(out), ids[start], tuple(r.name for r in rules))
    f.ranks  # report undefined operations as parse/validate errors early
    return f


def print_fslp(f: FSLP) -> str:
    names = _names_or_default(f.names, len(f.rules))
    bodies = []
    for rhs in f.rules:
        op = rhs[0]
        if op == "node":
            parts = ["node", rhs[1]] + [names[o] for o in rhs[2]]
        elif op == "node2":
            parts = ["node2", rhs[1], names[rhs[2]], names[rhs[3]]]
        else:
            parts = [op] + [names[o] for o in fslp_operands(rhs)]
        bodies.append(" ".join(parts))
    return _emit(names, f.start, bodies)


# -- top dags ----------------------------------------------------------------------

def parse_topdag(text: str) -> TopDag:
    rules, start = _read(text)
    parsed = {}
    for r in rules:
        toks = _plain(r)
        if len(toks) != 3 or toks[0] not in ("atom", "atomb", "hm", "vm"):
            raise GrammarSyntaxError("expected 'atom a b', 'atomb a b', 'hm A B' or 'vm A B'", r.line)
        if toks[0] in ("atom", "atomb"):
            for a in toks[1:]:
                try:
                    check_label_name(a)
                except (GrammarError, ValueError) as exc:
                    raise GrammarSyntaxError(str(exc), r.line) from None
            parsed[r.name] = (toks, [])
        else:
            parsed[r.name] = (toks, [_var_name(v, r.line) for v in toks[1:]])
    rules = _order(rules, {k: v[1] for k, v in parsed.items()})
    ids = {r.name: i for i, r in enumerate(rules)}
    out = []
    for r in rules:
        toks = parsed[r.name][0]
        if toks[0] in ("atom", "atomb"):
            out.append(tuple(toks))
        else:
            out.append((toks[0], ids[toks[1]], ids[toks[2]]))
    return TopDag(tuple(out), ids[start], tuple(r.name for r in rules))


def print_topdag(d: TopDag) -> str:
    names = _names_or_default(d.names, len(d.rules))
    bodies = []
    for rhs in d.rules:
        if rhs[0] in ("atom", "atomb"):
            bodies.append(" ".join(rhs))
        else:
            bodies.append(f"{rhs[0]} {names[rhs[1]]} {names[rhs[2]]}")
    return _emit(names, d.start, bodies)


# -- theories ----------------------------------------------------------------------

def parse_theory(text: str) -> AcTheory:
    assoc: set = set()
    comm: set = set()
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, rest = body.partition(":")
        key = key.strip()
        if not sep or key not in ("assoc", "comm"):
            raise GrammarSyntaxError(f"expected 'assoc: ...' or 'comm: ...', got {body!r}", no)
        for a in rest.split():
            try:
                check_label_name(a)
            except (GrammarError, ValueError) as exc:
                raise GrammarSyntaxError(str(exc), no) from None
            (assoc if key == "assoc" else comm).add(a)
    return AcTheory.of(assoc, comm)


def print_theory(th: AcTheory) -> str:
    return f"assoc: {' '.join(sorted(th.assoc))}".rstrip() + "\n" + f"comm: {' '.join(sorted(th.comm))}".rstrip() + "\n"


__all__ = [
    "parse_fslp",
    "parse_sslp",
    "parse_theory",
    "parse_topdag",
    "print_fslp",
    "print_sslp",
    "print_theory",
    "print_topdag",
]
