"""Small worked grammars used by tests, demos and the acceptance suite.

Each builder writes the grammar in the text format and parses it, so the
samples double as format fixtures.
"""

from __future__ import annotations

from .ac_equiv import AcTheory
from .forest_core import Forest, node_arrays, parse_forest
from .fslp import FSLP
from .sslp import SSLP
from .textio import parse_fslp, parse_sslp, parse_topdag
from .topdag import TopDag


def string_sample() -> tuple[SSLP, tuple[str, ...]]:
    """S -> AAB, A -> CBB, B -> CaC, C -> b; value bbabbabbbabbabbab."""
    return parse_sslp(
        "start S\n"
        "S -> A A B\n"
        "A -> C B B\n"
        "B -> C 'a' C\n"
        "C -> 'b'\n"
    )


def _doubling(lines, name, n, op, first):
    lines.append(f"{name}0 -> {first}")
    for i in range(1, n + 1):
        lines.append(f"{name}{i} -> {op} {name}{i - 1} {name}{i - 1}")


def spine_doubling_text(n: int) -> str:
    """Contexts b(a^m x a^m) stacked m times above c, m = 2^n."""
    lines = ["start S", "X -> x", "C -> node c"]
    _doubling(lines, "A", n, "h", "node a")
    lines.append(f"K -> h A{n} X")
    lines.append(f"L -> h K A{n}")
    _doubling(lines, "B", n, "v", "node b L")
    lines.append(f"S -> v B{n} C")
    return "\n".join(lines) + "\n"


def spine_doubling(n: int) -> FSLP:
    return parse_fslp(spine_doubling_text(n))


def _tree_lines(lines, name, text):
    # one rule per node of a small explicit tree; the root rule is called name
    labels, children, roots = node_arrays(parse_forest(text))
    ids = {}
    for u in range(len(labels) - 1, -1, -1):
        me = name if u == roots[0] else f"{name}_{u}"
        kids = [ids[c] for c in children[u]]
        if not kids:
            lines.append(f"{me} -> node {labels[u]}")
        else:
            cur = kids[0]
            for j, k in enumerate(kids[1:], 1):
                lines.append(f"{me}_h{j} -> h {cur} {k}")
                cur = f"{me}_h{j}"
            lines.append(f"{me} -> node {labels[u]} {cur}")
        ids[u] = me


def ac_pair_texts(n: int) -> tuple[str, str]:
    """Two grammars whose trees agree once ``e`` is associative and ``d``
    commutative: d-contexts with the parameter first on one side and last
    on the other, above runs of e-trees nested differently."""
    f1 = ["start S1", "X -> x", "EPS -> eps"]
    _tree_lines(f1, "A1", "e(e(a b) c)")
    _tree_lines(f1, "A2", "e(a e(b c))")
    f1.append("B0a -> h A1 X")
    f1.append("B0 -> h B0a A2")
    for i in range(1, n + 1):
        f1.append(f"B{i} -> v B{i - 1} B{i - 1}")
    f1.append(f"B -> v B{n} A1")
    f1.append("C0 -> node2 d EPS B")
    for i in range(1, n + 1):
        f1.append(f"C{i} -> v C{i - 1} C{i - 1}")
    f1.append(f"S1 -> v C{n} B")

    f2 = ["start S2", "X -> x", "EPS -> eps"]
    _tree_lines(f2, "D", "e(a b c)")
    f2.append("E0 -> h D D")
    for i in range(1, n + 1):
        f2.append(f"E{i} -> h E{i - 1} E{i - 1}")
    f2.append(f"E -> h E{n} D")
    f2.append("F0 -> node2 d E EPS")
    for i in range(1, n + 1):
        f2.append(f"F{i} -> v F{i - 1} F{i - 1}")
    f2.append(f"S2 -> v F{n} E")
    return "\n".join(f1) + "\n", "\n".join(f2) + "\n"


def ac_pair(n: int) -> tuple[FSLP, FSLP]:
    t1, t2 = ac_pair_texts(n)
    return parse_fslp(t1), parse_fslp(t2)


AC_PAIR_THEORY = AcTheory.of(assoc={"e"}, comm={"d"})


def topdag_sample_text(n: int) -> str:
    """b(a^m [b] a^m) clusters merged vertically m times above b(c), m = 2^n."""
    lines = ["start S", "A0 -> atom b a"]
    for i in range(1, n + 1):
        lines.append(f"A{i} -> hm A{i - 1} A{i - 1}")
    lines.append("Y -> atomb b b")
    lines.append(f"B0a -> hm A{n} Y")
    lines.append(f"B0 -> hm B0a A{n}")
    for i in range(1, n + 1):
        lines.append(f"B{i} -> vm B{i - 1} B{i - 1}")
    lines.append("Z -> atom b c")
    lines.append(f"S -> vm B{n} Z")
    return "\n".join(lines) + "\n"


def topdag_sample(n: int) -> TopDag:
    return parse_topdag(topdag_sample_text(n))


def wide_labels_text(n: int, sigma: int = 3) -> str:
    """a(a1(a^m) ... a_sigma(a^m)) with m = 2^n leaves under every child."""
    lines = ["start S", "P0 -> node a"]
    for i in range(1, n + 1):
        lines.append(f"P{i} -> h P{i - 1} P{i - 1}")
    for j in range(1, sigma + 1):
        lines.append(f"K{j} -> node a{j} P{n}")
    cur = "K1"
    for j in range(2, sigma + 1):
        lines.append(f"H{j} -> h {cur} K{j}")
        cur = f"H{j}"
    lines.append(f"S -> node a {cur}")
    return "\n".join(lines) + "\n"


def wide_labels(n: int, sigma: int = 3) -> FSLP:
    return parse_fslp(wide_labels_text(n, sigma))


def fcns_sample() -> Forest:
    return parse_forest("a(b c) d(e)")


def assoc_sample() -> Forest:
    return parse_forest("a(a(c d) b(c d) a(e))")


__all__ = [
    "AC_PAIR_THEORY",
    "ac_pair",
    "ac_pair_texts",
    "assoc_sample",
    "fcns_sample",
    "spine_doubling",
    "spine_doubling_text",
    "string_sample",
    "topdag_sample",
    "topdag_sample_text",
    "wide_labels",
    "wide_labels_text",
]
