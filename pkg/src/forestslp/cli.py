"""Command-line front end.

Exit codes: 0 success (or EQUAL), 1 UNEQUAL, 2 usage or unreadable input,
3 parse or validation error, 4 unmet semantic precondition, 5 output
larger than the decompression cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .ac_equiv import AcTheory, ac_canonical, ac_equal, nf_assoc
from .errors import (
    ExplosionGuardError,
    GrammarError,
    NotAnFcnsImageError,
    NotATreeError,
    NotNormalFormError,
    TreeTooSmallError,
)
from .fcns_bridge import fcns_tslp_to_fslp, fslp_to_fcns_tslp, tslp_shape_violation
from .forest_core import BOT, dag_size, parse_forest, print_forest
from .fslp import FSLP, build_baseline
from .normal_form import normal_form, strong_normal_form
from .sslp import DEFAULT_CAP
from .textio import parse_fslp, parse_theory, parse_topdag, print_fslp, print_topdag
from .topdag import TopDag, fslp_to_topdag, topdag_to_fslp

FORMATS = ("tree", "fslp", "topdag", "tslp")
_SUFFIX = {".tree": "tree", ".fslp": "fslp", ".topdag": "topdag", ".tslp": "tslp"}
# stats computes the dag size of values up to this many nodes
STATS_DAG_CAP = 10**6
_SEMANTIC = (NotATreeError, TreeTooSmallError, NotAnFcnsImageError, NotNormalFormError)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _format(path: str, given: str | None) -> str:
    if given:
        return given
    fmt = _SUFFIX.get(Path(path).suffix)
    if fmt is None:
        raise UsageError(f"cannot tell the format of {path}; pass --from")
    return fmt


def _load(path: str, fmt: str):
    text = _read(path)
    if fmt == "tree":
        f = parse_forest(text.strip())
        if f.rank:
            raise GrammarError("a tree file must not contain the parameter x")
        return f
    if fmt == "topdag":
        d = parse_topdag(text)
        d.validate()
        return d
    f = parse_fslp(text)
    f.validate()
    if fmt == "tslp":
        why = tslp_shape_violation(f)
        if why:
            raise GrammarError(why)
    return f


def _to_fslp(obj, fmt: str) -> FSLP:
    """FSLP for the forest a loaded input stands for (a TSLP stands for the
    forest it encodes)."""
    if fmt == "tree":
        return build_baseline(obj)
    if fmt == "topdag":
        return topdag_to_fslp(obj)
    if fmt == "tslp":
        return fcns_tslp_to_fslp(obj)
    return obj


def _render(obj, fmt: str) -> str:
    if fmt == "tree":
        return print_forest(obj) + "\n"
    if fmt == "topdag":
        return print_topdag(obj)
    return print_fslp(obj)


def _convert(f: FSLP, fmt: str, cap: int):
    if fmt == "tree":
        return f.eval(cap=cap)
    if fmt == "topdag":
        return fslp_to_topdag(f)
    if fmt == "tslp":
        return fslp_to_fcns_tslp(f)
    return f


def _theory(path: str | None) -> AcTheory:
    return parse_theory(_read(path)) if path else AcTheory()


# -- subcommands --------------------------------------------------------------------

def cmd_convert(args) -> int:
    src = _format(args.input, args.src)
    obj = _load(args.input, src)
    _write(args.output, _render(_convert(_to_fslp(obj, src), args.dst, args.cap), args.dst))
    return 0


def cmd_normalize(args) -> int:
    src = _format(args.input, args.src)
    f = _to_fslp(_load(args.input, src), src)
    if args.mode in ("assoc", "ac") and not args.theory:
        raise UsageError(f"--{args.mode} needs --theory")
    th = _theory(args.theory)
    if args.mode == "nf":
        g = normal_form(f)
    elif args.mode == "strong-nf":
        g = strong_normal_form(f)
    elif args.mode == "assoc":
        g = nf_assoc(f, th.assoc)
    else:
        g = ac_canonical(f, th)
    _write(args.output, print_fslp(g))
    return 0


def cmd_eq(args) -> int:
    th = _theory(args.theory)
    fs = []
    for path in (args.first, args.second):
        fmt = _format(path, args.src)
        fs.append(_to_fslp(_load(path, fmt), fmt))
    same = ac_equal(fs[0], fs[1], th)
    print("EQUAL" if same else "UNEQUAL")
    return 0 if same else 1


def cmd_eval(args) -> int:
    fmt = _format(args.input, args.src)
    obj = _load(args.input, fmt)
    if fmt == "tree":
        value = obj
    elif fmt == "topdag":
        value = obj.eval(cap=args.cap).tree
    else:
        value = obj.eval(cap=args.cap)
    _write(args.output, print_forest(value) + "\n")
    return 0


def cmd_compress(args) -> int:
    fmt = _format(args.input, args.src or "tree")
    if fmt != "tree":
        raise UsageError("compress reads a tree file")
    _write(args.output, print_fslp(build_baseline(_load(args.input, "tree"))))
    return 0


def cmd_stats(args) -> int:
    fmt = _format(args.input, args.src)
    obj = _load(args.input, fmt)
    lines = [f"format: {fmt}"]
    if fmt == "tree":
        f = build_baseline(obj)
        lines.append(f"nodes: {obj.size}")
    elif isinstance(obj, TopDag):
        lines.append(f"rules: {obj.size}")
        lines.append(f"size: {obj.size}")
        f = topdag_to_fslp(obj)
        lines.append(f"nodes: {obj.node_counts[obj.start]}")
    else:
        f = obj
        lines.append(f"rules: {len(f.rules)}")
        lines.append(f"size: {f.size}")
        lines.append(f"nodes: {f.node_counts[f.start]}")
    if fmt != "topdag" and fmt != "tree":
        lines.append(f"trees: {f.tree_counts[f.start]}")
    labels = sorted(f.labels() - {BOT}) if fmt != "tslp" else sorted(f.labels())
    lines.append(f"sigma: {len(labels)}")
    lines.append(f"labels: {' '.join(labels)}")
    if f.node_counts[f.start] <= min(args.cap, STATS_DAG_CAP):
        lines.append(f"dag: {dag_size(f.eval(cap=args.cap))}")
    else:
        lines.append("dag: unavailable (value exceeds the decompression cap)")
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestslp", description="Grammar-compressed forests: conversion, normalization and equality modulo associativity and commutativity.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output=True):
        sp.add_argument("--from", dest="src", choices=FORMATS, help="input format (default: from the file suffix)")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest value that may be decompressed")
        if output:
            sp.add_argument("-o", "--output", default="-", help="output file (default: stdout)")

    sp = sub.add_parser("convert", help="translate between formats")
    sp.add_argument("input")
    sp.add_argument("--to", dest="dst", choices=FORMATS, required=True)
    common(sp)
    sp.set_defaults(run=cmd_convert)

    sp = sub.add_parser("normalize", help="normal form, strong normal form or AC canonical form")
    sp.add_argument("input")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--nf", dest="mode", action="store_const", const="nf")
    mode.add_argument("--strong-nf", dest="mode", action="store_const", const="strong-nf")
    mode.add_argument("--assoc", dest="mode", action="store_const", const="assoc")
    mode.add_argument("--ac", dest="mode", action="store_const", const="ac")
    sp.add_argument("--theory", help="theory file with 'assoc:' and 'comm:' lines")
    common(sp)
    sp.set_defaults(run=cmd_normalize)

    sp = sub.add_parser("eq", help="equality modulo a theory; exit 0 if EQUAL, 1 if UNEQUAL")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--theory", help="theory file with 'assoc:' and 'comm:' lines")
    common(sp, output=False)
    sp.set_defaults(run=cmd_eq)

    sp = sub.add_parser("eval", help="print the decompressed forest")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("compress", help="compress a tree file into an FSLP")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(run=cmd_compress)

    sp = sub.add_parser("stats", help="sizes of a grammar and its value")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(run=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eq" and args.first == "-" and args.second == "-":
        parser.error("only one input may be read from stdin")
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"forestslp: {exc}", file=sys.stderr)
        return 2
    except ExplosionGuardError as exc:
        print(f"forestslp: {exc}", file=sys.stderr)
        return 5
    except _SEMANTIC as exc:
        print(f"forestslp: {exc}", file=sys.stderr)
        return 4
    except GrammarError as exc:
        print(f"forestslp: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
