"""Grammar-compressed forests: forest straight-line programs, top dags,
TSLPs of first-child/next-sibling encodings, and equality modulo
associative and commutative labels."""

from .ac_equiv import AcTheory, ac_canonical, ac_equal, canonize_comm, compare_forests, forest_string_sslp, nf_assoc
from .errors import (
    BottomLabelMismatch,
    CycleError,
    ExplosionGuardError,
    ForestSyntaxError,
    GrammarError,
    GrammarSyntaxError,
    NotAnFcnsImageError,
    NotATreeError,
    NotNormalFormError,
    RankViolation,
    RootLabelMismatch,
    TreeTooSmallError,
    UndefinedOperationError,
    UnknownLabelError,
)
from .fcns_bridge import fcns_tslp_to_fslp, fslp_to_fcns_tslp, is_tslp
from .forest_core import (
    BOT,
    Forest,
    LabelSet,
    fcns,
    fcns_inverse,
    parse_forest,
    print_forest,
    ref_ac_equal,
    ref_nf_assoc,
    ref_nf_comm,
)
from .fslp import FSLP, build_baseline, hor_sslp, is_normal_form, spine_sslp
from .normal_form import normal_form, strong_normal_form
from .sslp import EQ, GT, LT, SSLP, compare_llex, factorize, sort
from .textio import parse_fslp, parse_sslp, parse_theory, parse_topdag, print_fslp, print_sslp, print_topdag
from .topdag import Cluster, TopDag, fslp_to_topdag, topdag_to_fslp

__all__ = [
    "AcTheory",
    "BOT",
    "BottomLabelMismatch",
    "Cluster",
    "CycleError",
    "EQ",
    "ExplosionGuardError",
    "FSLP",
    "Forest",
    "ForestSyntaxError",
    "GT",
    "GrammarError",
    "GrammarSyntaxError",
    "LT",
    "LabelSet",
    "NotATreeError",
    "NotAnFcnsImageError",
    "NotNormalFormError",
    "RankViolation",
    "RootLabelMismatch",
    "SSLP",
    "TopDag",
    "TreeTooSmallError",
    "UndefinedOperationError",
    "UnknownLabelError",
    "ac_canonical",
    "ac_equal",
    "build_baseline",
    "canonize_comm",
    "compare_forests",
    "compare_llex",
    "factorize",
    "fcns",
    "fcns_inverse",
    "fcns_tslp_to_fslp",
    "forest_string_sslp",
    "fslp_to_fcns_tslp",
    "fslp_to_topdag",
    "hor_sslp",
    "is_normal_form",
    "is_tslp",
    "nf_assoc",
    "normal_form",
    "parse_forest",
    "parse_fslp",
    "parse_sslp",
    "parse_theory",
    "parse_topdag",
    "print_forest",
    "print_fslp",
    "print_sslp",
    "print_topdag",
    "ref_ac_equal",
    "ref_nf_assoc",
    "ref_nf_comm",
    "sort",
    "spine_sslp",
    "strong_normal_form",
    "topdag_to_fslp",
]
