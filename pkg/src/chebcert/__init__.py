"""Rigorous reproduction of an explicit least-prime-ideal constant chain.

Interval arithmetic and Taylor jets underneath, a dependency graph of named
constants in the middle, and a verifier for the inequalities that consume
them on top.
"""

__version__ = "0.1.0"

from .interval import CONST, Adjudication, Interval, matches_printed, working_precision
from .params import ParamSet, load_config
from .records import Verdict, VerdictRecord
from .graph import ConstantGraph, NodeKind, NodeStatus, build_graph, derive_all
from .verifier import (
    locate_G0,
    run_suite,
    sandbox_check_lemma32,
    verify_cor75,
    verify_lemma84,
    verify_lemma86,
    verify_nonneg,
    verify_zfr,
)
from .certificate import Certificate

__all__ = [
    "__version__",
    "CONST",
    "Adjudication",
    "Interval",
    "matches_printed",
    "working_precision",
    "ParamSet",
    "load_config",
    "Verdict",
    "VerdictRecord",
    "ConstantGraph",
    "NodeKind",
    "NodeStatus",
    "build_graph",
    "derive_all",
    "locate_G0",
    "run_suite",
    "sandbox_check_lemma32",
    "verify_cor75",
    "verify_lemma84",
    "verify_lemma86",
    "verify_nonneg",
    "verify_zfr",
    "Certificate",
]
