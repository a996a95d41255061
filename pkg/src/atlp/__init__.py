"""Alternation-trading lower-bound prover for SAT on small-space machines.

Generates, optimizes (exact rational LP feasibility plus bisection over
the exponent c), searches over, and independently verifies proofs of
time lower bounds for SAT on n^o(1)-space random-access machines, with a
companion analyzer for branching-algorithm runtime recurrences.
"""

from .annotation import Annotation, AnnotationError, enumerate_annotations, neighbors, validate
from .kernel import (
    ClassLine,
    QuantifierBlock,
    RuleStep,
    anchor_slowdown,
    apply_slowdown,
    apply_speedup,
    close_line,
)
from .lp import build_lp, extract_certificate
from .prover import SearchRecord, best_exponent, exhaustive_search, heuristic_search
from .recurrence import BranchRecurrence, combine_weights, growth_root, optimize_weights, tree_size
from .simplex import LinearProgram, LPSolution, solve
from .verifier import ProofCertificate, VerifyResult, verify

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "AnnotationError",
    "BranchRecurrence",
    "ClassLine",
    "LPSolution",
    "LinearProgram",
    "ProofCertificate",
    "QuantifierBlock",
    "RuleStep",
    "SearchRecord",
    "VerifyResult",
    "anchor_slowdown",
    "apply_slowdown",
    "apply_speedup",
    "best_exponent",
    "build_lp",
    "close_line",
    "combine_weights",
    "enumerate_annotations",
    "exhaustive_search",
    "extract_certificate",
    "growth_root",
    "heuristic_search",
    "neighbors",
    "optimize_weights",
    "solve",
    "tree_size",
    "validate",
    "verify",
]
