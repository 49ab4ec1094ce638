"""Termination-complexity analysis for vector addition systems with states.

Given a VASS, decides per strongly connected component whether the worst-case
zero-avoiding run length is constant, linear, Theta(n^k) for a computed
integer k <= d, non-terminating, or in the singular-normal class where no
polynomial bound holds in general.  Verdicts come with machine-checkable
certificates, and an exact brute-force oracle validates desk-scale instances.
"""

from .analyzer import (
    AnalysisError,
    AnalysisResult,
    DepthExceeded,
    DerivationTree,
    NegativeCycleDetected,
    Verdict,
    analyze,
    analyze_scc,
    build_restriction,
)
from .core import (
    Configuration,
    Path,
    SccComponent,
    Transition,
    Vass,
    VassError,
    canonical_text,
    decompose_short_cycles,
    fingerprint,
    path_effect,
    scc_decompose,
    validate,
)
from .geometry import Category, GoodNormal, NotCategoryC, classify, good_normal, has_normal
from .increments import IncSet, compute_inc
from .linear import WlrCertificate, WlrEntry, check_linear, check_linear_scc, verify_wlr
from .lp import LinearProgram, LpOutcome, in_cone, solve
from .oracle import (
    Budget,
    OracleResult,
    fit_exponent,
    longest_run,
    simulate,
    termination_complexity,
)
from .report import AnalysisReport, FingerprintMismatch, recheck, render_json, render_text

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "AnalysisReport",
    "AnalysisResult",
    "Budget",
    "Category",
    "Configuration",
    "DepthExceeded",
    "DerivationTree",
    "FingerprintMismatch",
    "GoodNormal",
    "IncSet",
    "LinearProgram",
    "LpOutcome",
    "NegativeCycleDetected",
    "NotCategoryC",
    "OracleResult",
    "Path",
    "SccComponent",
    "Transition",
    "Vass",
    "VassError",
    "Verdict",
    "WlrCertificate",
    "WlrEntry",
    "analyze",
    "analyze_scc",
    "build_restriction",
    "canonical_text",
    "check_linear",
    "check_linear_scc",
    "classify",
    "compute_inc",
    "decompose_short_cycles",
    "fingerprint",
    "fit_exponent",
    "good_normal",
    "has_normal",
    "in_cone",
    "longest_run",
    "path_effect",
    "recheck",
    "render_json",
    "render_text",
    "scc_decompose",
    "simulate",
    "solve",
    "termination_complexity",
    "validate",
    "verify_wlr",
]
