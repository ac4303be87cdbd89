"""Literal-closure QBF reduction with differential testing oracles.

The reduction calculus (closure, redundancy, the removal operator, and the
decision loop) lives in qrl.closure and qrl.reduction.  Two independent
exponential-time evaluators live in qrl.oracle.  qrl.fuzz compares them on
random instances and shrinks and banks every divergence it finds.
"""

from .bench import run_bench
from .closure import (
    ClosureResult,
    PropertyReport,
    check_property_1,
    check_property_2,
    closure,
    closure_step,
    is_redundant,
    literal_leq,
)
from .errors import (
    InternalInvariantError,
    MalformedFormulaError,
    OracleRefusal,
    PreconditionError,
    QdimacsParseError,
    QrlError,
)
from .formula import Clause, Formula, Literal, Quantifier, Verdict, make_formula
from .fuzz import (
    BankEntry,
    DiffResult,
    Finding,
    FuzzReport,
    PsiReport,
    campaign,
    finding_predicate,
    persist_findings,
    psi_campaign,
    revalidate_entry,
    run_differential,
    shrink,
)
from .generate import GenParams, QuantPattern, gen_random
from .oracle import (
    DEFAULT_LIMITS,
    OracleLimits,
    OracleVerdict,
    PsiLemmaReport,
    PsiResult,
    build_psi,
    check_psi_lemma,
    eval_elimination,
    eval_recursive,
    oracle_verdict,
)
from .qdimacs import parse_qdimacs, write_qdimacs, write_trace
from .reduction import (
    ASCENDING,
    DESCENDING,
    ReductionStep,
    ReductionTrace,
    ScanPolicy,
    apply_rho,
    decide,
    find_redundant,
    is_reduced,
    prune_prefix,
    seeded_random,
)

__version__ = "0.1.0"

__all__ = [
    "ASCENDING",
    "BankEntry",
    "Clause",
    "ClosureResult",
    "DEFAULT_LIMITS",
    "DESCENDING",
    "DiffResult",
    "Finding",
    "Formula",
    "FuzzReport",
    "GenParams",
    "InternalInvariantError",
    "Literal",
    "MalformedFormulaError",
    "OracleLimits",
    "OracleRefusal",
    "OracleVerdict",
    "PreconditionError",
    "PropertyReport",
    "PsiLemmaReport",
    "PsiReport",
    "PsiResult",
    "QdimacsParseError",
    "QrlError",
    "QuantPattern",
    "Quantifier",
    "ReductionStep",
    "ReductionTrace",
    "ScanPolicy",
    "Verdict",
    "apply_rho",
    "build_psi",
    "campaign",
    "check_property_1",
    "check_property_2",
    "check_psi_lemma",
    "closure",
    "closure_step",
    "decide",
    "eval_elimination",
    "eval_recursive",
    "find_redundant",
    "finding_predicate",
    "gen_random",
    "is_redundant",
    "is_reduced",
    "literal_leq",
    "make_formula",
    "oracle_verdict",
    "parse_qdimacs",
    "persist_findings",
    "prune_prefix",
    "psi_campaign",
    "revalidate_entry",
    "run_bench",
    "run_differential",
    "seeded_random",
    "shrink",
    "write_qdimacs",
    "write_trace",
    "__version__",
]
