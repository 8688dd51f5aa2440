"""Benford's-law analysis of linear recurrence sequences.

Exact-arithmetic coefficient tests, companion-matrix structure,
certified dominant roots, large-scale log-space simulation, and the
decision procedures tying them into a Benford verdict.
"""

__version__ = "0.1.0"

from .basescope import (
    BaseScope,
    BaseScopeError,
    BaseScopeReport,
    Irrationality,
    RhoStructure,
    classify_rho,
    exceptional_bases,
    log_is_irrational,
    perfect_power_decompose,
)
from .classify import (
    BaseScopeVerdict,
    BaseVerdict,
    ClassStatus,
    Rule,
    ScopeKind,
    SubsequenceClass,
    Verdict,
    classify,
    decompose_subsequences,
    verdict_for_base,
)
from .companion import (
    BoolMatrix,
    CompanionMatrix,
    companion,
    imprimitivity_index,
    is_irreducible,
    is_primitive,
)
from .engine import (
    BenfordStats,
    LogTerm,
    NegativeTermError,
    benford_stats,
    exact_prefix,
    generate_log_stream,
    mantissa,
    mantissa_exact,
    stream_cross_check,
    subsequence_stream,
)
from .pisot import PisotRecord, PisotScan, pisot_family, pisot_growth_scan, pisot_poly
from .polynomials import Poly, eval_poly, rational_positive_roots, rational_roots
from .primes import PrimeDemoRecord, SieveBudgetError, nth_primes, prime_subsequence
from .recurrences import (
    IndexSet,
    ParseError,
    Recurrence,
    char_poly,
    format_recurrence,
    gcd_index,
    index_set,
    parse_recurrence,
    validate_recurrence,
)
from .spectral import (
    Condition2Result,
    Dominance,
    PerronLimit,
    RootInterval,
    SpectralError,
    SpectralProfile,
    all_roots,
    check_condition2,
    dominance_check,
    dominant_root,
    perron_limit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
