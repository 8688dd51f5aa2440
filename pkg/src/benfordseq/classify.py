"""Benford verdicts for linear recurrences.

The decision tree, in order:

  1. nonnegative coefficients with c_0 > 0 and nonnegative initials:
     I empty -> every residue class is geometric of ratio c_0;
     gcd(I u {k}) = 1 -> unique strictly dominant root, growth limit
     positive, Benford in any base with irrational log of the root;
     gcd = h > 1 -> the sequence splits into h subsequences, each
     satisfying a contracted recurrence of order k/h whose index gcd is
     1, and the analysis recurses on the contraction.
  2. otherwise, the large-leading-coefficient test (exact): one simple
     root in (c_{k-1}-1, c_{k-1}+1), everything else inside the unit
     disk.  Here the extra hypothesis that the sequence does not tend
     to zero is essential and is decided through the dominant-mode
     coefficient alpha: alpha > 0 is the generic case; a numerically
     vanishing alpha triggers an exact (or extended-precision)
     confirmation before the tends-to-zero verdict is issued.
  3. anything else is INCONCLUSIVE; the theorems are never extrapolated.

Every verdict carries a provenance trail of the exact tests that fired,
with their inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import mpmath as mp

from .basescope import (
    BaseScope,
    BaseScopeError,
    Irrationality,
    RhoStructure,
    classify_rho,
    exceptional_bases,
    log_is_irrational,
)
from .polynomials import rational_roots
from .recurrences import Recurrence, char_poly, gcd_index, index_set, validate_recurrence
from .spectral import (
    Condition2Result,
    PerronLimit,
    RootInterval,
    SpectralError,
    check_condition2,
    dominant_root,
    perron_limit,
)

ALPHA_VANISH_TOL = 1e-10


class Rule(enum.Enum):
    THM2_COND1 = "THM2_COND1"
    THM2_COND2 = "THM2_COND2"
    THM3_SPLIT = "THM3_SPLIT"
    THM6_ALL_BASES = "THM6_ALL_BASES"
    THM6_ALMOST_ALL = "THM6_ALMOST_ALL"
    I_EMPTY_GEOMETRIC = "I_EMPTY_GEOMETRIC"
    COUNTEREXAMPLE_TENDS_TO_ZERO = "COUNTEREXAMPLE_TENDS_TO_ZERO"
    INCONCLUSIVE = "INCONCLUSIVE"


class ScopeKind(enum.Enum):
    SINGLE_BASE = "SINGLE_BASE"
    ALL_BASES = "ALL_BASES"
    ALMOST_ALL_WITH_EXCEPTIONS = "ALMOST_ALL_WITH_EXCEPTIONS"
    NONE = "NONE"


class ClassStatus(enum.Enum):
    BENFORD_CANDIDATE = "BENFORD_CANDIDATE"
    IDENTICALLY_ZERO = "IDENTICALLY_ZERO"


@dataclass(frozen=True)
class BaseScopeVerdict:
    kind: ScopeKind
    base: Optional[int] = None
    benford: Optional[bool] = None  # None = UNKNOWN / no claim
    exceptional: tuple = ()
    notes: tuple = ()


@dataclass(frozen=True)
class SubsequenceClass:
    residue: int
    contracted: Recurrence
    status: ClassStatus
    alpha: Optional[float]

    @property
    def is_zero(self) -> bool:
        return self.status is ClassStatus.IDENTICALLY_ZERO


@dataclass(frozen=True)
class Verdict:
    rule: Rule
    base_scope: BaseScopeVerdict
    h: Optional[int] = None
    alpha: Optional[float] = None
    structural_rule: Optional[Rule] = None
    classes: Optional[tuple] = None
    rho: Optional[RootInterval] = None
    notes: tuple = ()

    @property
    def is_benford_claim(self) -> bool:
        return self.base_scope.benford is True


# ---------------------------------------------------------------------------
# Subsequence decomposition
# ---------------------------------------------------------------------------


def contracted_recurrence_coeffs(rec: Recurrence, h: int) -> list:
    """Coefficients of the order-k/h recurrence each residue class obeys.

    Every index with a nonzero coefficient is a multiple of h, so
    replacing n by m + h*n contracts x -> x^h and the class sequence
    b_n = a_{m+hn} satisfies b_{n+k'} = sum c_{h j} b_{n+j} with
    k' = k/h.
    """
    k = rec.order
    if k % h != 0:
        raise ValueError("h must divide the order")
    out = [Fraction(0)] * (k // h)
    for j in range(0, k, h):
        out[j // h] = rec.coeffs[j]
    for j in range(k):
        if j % h != 0 and rec.coeffs[j] != 0:
            raise ValueError(f"coefficient index {j} is not a multiple of h = {h}")
    return out


def class_indices(k: int, h: int, m: int) -> list:
    """The first k/h indices congruent to m mod h among 1..k."""
    start = m if m >= 1 else h
    return list(range(start, k + 1, h))


def decompose_subsequences(rec: Recurrence) -> tuple:
    """Split into the h residue classes of Theorem-3 type.

    Each class gets the contracted recurrence with its own slice of the
    original initial block as initial values.  A class whose initial
    vector is exactly zero stays zero forever (the contracted recurrence
    propagates zeros); otherwise the class is a Benford candidate and
    carries its growth limit alpha_m = lim a_{m+hn} / rho_q^n, computed
    against the contracted dominant root rho_q = rho^h.
    """
    if not (rec.all_coeffs_nonnegative and rec.c0_positive):
        raise ValueError("decomposition requires nonnegative coefficients with c_0 > 0")
    if not rec.all_initials_nonnegative:
        raise ValueError("decomposition requires nonnegative initial values")
    h = gcd_index(index_set(rec))
    ccoeffs = contracted_recurrence_coeffs(rec, h)
    rho_q = None
    classes = []
    for m in range(h):
        init = [rec.initials[i - 1] for i in class_indices(rec.order, h, m)]
        crec = validate_recurrence(ccoeffs, init)
        if all(a == 0 for a in init):
            classes.append(
                SubsequenceClass(m, crec, ClassStatus.IDENTICALLY_ZERO, None)
            )
            continue
        if rho_q is None:
            rho_q = dominant_root(char_poly(crec))
        pl = perron_limit(crec, rho_q.value)
        classes.append(
            SubsequenceClass(m, crec, ClassStatus.BENFORD_CANDIDATE, pl.alpha)
        )
    return tuple(classes)


# ---------------------------------------------------------------------------
# Vanishing-alpha confirmation
# ---------------------------------------------------------------------------


def _solve_exact(rows, rhs):
    """Gaussian elimination over Fractions; rows is a list of lists."""
    n = len(rows)
    a = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def confirm_alpha_zero(rec: Recurrence, rho: RootInterval, precision=None):
    """Certify that the dominant-mode coefficient is exactly zero.

    When the characteristic polynomial splits into k distinct rational
    roots the linear system a_n = sum alpha_i r_i^n (n = 1..k) is solved
    exactly and the answer is certain.  Otherwise the system is solved
    at extended precision (mpmath) against high-precision roots; |alpha|
    below 1e-30 confirms, anything else stays unconfirmed.

    Returns (confirmed, note).
    """
    p = char_poly(rec)
    k = rec.order
    try:
        rats = rational_roots(p)
    except ValueError:
        rats = []
    if len(rats) == k and len(set(rats)) == k:
        dominant = [r for r in rats if rho.contains(r)]
        if len(dominant) == 1:
            rows = [[r**n for r in rats] for n in range(1, k + 1)]
            coeffs = _solve_exact(rows, list(rec.initials))
            alpha = coeffs[rats.index(dominant[0])]
            return (
                alpha == 0,
                f"exact decomposition over roots {rats}: dominant coefficient = {alpha}",
            )
    # extended-precision fallback
    from .spectral import all_roots

    dps = 60
    roots = all_roots(p, precision=dps)
    if any(r > 1e-20 for _, r in roots):
        return False, "extended-precision roots unresolved; vanishing not confirmed"
    with mp.workdps(dps):
        zs = [mp.mpc(z) for z, _ in roots]
        rho_v = mp.mpf(rho.mid.numerator) / mp.mpf(rho.mid.denominator)
        a = mp.matrix(k, k)
        for n in range(1, k + 1):
            for i, z in enumerate(zs):
                a[n - 1, i] = z**n
        rhs = mp.matrix([mp.mpf(v.numerator) / mp.mpf(v.denominator) for v in rec.initials])
        try:
            sol = mp.lu_solve(a, rhs)
        except ZeroDivisionError:
            return False, "dominant-mode system singular at extended precision"
        dom_i = min(range(k), key=lambda i: abs(zs[i] - rho_v))
        alpha = abs(sol[dom_i])
        if alpha < mp.mpf("1e-30"):
            return True, f"extended-precision dominant coefficient |alpha| = {mp.nstr(alpha, 5)} < 1e-30"
        return False, f"extended-precision dominant coefficient |alpha| = {mp.nstr(alpha, 5)}"


# ---------------------------------------------------------------------------
# Base-scope resolution
# ---------------------------------------------------------------------------


def _resolve_scope(
    erec: Recurrence,
    interval: RootInterval,
    b: Optional[int],
    max_base: int,
    notes: list,
) -> Tuple[BaseScopeVerdict, Optional[Rule]]:
    """Scope for a Benford-capable rule, from the effective recurrence.

    ``erec`` is the recurrence whose dominant root drives the mantissa
    law: the original when gcd = 1, the contracted one for a split.
    Returns the scope verdict plus the Theorem-6 rule when no single
    base was requested.
    """
    if b is not None:
        irr, irr_notes = log_is_irrational(erec, interval, b)
        notes.extend(irr_notes)
        if irr is Irrationality.IRRATIONAL:
            return BaseScopeVerdict(ScopeKind.SINGLE_BASE, base=b, benford=True), None
        if irr is Irrationality.RATIONAL:
            notes.append(
                f"log_{b}(rho) rational: mantissas concentrate on finitely many "
                "values, so the law fails in this base"
            )
            return BaseScopeVerdict(ScopeKind.SINGLE_BASE, base=b, benford=False), None
        return BaseScopeVerdict(ScopeKind.SINGLE_BASE, base=b, benford=None), None
    struct = classify_rho(erec, interval)
    try:
        report = exceptional_bases(struct, max_base)
    except BaseScopeError as exc:
        notes.append(f"base scope unresolved: {exc}")
        return BaseScopeVerdict(ScopeKind.NONE), None
    notes.extend(report.notes)
    if report.scope is BaseScope.ALL_BASES:
        return (
            BaseScopeVerdict(ScopeKind.ALL_BASES, benford=True),
            Rule.THM6_ALL_BASES,
        )
    return (
        BaseScopeVerdict(
            ScopeKind.ALMOST_ALL_WITH_EXCEPTIONS,
            benford=True,
            exceptional=report.exceptional_bases,
            notes=(f"bound |B_N| <= sqrt(N) ln N / ln 2 = {report.bound_value:.2f}",),
        ),
        Rule.THM6_ALMOST_ALL,
    )


# ---------------------------------------------------------------------------
# Main decision procedure
# ---------------------------------------------------------------------------


def _inconclusive(notes) -> Verdict:
    return Verdict(
        rule=Rule.INCONCLUSIVE,
        base_scope=BaseScopeVerdict(ScopeKind.NONE),
        notes=tuple(notes),
    )


def classify(
    rec: Recurrence,
    b: Optional[int] = None,
    max_base: int = 100,
    precision=None,
) -> Verdict:
    """Benford verdict for the sequence generated by ``rec``.

    With ``b`` given, the verdict targets that base; otherwise the base
    scope is resolved (all bases / almost all with enumerated exceptions
    up to ``max_base``).  INCONCLUSIVE never carries a base claim.
    """
    if b is not None and (not isinstance(b, int) or b < 3):
        raise ValueError("base must be an integer > 2")
    notes = []
    nonneg = rec.all_coeffs_nonnegative and rec.c0_positive

    if nonneg and rec.all_initials_nonnegative:
        if all(a == 0 for a in rec.initials):
            notes.append("all initial values are zero: the sequence is identically zero")
            return _inconclusive(notes)
        iset = index_set(rec)
        h = gcd_index(iset)
        notes.append(
            f"nonnegative regime: c_j >= 0 for all j, c_0 = {rec.coeffs[0]} > 0; "
            f"I = {{{', '.join(map(str, iset.members))}}}; gcd(I u {{k}}) = {h}"
        )
        if not rec.all_initials_positive:
            notes.append(
                "some initial values are zero: zero terms are tracked exactly; "
                "Benford statements concern the positive terms"
            )

        if not iset.members:
            # I empty: h = k classes, all geometric of ratio c_0
            classes = decompose_subsequences(rec)
            c0 = rec.coeffs[0]
            notes.append(
                f"I is empty: the k = {rec.order} residue classes are geometric "
                f"with ratio c_0 = {c0}"
            )
            if c0 == 1:
                notes.append("c_0 = 1: every class is constant; the law fails in every base")
                return Verdict(
                    rule=Rule.I_EMPTY_GEOMETRIC,
                    base_scope=BaseScopeVerdict(ScopeKind.NONE, benford=False),
                    h=h,
                    classes=classes,
                    notes=tuple(notes),
                )
            erec = classes[0].contracted
            interval = dominant_root(char_poly(erec))
            scope, thm6 = _resolve_scope(erec, interval, b, max_base, notes)
            return Verdict(
                rule=thm6 or Rule.I_EMPTY_GEOMETRIC,
                structural_rule=Rule.I_EMPTY_GEOMETRIC,
                base_scope=scope,
                h=h,
                classes=classes,
                rho=interval,
                notes=tuple(notes),
            )

        p = char_poly(rec)
        interval = dominant_root(p)
        if h == 1:
            pl = perron_limit(rec, interval.value)
            notes.append(
                f"gcd = 1: unique strictly dominant positive root rho in "
                f"[{float(interval.lo):.15g}, {float(interval.hi):.15g}]; "
                f"growth limit alpha = {pl.alpha:.12g} > 0"
            )
            scope, thm6 = _resolve_scope(rec, interval, b, max_base, notes)
            return Verdict(
                rule=thm6 or Rule.THM2_COND1,
                structural_rule=Rule.THM2_COND1,
                base_scope=scope,
                h=1,
                alpha=pl.alpha,
                rho=interval,
                notes=tuple(notes),
            )

        classes = decompose_subsequences(rec)
        notes.append(
            f"gcd = {h} > 1: sequence splits into {h} residue classes obeying a "
            f"contracted recurrence of order {rec.order // h}"
        )
        nonzero = [c for c in classes if not c.is_zero]
        if not nonzero:
            notes.append("every residue class is identically zero")
            return _inconclusive(notes)
        erec = nonzero[0].contracted
        q_iset = index_set(erec)
        notes.append(
            f"contracted recurrence gcd(I(q) u {{k'}}) = {gcd_index(q_iset)}"
        )
        cinterval = dominant_root(char_poly(erec))
        scope, thm6 = _resolve_scope(erec, cinterval, b, max_base, notes)
        return Verdict(
            rule=thm6 or Rule.THM3_SPLIT,
            structural_rule=Rule.THM3_SPLIT,
            base_scope=scope,
            h=h,
            classes=classes,
            rho=cinterval,
            notes=tuple(notes),
        )

    # mixed signs (or negative initial values): only condition (2) can apply
    c2 = check_condition2(rec, precision=precision)
    notes.extend(c2.notes)
    if not c2.applies:
        if not nonneg:
            notes.append(
                "coefficients are not all nonnegative and the large-leading-"
                "coefficient test fails: no criterion applies"
            )
        else:
            notes.append(
                "nonnegative coefficients but negative initial values: the "
                "positivity premise fails and no criterion applies"
            )
        return _inconclusive(notes)
    if not c2.verified:
        raise SpectralError(
            "coefficient test passed but numerical root localization failed: "
            "critical solver inconsistency"
        )
    pl = perron_limit(rec, c2.rho.value)
    if not pl.converged:
        notes.append("growth-limit iteration did not converge within the cap")
        return _inconclusive(notes)
    alpha = pl.alpha
    if abs(alpha) < ALPHA_VANISH_TOL:
        confirmed, how = confirm_alpha_zero(rec, c2.rho, precision)
        notes.append(how)
        if confirmed:
            notes.append(
                "dominant-mode coefficient vanishes: the sequence tends to zero "
                "and the extra hypothesis of the rule fails; no Benford claim"
            )
            return Verdict(
                rule=Rule.COUNTEREXAMPLE_TENDS_TO_ZERO,
                base_scope=BaseScopeVerdict(ScopeKind.NONE, benford=False),
                alpha=0.0,
                rho=c2.rho,
                notes=tuple(notes),
            )
        notes.append("alpha is numerically tiny but vanishing was not confirmed")
        return _inconclusive(notes)
    if alpha < 0:
        notes.append(
            f"growth limit alpha = {alpha:.6g} < 0: terms are eventually negative, "
            "the positivity premise fails"
        )
        return _inconclusive(notes)
    notes.append(
        f"large-leading-coefficient rule verified: simple root rho in "
        f"({float(c2.rho.lo):.15g}, {float(c2.rho.hi):.15g}), all other roots in "
        f"the open unit disk; alpha = {alpha:.12g} > 0 so a_n does not tend to 0"
    )
    scope, thm6 = _resolve_scope(rec, c2.rho, b, max_base, notes)
    return Verdict(
        rule=thm6 or Rule.THM2_COND2,
        structural_rule=Rule.THM2_COND2,
        base_scope=scope,
        alpha=alpha,
        rho=c2.rho,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class BaseVerdict:
    benford: Optional[bool]
    irrationality: Irrationality
    empirical_discrepancy: Optional[float]
    notes: tuple


def verdict_for_base(
    rec: Recurrence, b: int, evidence_terms: int = 10_000
) -> BaseVerdict:
    """Single-base answer with provenance; empirical D_N only as evidence.

    True/False when irrationality of log_b(rho) is decided exactly;
    otherwise UNKNOWN with the finite-sample discrepancy attached, which
    is never treated as proof.
    """
    verdict = classify(rec, b=b)
    notes = list(verdict.notes)
    if verdict.base_scope.kind is not ScopeKind.SINGLE_BASE:
        notes.append("no Benford-capable rule applies; base verdict unavailable")
        return BaseVerdict(None, Irrationality.UNKNOWN, None, tuple(notes))
    benford = verdict.base_scope.benford
    if benford is True:
        return BaseVerdict(True, Irrationality.IRRATIONAL, None, tuple(notes))
    if benford is False and verdict.rule is not Rule.COUNTEREXAMPLE_TENDS_TO_ZERO:
        return BaseVerdict(False, Irrationality.RATIONAL, None, tuple(notes))
    from .engine import benford_stats, generate_log_stream

    try:
        stats = benford_stats(generate_log_stream(rec, b, evidence_terms), b)
        dn = stats.discrepancy
        notes.append(
            f"empirical D_N = {dn:.4f} over N = {stats.n_used} terms "
            "(evidence only, not proof)"
        )
    except (ValueError, RuntimeError) as exc:
        dn = None
        notes.append(f"no empirical evidence available: {exc}")
    return BaseVerdict(None, Irrationality.UNKNOWN, dn, tuple(notes))
