"""Exact base-scope analysis: for which integer bases is log_b(rho) irrational?

Everything here reduces to integer arithmetic.  A rational dominant
root rho is compared against bases through unique factorization: when
rho = u^c (or its inverse) and b = u^d share a primitive base u, then
log_b rho = +-c/d is rational, and those b are exactly the exceptional
bases.  An irrational rho in the primitive nonnegative regime is
handled by the irrationality criterion: gcd(I u {k}) = 1 plus rho not
an integer nor an inverse of an integer force log_b rho irrational for
every base, because a rational log would make rho a root of x^q - b^p,
whose roots all share modulus rho, contradicting strict dominance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .polynomials import rational_positive_roots
from .recurrences import Recurrence, char_poly, gcd_index, index_set
from .spectral import RootInterval


class Irrationality(enum.Enum):
    IRRATIONAL = "IRRATIONAL"
    RATIONAL = "RATIONAL"
    UNKNOWN = "UNKNOWN"


class BaseScope(enum.Enum):
    ALL_BASES = "ALL_BASES"
    ALMOST_ALL = "ALMOST_ALL"


class BaseScopeError(ValueError):
    """The rho structure does not support exceptional-base enumeration."""


@dataclass(frozen=True)
class RhoStructure:
    """What is known exactly about the dominant root."""

    kind: str  # 'rational' | 'irrational' | 'unknown'
    value: Optional[Fraction]  # exact value when rational
    interval: Optional[RootInterval]
    irrational_all_bases: bool = False  # certified: log_b rho irrational for every b
    notes: tuple = ()


def _integer_nth_root(n: int, c: int) -> Optional[int]:
    """u >= 1 with u^c == n exactly, else None."""
    if n < 1:
        return None
    if c == 1:
        return n
    x = 1 << -(-n.bit_length() // c)  # upper estimate
    while True:
        y = ((c - 1) * x + n // x ** (c - 1)) // c
        if y >= x:
            break
        x = y
    for cand in (x, x + 1):
        if cand >= 1 and cand**c == n:
            return cand
    return None


def perfect_power_decompose(n: int) -> Tuple[int, int]:
    """n = u^c with c maximal (so u itself is not a perfect power)."""
    if n < 2:
        raise ValueError("need n >= 2")
    for c in range(n.bit_length(), 1, -1):
        u = _integer_nth_root(n, c)
        if u is not None and u >= 2:
            return u, c
    return n, 1


def _tighten_excluding(p, interval: RootInterval, x: Fraction, notes: list) -> RootInterval:
    """Shrink a sign-certified bracket so it no longer contains x != root."""
    if not interval.contains(x):
        return interval
    s = p(x)
    if s == 0:
        raise AssertionError(f"{x} is unexpectedly an exact root")
    if s < 0:
        notes.append(f"p({x}) = {s} < 0 exactly: rho > {x}")
        return RootInterval(x, interval.hi)
    notes.append(f"p({x}) = {s} > 0 exactly: rho < {x}")
    return RootInterval(interval.lo, x)


def classify_rho(rec: Recurrence, interval: RootInterval) -> RhoStructure:
    """Decide rationality of the root certified by ``interval`` exactly.

    The rational-root theorem enumerates every positive rational root of
    the characteristic polynomial; if none lies in the bracket, the
    bracketed root is irrational.  In the nonnegative regime with
    gcd(I u {k}) = 1 the irrationality criterion then certifies
    log_b rho irrational for all bases, after exact sign evaluations
    push any integer or inverse-integer candidates out of the bracket.
    """
    p = char_poly(rec)
    pos = rational_positive_roots(p)
    inside = [r for r in pos if interval.contains(r)]
    if inside:
        r = inside[0]
        return RhoStructure(
            kind="rational",
            value=r,
            interval=interval,
            notes=(f"rho = {r} exactly (rational root found by exact evaluation)",),
        )
    notes = [
        "no rational-root candidate lies in the certified bracket: rho is irrational"
    ]
    certified = False
    if rec.all_coeffs_nonnegative and rec.c0_positive:
        h = gcd_index(index_set(rec))
        if h == 1:
            notes.append("gcd(I u {k}) = 1 (exact)")
            # exclude integers from the bracket
            lo, hi = interval.lo, interval.hi
            n0 = math.ceil(lo)
            while n0 <= hi:
                interval = _tighten_excluding(p, interval, Fraction(n0), notes)
                n0 += 1
            # exclude inverse integers 1/m
            if interval.lo < 1:
                m0 = math.ceil(1 / interval.hi) if interval.hi < 1 else 1
                m0 = max(m0, 2)
                while Fraction(1, m0) >= interval.lo:
                    interval = _tighten_excluding(p, interval, Fraction(1, m0), notes)
                    m0 += 1
                    if m0 > 10**7:  # bracket reaching 0 would be a misuse
                        break
            notes.append(
                "bracket excludes every integer and inverse integer: "
                "irrationality criterion applies for every base"
            )
            certified = True
        else:
            notes.append(f"gcd(I u {{k}}) = {h} != 1: criterion not applicable at this level")
    else:
        notes.append("outside the nonnegative regime: criterion not applicable")
    return RhoStructure(
        kind="irrational",
        value=None,
        interval=interval,
        irrational_all_bases=certified,
        notes=tuple(notes),
    )


def log_is_irrational(
    rec: Recurrence, interval: RootInterval, b: int
) -> Tuple[Irrationality, tuple]:
    """Is log_b(rho) irrational?  Decided exactly where possible.

    Rational rho: log_b rho is rational iff rho (or its inverse) is an
    integer sharing a primitive base with b; a non-integer rational rho
    with numerator and denominator >= 2 always gives an irrational log.
    Irrational rho: irrational log whenever the all-bases criterion was
    certified, otherwise UNKNOWN.
    """
    if not isinstance(b, int) or b < 2:
        raise ValueError("base must be an integer >= 2")
    struct = classify_rho(rec, interval)
    notes = list(struct.notes)
    if struct.kind == "rational":
        rho = struct.value
        if rho == 1:
            notes.append("rho = 1: log_b(1) = 0 is rational")
            return Irrationality.RATIONAL, tuple(notes)
        if rho.denominator == 1:
            m = rho.numerator
        elif rho.numerator == 1:
            m = rho.denominator
        else:
            notes.append(
                f"rho = {rho} with numerator and denominator >= 2: "
                "b^(p/q) rational would force an integer or inverse integer"
            )
            return Irrationality.IRRATIONAL, tuple(notes)
        u1, c1 = perfect_power_decompose(m)
        u2, c2 = perfect_power_decompose(b)
        if u1 == u2:
            sign = "" if rho.denominator == 1 else "-"
            notes.append(
                f"{m} = {u1}^{c1} and {b} = {u2}^{c2}: log_{b}(rho) = {sign}{c1}/{c2}"
            )
            return Irrationality.RATIONAL, tuple(notes)
        notes.append(
            f"primitive bases differ ({m} = {u1}^{c1}, {b} = {u2}^{c2}): "
            f"{m}^q = {b}^p is impossible by unique factorization"
        )
        return Irrationality.IRRATIONAL, tuple(notes)
    if struct.irrational_all_bases:
        return Irrationality.IRRATIONAL, tuple(notes)
    notes.append("irrationality of log_b(rho) undecided for this regime")
    return Irrationality.UNKNOWN, tuple(notes)


@dataclass(frozen=True)
class BaseScopeReport:
    scope: BaseScope
    exceptional_bases: tuple  # all exceptional b with 2 < b <= N
    bound_value: float  # sqrt(N) ln(N) / ln(2)
    N: int
    notes: tuple = ()


def exceptional_bases(struct: RhoStructure, N: int) -> BaseScopeReport:
    """Enumerate B_N = {2 < b <= N : log_b(rho) rational} exactly.

    Empty (scope ALL_BASES) when rho is certified irrational for all
    bases or is rational with numerator and denominator >= 2; otherwise
    rho^(+-1) = u^c and B_N is the set of powers of u in range.  The
    enumerated size is checked against the density bound
    sqrt(N) ln(N) / ln(2).  Refuses rho = 1 (every base is exceptional,
    outside the theorem's regime) and unknown structures.
    """
    if N < 3:
        raise ValueError("need N >= 3")
    bound = math.sqrt(N) * math.log(N) / math.log(2)
    notes = list(struct.notes)
    if struct.kind == "unknown":
        raise BaseScopeError("rho structure unknown; refusing enumeration")
    if struct.kind == "irrational":
        if not struct.irrational_all_bases:
            raise BaseScopeError(
                "rho is irrational but the all-bases criterion is not certified"
            )
        notes.append("log_b(rho) irrational for every base b > 2")
        return BaseScopeReport(BaseScope.ALL_BASES, (), bound, N, tuple(notes))
    rho = struct.value
    if rho == 1:
        raise BaseScopeError(
            "rho = 1: log_b(rho) = 0 is rational in every base; "
            "the density bound does not apply"
        )
    if rho.denominator == 1:
        m = rho.numerator
    elif rho.numerator == 1:
        m = rho.denominator
    else:
        notes.append(
            f"rho = {rho} is neither an integer nor an inverse integer: "
            "no base makes log_b(rho) rational"
        )
        return BaseScopeReport(BaseScope.ALL_BASES, (), bound, N, tuple(notes))
    u, c = perfect_power_decompose(m)
    bases = []
    power = u
    while power <= N:
        if power > 2:
            bases.append(power)
        power *= u
    notes.append(f"rho^(+-1) = {m} = {u}^{c}: exceptional bases are powers of {u}")
    assert len(bases) <= bound * (1 + 1e-12)
    return BaseScopeReport(BaseScope.ALMOST_ALL, tuple(bases), bound, N, tuple(notes))
