"""Exact representation of linear recurrences with constant coefficients.

A recurrence of order k is

    a[n+k] = c[k-1]*a[n+k-1] + ... + c[1]*a[n+1] + c[0]*a[n]

with rational coefficients and rational initial terms a[1..k].  The
constant coefficient c[0] must be nonzero so the order is genuinely k.
All values are ``fractions.Fraction``; nothing in this module touches
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomials import Poly, RationalLike


class ParseError(ValueError):
    """Malformed recurrence input, with position information."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Recurrence:
    """Validated order-k recurrence: coefficients c[0..k-1], initials a[1..k]."""

    order: int
    coeffs: tuple  # Fractions c_0 .. c_{k-1}
    initials: tuple  # Fractions a_1 .. a_k

    @property
    def all_coeffs_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    @property
    def c0_positive(self) -> bool:
        return self.coeffs[0] > 0

    @property
    def all_initials_positive(self) -> bool:
        return all(a > 0 for a in self.initials)

    @property
    def all_initials_nonnegative(self) -> bool:
        return all(a >= 0 for a in self.initials)

    def __str__(self):
        cs = ", ".join(str(c) for c in self.coeffs)
        return f"Recurrence(k={self.order}, c=[{cs}])"


@dataclass(frozen=True)
class IndexSet:
    """Indices 1 <= j < k with c_j != 0, plus a sign summary.

    ``members`` is defined by c_j != 0 (the general-sign statement);
    ``all_members_positive`` tells whether it coincides with the
    nonnegative-regime set {j : c_j > 0}.
    """

    members: tuple
    order: int
    all_members_positive: bool


def validate_recurrence(
    coeffs: Sequence[RationalLike], initials: Sequence[RationalLike]
) -> Recurrence:
    """Build a Recurrence, rejecting empty input, length mismatch, c_0 = 0."""
    cs = tuple(Fraction(c) for c in coeffs)
    init = tuple(Fraction(a) for a in initials)
    if not cs or not init:
        raise ValueError("coefficients and initial values must be nonempty")
    if len(cs) != len(init):
        raise ValueError(
            f"need as many initial values as coefficients (got {len(cs)} coefficients, "
            f"{len(init)} initial values)"
        )
    if cs[0] == 0:
        raise ValueError("c_0 = 0: the recurrence is not genuinely of order k")
    return Recurrence(order=len(cs), coeffs=cs, initials=init)


def char_poly(rec: Recurrence) -> Poly:
    """Monic characteristic polynomial x^k - c_{k-1} x^{k-1} - ... - c_0."""
    return Poly([-c for c in rec.coeffs] + [Fraction(1)])


def index_set(rec: Recurrence) -> IndexSet:
    members = tuple(j for j in range(1, rec.order) if rec.coeffs[j] != 0)
    allpos = all(rec.coeffs[j] > 0 for j in members)
    return IndexSet(members=members, order=rec.order, all_members_positive=allpos)


def gcd_index(iset: IndexSet) -> int:
    """gcd of I union {k}; equals k when I is empty."""
    g = iset.order
    for j in iset.members:
        g = math.gcd(g, j)
    return g


def term_generator(rec: Recurrence):
    """Yield exact terms a_1, a_2, ... indefinitely."""
    state = list(rec.initials)
    k = rec.order
    cs = rec.coeffs
    while True:
        yield state[0]
        nxt = sum(cs[j] * state[j] for j in range(k))
        state = state[1:] + [nxt]


# ---------------------------------------------------------------------------
# Plain-text record: one line k, one line of k coefficients (c_0 first),
# one line of k initial values; rationals as p/q or decimal strings.
# ---------------------------------------------------------------------------


def parse_rational(token: str) -> Fraction:
    """Exact rational from 'p/q', integer, or decimal text ('1.25' -> 5/4)."""
    return Fraction(token)


def _parse_rational_line(line: str, lineno: int, expect: int, what: str) -> tuple:
    values = []
    col = 1
    for tok in line.split():
        pos = line.index(tok, col - 1) + 1
        try:
            values.append(parse_rational(tok))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"invalid rational {tok!r}", lineno, pos) from None
        col = pos + len(tok)
    if len(values) != expect:
        raise ParseError(
            f"expected {expect} {what}, got {len(values)}", lineno, 1
        )
    return tuple(values)


def parse_recurrence(text: str) -> Recurrence:
    """Parse the three-line plain-text record."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 3:
        raise ParseError("expected 3 lines: order, coefficients, initial values", len(lines) + 1, 1)
    try:
        k = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"invalid order {lines[0].strip()!r}", 1, 1) from None
    if k < 1:
        raise ParseError("order must be >= 1", 1, 1)
    coeffs = _parse_rational_line(lines[1], 2, k, "coefficients")
    initials = _parse_rational_line(lines[2], 3, k, "initial values")
    try:
        return validate_recurrence(coeffs, initials)
    except ValueError as exc:
        raise ParseError(str(exc), 2, 1) from None


def format_recurrence(rec: Recurrence) -> str:
    """Inverse of :func:`parse_recurrence`."""
    return "\n".join(
        [
            str(rec.order),
            " ".join(str(c) for c in rec.coeffs),
            " ".join(str(a) for a in rec.initials),
        ]
    )
