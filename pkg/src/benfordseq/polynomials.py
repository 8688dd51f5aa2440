"""Univariate polynomials with exact rational coefficients.

Coefficients are stored lowest degree first as ``fractions.Fraction``
values, so every evaluation on rational input is exact.  This is the
workhorse for characteristic polynomials, the auxiliary polynomial
identities, and exact sign tests used to certify root brackets.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]


class Poly:
    """Polynomial over Q, coefficients lowest degree first.

    The zero polynomial is represented as ``Poly([0])``; otherwise the
    leading (last) coefficient is nonzero.
    """

    __slots__ = ("coeffs", "_fcoeffs")

    def __init__(self, coeffs: Iterable[RationalLike]):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        self.coeffs = tuple(cs)
        self._fcoeffs = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x: RationalLike) -> Fraction:
        """Exact Horner evaluation at a rational point."""
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x):
        """Horner evaluation in float/complex arithmetic.

        Accepts float, complex, or any numeric type supporting * and +
        (e.g. mpmath numbers); coefficients are converted through float
        unless ``x`` is an mpmath type, in which case exact conversion
        is delegated to the caller via :meth:`coeffs_as`.
        """
        if self._fcoeffs is None:
            self._fcoeffs = tuple(float(c) for c in self.coeffs)
        acc = 0.0 * x
        for c in reversed(self._fcoeffs):
            acc = acc * x + c
        return acc

    def coeffs_as(self, convert) -> tuple:
        """Coefficient tuple mapped through ``convert`` (e.g. mpmath.mpf)."""
        return tuple(convert(c.numerator) / convert(c.denominator) for c in self.coeffs)

    def derivative(self) -> "Poly":
        if self.degree == 0:
            return Poly([0])
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Poly([x - y for x, y in zip(a, b)])

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __str__(self):
        return poly_text(self)


def poly_text(p: Poly, var: str = "x") -> str:
    """Human-readable form, highest degree first, e.g. ``x^2 - x - 1``."""
    if p.is_zero:
        return "0"
    parts = []
    for j in range(p.degree, -1, -1):
        c = p.coeffs[j]
        if c == 0:
            continue
        mag = abs(c)
        if j == 0:
            term = str(mag)
        else:
            xpow = var if j == 1 else f"{var}^{j}"
            term = xpow if mag == 1 else f"{mag}*{xpow}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


def eval_poly(p: Poly, x: RationalLike) -> Fraction:
    """Exact value ``p(x)`` for rational ``x``."""
    return p(x)


def _divisors(n: int) -> list:
    """Positive divisors of ``|n|`` by trial division."""
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _integerized(p: Poly) -> list:
    """Coefficients scaled by the common denominator to a primitive int list."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    return ints


def rational_roots(p: Poly, positive_only: bool = False) -> list:
    """All rational roots of ``p``, each listed once, descending.

    Clears denominators first, then tests the rational-root-theorem
    candidates (divisors of the constant term over divisors of the
    leading term) by exact evaluation.

    Requires a nonzero constant term (factor out powers of x first).
    """
    if p.is_zero:
        raise ValueError("zero polynomial has every rational as a root")
    if p.coeffs[0] == 0:
        raise ValueError("constant term must be nonzero")
    ints = _integerized(p)
    a0, ak = ints[0], ints[-1]
    roots = set()
    for num in _divisors(a0):
        for den in _divisors(ak):
            if math.gcd(num, den) != 1:
                continue
            cand = Fraction(num, den)
            if p(cand) == 0:
                roots.add(cand)
            if not positive_only and p(-cand) == 0:
                roots.add(-cand)
    return sorted(roots, reverse=True)


def rational_positive_roots(p: Poly) -> list:
    """Exact list of the positive rational roots of ``p``, descending."""
    return rational_roots(p, positive_only=True)
