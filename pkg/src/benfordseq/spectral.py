"""Numerical root analysis with exact certificates where it matters.

The dominant positive root is bracketed by bisection whose sign tests
are exact rational evaluations, so the resulting interval is a
certificate, not a float estimate.  The full complex root set comes
from a simultaneous Aberth-Ehrlich iteration with residual-based error
radii; clusters that cannot be separated are merged, and an
extended-precision pass (mpmath) is available when double precision
cannot resolve the dominance structure.
"""

from __future__ import annotations

import cmath
import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath as mp

from .polynomials import Poly
from .recurrences import Recurrence, char_poly

EXTENDED_DPS = 30  # ~100-bit significand, used for the fallback pass

DEFAULT_REL_TOL = Fraction(1, 10**14)


class SpectralError(RuntimeError):
    """Numeric failure the caller cannot silently ignore."""


def resolve_precision(precision=None) -> Optional[int]:
    """Map a precision request to mpmath dps, or None for double.

    Accepts None (consult BENFORD_PRECISION), 'double', 'extended', or
    a decimal-digit count.
    """
    if precision is None:
        env = os.environ.get("BENFORD_PRECISION", "").strip().lower()
        if env in ("", "double"):
            return None
        precision = env
    if precision == "double":
        return None
    if precision == "extended":
        return EXTENDED_DPS
    dps = int(precision)
    if dps < 16:
        return None
    return dps


@dataclass(frozen=True)
class RootInterval:
    """Certified bracket lo <= rho <= hi with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def value(self) -> float:
        return float(self.mid)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi


def _bisect_certified(
    p: Poly, lo: Fraction, hi: Fraction, rel_tol: Fraction, max_iter: int = 400
) -> RootInterval:
    """Shrink a sign-changing bracket by exact bisection.

    Assumes p(lo) < 0 < p(hi).  Midpoints are dyadic shifts of the
    endpoints, so every sign test is an exact rational evaluation.
    """
    for _ in range(max_iter):
        if lo > 0 and hi - lo <= rel_tol * lo:
            break
        mid = (lo + hi) / 2
        s = p(mid)
        if s == 0:
            return RootInterval(mid, mid)
        if s < 0:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)


def dominant_root(p: Poly, rel_tol: Fraction = DEFAULT_REL_TOL) -> RootInterval:
    """Certified bracket of the unique positive root.

    Requires the nonnegative regime: p monic, p = x^k - sum c_j x^j with
    every c_j >= 0 and c_0 > 0, where x^-k p(x) is strictly increasing on
    (0, inf) and there is exactly one sign change.
    """
    k = p.degree
    if k < 1 or not p.is_monic:
        raise SpectralError("dominant_root wants a monic polynomial of degree >= 1")
    cs = [-c for c in p.coeffs[:-1]]  # c_j of the recurrence
    if any(c < 0 for c in cs) or cs[0] <= 0:
        raise SpectralError(
            "dominant_root is only certified for nonnegative coefficients with c_0 > 0"
        )
    lo = Fraction(0)
    hi = Fraction(1) + max(cs)
    if p(hi) <= 0:  # cannot happen in-regime; guard against misuse
        grow = 0
        while p(hi) <= 0 and grow < 64:
            hi *= 2
            grow += 1
        if p(hi) <= 0:
            raise SpectralError("no sign change found in the Cauchy bracket")
    return _bisect_certified(p, lo, hi, rel_tol)


def real_root_between(
    p: Poly, lo: Fraction, hi: Fraction, rel_tol: Fraction = DEFAULT_REL_TOL
) -> RootInterval:
    """Certified bracket of a real root given exact signs p(lo)<0<p(hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    slo, shi = p(lo), p(hi)
    if slo == 0:
        return RootInterval(lo, lo)
    if shi == 0:
        return RootInterval(hi, hi)
    if not (slo < 0 < shi):
        raise SpectralError("bracket endpoints do not straddle a sign change")
    return _bisect_certified(p, lo, hi, rel_tol)


# ---------------------------------------------------------------------------
# Simultaneous root finding
# ---------------------------------------------------------------------------


def _horner(coeffs, x):
    acc = x * 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _aberth(coeffs, n, one, to_float_abs, tol, max_iter=400, eps=2.3e-16):
    """Aberth-Ehrlich iteration, generic over the scalar type.

    ``coeffs`` are monic, lowest degree first, in the working arithmetic;
    ``one`` is the multiplicative unit of that arithmetic reused to build
    constants; ``to_float_abs`` maps a working scalar to float |.|;
    ``eps`` is the working-precision unit roundoff, used to floor the
    residual in the error radii (near multiple roots the evaluated
    residual cancels to zero while the true uncertainty does not).
    """
    dcoeffs = [coeffs[i] * i for i in range(1, len(coeffs))]
    a0 = to_float_abs(coeffs[0])
    r0 = a0 ** (1.0 / n) if a0 > 0 else 1.0
    r0 = min(max(r0, 1e-6), 1e6)
    zs = [
        one * r0 * cmath.exp(2j * math.pi * j / n + 0.4j + 0.7j / n)
        for j in range(n)
    ]
    for _ in range(max_iter):
        moved = 0.0
        for j in range(n):
            z = zs[j]
            pv = _horner(coeffs, z)
            dv = _horner(dcoeffs, z)
            if to_float_abs(dv) == 0.0:
                zs[j] = z + one * (1e-8 * (1 + r0)) * (1 + 1j)
                moved = math.inf
                continue
            w = pv / dv
            s = z * 0
            collide = False
            for i in range(n):
                if i == j:
                    continue
                diff = z - zs[i]
                if to_float_abs(diff) == 0.0:
                    collide = True
                    break
                s = s + 1 / diff
            if collide:
                zs[j] = z + one * (1e-8 * (1 + r0)) * (1 + 1j)
                moved = math.inf
                continue
            den = 1 - w * s
            corr = w if to_float_abs(den) == 0.0 else w / den
            zs[j] = z - corr
            moved = max(moved, to_float_abs(corr) / (1.0 + to_float_abs(zs[j])))
        if moved < tol:
            break
    abs_coeffs = [to_float_abs(c) for c in coeffs]
    radii = []
    for j in range(n):
        z = zs[j]
        prod = one
        for i in range(n):
            if i != j:
                prod = prod * (z - zs[i])
        pv = _horner(coeffs, z)
        az = to_float_abs(z)
        eval_noise = eps * _horner(abs_coeffs, az)  # rounding bound for |p(z)|
        ap = to_float_abs(prod)
        if ap == 0.0:
            radii.append(float("inf"))
        else:
            radii.append(n * (to_float_abs(pv) + 4 * eval_noise) / ap)
    return zs, radii


def _merge_clusters(roots, radii, cluster_tol_abs):
    """Union-find merge of mutually indistinguishable root estimates."""
    n = len(roots)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= max(cluster_tol_abs, radii[i] + radii[j]):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        c = sum(roots[i] for i in members) / len(members)
        r = max(abs(roots[i] - c) + radii[i] for i in members)
        out.extend([(c, r)] * len(members))
    out.sort(key=lambda zr: (-abs(zr[0]), zr[0].real, zr[0].imag))
    return out


def all_roots(p: Poly, precision=None, cluster_tol: float = 1e-8):
    """All complex roots with multiplicity and residual error radii.

    Returns ``degree`` pairs (root, radius); a merged cluster of size m
    contributes its centroid m times.  ``precision`` follows
    :func:`resolve_precision`; the default is double precision.
    """
    if p.degree < 1:
        raise SpectralError("all_roots needs degree >= 1")
    zeros_at_origin = 0
    coeffs = list(p.coeffs)
    while coeffs[0] == 0 and len(coeffs) > 1:
        coeffs.pop(0)
        zeros_at_origin += 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    n = len(monic) - 1
    result = [(0j, 0.0)] * zeros_at_origin
    if n == 0:
        return result
    dps = resolve_precision(precision)
    if dps is None:
        fcoeffs = [complex(c) for c in monic]
        zs, radii = _aberth(fcoeffs, n, 1.0 + 0j, abs, 1e-14)
        zs = [complex(z) for z in zs]
    else:
        with mp.workdps(dps):
            mcoeffs = [mp.mpc(c.numerator) / mp.mpf(c.denominator) for c in monic]
            tol = float(mp.mpf(10) ** (-dps + 2))
            zs, radii = _aberth(
                mcoeffs,
                n,
                mp.mpc(1),
                lambda v: float(mp.fabs(v)),
                tol,
                max_iter=600,
                eps=float(mp.mpf(10) ** (1 - dps)),
            )
            zs = [complex(z) for z in zs]
    scale = 1.0 + max(abs(z) for z in zs)
    result.extend(_merge_clusters(zs, radii, cluster_tol * scale))
    return result


# ---------------------------------------------------------------------------
# Dominance structure
# ---------------------------------------------------------------------------


class Dominance(enum.Enum):
    STRICT = "STRICT"
    CYCLIC = "CYCLIC"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class SpectralProfile:
    rho: RootInterval
    roots: tuple  # ((complex, radius), ...) with multiplicity
    h_spectral: int
    dominance: Dominance
    h_matches_structure: Optional[bool] = None

    @property
    def rho_float(self) -> float:
        return self.rho.value


def _classify_circle(roots, rho_f, tol):
    """Split roots into inside/on-circle; None signals a straddler."""
    on_circle = []
    for z, r in roots:
        d = abs(z) - rho_f
        if abs(d) <= tol:
            if r > tol:
                return None
            on_circle.append((z, r))
        elif abs(d) - r <= tol:
            return None
        elif d > tol:
            return None  # something larger than the dominant root: solver trouble
    return on_circle


def dominance_check(
    p: Poly,
    rho: RootInterval,
    roots=None,
    h_structural: Optional[int] = None,
    precision=None,
    tol: Optional[float] = None,
) -> SpectralProfile:
    """Classify the modulus-rho root structure as STRICT or CYCLIC(h).

    STRICT: exactly one root on the spectral circle.  CYCLIC(h): exactly
    h, forming {rho * omega^j} for omega = exp(2 pi i / h).  UNRESOLVED
    is returned when error radii straddle the decision boundary even
    after the extended-precision retry.
    """
    if roots is None:
        roots = all_roots(p, precision=precision)
    rho_f = rho.value
    scale = 1.0 + max(abs(z) for z, _ in roots)
    circle_tol = tol if tol is not None else 1e-8 * scale

    on_circle = _classify_circle(roots, rho_f, circle_tol)
    if on_circle is None and resolve_precision(precision) is None:
        roots = all_roots(p, precision="extended")
        on_circle = _classify_circle(roots, rho_f, circle_tol)

    def profile(h, dom, match):
        return SpectralProfile(
            rho=rho,
            roots=tuple(roots),
            h_spectral=h,
            dominance=dom,
            h_matches_structure=match,
        )

    if on_circle is None:
        return profile(0, Dominance.UNRESOLVED, None)

    h = len(on_circle)
    match = None if h_structural is None else (h == h_structural)
    if h == 0:
        return profile(0, Dominance.UNRESOLVED, match)
    if h == 1:
        return profile(1, Dominance.STRICT, match)
    # verify the cyclic pattern rho * omega^m with distinct m
    seen = set()
    for z, r in on_circle:
        theta = cmath.phase(z) % (2 * math.pi)
        m = round(theta * h / (2 * math.pi)) % h
        target = rho_f * cmath.exp(2j * math.pi * m / h)
        if m in seen or abs(z - target) > 4 * (circle_tol + r):
            return profile(h, Dominance.UNRESOLVED, match)
        seen.add(m)
    return profile(h, Dominance.CYCLIC, match)


# ---------------------------------------------------------------------------
# Condition (2): one large leading coefficient
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Condition2Result:
    applies: bool
    verified: Optional[bool]
    rho: Optional[RootInterval]
    critical: bool
    notes: tuple


def condition2_applies(rec: Recurrence) -> bool:
    """Exact coefficient test c_{k-1} >= 2 and c_{k-1} > sum |c_j| + 1."""
    c_top = rec.coeffs[-1]
    rest = sum(abs(c) for c in rec.coeffs[:-1])
    return c_top >= 2 and c_top > rest + 1


def check_condition2(rec: Recurrence, precision=None) -> Condition2Result:
    """Verify the root localization promised by the coefficient test.

    When the exact test passes there must be exactly one (simple, real)
    root in (c_{k-1}-1, c_{k-1}+1) and every other root strictly inside
    the unit disk.  A passing test with failing verification is flagged
    critical: it indicates solver trouble, not a property of the input.
    """
    notes = [
        f"condition2 exact test: c_{{k-1}}={rec.coeffs[-1]} vs sum|c_j|+1="
        f"{sum(abs(c) for c in rec.coeffs[:-1]) + 1}"
    ]
    if not condition2_applies(rec):
        return Condition2Result(False, None, None, False, tuple(notes))
    p = char_poly(rec)
    c = rec.coeffs[-1]
    lo, hi = c - 1, c + 1
    if not (p(lo) < 0 < p(hi)):
        notes.append("sign pattern p(c-1)<0<p(c+1) failed")
        return Condition2Result(True, False, None, True, tuple(notes))
    interval = _bisect_certified(p, lo, hi, DEFAULT_REL_TOL)
    roots = all_roots(p, precision=precision)
    in_bracket = 0
    others_inside = True
    flo, fhi = float(lo), float(hi)
    for z, r in roots:
        near_real = abs(z.imag) <= max(r, 1e-9)
        if near_real and flo - r <= z.real <= fhi + r:
            in_bracket += 1
        elif abs(z) + r >= 1:
            others_inside = False
    verified = in_bracket == 1 and others_inside
    notes.append(
        f"roots in (c-1, c+1): {in_bracket}; all others inside unit disk: {others_inside}"
    )
    return Condition2Result(True, verified, interval, not verified, tuple(notes))


# ---------------------------------------------------------------------------
# Growth-rate limit a_n / rho^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerronLimit:
    rho: float
    limit_vector: tuple
    alpha: float
    converged: bool
    iterations: int


def perron_limit(
    rec: Recurrence,
    rho: float,
    tol: float = 1e-13,
    max_iter: int = 300_000,
) -> PerronLimit:
    """Limit of the rho^n-normalized state vector.

    Iterates w <- C w / rho, where C is the companion matrix, starting
    from the initial state; in the primitive regime (or under strict
    dominance with rho > 1) this converges, and alpha = lim a_n / rho^n
    is the first component.  Non-convergence within the cap sets
    ``converged=False``; with cyclic dominance the iteration oscillates
    and that flag is the expected outcome.
    """
    k = rec.order
    cs = [float(c) for c in rec.coeffs]
    w = [float(a) / rho for a in rec.initials]
    iters = 0
    converged = False
    for iters in range(1, max_iter + 1):
        top = sum(cs[j] * w[j] for j in range(k))
        new = [w[j + 1] / rho for j in range(k - 1)] + [top / rho]
        delta = max(abs(new[j] - w[j]) for j in range(k))
        w = new
        if delta <= tol * max(1.0, max(abs(x) for x in w)):
            converged = True
            break
    return PerronLimit(
        rho=rho,
        limit_vector=tuple(w),
        alpha=w[0],
        converged=converged,
        iterations=iters,
    )
