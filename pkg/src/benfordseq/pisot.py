"""The Pisot family x^k - m x^(k-1) - ... - m x - m.

For every k >= 2 and m >= 1 this polynomial has a dominant root between
m and m+1, all other roots strictly inside the unit disk, and for fixed
m the dominant roots increase in k toward m+1.  Three exact identities
pin the family down and are checked with rational arithmetic:

    p(m+1) = 1,     p(1) = 1 - k m,     (x - 1) p(x) = x^(k+1) - (m+1) x^k + m

Bound checks use exact sign evaluations against the certified root
bracket, so they are certificates rather than float comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .polynomials import Poly
from .spectral import RootInterval, all_roots, dominant_root


def pisot_poly(k: int, m: int) -> Poly:
    """x^k - m(x^(k-1) + ... + x + 1)."""
    if k < 2 or m < 1:
        raise ValueError("need k >= 2 and m >= 1")
    return Poly([-m] * k + [1])


@dataclass(frozen=True)
class PisotRecord:
    k: int
    m: int
    rho: RootInterval
    identity_at_m_plus_1: bool  # p(m+1) == 1 exactly
    identity_at_1: bool  # p(1) == 1 - k m exactly
    aux_identity: bool  # (x-1) p == x^(k+1) - (m+1) x^k + m coefficientwise
    bound_m_lt_rho: bool
    bound_rho_lt_m1: bool
    bound_lower_kk1: bool  # (m+1)k/(k+1) < rho
    other_roots_in_unit_disk: Optional[bool]


def pisot_family(k: int, m: int, check_roots: bool = True) -> PisotRecord:
    """Build the (k, m) member and verify its identities and bounds.

    The (m+1)k/(k+1) lower bound is only guaranteed for k large enough;
    a failure is recorded, not raised.
    """
    p = pisot_poly(k, m)
    rho = dominant_root(p)
    id1 = p(m + 1) == 1
    id2 = p(1) == 1 - k * m
    target = Poly([m] + [0] * (k - 1) + [-(m + 1), 1])
    aux = (Poly([-1, 1]) * p) == target
    # exact sign tests: p < 0 strictly left of rho, > 0 strictly right
    lower = Fraction((m + 1) * k, k + 1)
    bound_m = p(m) < 0
    bound_m1 = p(m + 1) > 0
    bound_low = p(lower) < 0
    disk = None
    if check_roots:
        disk = True
        rho_f = rho.value
        for z, r in all_roots(p):
            if abs(z - rho_f) <= max(r, 1e-9) and abs(z.imag) <= max(r, 1e-9):
                continue  # the dominant root itself
            if abs(z) + r >= 1 - 1e-8:
                disk = False
    return PisotRecord(
        k=k,
        m=m,
        rho=rho,
        identity_at_m_plus_1=id1,
        identity_at_1=id2,
        aux_identity=aux,
        bound_m_lt_rho=bound_m,
        bound_rho_lt_m1=bound_m1,
        bound_lower_kk1=bound_low,
        other_roots_in_unit_disk=disk,
    )


@dataclass(frozen=True)
class PisotScan:
    m: int
    records: tuple
    strictly_increasing: bool  # rho_{k} < rho_{k+1} via certified intervals
    step_identity: bool  # p_{k+1,m}(rho_{k,m}) = -m within interval tolerance
    gap_decreasing: bool  # m+1 - rho_{k,m} decreasing in k
    smallest_k_with_lower_bound: Optional[int]


def pisot_growth_scan(m: int, kmax: int, step_tol: float = 1e-8) -> PisotScan:
    """Scan k = 2..kmax for fixed m and verify the growth structure.

    Monotonicity is compared on certified intervals (hi of one against
    lo of the next), the step identity is evaluated exactly at the
    bracket midpoint, and the smallest k passing the (m+1)k/(k+1) bound
    is recorded.
    """
    if kmax < 3:
        raise ValueError("need kmax >= 3")
    records = [pisot_family(k, m, check_roots=False) for k in range(2, kmax + 1)]
    increasing = all(
        a.rho.hi < b.rho.lo for a, b in zip(records, records[1:])
    )
    step_ok = True
    for a, b in zip(records, records[1:]):
        p_next = pisot_poly(b.k, m)
        val = p_next(a.rho.mid)
        if abs(float(val + m)) > step_tol:
            step_ok = False
    gaps = [float(Fraction(m + 1) - r.rho.mid) for r in records]
    gap_dec = all(x > y for x, y in zip(gaps, gaps[1:]))
    smallest = next((r.k for r in records if r.bound_lower_kk1), None)
    return PisotScan(
        m=m,
        records=tuple(records),
        strictly_increasing=increasing,
        step_identity=step_ok,
        gap_decreasing=gap_dec,
        smallest_k_with_lower_bound=smallest,
    )


def pisot_csv_rows(scan: PisotScan) -> list:
    """Rows (k, m, rho, m_lt_rho, rho_lt_m1, lower_bound_ok) for export."""
    return [
        (
            r.k,
            r.m,
            r.rho.value,
            r.bound_m_lt_rho,
            r.bound_rho_lt_m1,
            r.bound_lower_kk1,
        )
        for r in scan.records
    ]
