"""Segmented sieve and the prime-subsequence demonstration.

Extracts the n-th primes at geometric index spacings ell, ell^2, ...,
ell^nmax and reports the ratio p_{ell^n} / (n ell^n), which drifts
toward ln(ell) by the prime number theorem.  The sieve is odd-only and
segmented so the memory footprint stays at a few megabytes regardless
of range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

import numpy as np

DEFAULT_INDEX_CAP = 20_000_000
SEGMENT_SIZE = 1 << 22  # numbers per segment (half that many odd entries)


class SieveBudgetError(ValueError):
    """Requested prime index beyond the configured budget."""


def _upper_bound_for_nth_prime(n: int) -> int:
    """Rosser-type upper bound for p_n, safe for n >= 6."""
    if n < 6:
        return 15
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 10


def _small_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


@dataclass
class SieveUsage:
    """Working-set accounting so memory limits are checkable."""

    base_prime_bytes: int = 0
    segment_bytes: int = 0

    @property
    def peak_bytes(self) -> int:
        return self.base_prime_bytes + 2 * self.segment_bytes


def nth_primes(
    indices: Sequence[int],
    index_cap: int = DEFAULT_INDEX_CAP,
    usage: SieveUsage | None = None,
) -> Dict[int, int]:
    """Map each requested 1-based prime index to its prime.

    Runs one segmented pass up to an upper bound for the largest index;
    raises :class:`SieveBudgetError` when that index exceeds the cap.
    """
    wanted = sorted(set(int(i) for i in indices))
    if not wanted:
        return {}
    if wanted[0] < 1:
        raise ValueError("prime indices are 1-based")
    if wanted[-1] > index_cap:
        raise SieveBudgetError(
            f"prime index {wanted[-1]} exceeds the budget cap {index_cap}"
        )
    limit = _upper_bound_for_nth_prime(wanted[-1])
    base = _small_primes(int(limit**0.5) + 1)
    if usage is not None:
        usage.base_prime_bytes = int(base.nbytes)
    out: Dict[int, int] = {}
    it = iter(wanted)
    target = next(it)
    if target == 1:
        out[1] = 2
        target = next(it, None)
    count = 1  # the prime 2
    start = 3
    while target is not None and start <= limit:
        stop = min(start + SEGMENT_SIZE, limit + 1)
        # odd numbers in [start, stop)
        seg = np.ones((stop - start + 1) // 2, dtype=bool)
        if usage is not None:
            usage.segment_bytes = max(usage.segment_bytes, int(seg.nbytes))
        for p in base[1:]:  # skip 2; odds only
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first < stop:
                seg[(first - start) // 2 :: p] = False
        in_seg = int(np.count_nonzero(seg))
        while target is not None and target <= count + in_seg:
            pos = np.flatnonzero(seg)[target - count - 1]
            out[target] = start + 2 * int(pos)
            target = next(it, None)
        count += in_seg
        start = stop if stop % 2 == 1 else stop + 1
    if target is not None:
        raise SieveBudgetError(
            f"upper bound {limit} too small for prime index {target}"
        )
    return out


@dataclass(frozen=True)
class PrimeDemoRecord:
    ell: int
    rows: tuple  # (n, index ell^n, prime, ratio) with ratio = prime / (n ell^n)
    usage_peak_bytes: int

    @property
    def final_ratio(self) -> float:
        return self.rows[-1][3]


def prime_subsequence(
    ell: int, nmax: int, index_cap: int = DEFAULT_INDEX_CAP
) -> PrimeDemoRecord:
    """Primes at indices ell, ell^2, ..., ell^nmax with PNT ratios."""
    if ell < 2:
        raise ValueError("need ell >= 2")
    if nmax < 1:
        raise ValueError("need nmax >= 1")
    indices = [ell**n for n in range(1, nmax + 1)]
    usage = SieveUsage()
    primes = nth_primes(indices, index_cap=index_cap, usage=usage)
    rows = []
    for n, idx in enumerate(indices, start=1):
        p = primes[idx]
        rows.append((n, idx, p, p / (n * idx)))
    return PrimeDemoRecord(ell=ell, rows=tuple(rows), usage_peak_bytes=usage.peak_bytes)


def prime_csv_rows(record: PrimeDemoRecord) -> list:
    return [(n, idx, p, ratio) for (n, idx, p, ratio) in record.rows]
