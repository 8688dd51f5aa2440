"""Sequence generation at scale and empirical Benford statistics.

The workhorse is a renormalized float iteration of the companion state
vector: after every step the state is rescaled by its max-norm and the
log of the scale is accumulated, which keeps values bounded for runs up
to 10^7 terms.  That iteration is only trustworthy when the sequence
actually rides the dominant root; a sequence that tends to zero (the
dominant-mode coefficient vanishes) amplifies rounding noise through
the parasitic dominant mode.  The generator therefore cross-checks the
first terms against exact big-rational iteration and switches to an
exact renormalized generator for the whole stream when the float path
drifts.  Exact-path terms carry their mantissa as an exact rational, so
first digits at power-of-base boundaries are never misrounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .recurrences import Recurrence

DEFAULT_GUARD_TERMS = 200
DEFAULT_GUARD_TOL = 1e-9
EXACT_PREFIX_CAP = 200


class NegativeTermError(RuntimeError):
    """A term <= 0 outside the exact-zero case; Benford statistics need positive terms."""

    def __init__(self, index: int, value=None):
        shown = "" if value is None else f" (value {value})"
        super().__init__(f"term a_{index} is not positive{shown}")
        self.index = index
        self.value = value


class LogTerm(NamedTuple):
    index: int
    logb: Optional[float]  # log base b of a_n; None for zero terms
    is_zero: bool
    exact_mantissa: Optional[Fraction] = None


# ---------------------------------------------------------------------------
# Mantissa
# ---------------------------------------------------------------------------


def _check_base(b: int) -> int:
    if not isinstance(b, int) or b < 2:
        raise ValueError(f"base must be an integer >= 2, got {b!r}")
    return b


def _pow_base(b: int, e: int) -> Fraction:
    return Fraction(b) ** e


def _exact_exponent(x: Fraction, b: int) -> int:
    """The integer e with b^e <= x < b^(e+1), for x > 0, by exact comparison."""
    approx = (x.numerator.bit_length() - x.denominator.bit_length()) * math.log(2) / math.log(b)
    e = int(math.floor(approx))
    while x >= _pow_base(b, e + 1):
        e += 1
    while x < _pow_base(b, e):
        e -= 1
    return e


def mantissa_exact(x, b: int) -> Fraction:
    """Exact base-b mantissa in [1, b) of a positive rational."""
    _check_base(b)
    x = Fraction(x)
    if x <= 0:
        raise ValueError("mantissa requires a positive value")
    m = x / _pow_base(b, _exact_exponent(x, b))
    assert 1 <= m < b
    return m


def mantissa(x, b: int) -> float:
    """Base-b mantissa in [1, b): the unique m with x = m * b^e, e integer.

    Exact inputs (int, Fraction) take the exact path and are rounded
    once at the end; floats go through log arithmetic.
    """
    _check_base(b)
    if isinstance(x, (int, Fraction)):
        return float(mantissa_exact(x, b))
    if x <= 0:
        raise ValueError("mantissa requires a positive value")
    f = math.log(x, b) % 1.0
    if f >= 1.0:
        f = 0.0
    return b**f


# ---------------------------------------------------------------------------
# Exact iteration
# ---------------------------------------------------------------------------


def _exact_terms(rec: Recurrence, count: int) -> list:
    state = list(rec.initials)
    k = rec.order
    cs = rec.coeffs
    out = []
    for _ in range(count):
        out.append(state[0])
        nxt = sum(cs[j] * state[j] for j in range(k))
        state = state[1:] + [nxt]
    return out


def exact_prefix(rec: Recurrence, M: int, cap: Optional[int] = EXACT_PREFIX_CAP) -> list:
    """First M terms as exact rationals (the cross-check oracle).

    ``cap`` (default 200) guards against runaway big-rational cost; pass
    cap=None to lift it deliberately.
    """
    if cap is not None and M > cap:
        raise ValueError(f"exact prefix capped at {cap} terms (asked for {M})")
    return _exact_terms(rec, M)


def _exact_stream(rec: Recurrence, b: int, N: int) -> Iterator[LogTerm]:
    """Exact renormalized iteration; emits exact mantissas.

    The state is rescaled by exact powers of b, so b-adic decaying
    sequences (the tends-to-zero counterexamples) keep bounded
    representations.  Cost still grows for generic rationals; this path
    is the fallback for streams the float iteration cannot track.
    """
    k = rec.order
    cs = rec.coeffs
    state = list(rec.initials)
    acc = 0  # exact exponent of the applied rescalings
    lb = math.log(b)
    for n in range(1, N + 1):
        v = state[0]
        if v == 0:
            yield LogTerm(n, None, True)
        elif v < 0:
            raise NegativeTermError(n, v)
        else:
            e = _exact_exponent(v, b)
            man = v / _pow_base(b, e)
            yield LogTerm(n, (acc + e) + math.log(float(man)) / lb, False, man)
        nxt = sum(cs[j] * state[j] for j in range(k))
        state = state[1:] + [nxt]
        mx = max(abs(x) for x in state)
        if mx != 0:
            e = _exact_exponent(mx, b)
            if e != 0:
                scale = _pow_base(b, -e)
                state = [x * scale for x in state]
                acc += e


# ---------------------------------------------------------------------------
# Float log-space iteration
# ---------------------------------------------------------------------------


def _float_stream(rec: Recurrence, b: int, N: int) -> Iterator[LogTerm]:
    k = rec.order
    cs = [float(c) for c in rec.coeffs]
    state = [float(a) for a in rec.initials]
    support_mode = rec.all_coeffs_nonnegative and rec.all_initials_nonnegative
    supp = [a != 0 for a in rec.initials]
    pos_idx = [j for j in range(k) if rec.coeffs[j] > 0]
    lb = math.log(b)
    acc = 0.0
    for n in range(1, N + 1):
        if support_mode and not supp[0]:
            yield LogTerm(n, None, True)
        else:
            v = state[0]
            if v <= 0.0:
                raise NegativeTermError(n, v)
            yield LogTerm(n, acc + math.log(v) / lb, False)
        top = 0.0
        for j in range(k):
            top += cs[j] * state[j]
        state = state[1:] + [top]
        if support_mode:
            supp = supp[1:] + [any(supp[j] for j in pos_idx)]
        mx = max(abs(x) for x in state)
        if mx > 0.0:
            inv = 1.0 / mx
            state = [x * inv for x in state]
            acc += math.log(mx) / lb


def generate_log_stream(
    rec: Recurrence,
    b: int,
    N: int,
    guard_terms: int = DEFAULT_GUARD_TERMS,
    guard_tol: float = DEFAULT_GUARD_TOL,
) -> Iterator[LogTerm]:
    """Stream of per-term base-b log records for a_1 .. a_N.

    Runs the renormalized float iteration, cross-checked term by term
    against exact arithmetic for the first ``guard_terms`` indices.  If
    the float path deviates by more than ``guard_tol`` in log value (or
    misses an exact zero/sign), the whole stream is produced by the
    exact generator instead; the choice is visible via
    :func:`stream_cross_check`.

    Raises :class:`NegativeTermError` on a term <= 0 outside the
    exact-zero case, which only nonnegative-regime zero propagation can
    establish.
    """
    _check_base(b)
    if N < 0:
        raise ValueError("N must be >= 0")
    m = min(N, guard_terms)
    exact = _exact_terms(rec, m)
    lb = math.log(b)
    fgen = _float_stream(rec, b, N)
    head = []
    stable = True
    for i in range(m):
        ev = exact[i]
        if ev < 0:
            raise NegativeTermError(i + 1, ev)
        try:
            t = next(fgen)
        except NegativeTermError:
            if ev == 0:
                raise  # mixed-sign regime: exact zero is still not positive
            stable = False
            break
        if ev == 0:
            if not t.is_zero:
                stable = False
                break
            head.append(t)
            continue
        if t.is_zero:
            stable = False
            break
        e = _exact_exponent(ev, b)
        ref = e + math.log(float(ev / _pow_base(b, e))) / lb
        if abs(t.logb - ref) > guard_tol:
            stable = False
            break
        head.append(t)
    if not stable:
        yield from _exact_stream(rec, b, N)
        return
    yield from head
    yield from fgen


def stream_cross_check(
    rec: Recurrence,
    b: int,
    terms: int = DEFAULT_GUARD_TERMS,
    tol: float = DEFAULT_GUARD_TOL,
) -> str:
    """Compare the raw float path against exact logs on a prefix.

    Returns 'PASS' when every positive term agrees within ``tol``,
    'FLOAT_UNSTABLE' when it does not (the stream generator will have
    used exact arithmetic), or 'NEGATIVE_TERM'.
    """
    exact = _exact_terms(rec, terms)
    lb = math.log(b)
    fgen = _float_stream(rec, b, terms)
    for i, ev in enumerate(exact):
        try:
            t = next(fgen)
        except NegativeTermError:
            return "NEGATIVE_TERM" if ev <= 0 else "FLOAT_UNSTABLE"
        if ev == 0:
            if not t.is_zero:
                return "FLOAT_UNSTABLE"
            continue
        if ev < 0:
            return "NEGATIVE_TERM"
        if t.is_zero:
            return "FLOAT_UNSTABLE"
        e = _exact_exponent(ev, b)
        ref = e + math.log(float(ev / _pow_base(b, e))) / lb
        if abs(t.logb - ref) > tol:
            return "FLOAT_UNSTABLE"
    return "PASS"


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


@dataclass
class BenfordStats:
    """First-digit histogram and mantissa-CDF discrepancy for one stream."""

    base: int
    n_used: int
    first_digit_counts: tuple
    discrepancy: float
    digit_max_err: float
    fracs: np.ndarray = field(repr=False, compare=False)

    def digit_frequency(self, d: int) -> float:
        return self.first_digit_counts[d - 1] / self.n_used

    def expected_frequency(self, d: int) -> float:
        return math.log(1 + 1 / d, self.base)


def benford_stats(terms: Iterable[LogTerm], b: int) -> BenfordStats:
    """Aggregate a stream of log terms into Benford statistics.

    Zero terms are skipped.  The discrepancy is the one-sample
    Kolmogorov statistic of the fractional parts against the uniform
    law, which equals the sup-distance between the empirical mantissa
    CDF and log_b t.  First digits use the exact mantissa when the term
    carries one, avoiding misrounding at digit boundaries.
    """
    _check_base(b)
    counts = [0] * (b - 1)
    fracs = []
    for t in terms:
        if t.is_zero or t.logb is None:
            continue
        f = t.logb - math.floor(t.logb)
        if f >= 1.0:
            f = 0.0
        fracs.append(f)
        if t.exact_mantissa is not None:
            d = int(t.exact_mantissa)
        else:
            d = int(b**f + 1e-12)
            d = min(max(d, 1), b - 1)
        counts[d - 1] += 1
    n = len(fracs)
    if n == 0:
        raise ValueError("no positive terms to analyze")
    u = np.sort(np.asarray(fracs, dtype=float))
    grid = np.arange(1, n + 1, dtype=float) / n
    d_n = float(max((grid - u).max(), (u - (grid - 1.0 / n)).max()))
    worst = max(
        abs(counts[d - 1] / n - math.log(1 + 1 / d, b)) for d in range(1, b)
    )
    return BenfordStats(
        base=b,
        n_used=n,
        first_digit_counts=tuple(counts),
        discrepancy=d_n,
        digit_max_err=worst,
        fracs=u,
    )


# ---------------------------------------------------------------------------
# Polynomial-index subsequences
# ---------------------------------------------------------------------------


def eval_index_poly(q_coeffs: Sequence[int], n: int) -> int:
    """Integer polynomial Q(n), coefficients lowest degree first."""
    acc = 0
    for c in reversed(q_coeffs):
        acc = acc * n + c
    return acc


def subsequence_stream(
    rec: Recurrence,
    b: int,
    q_coeffs: Sequence[int],
    count: int,
    guard_terms: int = DEFAULT_GUARD_TERMS,
    guard_tol: float = DEFAULT_GUARD_TOL,
) -> Iterator[LogTerm]:
    """Terms at indices Q(1), Q(2), ..., Q(count).

    Q must be a nonconstant integer polynomial with Q(n) >= 1 over the
    sampled range; the base generator runs to the largest needed index.
    """
    q = [int(c) for c in q_coeffs]
    if not any(c != 0 for c in q[1:]):
        raise ValueError("index polynomial must be nonconstant")
    indices = []
    for n in range(1, count + 1):
        v = eval_index_poly(q, n)
        if v < 1:
            raise ValueError(f"index polynomial takes value {v} < 1 at n = {n}")
        indices.append(v)
    needed = set(indices)
    cache = {}
    for t in generate_log_stream(rec, b, max(indices), guard_terms, guard_tol):
        if t.index in needed:
            cache[t.index] = t
    for idx in indices:
        yield cache[idx]


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------


def digit_histogram_rows(stats: BenfordStats) -> list:
    """Rows (digit, count, expected_count) for CSV export."""
    return [
        (d, stats.first_digit_counts[d - 1], stats.n_used * stats.expected_frequency(d))
        for d in range(1, stats.base)
    ]


def cdf_rows(stats: BenfordStats, samples: int = 256) -> list:
    """Rows (t, empirical_cdf, log_b_t) on a grid of mantissa thresholds."""
    b = stats.base
    out = []
    n = stats.n_used
    for i in range(samples + 1):
        lt = i / samples  # log_b t on [0, 1)
        t = b**lt
        emp = float(np.searchsorted(stats.fracs, lt, side="left")) / n
        out.append((t, emp, lt))
    return out


def write_csv(fileobj, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    import csv

    w = csv.writer(fileobj)
    w.writerow(header)
    for r in rows:
        w.writerow(r)
