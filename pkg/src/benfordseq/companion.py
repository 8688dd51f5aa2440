"""Companion matrices and structural Perron-Frobenius analysis.

Everything here is exact and boolean: irreducibility is strong
connectivity of the associated digraph, primitivity is decided by
boolean matrix powers up to the Wielandt bound (k-1)^2 + 1, and the
imprimitivity index comes from gcd's of closed-walk lengths.  No
floating point, so these results can cross-check the spectral module.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .recurrences import Recurrence


@dataclass(frozen=True)
class CompanionMatrix:
    """k x k companion matrix: superdiagonal ones, last row c_0..c_{k-1}."""

    dimension: int
    entries: tuple  # tuple of row tuples, Fraction values

    def entry(self, i: int, j: int) -> Fraction:
        """1-based access, matching the usual matrix display."""
        return self.entries[i - 1][j - 1]


def companion(rec: Recurrence) -> CompanionMatrix:
    k = rec.order
    rows = []
    for i in range(k - 1):
        row = [Fraction(0)] * k
        row[i + 1] = Fraction(1)
        rows.append(tuple(row))
    rows.append(tuple(rec.coeffs))
    return CompanionMatrix(dimension=k, entries=tuple(rows))


@dataclass(frozen=True)
class BoolMatrix:
    """Adjacency pattern; row i stored as a bitmask over columns."""

    dimension: int
    rows: tuple  # ints, bit j set <=> edge i -> j

    @classmethod
    def from_companion(cls, cm: CompanionMatrix) -> "BoolMatrix":
        masks = []
        for row in cm.entries:
            m = 0
            for j, v in enumerate(row):
                if v != 0:
                    m |= 1 << j
            masks.append(m)
        return cls(dimension=cm.dimension, rows=tuple(masks))

    @classmethod
    def from_bools(cls, grid) -> "BoolMatrix":
        masks = []
        for row in grid:
            m = 0
            for j, v in enumerate(row):
                if v:
                    m |= 1 << j
            masks.append(m)
        return cls(dimension=len(masks), rows=tuple(masks))

    def bit(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def successors(self, i: int):
        m = self.rows[i]
        while m:
            j = (m & -m).bit_length() - 1
            yield j
            m &= m - 1


def _bool_multiply(a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    out = []
    for i in range(a.dimension):
        acc = 0
        m = a.rows[i]
        while m:
            j = (m & -m).bit_length() - 1
            acc |= b.rows[j]
            m &= m - 1
        out.append(acc)
    return BoolMatrix(dimension=a.dimension, rows=tuple(out))


def _all_true(bm: BoolMatrix) -> bool:
    full = (1 << bm.dimension) - 1
    return all(r == full for r in bm.rows)


def _reachable_from(bm: BoolMatrix, start: int) -> int:
    """Bitmask of vertices reachable from ``start`` (including itself via walks)."""
    seen = 1 << start
    frontier = deque([start])
    while frontier:
        u = frontier.popleft()
        fresh = bm.rows[u] & ~seen
        seen |= fresh
        while fresh:
            v = (fresh & -fresh).bit_length() - 1
            frontier.append(v)
            fresh &= fresh - 1
    return seen


def is_irreducible(bm: BoolMatrix) -> bool:
    """True iff the digraph is strongly connected (k reachability sweeps)."""
    full = (1 << bm.dimension) - 1
    return all(_reachable_from(bm, v) == full for v in range(bm.dimension))


def is_primitive(bm: BoolMatrix) -> bool:
    """Frobenius test: some power is all-positive.

    Powers are tried up to the Wielandt bound (k-1)^2 + 1, which makes
    the test a terminating decision procedure; an irreducible pattern
    that is not all-true by then is imprimitive.
    """
    if not is_irreducible(bm):
        raise ValueError("primitivity test requires an irreducible pattern")
    bound = (bm.dimension - 1) ** 2 + 1
    power = bm
    for _ in range(bound):
        if _all_true(power):
            return True
        power = _bool_multiply(power, bm)
    return False


def imprimitivity_index(bm: BoolMatrix) -> int:
    """gcd of closed-walk lengths, from BFS level differences.

    For an irreducible pattern this is the number h of eigenvalues on
    the spectral-radius circle; h = 1 means primitive.
    """
    if not is_irreducible(bm):
        raise ValueError("imprimitivity index requires an irreducible pattern")
    k = bm.dimension
    level = [-1] * k
    level[0] = 0
    frontier = deque([0])
    while frontier:
        u = frontier.popleft()
        for v in bm.successors(u):
            if level[v] < 0:
                level[v] = level[u] + 1
                frontier.append(v)
    g = 0
    for u in range(k):
        for v in bm.successors(u):
            g = math.gcd(g, level[u] + 1 - level[v])
    return g
