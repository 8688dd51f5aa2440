import itertools
import random
from fractions import Fraction

import pytest

from benfordseq.companion import (
    BoolMatrix,
    companion,
    imprimitivity_index,
    is_irreducible,
    is_primitive,
)
from benfordseq.recurrences import (
    char_poly,
    gcd_index,
    index_set,
    validate_recurrence,
)


def pattern_rec(bits, k):
    """Recurrence with c_0 = 1 and the 0/1 pattern bits for c_1..c_{k-1}."""
    return validate_recurrence([1] + list(bits), [1] * k)


class TestCompanion:
    def test_fibonacci_layout(self):
        cm = companion(validate_recurrence([1, 1], [1, 1]))
        assert cm.entries == ((0, 1), (1, 1))

    def test_gap_pattern_layout(self):
        cm = companion(validate_recurrence([1, 0, 1, 0], [1] * 4))
        assert cm.entries[-1] == (1, 0, 1, 0)
        for i in range(1, 4):
            assert cm.entry(i, i + 1) == 1

    def test_counterexample_entries(self):
        cm = companion(
            validate_recurrence([Fraction(-3, 10), Fraction(31, 10)], [1, 1])
        )
        assert cm.entries == ((0, 1), (Fraction(-3, 10), Fraction(31, 10)))


# --- determinant oracle on plain coefficient lists (independent arithmetic) --


def _padd(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    ]


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _det_poly(mat):
    """det(mat) where entries are coefficient lists; Laplace expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = [Fraction(0)]
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = _pmul(mat[0][j], _det_poly(minor))
        if j % 2:
            term = [-c for c in term]
        total = _padd(total, term)
    return total


@pytest.mark.parametrize("coeffs", [[1, 1], [1, 0, 1], [2, 3, 0, 5], [1, 1, 1, 1, 1]])
def test_companion_char_poly_identity(coeffs):
    # det(C - xI) == (-1)^k p(x), by exact cofactor expansion
    rec = validate_recurrence(coeffs, [1] * len(coeffs))
    cm = companion(rec)
    k = rec.order
    mat = []
    for i in range(k):
        row = []
        for j in range(k):
            const = Fraction(cm.entries[i][j])
            row.append([const, Fraction(-1)] if i == j else [const])
        mat.append(row)
    det = _det_poly(mat)
    expected = [(-1) ** k * c for c in char_poly(rec).coeffs]
    # pad to same length
    assert _padd(det, [0]) == _padd(list(expected), [0] * len(det))


class TestIrreducible:
    def test_companion_with_c0_nonzero_is_irreducible(self):
        for k in (1, 2, 4, 6):
            rec = validate_recurrence([1] + [0] * (k - 1), [1] * k)
            assert is_irreducible(BoolMatrix.from_companion(companion(rec)))

    def test_c0_zero_pattern_is_reducible(self):
        # last row only hits column k: vertex 1 unreachable from vertex k.
        # reachability oracle: walk the explicit adjacency lists.
        grid = [[False] * 3 for _ in range(3)]
        grid[0][1] = grid[1][2] = grid[2][2] = True
        bm = BoolMatrix.from_bools(grid)

        def reachable(start):
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for v in range(3):
                    if grid[u][v] and v not in seen:
                        seen.add(v)
                        stack.append(v)
            return seen

        assert reachable(2) != {0, 1, 2}
        assert not is_irreducible(bm)

    def test_one_by_one_true(self):
        assert is_irreducible(BoolMatrix.from_bools([[True]]))


class TestPrimitive:
    def test_fibonacci_by_boolean_square_oracle(self):
        bm = BoolMatrix.from_companion(companion(validate_recurrence([1, 1], [1, 1])))
        # oracle: square the 2x2 boolean matrix by hand
        g = [[bm.bit(i, j) for j in range(2)] for i in range(2)]
        sq = [
            [any(g[i][l] and g[l][j] for l in range(2)) for j in range(2)]
            for i in range(2)
        ]
        assert all(all(row) for row in sq)
        assert is_primitive(bm)

    def test_gap_pattern_imprimitive_by_power_oracle(self):
        rec = validate_recurrence([1, 0, 1, 0], [1] * 4)
        bm = BoolMatrix.from_companion(companion(rec))
        # oracle: boolean powers up to m = 10 never become all-true
        g = [[bm.bit(i, j) for j in range(4)] for i in range(4)]
        power = g
        saw_full = False
        for _ in range(10):
            if all(all(row) for row in power):
                saw_full = True
            power = [
                [any(power[i][l] and g[l][j] for l in range(4)) for j in range(4)]
                for i in range(4)
            ]
        assert not saw_full
        assert not is_primitive(bm)

    def test_tribonacci_primitive(self):
        rec = validate_recurrence([1, 1, 1], [1, 1, 1])
        assert is_primitive(BoolMatrix.from_companion(companion(rec)))

    def test_misuse_on_reducible_raises(self):
        bm = BoolMatrix.from_bools([[True, True], [False, True]])
        with pytest.raises(ValueError):
            is_primitive(bm)
        with pytest.raises(ValueError):
            imprimitivity_index(bm)


class TestImprimitivityIndex:
    @pytest.mark.parametrize(
        "coeffs,expected",
        [([1, 0, 1, 0], 2), ([1, 1], 1), ([1, 0, 0], 3)],
    )
    def test_values(self, coeffs, expected):
        rec = validate_recurrence(coeffs, [1] * len(coeffs))
        assert imprimitivity_index(BoolMatrix.from_companion(companion(rec))) == expected


class TestExhaustiveEquivalence:
    def test_gcd_criterion_equals_frobenius_test_k_2_to_7(self):
        # all 2^(k-1) 0/1 patterns with c_0 = 1
        for k in range(2, 8):
            for bits in itertools.product([0, 1], repeat=k - 1):
                rec = pattern_rec(bits, k)
                bm = BoolMatrix.from_companion(companion(rec))
                g = gcd_index(index_set(rec))
                assert is_primitive(bm) == (g == 1), (k, bits)
                assert imprimitivity_index(bm) == g, (k, bits)

    def test_primitive_implies_irreducible(self):
        for k in range(2, 6):
            for bits in itertools.product([0, 1], repeat=k - 1):
                bm = BoolMatrix.from_companion(companion(pattern_rec(bits, k)))
                if is_irreducible(bm) and is_primitive(bm):
                    assert is_irreducible(bm)


def _bool_power_all_true(bm, m):
    from benfordseq.companion import _bool_multiply, _all_true

    power = bm
    for _ in range(m - 1):
        power = _bool_multiply(power, bm)
    return _all_true(power)


def test_boolean_power_stabilization():
    # once all-true, the next power stays all-true
    rec = validate_recurrence([1, 1, 1], [1] * 3)
    bm = BoolMatrix.from_companion(companion(rec))
    m = next(m for m in range(1, 12) if _bool_power_all_true(bm, m))
    assert _bool_power_all_true(bm, m + 1)


def test_adding_edge_preserves_primitivity():
    rng = random.Random(7)
    for k in range(2, 7):
        for _ in range(20):
            bits = [rng.randint(0, 1) for _ in range(k - 1)]
            rec = pattern_rec(bits, k)
            bm = BoolMatrix.from_companion(companion(rec))
            if not is_primitive(bm):
                continue
            grid = [[bm.bit(i, j) for j in range(k)] for i in range(k)]
            i, j = rng.randrange(k), rng.randrange(k)
            grid[i][j] = True
            assert is_primitive(BoolMatrix.from_bools(grid))
