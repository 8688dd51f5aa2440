import math
from fractions import Fraction

import pytest

from benfordseq.polynomials import Poly
from benfordseq.recurrences import (
    IndexSet,
    ParseError,
    char_poly,
    format_recurrence,
    gcd_index,
    index_set,
    parse_recurrence,
    term_generator,
    validate_recurrence,
)


class TestValidate:
    def test_fibonacci_flags(self):
        rec = validate_recurrence([1, 1], [1, 1])
        assert rec.order == 2
        assert rec.all_coeffs_nonnegative
        assert rec.all_initials_positive
        assert rec.c0_positive

    def test_counterexample_flags(self):
        rec = validate_recurrence(
            [Fraction(-3, 10), Fraction(31, 10)], [Fraction(1, 10), Fraction(1, 100)]
        )
        assert rec.order == 2
        assert not rec.all_coeffs_nonnegative
        assert rec.all_initials_positive

    def test_rejects_c0_zero(self):
        with pytest.raises(ValueError, match="order k"):
            validate_recurrence([0, 1], [1, 1])

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            validate_recurrence([], [])
        with pytest.raises(ValueError):
            validate_recurrence([1, 1], [1])


class TestCharPoly:
    def test_fibonacci(self):
        assert char_poly(validate_recurrence([1, 1], [1, 1])) == Poly([-1, -1, 1])

    def test_counterexample_factors(self):
        p = char_poly(
            validate_recurrence([Fraction(-3, 10), Fraction(31, 10)], [1, 1])
        )
        assert p == Poly([Fraction(3, 10), Fraction(-31, 10), 1])
        assert p(3) == 0 and p(Fraction(1, 10)) == 0

    def test_tribonacci(self):
        assert char_poly(validate_recurrence([1, 1, 1], [1, 1, 1])) == Poly(
            [-1, -1, -1, 1]
        )

    def test_monic_of_degree_k_with_coefficient_identity(self):
        for coeffs in ([2, 3], [1, 0, 5], [Fraction(1, 2), 0, 0, 7]):
            rec = validate_recurrence(coeffs, [1] * len(coeffs))
            p = char_poly(rec)
            assert p.degree == rec.order and p.is_monic
            for j in range(rec.order):
                assert p.coeffs[j] == -rec.coeffs[j]


class TestIndexSet:
    def test_gap_pattern(self):
        rec = validate_recurrence([1, 0, 1, 0], [1, 1, 1, 1])
        assert index_set(rec).members == (2,)

    def test_fibonacci(self):
        assert index_set(validate_recurrence([1, 1], [1, 1])).members == (1,)

    def test_empty(self):
        assert index_set(validate_recurrence([1, 0, 0], [1, 1, 1])).members == ()

    def test_sign_summary(self):
        mixed = validate_recurrence([1, -1, 2], [1, 1, 1])
        iset = index_set(mixed)
        assert iset.members == (1, 2)
        assert not iset.all_members_positive


class TestGcdIndex:
    @pytest.mark.parametrize(
        "members,k,expected",
        [((2,), 4, 2), ((1, 2, 3, 4), 5, 1), ((), 3, 3), ((3, 6), 9, 3)],
    )
    def test_values(self, members, k, expected):
        assert gcd_index(IndexSet(members, k, True)) == expected

    def test_divides_order(self):
        import itertools

        for k in range(1, 8):
            for bits in itertools.product([0, 1], repeat=max(k - 1, 0)):
                coeffs = [1] + list(bits)
                rec = validate_recurrence(coeffs, [1] * k)
                assert k % gcd_index(index_set(rec)) == 0


def test_term_generator_matches_hand_iteration():
    gen = term_generator(validate_recurrence([1, 1, 1], [1, 1, 1]))
    assert [next(gen) for _ in range(7)] == [1, 1, 1, 3, 5, 9, 17]


class TestTextRecord:
    def test_round_trip(self):
        rec = validate_recurrence(
            [Fraction(-3, 10), Fraction(31, 10)], [Fraction(1, 10), Fraction(1, 100)]
        )
        assert parse_recurrence(format_recurrence(rec)) == rec

    def test_parse(self):
        rec = parse_recurrence("2\n1 1\n1 1\n")
        assert rec.coeffs == (1, 1)

    def test_decimal_tokens_are_exact(self):
        rec = parse_recurrence("2\n-0.3 3.1\n0.1 0.01\n")
        assert rec.coeffs == (Fraction(-3, 10), Fraction(31, 10))

    def test_errors_carry_position(self):
        with pytest.raises(ParseError) as ei:
            parse_recurrence("2\n1 x\n1 1\n")
        assert ei.value.line == 2
        assert ei.value.column == 3
        with pytest.raises(ParseError):
            parse_recurrence("2\n1 1 1\n1 1\n")
        with pytest.raises(ParseError):
            parse_recurrence("nope\n1 1\n1 1\n")
