import math
from fractions import Fraction

import pytest

from benfordseq.pisot import pisot_csv_rows, pisot_family, pisot_growth_scan, pisot_poly


def test_polynomial_layout():
    p = pisot_poly(3, 2)
    assert list(p.coeffs) == [-2, -2, -2, 1]
    with pytest.raises(ValueError):
        pisot_poly(1, 1)


class TestFamilyMembers:
    def test_k2_m1_is_golden_ratio(self):
        rec = pisot_family(2, 1)
        phi = (1 + math.sqrt(5)) / 2
        assert abs(rec.rho.value - phi) < 1e-12
        assert rec.bound_m_lt_rho and rec.bound_rho_lt_m1
        assert rec.other_roots_in_unit_disk  # |-1/phi| < 1

    def test_k3_m1_bisection_oracle(self):
        lo, hi = 1.0, 2.0
        f = lambda x: x**3 - x**2 - x - 1
        for _ in range(200):
            mid = (lo + hi) / 2
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        rec = pisot_family(3, 1)
        assert abs(rec.rho.value - (lo + hi) / 2) < 1e-12
        assert rec.bound_lower_kk1  # 2*3/4 = 1.5 < rho

    def test_k2_m2_quadratic_formula(self):
        rec = pisot_family(2, 2)
        assert abs(rec.rho.value - (1 + math.sqrt(3))) < 1e-12
        assert 2 < rec.rho.value < 3


def test_exact_identities_full_range():
    for k in range(2, 13):
        for m in range(1, 6):
            p = pisot_poly(k, m)
            assert p(m + 1) == 1
            assert p(1) == 1 - k * m
            rec = pisot_family(k, m, check_roots=False)
            assert rec.identity_at_m_plus_1 and rec.identity_at_1 and rec.aux_identity


def test_aux_identity_coefficientwise():
    from benfordseq.polynomials import Poly

    for k, m in ((2, 1), (5, 3), (12, 5)):
        lhs = Poly([-1, 1]) * pisot_poly(k, m)
        rhs = Poly([m] + [0] * (k - 1) + [-(m + 1), 1])
        assert lhs == rhs


def test_pisot_property_all_other_roots_inside_unit_disk():
    for k in range(2, 13):
        for m in range(1, 6):
            rec = pisot_family(k, m)
            assert rec.other_roots_in_unit_disk, (k, m)


class TestGrowthScan:
    def test_m1_strictly_increasing_chain(self):
        scan = pisot_growth_scan(1, 10)
        assert scan.strictly_increasing
        rhos = [r.rho.value for r in scan.records]
        assert rhos[0] == pytest.approx(1.618033988749895, abs=1e-12)
        assert rhos[1] == pytest.approx(1.8392867552141612, abs=1e-10)
        assert all(x < y for x, y in zip(rhos, rhos[1:]))
        assert scan.gap_decreasing

    def test_step_identity_on_golden_ratio(self):
        # p_{3,1}(phi) = phi * p_{2,1}(phi) - 1 = -1
        scan = pisot_growth_scan(1, 3)
        assert scan.step_identity
        val = pisot_poly(3, 1)(scan.records[0].rho.mid)
        assert abs(float(val) + 1) < 1e-10

    def test_m3_values_in_band(self):
        scan = pisot_growth_scan(3, 6)
        assert scan.strictly_increasing
        for r in scan.records:
            assert 3 < r.rho.value < 4

    def test_lower_bound_smallest_k_recorded(self):
        scan = pisot_growth_scan(1, 6)
        assert scan.smallest_k_with_lower_bound == 2

    def test_csv_rows(self):
        scan = pisot_growth_scan(2, 4)
        rows = pisot_csv_rows(scan)
        assert [r[0] for r in rows] == [2, 3, 4]
        assert all(r[3] and r[4] for r in rows)
