import math

import pytest

from apvar import (
    DomainError,
    ResourceError,
    ap_main_term,
    ap_sums,
    delta_value,
    density_square_sum_check,
    deviation_decay_slope,
    dirichlet_partial_sum_check,
    error_vector,
    eval_logpoly,
    growth_study,
    m_poly,
    parseval_check,
    sieve_dk,
    variance_expansion_check,
    variance_q,
    variance_total,
)
from apvar.stats import regression_slope

GAMMA0 = 0.5772156649015328606065121


class TestErrorVector:
    def test_trivial_modulus_at_hundred(self):
        t = sieve_dk(100, 2)
        ev = error_vector(t, 1, 100)
        f = ap_main_term(1, 1, 2)
        expected = 482 - 100 * eval_logpoly(f, 100.0)
        assert ev.e[1] == pytest.approx(expected, abs=1e-9)
        assert ev.e[1] == pytest.approx(6.04, abs=0.01)

    def test_exact_count_at_one(self):
        t = sieve_dk(1, 1)
        ev = error_vector(t, 1, 1)
        assert ev.e[1] == 0.0

    def test_classes_sum_to_trivial_class(self, table_k2_1e4):
        x = 10**4
        ev1 = error_vector(table_k2_1e4, 1, x)
        for q in (3, 7, 12):
            ev = error_vector(table_k2_1e4, q, x)
            assert math.fsum(ev.e[1:]) == pytest.approx(float(ev1.e[1]), rel=1e-6)

    def test_wrong_fold_rejected(self, table_k2_1e4):
        with pytest.raises(DomainError):
            error_vector(table_k2_1e4, 3, 100, k=3)


class TestDeltaValue:
    def test_zero_fraction_matches_trivial_error(self, table_k2_1e4):
        x = 10**4
        cls = ap_sums(table_k2_1e4, 1, x)
        d = delta_value(cls, 0)
        ev = error_vector(table_k2_1e4, 1, x)
        assert d.value.imag == 0.0
        assert d.value.real == pytest.approx(float(ev.e[1]), abs=1e-9)

    def test_half_fraction_at_ten(self):
        t = sieve_dk(10, 2)
        cls = ap_sums(t, 2, 10)
        d = delta_value(cls, 1)
        m2 = math.log(10) + 2 * GAMMA0 - 1 - 2 * math.log(2)
        assert eval_logpoly(m_poly(2, 2), 10.0) == pytest.approx(m2, abs=1e-12)
        assert d.value == pytest.approx(complex(7 - 10 * m2 / 2, 0), abs=1e-9)
        assert abs(d.value - 1.65) < 0.01

    def test_conjugate_symmetry(self, table_k3_1e4):
        for q in (5, 9, 16):
            cls = ap_sums(table_k3_1e4, q, 10**4)
            for a in range(1, q):
                d1 = delta_value(cls, a).value
                d2 = delta_value(cls, q - a).value
                assert abs(d1 - d2.conjugate()) < 1e-9 * max(1.0, abs(d1))


class TestVariance:
    def test_single_modulus_is_squared_error(self, table_k2_1e4):
        ev = error_vector(table_k2_1e4, 1, 10**3)
        assert variance_q(table_k2_1e4, 1, 10**3) == pytest.approx(
            float(ev.e[1]) ** 2, rel=1e-12
        )

    def test_total_is_monotone_in_Q(self, table_k2_1e4):
        x = 2000
        totals = [variance_total(table_k2_1e4, x, Q).total for Q in (1, 5, 20, 40)]
        assert all(a <= b + 1e-9 for a, b in zip(totals, totals[1:]))

    def test_per_q_values_nonnegative(self, table_k2_1e4):
        rep = variance_total(table_k2_1e4, 5000, 30)
        assert all(v >= 0.0 for v in rep.per_q)
        assert rep.total == pytest.approx(math.fsum(rep.per_q), rel=1e-15)

    def test_report_totals_match_per_q_sum(self, table_k3_1e4):
        rep = variance_total(table_k3_1e4, 10**4, 25)
        assert rep.total == math.fsum(rep.per_q)
        assert len(rep.per_q) == 25

    def test_threaded_reduction_is_identical(self, table_k3_1e4):
        a = variance_total(table_k3_1e4, 10**4, 40, threads=1)
        b = variance_total(table_k3_1e4, 10**4, 40, threads=8)
        assert a.per_q == b.per_q
        assert a.total == b.total
        assert a.congruence_term == b.congruence_term
        assert a.cross_term == b.cross_term and a.main_term == b.main_term

    def test_Q_beyond_x_rejected(self, table_k2_1e4):
        with pytest.raises(DomainError):
            variance_total(table_k2_1e4, 100, 101)


class TestParseval:
    def test_exact_for_single_class(self, table_k2_1e4):
        lhs, rhs = parseval_check(table_k2_1e4, 1, 10**4)
        assert lhs == rhs

    def test_small_case(self):
        t = sieve_dk(20, 2)
        lhs, rhs = parseval_check(t, 3, 20)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_at_scale(self, table_k3_1e4):
        lhs, rhs = parseval_check(table_k3_1e4, 50, 10**4)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_sweep_of_moduli(self, table_k2_1e4, table_k3_1e4):
        for table in (table_k2_1e4, table_k3_1e4):
            for q in range(1, 51):
                lhs, rhs = parseval_check(table, q, 10**3)
                assert lhs == pytest.approx(rhs, rel=1e-9)


class TestVarianceExpansion:
    def test_single_modulus_reduces_to_squared_error(self, table_k2_1e4):
        direct, expanded = variance_expansion_check(table_k2_1e4, 10**3, 1)
        ev = error_vector(table_k2_1e4, 1, 10**3)
        assert direct == pytest.approx(float(ev.e[1]) ** 2, rel=1e-12)
        assert expanded == pytest.approx(direct, rel=1e-9)

    def test_desk_scale_k2(self, table_k2_1e4):
        direct, expanded = variance_expansion_check(table_k2_1e4, 10**3, 50)
        assert direct == pytest.approx(expanded, rel=1e-9)

    def test_desk_scale_k3(self, table_k3_1e4):
        direct, expanded = variance_expansion_check(table_k3_1e4, 10**4, 100)
        assert direct == pytest.approx(expanded, rel=1e-9)

    def test_budget_guard(self, table_k2_1e4):
        with pytest.raises(ResourceError):
            variance_expansion_check(table_k2_1e4, 10**4, 100, budget=10)


class TestDensitySquareSum:
    def test_matches_quadratic_mean_polynomial(self):
        for q in (1, 2, 36, 60):
            lhs, rhs = density_square_sum_check(q, 10**3, 2)
            assert lhs == pytest.approx(rhs, rel=1e-9)


class TestDirichletPartialSums:
    def test_example_case_converges(self, spf_table_1e7):
        t = sieve_dk(10**5, 2)
        lhs, rhs = dirichlet_partial_sum_check(t, 30, 6)
        assert lhs == pytest.approx(rhs, rel=1e-3)

    def test_unconstrained_case(self):
        t = sieve_dk(10**5, 2)
        lhs, rhs = dirichlet_partial_sum_check(t, 1, 1)
        assert rhs == pytest.approx((math.pi**2 / 6) ** 2, rel=1e-15)
        assert lhs == pytest.approx(rhs, rel=1e-3)

    def test_partial_sums_approach_target_monotonically(self):
        # the slowest desk-scale case: prime modulus with full gcd; the
        # deficit shrinks as the cutoff grows
        rels = []
        for n in (10**4, 10**5):
            t = sieve_dk(n, 3)
            lhs, rhs = dirichlet_partial_sum_check(t, 29, 29)
            assert lhs < rhs  # positive terms only: partial sums from below
            rels.append((rhs - lhs) / rhs)
        assert rels[1] < rels[0]

    def test_nondivisor_rejected(self, table_k2_1e4):
        with pytest.raises(DomainError):
            dirichlet_partial_sum_check(table_k2_1e4, 10, 3)


class TestDeviationDecay:
    def test_slopes_below_analytic_bound(self, table_k2_1e6, table_k3_1e6):
        cutoffs = (10**4, 10**5, 10**6)
        for table, k in ((table_k2_1e6, 2), (table_k3_1e6, 3)):
            bound = 1 - 1 / (2 * (k - 1)) + 0.15
            for q in range(1, 7):
                for a in range(1, q + 1):
                    if math.gcd(a, q) != 1:
                        continue
                    mags, slope = deviation_decay_slope(table, q, a, cutoffs)
                    assert slope <= bound
                    ratios = [m / X for m, X in zip(mags, cutoffs)]
                    assert ratios[0] > ratios[1] > ratios[2]


class TestRegressionSlope:
    def test_exact_line(self):
        xs = [1.0, 2.0, 3.0, 4.0]
        ys = [2.0 * t + 0.5 for t in xs]
        assert regression_slope(xs, ys) == pytest.approx(2.0, abs=1e-12)

    def test_needs_two_points(self):
        with pytest.raises(DomainError):
            regression_slope([1.0], [2.0])


class TestGrowthStudy:
    def test_single_modulus_rule_reduces_to_trivial_variance(self, table_k2_1e4):
        study = growth_study(
            2, [10**3, 10**4], lambda x: 1, sieve=table_k2_1e4
        )
        for x, Q, v, ratio in study.rows:
            assert Q == 1
            ev = error_vector(table_k2_1e4, 1, x)
            assert v == pytest.approx(float(ev.e[1]) ** 2, rel=1e-12)

    def test_power_rule_rows_and_ratio(self, table_k2_1e4):
        study = growth_study(2, [512, 2048, 8192], ("power", 0.5), sieve=table_k2_1e4)
        assert [r[0] for r in study.rows] == [512, 2048, 8192]
        for x, Q, v, ratio in study.rows:
            assert Q == int(round(x**0.5))
            assert ratio == pytest.approx(v / (x * Q), rel=1e-15)

    def test_ratio_rule(self, table_k2_1e4):
        study = growth_study(2, [1000], ("ratio", 10), sieve=table_k2_1e4)
        assert study.rows[0][1] == 100

    def test_doubling_Q_roughly_doubles_variance(self, table_k2_1e4):
        x = 10**4
        v1 = variance_total(table_k2_1e4, x, 64).total
        v2 = variance_total(table_k2_1e4, x, 128).total
        assert 1.0 <= v2 / v1 <= 4.0  # at most ~doubles plus polylog drift

    def test_csv_emission_schema(self, table_k2_1e4):
        from apvar import growth_csv

        study = growth_study(2, [512, 4096], ("power", 0.5), sieve=table_k2_1e4)
        lines = growth_csv(study).strip().splitlines()
        assert lines[0] == "x,Q,V,V_over_xQ"
        assert len(lines) == 3
        x, Q, v, r = lines[1].split(",")
        assert (int(x), int(Q)) == (512, 23)
        assert float(v) / (512 * 23) == pytest.approx(float(r), rel=1e-15)
