import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compana import series
from conftest import multiplicity_census


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


class TestBuildGeneratingFunction:
    def test_k1_m0(self):
        spec = series.build_multiplicity_gf(1, 0)
        assert spec.numerator == (1, -1)
        assert spec.denominator == (1, -1, -1)

    def test_k2_m0_denominator(self):
        spec = series.build_multiplicity_gf(2, 0)
        assert spec.denominator == (1, -2, 1, -1)

    def test_k1_m1_is_square_of_base_case(self):
        spec = series.build_multiplicity_gf(1, 1)
        assert spec.numerator == poly_mul((0, 1), poly_mul((1, -1), (1, -1)))
        assert spec.denominator == poly_mul((1, -1, -1), (1, -1, -1))

    @pytest.mark.parametrize("k,m", [(1, 0), (1, 2), (3, 1), (5, 2), (7, 0), (2, 4)])
    def test_degrees(self, k, m):
        spec = series.build_multiplicity_gf(k, m)
        assert spec.numerator_degree == k * m + m + 1
        assert spec.denominator_degree == (k + 1) * (m + 1)
        assert spec.denominator[0] == 1

    @pytest.mark.parametrize("k,m", [(2, 1), (3, 2), (4, 3)])
    def test_denominator_is_kernel_power(self, k, m):
        spec = series.build_multiplicity_gf(k, m)
        expected = (1,)
        for _ in range(m + 1):
            expected = poly_mul(expected, series.kernel_polynomial(k))
        assert spec.denominator == expected

    def test_constant_term_validation(self):
        with pytest.raises(ValueError):
            series.RationalFunctionSpec((1,), (2, 1))


class TestExtractCoefficient:
    def test_avoiding_ones_n5(self):
        spec = series.build_multiplicity_gf(1, 0)
        assert series.extract_coefficient(spec, 5) == 3

    def test_three_ones_n5(self):
        spec = series.build_multiplicity_gf(1, 3)
        assert series.extract_coefficient(spec, 5) == 4

    def test_single_five_n5(self):
        spec = series.build_multiplicity_gf(5, 1)
        assert series.extract_coefficient(spec, 5) == 1

    def test_fibonacci_cross_check(self):
        spec = series.build_multiplicity_gf(1, 0)
        fib = [0, 1, 1]  # fib[i] with F_1 = F_2 = 1
        for _ in range(60):
            fib.append(fib[-1] + fib[-2])
        for n in range(2, 61):
            assert series.extract_coefficient(spec, n) == fib[n - 1]

    @pytest.mark.parametrize("n", range(1, 11))
    def test_oracle_equivalence_small(self, n):
        census = multiplicity_census(n)
        for k in range(1, n + 1):
            for m in range(0, n + 1):
                assert series.count_with_multiplicity(n, k, m) == census.get((k, m), 0)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_total_count_identity(self, n):
        for k in (1, 2, min(3, n), n):
            total = sum(series.count_with_multiplicity(n, k, m) for m in range(n + 1))
            assert total == 1 << (n - 1)

    @pytest.mark.parametrize(
        "n,k,m",
        [(500, 3, 0), (1000, 7, 0), (2357, 20, 0), (800, 4, 2), (1500, 2, 1), (64, 1, 0)],
    )
    def test_powmod_matches_recurrence(self, n, k, m):
        spec = series.build_multiplicity_gf(k, m)
        assert series.extract_coefficient(spec, n, method="recurrence") == (
            series.extract_coefficient(spec, n, method="powmod")
        )

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 9), st.integers(0, 3), st.integers(0, 400))
    def test_powmod_matches_recurrence_random(self, k, m, n):
        spec = series.build_multiplicity_gf(k, m)
        assert series.extract_coefficient(spec, n, method="recurrence") == (
            series.extract_coefficient(spec, n, method="powmod")
        )

    def test_unknown_method(self):
        spec = series.build_multiplicity_gf(1, 0)
        with pytest.raises(ValueError):
            series.extract_coefficient(spec, 5, method="nonsense")


class TestProbabilities:
    def test_prob_multiplicity_examples(self):
        assert series.prob_multiplicity(5, 1, 1) == Fraction(5, 16)
        assert series.prob_multiplicity(5, 1, 0) == Fraction(3, 16)
        assert series.prob_multiplicity(10, 4, 3) == 0  # k*m > n

    @pytest.mark.parametrize("n", range(1, 11))
    def test_normalization(self, n):
        for k in range(1, n + 1):
            assert sum(series.prob_multiplicity(n, k, m) for m in range(n + 1)) == 1

    def test_prob_size_present(self):
        assert series.prob_size_present(5, 1) == Fraction(13, 16)
        assert series.prob_size_present(5, 5) == Fraction(1, 16)
        assert series.prob_size_present(10, 11) == 0

    def test_expected_sizes(self):
        assert series.expected_sizes_with_multiplicity(5, 1) == Fraction(19, 16)
        assert series.expected_sizes_with_multiplicity(1, 1) == 1
        assert series.expected_sizes_with_multiplicity(5, 5) == Fraction(1, 16)

    @pytest.mark.parametrize("n", [6, 9])
    def test_expected_sizes_against_census(self, n):
        census = multiplicity_census(n)
        for m in (1, 2):
            expected = Fraction(
                sum(census.get((k, m), 0) for k in range(1, n + 1)), 1 << (n - 1)
            )
            assert series.expected_sizes_with_multiplicity(n, m) == expected


class TestDyadicFraction:
    @settings(max_examples=100)
    @given(st.integers(-(2**70), 2**70), st.integers(0, 90))
    def test_matches_plain_fraction(self, num, exp):
        assert series._dyadic_fraction(num, exp) == Fraction(num, 1 << exp)


class TestWindowTailBounds:
    def test_small_window_exact(self):
        below, above = series.window_tail_bounds(5, 1, 5)
        assert below == Fraction(3, 16)
        assert above == 0

    def test_full_window_has_zero_upper_tail(self):
        for n in (3, 9, 40):
            assert series.window_tail_bounds(n, 1, n)[1] == 0

    def test_matches_termwise_sums_when_exact(self):
        n, lo, hi = 60, 3, 8
        below, above = series.window_tail_bounds(n, lo, hi, exact_tail_terms=n)
        assert below == sum(1 - series.prob_size_present(n, j) for j in range(1, lo + 1))
        assert above == sum(series.prob_size_present(n, j) for j in range(hi + 1, n + 1))

    def test_majorant_is_upper_bound(self):
        n, lo, hi = 200, 4, 9
        exact = series.window_tail_bounds(n, lo, hi, exact_tail_terms=n)
        hybrid = series.window_tail_bounds(n, lo, hi, exact_tail_terms=3)
        assert hybrid[0] == exact[0]
        assert hybrid[1] >= exact[1]
        assert float(hybrid[1] - exact[1]) < 1e-2

    def test_lower_bound_consistency(self):
        n, lo, hi = 120, 3, 10
        below, above = series.window_tail_bounds(n, lo, hi)
        assert series.window_lower_bound(n, lo, hi) == 1 - below - above

    def test_malformed_window(self):
        with pytest.raises(ValueError):
            series.window_tail_bounds(10, 5, 3)
        with pytest.raises(ValueError):
            series.window_tail_bounds(10, 0, 3)
        with pytest.raises(ValueError):
            series.window_tail_bounds(10, 2, 11)

    @pytest.mark.slow
    def test_desk_scale_window_is_tight(self):
        n = 10**4
        lo = math.floor(math.log2(n)) - math.ceil(math.log(math.log(n)))
        hi = math.floor(math.log2(n)) + math.ceil(math.log(math.log(n)))
        below, above = series.window_tail_bounds(n, lo, hi)
        assert below < Fraction(1, 5)
        assert above < Fraction(1, 5)

    def test_empirical_probability_respects_bound(self):
        from compana import compositions as comps

        n = 300
        lo = math.floor(math.log2(n)) - math.ceil(math.log(math.log(n)))
        hi = math.floor(math.log2(n)) + math.ceil(math.log(math.log(n)))
        bound = float(series.window_lower_bound(n, lo, hi, exact_tail_terms=n))
        trials = 20_000
        hist = comps.distinct_size_histogram(n, trials, seed=17)
        p_hat = hist[lo : hi + 1].sum() / trials
        stderr = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / trials)
        assert p_hat >= bound - 5 * stderr
