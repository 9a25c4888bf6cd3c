"""
Test truncated power series
"""

import math
import tempfile
from pathlib import Path
from unittest import TestCase

import numpy as np
from scipy import special

from ...exceptions import (
    InvalidArgumentError,
    OutOfDomainError,
    SeriesOverflowError,
    SingularAtOriginError,
)
from ...series_core import (
    Generator,
    GeneratorKind,
    KernelType,
    PowSign,
    TruncatedSeries,
    binomial_series,
    cauchy_product,
    cesaro_number,
    cesaro_number_gamma,
    cesaro_numbers,
    estimate_at_one,
    evaluate,
    extend,
    inversion_residual,
    polynomial_series,
    reciprocal,
    series_from_file,
    series_reciprocal,
    series_to_file,
    summability,
    tail_bound,
    tail_extend,
    wiener_norm,
)


class ConstructionTests(TestCase):
    """
    Tests for series construction and extension
    """

    def test_binomial_series_should_follow_the_recurrence(self):
        """
        Test binomial_series for (1 - t)^(-1/2)

        Pass criteria:
        - coefficients are 1, 1/2, 3/8, 5/16
        - the generator records the exponent -0.5
        """
        series = binomial_series(0.5, PowSign.MINUS, 3)

        np.testing.assert_allclose(series.coeffs, [1.0, 0.5, 0.375, 0.3125], rtol=1e-14)
        self.assertEqual(GeneratorKind.BINOMIAL, series.generator.kind)
        self.assertEqual(-0.5, series.generator.exponent)

    def test_binomial_generator_with_wrong_coefficients_should_raise(self):
        """
        Test a Binomial generator attached to coefficients that break the recurrence

        Pass criteria:
        - InvalidArgumentError naming the first bad index as witness
        """
        with self.assertRaises(InvalidArgumentError) as ctx:
            TruncatedSeries(np.array([1.0, -0.5, 0.2]), Generator.binomial(0.5))

        self.assertEqual(2, ctx.exception.witness)

    def test_non_finite_coefficient_should_raise_overflow(self):
        """
        Test TruncatedSeries with an infinite coefficient

        Pass criteria:
        - SeriesOverflowError
        """
        with self.assertRaises(SeriesOverflowError):
            TruncatedSeries(np.array([1.0, math.inf]))

    def test_polynomial_series_should_pad_to_degree(self):
        """
        Test polynomial_series with N larger than the list

        Pass criteria:
        - trailing zeros up to degree N
        """
        series = polynomial_series([1, -1], N=4)

        np.testing.assert_array_equal(series.coeffs, [1.0, -1.0, 0.0, 0.0, 0.0])
        self.assertEqual(4, series.degree)

    def test_extend_should_continue_closed_forms(self):
        """
        Test extend past the truncation

        Pass criteria:
        - a binomial series extends to the same coefficients as a longer construction
        - a tail series continues with amplitude * n^-decay
        - a derived series refuses to extend
        """
        short = binomial_series(0.5, PowSign.PLUS, 10)
        np.testing.assert_allclose(extend(short, 50).coeffs, binomial_series(0.5, PowSign.PLUS, 50).coeffs)

        tail = tail_extend(polynomial_series([1.0, 0.3]), 0.1, 2.0, 2, N=5)
        np.testing.assert_allclose(extend(tail, 8).coeffs[2:], 0.1 * np.arange(2, 9, dtype=float) ** -2.0)
        self.assertEqual(0.3, tail.coeffs[1])

        with self.assertRaises(InvalidArgumentError):
            extend(TruncatedSeries(np.ones(4)), 10)

    def test_series_file_should_skip_comments(self):
        """
        Test reading a coefficient file

        Pass criteria:
        - comment and blank lines are ignored
        - the file written by series_to_file reads back to the same coefficients
        """
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "alpha.txt"
            path.write_text("# alpha\n1.0\n\n-0.5\n-0.25\n", encoding="utf-8")
            series = series_from_file(path)
            np.testing.assert_array_equal(series.coeffs, [1.0, -0.5, -0.25])
            self.assertEqual(GeneratorKind.FILE_LIST, series.generator.kind)

            copy = series_from_file(series_to_file(binomial_series(1.5, PowSign.PLUS, 20), Path(tmp) / "b.txt"))
            np.testing.assert_array_equal(copy.coeffs, binomial_series(1.5, PowSign.PLUS, 20).coeffs)

    def test_unreadable_series_file_should_raise_invalid_argument(self):
        """
        Test series_from_file with text that is not a coefficient list

        Pass criteria:
        - InvalidArgumentError
        """
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.txt"
            path.write_text("1.0\nnot-a-number\n", encoding="utf-8")
            with self.assertRaises(InvalidArgumentError):
                series_from_file(path)


class ReciprocalTests(TestCase):
    """
    Tests for Cauchy products and reciprocals
    """

    def test_cauchy_product_should_truncate_to_shorter_operand(self):
        """
        Test (1 - t)(1 + t + t^2 + ...)

        Pass criteria:
        - product is 1, 0, 0, ... with the length of the shorter operand
        """
        product = cauchy_product(polynomial_series([1, -1], N=3), TruncatedSeries(np.ones(6)))

        np.testing.assert_array_equal(product.coeffs, [1.0, 0.0, 0.0, 0.0])

    def test_reciprocal_round_trip_should_stay_below_tolerance(self):
        """
        Test reciprocal for the reference kernels at N = 4096

        Pass criteria:
        - inversion residual <= 1e-10 for 1-t, (1-t)^2, (1-t)^0.5
        """
        N = 4096
        kernels = [
            polynomial_series([1, -1]),
            binomial_series(2, PowSign.PLUS, N),
            binomial_series(0.5, PowSign.PLUS, N),
        ]
        for alpha in kernels:
            pair = reciprocal(alpha, N)
            self.assertLessEqual(pair.inversion_residual, 1e-10)
            self.assertLessEqual(inversion_residual(pair.alpha, pair.k), 1e-10)

    def test_reciprocal_of_binomial_should_stay_closed_form(self):
        """
        Test series_reciprocal on (1 - t)^0.5

        Pass criteria:
        - the reciprocal is the Binomial series with exponent -0.5
        """
        k = series_reciprocal(binomial_series(0.5, PowSign.PLUS, 64), 64)

        self.assertEqual(GeneratorKind.BINOMIAL, k.generator.kind)
        self.assertEqual(-0.5, k.generator.exponent)

    def test_reciprocal_of_hardy_symbol_should_be_all_ones(self):
        """
        Test reciprocal of 1 - t

        Pass criteria:
        - k_n = 1 for every n
        - flags: NP, critical, no violations
        """
        pair = reciprocal(polynomial_series([1, -1]), 16)

        np.testing.assert_array_equal(pair.k.coeffs, np.ones(17))
        self.assertTrue(pair.flags.is_np)
        self.assertIs(KernelType.CRITICAL, pair.flags.type)
        self.assertEqual((), pair.violations)

    def test_reciprocal_with_negative_k_should_list_violations(self):
        """
        Test reciprocal of 1 + t/2

        Pass criteria:
        - k_n = (-1/2)^n, so every odd index is a violation
        - alpha is not NP
        """
        pair = reciprocal(polynomial_series([1, 0.5]), 7)

        self.assertEqual((1, 3, 5, 7), pair.violations)
        self.assertFalse(pair.flags.is_np)

    def test_fibonacci_kernel_should_overflow_at_large_N(self):
        """
        Test reciprocal of 1 - t - t^2

        Pass criteria:
        - k is the Fibonacci sequence 1, 1, 2, 3, 5, ...
        - N = 1000 inverts; N = 4096 raises SeriesOverflowError
        """
        alpha = polynomial_series([1, -1, -1])
        pair = reciprocal(alpha, 1000)
        np.testing.assert_array_equal(pair.k.coeffs[:8], [1, 1, 2, 3, 5, 8, 13, 21])
        self.assertLessEqual(pair.inversion_residual, 1e-10)

        with self.assertRaises(SeriesOverflowError):
            reciprocal(alpha, 4096)

    def test_zero_constant_term_should_raise_singular(self):
        """
        Test reciprocal of t

        Pass criteria:
        - SingularAtOriginError
        """
        with self.assertRaises(SingularAtOriginError):
            reciprocal(polynomial_series([0, 1]), 8)


class EvaluationTests(TestCase):
    """
    Tests for evaluation, norms and the value at 1
    """

    def test_evaluate_should_report_zero_tail_for_polynomials(self):
        """
        Test evaluate(1 - t, 1/2)

        Pass criteria:
        - value 1/2, tail bound 0
        """
        result = evaluate(polynomial_series([1, -1]), 0.5)

        self.assertAlmostEqual(0.5, result.value.real, places=15)
        self.assertEqual(0.0, result.tail_bound)

    def test_evaluate_outside_disc_should_raise(self):
        """
        Test evaluate at |z| > 1

        Pass criteria:
        - OutOfDomainError
        """
        with self.assertRaises(OutOfDomainError):
            evaluate(polynomial_series([1, -1]), 1.5)

    def test_evaluate_binomial_inside_disc_should_match_closed_form(self):
        """
        Test evaluate((1 - t)^0.5, 0.5)

        Pass criteria:
        - value within the reported tail bound of sqrt(0.5)
        """
        result = evaluate(binomial_series(0.5, PowSign.PLUS, 64), 0.5)

        self.assertLessEqual(abs(result.value - math.sqrt(0.5)), result.tail_bound + 1e-15)
        self.assertLess(result.tail_bound, 1e-18)

    def test_wiener_norm_of_divergent_kernel_should_report_infinite_tail(self):
        """
        Test wiener_norm of (1 - t)^(-1/2)

        Pass criteria:
        - the tail is known and infinite
        - partial sums grow like sqrt(N): ratio between N = 4000 and N = 1000 close to 2
        """
        small = wiener_norm(binomial_series(0.5, PowSign.MINUS, 1000))
        large = wiener_norm(binomial_series(0.5, PowSign.MINUS, 4000))

        self.assertTrue(large.tail_known)
        self.assertEqual(math.inf, large.tail_bound)
        self.assertAlmostEqual(2.0, large.value / small.value, delta=0.01)

    def test_tail_bound_of_power_tail_should_use_zeta(self):
        """
        Test tail_bound for amplitude * n^-2 from degree 1

        Pass criteria:
        - bound equals 0.1 * zeta(2, N + 1)
        """
        series = tail_extend(polynomial_series([1.0]), 0.1, 2.0, 1, N=100)

        self.assertAlmostEqual(0.1 * float(special.zeta(2.0, 101)), tail_bound(series), places=14)

    def test_value_at_one_should_classify_kernel_type(self):
        """
        Test estimate_at_one on three kernels

        Pass criteria:
        - (1 - t)^0.5 is exactly 0 at 1, certified
        - 1 - t/2 is 1/2, certified
        - the derived series 2^-n converges by the block estimate
        """
        critical = estimate_at_one(binomial_series(0.5, PowSign.PLUS, 256))
        self.assertEqual(0.0, critical.value)
        self.assertTrue(critical.certified)

        subcritical = estimate_at_one(polynomial_series([1, -0.5]))
        self.assertEqual(0.5, subcritical.value)
        self.assertEqual(0.0, subcritical.tail_bound)

        geometric = estimate_at_one(TruncatedSeries(2.0 ** -np.arange(64)))
        self.assertFalse(geometric.certified)
        self.assertTrue(geometric.converged)
        self.assertAlmostEqual(2.0, geometric.value, places=12)

    def test_summability_should_separate_convergent_and_divergent_series(self):
        """
        Test summability on derived series

        Pass criteria:
        - n^-2 is summable, 1/n is not
        """
        n = np.arange(1, 4097, dtype=float)

        self.assertTrue(summability(TruncatedSeries(n**-2.0)).summable)
        self.assertFalse(summability(TruncatedSeries(1.0 / n)).summable)


class CesaroNumberTests(TestCase):
    """
    Tests for Cesàro numbers k^a(n)
    """

    def test_recurrence_should_agree_with_gamma_formula(self):
        """
        Test cesaro_numbers against the Gamma-ratio formula

        Pass criteria:
        - relative error <= 1e-10 for n <= 10^4 and a in {0.3, 0.5, 1.5, 2}
        """
        for a in (0.3, 0.5, 1.5, 2.0):
            values = cesaro_numbers(a, 10_000)
            for n in (0, 1, 7, 100, 2_500, 10_000):
                expected = cesaro_number_gamma(a, n)
                self.assertLessEqual(abs(values[n] - expected), 1e-10 * abs(expected), msg=f"a={a}, n={n}")

    def test_small_orders_should_sit_between_gautschi_bounds(self):
        """
        Test (n+1)^(a-1)/Gamma(a) <= k^a(n) <= n^(a-1)/Gamma(a) for 0 < a <= 1

        Pass criteria:
        - both inequalities hold for 1 <= n <= 10^4
        """
        n = np.arange(1, 10_001, dtype=float)
        for a in (0.25, 0.5, 0.75, 1.0):
            values = cesaro_numbers(a, 10_000)[1:]
            gamma = special.gamma(a)
            lower = (n + 1) ** (a - 1) / gamma
            upper = n ** (a - 1) / gamma
            self.assertTrue(np.all(lower <= values * (1 + 1e-13)), msg=f"lower bound, a={a}")
            self.assertTrue(np.all(values <= upper * (1 + 1e-13)), msg=f"upper bound, a={a}")

    def test_partial_sums_should_raise_the_order(self):
        """
        Test sum_{j <= n} k^a(j) = k^(a+1)(n)

        Pass criteria:
        - relative agreement to 1e-12 for a = 0.5 and a = 1.5
        """
        for a in (0.5, 1.5):
            np.testing.assert_allclose(np.cumsum(cesaro_numbers(a, 2_000)), cesaro_numbers(a + 1, 2_000), rtol=1e-12)

    def test_integer_orders_should_be_binomial_coefficients(self):
        """
        Test k^1(n) = 1 and k^2(n) = n + 1

        Pass criteria:
        - exact values at n = 10
        - the Gamma formula refuses a = 0
        """
        self.assertEqual(1.0, cesaro_number(1.0, 10))
        self.assertAlmostEqual(11.0, cesaro_number(2.0, 10), places=12)
        with self.assertRaises(InvalidArgumentError):
            cesaro_number_gamma(0.0, 3)
