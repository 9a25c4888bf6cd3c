"""
Test kernel hypotheses and side conditions
"""

from unittest import TestCase

import numpy as np

from ...exceptions import InvalidArgumentError
from ...kernel_analysis import (
    ConditionId,
    SignPattern,
    Verdict,
    banach_algebra_condition,
    check_hypotheses_A,
    check_hypotheses_B,
    check_inverse_weighted_bound,
    classify_critical,
    classify_np,
    generate_sign_pattern_kernel,
    holder_exponent_estimate,
    kernel_suite,
    muller_condition_estimate,
    muller_sufficient_check,
    reciprocal_summability_check,
    tau_condition_check,
)
from ...series_core import (
    PowSign,
    TruncatedSeries,
    binomial_series,
    extend,
    polynomial_series,
    reciprocal,
    tail_extend,
)

M_GRID = [1, 2, 4, 8, 16, 32, 64]


def _weights(values) -> TruncatedSeries:
    return TruncatedSeries(np.asarray(values, dtype=float))


class HypothesesTests(TestCase):
    """
    Tests for the structural hypotheses on (alpha, k)
    """

    def test_hardy_symbol_should_satisfy_both_hypotheses(self):
        """
        Test alpha = 1 - t, k = 1/(1 - t)

        Pass criteria:
        - A Holds with a certified zero-free disc
        - B Holds with C' = 1 and C'' = 2
        """
        pair = reciprocal(polynomial_series([1, -1]), 64)

        self.assertIs(Verdict.HOLDS, check_hypotheses_A(pair).verdict)
        report = check_hypotheses_B(pair)
        self.assertIs(Verdict.HOLDS, report.verdict)
        self.assertEqual(1.0, report.witness["C_prime"]["sup"])
        self.assertEqual(2.0, report.witness["C_double_prime"]["sup"])
        self.assertIn("k_ratio", report.trend_tables)

    def test_square_root_kernel_should_satisfy_hypothesis_A(self):
        """
        Test alpha = (1 - t)^0.5 at N = 4096

        Pass criteria:
        - A Holds; B TrendHolds since alpha has infinite support
        """
        pair = reciprocal(binomial_series(0.5, PowSign.PLUS, 4096), 4096)

        self.assertIs(Verdict.HOLDS, check_hypotheses_A(pair).verdict)
        self.assertIs(Verdict.TREND_HOLDS, check_hypotheses_B(pair).verdict)

    def test_zero_inside_disc_should_fail_hypothesis_A(self):
        """
        Test alpha = 1 - 2t, which vanishes at t = 1/2

        Pass criteria:
        - A Fails
        """
        pair = reciprocal(polynomial_series([1, -2]), 64)

        report = check_hypotheses_A(pair)

        self.assertIs(Verdict.FAILS, report.verdict)
        self.assertEqual(1, report.witness["circles"]["0.9"]["winding"])

    def test_squared_symbol_should_have_ratio_sup_near_one(self):
        """
        Test alpha = (1 - t)^2, k_n = n + 1, at N = 1024

        Pass criteria:
        - B TrendHolds
        - sup k_n / k_(n+1) close to 1
        """
        pair = reciprocal(binomial_series(2, PowSign.PLUS, 1024), 1024)

        report = check_hypotheses_B(pair)

        self.assertIs(Verdict.TREND_HOLDS, report.verdict)
        self.assertAlmostEqual(1.0, report.witness["C_prime"]["sup"], delta=1e-2)

    def test_nonpositive_k_should_fail_hypothesis_B(self):
        """
        Test alpha = 1 + t/2, whose reciprocal alternates in sign

        Pass criteria:
        - B Fails and names the first nonpositive index
        """
        report = check_hypotheses_B(reciprocal(polynomial_series([1, 0.5]), 16))

        self.assertIs(Verdict.FAILS, report.verdict)
        self.assertEqual(1, report.witness["first_nonpositive_k"])


class ClassificationTests(TestCase):
    """
    Tests for NP and critical/subcritical classification
    """

    def test_classify_np_should_report_first_violation(self):
        """
        Test classify_np on an NP and a non-NP polynomial

        Pass criteria:
        - 1 - t/2 - t^2/4 Holds
        - 1 - t + t^3 Fails at index 3
        """
        self.assertIs(Verdict.HOLDS, classify_np(polynomial_series([1, -0.5, -0.25])).verdict)
        report = classify_np(polynomial_series([1, -1, 0, 1]))
        self.assertIs(Verdict.FAILS, report.verdict)
        self.assertEqual(3, report.witness["first_violation"])

    def test_square_root_kernel_should_be_critical(self):
        """
        Test classify_critical((1 - t)^0.5)

        Pass criteria:
        - Holds with type Critical and alpha(1) = 0
        """
        report = classify_critical(reciprocal(binomial_series(0.5, PowSign.PLUS, 256), 256))

        self.assertIs(Verdict.HOLDS, report.verdict)
        self.assertEqual("Critical", report.witness["type"])
        self.assertEqual(0.0, report.witness["alpha_at_one"])

    def test_damped_symbol_should_be_subcritical(self):
        """
        Test classify_critical(1 - t/2)

        Pass criteria:
        - Holds with type Subcritical
        """
        report = classify_critical(reciprocal(polynomial_series([1, -0.5]), 64))

        self.assertIs(Verdict.HOLDS, report.verdict)
        self.assertEqual("Subcritical", report.witness["type"])


class MullerConditionTests(TestCase):
    """
    Tests for the Müller convolution condition and its log-convex sufficient form
    """

    def test_summable_power_tail_should_have_vanishing_sums(self):
        """
        Test S(m) for k_0 = 1, k_n = 0.1 n^-2 at N = 2048

        Pass criteria:
        - TrendHolds with S nonincreasing on the grid
        """
        k = tail_extend(polynomial_series([1.0]), 0.1, 2.0, 1, N=2048)

        report = muller_condition_estimate(k, M_GRID)

        self.assertIs(Verdict.TREND_HOLDS, report.verdict)
        self.assertTrue(report.witness["decreasing"])
        self.assertLess(report.witness["S"]["64"], report.witness["S"]["1"])

    def test_flat_and_slowly_decaying_kernels_should_fail(self):
        """
        Test S(m) for k = 1 and k = (1 - t)^-0.5 at N = 2048

        Pass criteria:
        - both TrendFails
        """
        for k in (binomial_series(1, PowSign.MINUS, 2048), binomial_series(0.5, PowSign.MINUS, 2048)):
            self.assertIs(Verdict.TREND_FAILS, muller_condition_estimate(k, M_GRID).verdict)

    def test_grid_beyond_half_window_should_raise(self):
        """
        Test muller_condition_estimate with m > N/2

        Pass criteria:
        - InvalidArgumentError
        """
        with self.assertRaises(InvalidArgumentError):
            muller_condition_estimate(binomial_series(1, PowSign.MINUS, 16), [1, 9])

    def test_inverse_square_should_be_log_convex_up_to_order_two(self):
        """
        Test muller_sufficient_check on k_n = (n+1)^-2

        Pass criteria:
        - Holds with passing orders 1.5 and 2; order 3 fails
        """
        k = _weights(np.arange(1, 1026, dtype=float) ** -2.0)

        report = muller_sufficient_check(k)

        self.assertIs(Verdict.HOLDS, report.verdict)
        self.assertEqual([1.5, 2.0], report.witness["passing_a"])
        self.assertFalse(report.witness["per_a"]["3.0"]["passes"])

    def test_constant_kernel_should_fail_sufficient_check(self):
        """
        Test muller_sufficient_check on k = 1

        Pass criteria:
        - Fails for every order
        """
        report = muller_sufficient_check(_weights(np.ones(256)))

        self.assertIs(Verdict.FAILS, report.verdict)
        self.assertEqual([], report.witness["passing_a"])

    def test_order_not_above_one_should_raise(self):
        """
        Test muller_sufficient_check with a = 1

        Pass criteria:
        - InvalidArgumentError
        """
        with self.assertRaises(InvalidArgumentError):
            muller_sufficient_check(_weights(np.ones(8)), a_grid=[1.0])


class WeightedAlgebraTests(TestCase):
    """
    Tests for weight conditions on omega
    """

    def test_quadratic_weight_should_form_banach_algebra(self):
        """
        Test banach_algebra_condition for omega_n = (n+1)^2 and two failing weights

        Pass criteria:
        - (n+1)^2 TrendHolds
        - omega = 1 and omega = 2^n TrendFails
        """
        n = np.arange(1025, dtype=float)
        self.assertIs(Verdict.TREND_HOLDS, banach_algebra_condition(_weights((n + 1) ** 2)).verdict)
        self.assertIs(Verdict.TREND_FAILS, banach_algebra_condition(_weights(np.ones(1025))).verdict)
        self.assertIs(Verdict.TREND_FAILS, banach_algebra_condition(_weights(2.0 ** np.arange(513))).verdict)

    def test_nonpositive_weight_should_raise(self):
        """
        Test a weight with a zero entry

        Pass criteria:
        - InvalidArgumentError with the index as witness
        """
        with self.assertRaises(InvalidArgumentError) as ctx:
            banach_algebra_condition(_weights([1.0, 2.0, 0.0, 4.0]))

        self.assertEqual(2, ctx.exception.witness)

    def test_tau_condition_should_track_weight_growth(self):
        """
        Test tau_condition_check

        Pass criteria:
        - (n+1)^2 and exp(sqrt(n)) at N = 4096 TrendHolds
        - omega = 1 TrendFails
        """
        n = np.arange(4097, dtype=float)
        self.assertIs(Verdict.TREND_HOLDS, tau_condition_check(_weights((n[:1025] + 1) ** 2)).verdict)
        self.assertIs(Verdict.TREND_HOLDS, tau_condition_check(_weights(np.exp(np.sqrt(n)))).verdict)
        self.assertIs(Verdict.TREND_FAILS, tau_condition_check(_weights(np.ones(1025))).verdict)

    def test_reciprocal_summability_should_read_block_ratio(self):
        """
        Test reciprocal_summability_check

        Pass criteria:
        - (n+1)^2 TrendHolds; omega = 1 TrendFails
        - (n+1) log^2(n+2) at N = 4096 TrendHolds with a block ratio near 0.83
        """
        n = np.arange(4097, dtype=float)
        self.assertIs(Verdict.TREND_HOLDS, reciprocal_summability_check(_weights((n + 1) ** 2)).verdict)
        self.assertIs(Verdict.TREND_FAILS, reciprocal_summability_check(_weights(np.ones(4097))).verdict)

        report = reciprocal_summability_check(_weights((n + 1) * np.log(n + 2) ** 2))
        self.assertIs(Verdict.TREND_HOLDS, report.verdict)
        self.assertAlmostEqual(0.83, report.witness["cauchy_ratio"], delta=0.02)


class HolderExponentTests(TestCase):
    """
    Tests for the Hölder exponent estimate of k
    """

    def test_geometric_kernel_should_pass_small_exponents(self):
        """
        Test holder_exponent_estimate on k_n = 2^-n

        Pass criteria:
        - s = 0.1 and s = 0.3 pass
        """
        report = holder_exponent_estimate(_weights(2.0 ** -np.arange(1025)), s_grid=[0.1, 0.3])

        self.assertIs(Verdict.TREND_HOLDS, report.verdict)
        self.assertTrue(report.witness["per_s"]["0.1"]["passes"])
        self.assertTrue(report.witness["per_s"]["0.3"]["passes"])

    def test_constant_kernel_should_have_no_exponent(self):
        """
        Test holder_exponent_estimate on k = 1

        Pass criteria:
        - TrendFails, no passing s
        """
        report = holder_exponent_estimate(binomial_series(1, PowSign.MINUS, 1024))

        self.assertIs(Verdict.TREND_FAILS, report.verdict)
        self.assertIsNone(report.witness["largest_passing_s"])

    def test_inverse_square_tail_should_stop_at_one_third(self):
        """
        Test holder_exponent_estimate on k_0 = 1, k_n = 0.1 n^-2 at N = 4096

        Pass criteria:
        - largest passing s is 0.3 and s = 0.4 fails
        - the power fit of the tail sums has exponent close to 1
        """
        k = tail_extend(polynomial_series([1.0]), 0.1, 2.0, 1, N=4096)

        report = holder_exponent_estimate(k)

        self.assertEqual(0.3, report.witness["largest_passing_s"])
        self.assertFalse(report.witness["per_s"]["0.4"]["passes"])
        self.assertTrue(report.witness["tail_certified"])
        self.assertAlmostEqual(1.0, report.witness["power_fit"]["epsilon"], delta=0.1)

    def test_exponent_outside_unit_interval_should_raise(self):
        """
        Test holder_exponent_estimate with s = 1

        Pass criteria:
        - InvalidArgumentError
        """
        with self.assertRaises(InvalidArgumentError):
            holder_exponent_estimate(_weights(np.ones(8)), s_grid=[1.0])


class SignPatternTests(TestCase):
    """
    Tests for kernels with prescribed coefficient signs
    """

    def test_generated_kernels_should_follow_the_pattern(self):
        """
        Test generate_sign_pattern_kernel for three patterns at N_total = 512

        Pass criteria:
        - Holds with no mismatches and k_n > 0 throughout
        - inversion residual <= 1e-10
        """
        for text in ("+-", "--", "+-+-+"):
            pair, report = generate_sign_pattern_kernel(SignPattern.from_text(text), 512)
            self.assertIs(Verdict.HOLDS, report.verdict, msg=text)
            self.assertEqual([], report.witness["mismatches"], msg=text)
            self.assertEqual((), pair.violations, msg=text)
            self.assertLessEqual(pair.inversion_residual, 1e-10, msg=text)

    def test_mixed_pattern_should_give_positive_second_coefficient(self):
        """
        Test the '+-' pattern

        Pass criteria:
        - alpha_2 > 0 and alpha_3 < 0
        """
        pair, _ = generate_sign_pattern_kernel(SignPattern.from_text("+-"), 512)

        self.assertGreater(pair.alpha.coeffs[2], 0)
        self.assertLess(pair.alpha.coeffs[3], 0)

    def test_negative_pattern_should_have_np_head(self):
        """
        Test the '--' pattern

        Pass criteria:
        - the head alpha_0..alpha_3 is NP
        - 1/alpha weighted by omega = 1/k is bounded with constant 1
        """
        pair, _ = generate_sign_pattern_kernel(SignPattern.from_text("--"), 512)

        self.assertIs(Verdict.HOLDS, classify_np(extend(pair.alpha, 3)).verdict)
        report = check_inverse_weighted_bound(pair.alpha, _weights(1.0 / pair.k.coeffs))
        self.assertIs(Verdict.TREND_HOLDS, report.verdict)
        self.assertAlmostEqual(1.0, report.witness["C"], places=8)

    def test_bad_pattern_text_should_raise(self):
        """
        Test SignPattern.from_text and construction with bad input

        Pass criteria:
        - InvalidArgumentError for a letter, an empty pattern and a decay <= 1
        """
        with self.assertRaises(InvalidArgumentError):
            SignPattern.from_text("+x-")
        with self.assertRaises(InvalidArgumentError):
            SignPattern.from_text("")
        with self.assertRaises(InvalidArgumentError):
            SignPattern((1, -1), decay=1.0)

    def test_pattern_should_print_as_signs(self):
        """
        Test SignPattern parsing of the comma form

        Pass criteria:
        - '+1,-1,+1' reads as '+-+' of degree 4
        """
        pattern = SignPattern.from_text("+1,-1,+1")

        self.assertEqual("+-+", str(pattern))
        self.assertEqual(4, pattern.degree)


class KernelSuiteTests(TestCase):
    """
    Tests for the full condition suite
    """

    def test_suite_should_report_every_condition(self):
        """
        Test kernel_suite on (1 - t)^0.5 at N = 1024

        Pass criteria:
        - ten reports with distinct condition ids
        - every report serializes with its verdict
        """
        pair = reciprocal(binomial_series(0.5, PowSign.PLUS, 1024), 1024)

        reports = kernel_suite(pair, circle_samples=1024)

        ids = {report.condition_id for report in reports}
        expected = {
            ConditionId.NP_TYPE,
            ConditionId.CRITICAL_TYPE,
            ConditionId.HYP_A,
            ConditionId.HYP_B,
            ConditionId.MULLER_CONDITION,
            ConditionId.MULLER_SUFFICIENT,
            ConditionId.BANACH_ALG,
            ConditionId.TAU_CONDITION,
            ConditionId.RECIPROCAL_SUMMABILITY,
            ConditionId.HOLDER_EXPONENT,
        }
        self.assertEqual(expected, ids)
        self.assertEqual(10, len(reports))
        for report in reports:
            self.assertEqual(report.verdict.value, report.to_dict()["verdict"])

    def test_suite_should_stop_at_structural_checks_when_k_changes_sign(self):
        """
        Test kernel_suite on 1 + t/2

        Pass criteria:
        - only the four structural reports
        """
        reports = kernel_suite(reciprocal(polynomial_series([1, 0.5]), 64), circle_samples=256)

        self.assertEqual(4, len(reports))
