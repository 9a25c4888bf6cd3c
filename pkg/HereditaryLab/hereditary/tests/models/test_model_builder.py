"""
Test defect operators, transforms and model verification
"""

import dataclasses
import math
from unittest import TestCase

import numpy as np

from ...exceptions import ModelInvalidError, PreconditionError
from ...kernel_analysis import SignPattern, generate_sign_pattern_kernel
from ...model_builder import (
    build_defect,
    build_model_bundle,
    build_transform,
    build_W_S,
    defect_map,
    minimality_check,
    trivial_unitary_model,
    two_model_witness,
    unitary_invariance,
    verify_model,
    verify_np_contraction,
    verify_relation_DCW,
)
from ...operator_core import (
    DenseOperator,
    Direction,
    diagonal_unitary,
    probe_vectors,
    random_unitary,
    shift_section,
)
from ...series_core import (
    PowSign,
    binomial_series,
    evaluate,
    polynomial_series,
    series_reciprocal,
    tail_extend,
)

SQRT_ALPHA = binomial_series(0.5, PowSign.PLUS, 256)
SQRT_K = binomial_series(0.5, PowSign.MINUS, 256)


def section(kappa, d):
    return shift_section(kappa, Direction.BACKWARD, d).operator


class DefectTests(TestCase):
    """
    Tests for the defect operator and its range
    """

    def test_hardy_section_should_have_rank_one_defect(self):
        """
        Test build_defect for 1 - t on the backward section with kappa = 1, d = 4

        Pass criteria:
        - rank 1, spanned by e_0
        """
        T = section(binomial_series(1, PowSign.MINUS, 4), 4)

        D, basis = build_defect(polynomial_series([1, -1]), T)

        self.assertEqual((4, 1), basis.shape)
        self.assertAlmostEqual(1.0, abs(basis[0, 0]), places=12)
        np.testing.assert_allclose(D.entries, np.diag([1.0, 0.0, 0.0, 0.0]), atol=1e-12)

    def test_unitary_should_have_full_rank_defect(self):
        """
        Test build_defect for 1 - t/2 on a random unitary

        Pass criteria:
        - D = sqrt(1/2) I with full rank
        - C = basis* D keeps the norms of D
        """
        T = DenseOperator(random_unitary(5, seed=2))

        D, basis = build_defect(polynomial_series([1, -0.5]), T)
        C = defect_map(D, basis)

        self.assertEqual(5, basis.shape[1])
        np.testing.assert_allclose(D.entries, math.sqrt(0.5) * np.eye(5), atol=1e-12)
        x = probe_vectors(5, 1, seed=4, include_basis=False)[0]
        self.assertAlmostEqual(np.linalg.norm(D.entries @ x), np.linalg.norm(C @ x), places=12)


class ProjectionIdentityBundleTests(TestCase):
    """
    Tests for the model of the backward shift section on k = 1/alpha
    """

    def test_bundle_should_have_unitary_transform_and_no_complement(self):
        """
        Test build_model_bundle for (1 - t)^0.5 on the section on k^0.5, d = 16 and d = 64

        Pass criteria:
        - |V| = I, W = 0 with an empty range basis
        - every residual <= 1e-10, contraction excess <= 1e-8
        """
        for d in (16, 64):
            T = section(SQRT_K, d)

            bundle = build_model_bundle(SQRT_ALPHA, SQRT_K, T)

            np.testing.assert_allclose(np.abs(bundle.V), np.eye(d), atol=1e-10)
            np.testing.assert_allclose(bundle.W.entries, np.zeros((d, d)), atol=1e-10)
            self.assertEqual(0, bundle.W_basis.shape[1])
            for key in ("isometry_residual", "intertwine_residual", "S_residual"):
                self.assertLessEqual(bundle.diagnostics[key], 1e-10, msg=f"d={d}, {key}")
            self.assertLessEqual(bundle.diagnostics["contraction_excess"], 1e-8)
            self.assertEqual("Critical", bundle.diagnostics["type"])

    def test_bundle_should_be_minimal(self):
        """
        Test minimality_check on the d = 16 bundle

        Pass criteria:
        - minimal; padding C with a zero row breaks the range condition
        """
        bundle = build_model_bundle(SQRT_ALPHA, SQRT_K, section(SQRT_K, 16))

        report = minimality_check(bundle)
        self.assertTrue(report["minimal"])
        self.assertEqual("Holds", report["range_C"])

        padded = dataclasses.replace(bundle, C=np.vstack([bundle.C, np.zeros((1, 16))]))
        report = minimality_check(padded)
        self.assertFalse(report["minimal"])
        self.assertEqual("Fails", report["range_C"])

    def test_relation_DCW_should_hold_on_random_probes(self):
        """
        Test ||Dx||^2 = ||Cx||^2 + alpha(1) ||Wx||^2

        Pass criteria:
        - residual <= 1e-8 over 50 random probes
        """
        T = section(SQRT_K, 16)
        bundle = build_model_bundle(SQRT_ALPHA, SQRT_K, T)

        relation = verify_relation_DCW(SQRT_ALPHA, T, bundle.C, bundle.W, probe_vectors(16, 50, seed=9))

        self.assertLessEqual(relation["residual"], 1e-8)

    def test_contraction_should_pass_for_np_kernel(self):
        """
        Test verify_np_contraction on the d = 16 bundle

        Pass criteria:
        - passes with excess <= 1e-8
        """
        T = section(SQRT_K, 16)
        bundle = build_model_bundle(SQRT_ALPHA, SQRT_K, T)

        report = verify_np_contraction(SQRT_ALPHA, T, bundle.V)

        self.assertTrue(report["passes"])
        self.assertLessEqual(report["contraction_excess"], 1e-8)


class PairSectionBundleTests(TestCase):
    """
    Tests for models on sections built from generated kernel pairs
    """

    def assert_section_model(self, alpha, k):
        bundle = build_model_bundle(alpha, k, section(k, 64))
        self.assertLessEqual(bundle.diagnostics["isometry_residual"], 1e-8)
        self.assertLessEqual(bundle.diagnostics["intertwine_residual"], 1e-10)

    def test_power_tail_kernel_should_give_valid_model(self):
        """
        Test the section on k_0 = 1, k_n = 0.1 n^-2 with alpha = 1/k

        Pass criteria:
        - isometry residual <= 1e-8, intertwining residual <= 1e-10
        """
        k = tail_extend(polynomial_series([1.0]), 0.1, 2.0, 1, N=256)

        self.assert_section_model(series_reciprocal(k, 256), k)

    def test_sign_pattern_kernel_should_give_valid_model(self):
        """
        Test the section on the '+-' sign-pattern kernel

        Pass criteria:
        - isometry residual <= 1e-8, intertwining residual <= 1e-10
        """
        pair, _ = generate_sign_pattern_kernel(SignPattern.from_text("+-"), 256)

        self.assert_section_model(pair.alpha, pair.k)


class TransformTests(TestCase):
    """
    Tests for the transform V and the complement W
    """

    def test_scalar_transform_should_match_kernel_value(self):
        """
        Test ||V x||^2 for T = 1/2, C = c and k = 1/(1 - t)

        Pass criteria:
        - ||V||^2 = c^2 k(1/4) = c^2 / 0.75
        """
        c = 0.5
        k = binomial_series(1, PowSign.MINUS, 64)

        transform = build_transform(np.array([[c]]), k, DenseOperator(np.array([[0.5]])))

        expected = c * c * evaluate(k, 0.25).value.real
        self.assertAlmostEqual(expected, float(np.linalg.norm(transform.V) ** 2), delta=1e-8)
        self.assertAlmostEqual(c * c / 0.75, expected, places=12)
        self.assertLessEqual(transform.tail_bound, 1e-9)

    def test_complement_of_zero_transform_should_be_identity(self):
        """
        Test build_W_S with V = 0 on a unitary

        Pass criteria:
        - W = I and S is the unitary itself in the range basis
        """
        T = diagonal_unitary([0.2, 0.9, 2.0])

        W, S, Q, residuals = build_W_S(np.zeros((0, 3)), T)

        np.testing.assert_allclose(W.entries, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(Q @ S @ Q.conj().T, T.entries, atol=1e-10)
        self.assertLessEqual(residuals["S_welldef_residual"], 1e-10)

    def test_transform_above_unit_norm_should_raise(self):
        """
        Test build_W_S with ||V|| = 2

        Pass criteria:
        - PreconditionError
        """
        with self.assertRaises(PreconditionError):
            build_W_S(2.0 * np.eye(2), DenseOperator(np.eye(2)))


class PreconditionTests(TestCase):
    """
    Tests for refused and invalid models
    """

    def test_operator_outside_class_should_be_refused(self):
        """
        Test verify_np_contraction for 1.5 times the Hardy section

        Pass criteria:
        - PreconditionError
        """
        T = DenseOperator(1.5 * section(binomial_series(1, PowSign.MINUS, 4), 4).entries)

        with self.assertRaises(PreconditionError):
            verify_np_contraction(SQRT_ALPHA, T, np.zeros((1, 4)))

    def test_non_np_kernel_should_be_refused(self):
        """
        Test verify_np_contraction with alpha = 1 + t/2

        Pass criteria:
        - PreconditionError
        """
        with self.assertRaises(PreconditionError):
            verify_np_contraction(polynomial_series([1, 0.5]), DenseOperator(np.zeros((2, 2))), np.zeros((1, 2)))

    def test_negative_defect_should_invalidate_model(self):
        """
        Test build_model_bundle for 1 - t on T = 2 I

        Pass criteria:
        - ModelInvalidError carrying the negative eigenvalue
        """
        with self.assertRaises(ModelInvalidError) as ctx:
            build_model_bundle(polynomial_series([1, -1]), binomial_series(1, PowSign.MINUS, 64), DenseOperator(2 * np.eye(2)))

        self.assertAlmostEqual(-3.0, ctx.exception.witness)


class UnitaryModelTests(TestCase):
    """
    Tests for models of unitary operators
    """

    def test_relation_DCW_should_hold_for_trivial_unitary_model(self):
        """
        Test ||Dx||^2 = alpha(1) ||x||^2 with C absent and W = I

        Pass criteria:
        - residual <= 1e-10 over 100 probes
        """
        T = DenseOperator(random_unitary(8, seed=3))
        alpha = polynomial_series([1, -0.5])

        relation = verify_relation_DCW(alpha, T, np.zeros((0, 8)), DenseOperator(np.eye(8)), probe_vectors(8, 100, seed=1))

        self.assertLessEqual(relation["residual"], 1e-10)
        self.assertEqual(0.5, relation["alpha_at_one"])

    def test_trivial_model_should_verify(self):
        """
        Test trivial_unitary_model

        Pass criteria:
        - zero residuals and rank 0
        """
        T = diagonal_unitary([0.1, 0.7])
        model = trivial_unitary_model(polynomial_series([1, -0.5]), binomial_series(1, PowSign.MINUS, 8), T)

        self.assertEqual(0, model.rank)
        checks = verify_model(T, model, B_section=DenseOperator(np.zeros((1, 1))))
        self.assertLessEqual(max(checks.values()), 1e-12)

    def test_subcritical_kernel_should_give_two_distinct_models(self):
        """
        Test two_model_witness with k_0 = 1, k_n = 0.05 n^-4 on a diagonal unitary

        Pass criteria:
        - both models verify and the defect model has positive rank
        """
        k = tail_extend(polynomial_series([1.0]), 0.05, 4.0, 1, N=4096)
        alpha = series_reciprocal(k, 4096)

        witness = two_model_witness(alpha, k, diagonal_unitary([0.3, 1.7, 4.0]))

        self.assertTrue(witness["both_verified"])
        self.assertTrue(witness["distinct"])

    def test_critical_kernel_should_be_refused(self):
        """
        Test two_model_witness with (1 - t)^0.5

        Pass criteria:
        - PreconditionError
        """
        with self.assertRaises(PreconditionError):
            two_model_witness(SQRT_ALPHA, SQRT_K, diagonal_unitary([0.0, 1.0]))

    def test_non_unitary_operator_should_be_refused(self):
        """
        Test two_model_witness with T = I/2

        Pass criteria:
        - PreconditionError
        """
        with self.assertRaises(PreconditionError):
            two_model_witness(polynomial_series([1, -0.5]), SQRT_K, DenseOperator(0.5 * np.eye(2)))

    def test_diagnostics_should_not_depend_on_basis(self):
        """
        Test unitary_invariance for the section on k^0.5, d = 8

        Pass criteria:
        - every scalar diagnostic moves by at most 1e-6
        """
        T = section(SQRT_K, 8)

        report = unitary_invariance(SQRT_ALPHA, SQRT_K, T, random_unitary(8, seed=21))

        self.assertLessEqual(report["max_change"], 1e-6)
