"""
Property tests for series arithmetic, the kernel spec printer and operator helpers
"""

from unittest import TestCase

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ...kernel_spec import FileRef, Inv, Mul, Poly, Pow1mt, TailExtend, parse_kernel_spec, to_text
from ...operator_core import Direction, hermitian_sqrt, operator_norm, power, shift_section
from ...series_core import (
    PowSign,
    binomial_series,
    cauchy_product,
    cesaro_number,
    cesaro_number_gamma,
    polynomial_series,
    series_reciprocal,
)

PROPERTY_SETTINGS = settings(max_examples=60, deadline=None)

coefficient = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
constant = st.floats(min_value=0.1, max_value=10.0)
small = st.floats(min_value=-0.1, max_value=0.1)


def spec_trees():
    """Trees whose constant terms never vanish, so every Inv is well formed"""
    leaves = st.one_of(
        st.builds(Pow1mt, st.floats(min_value=-5.0, max_value=5.0)),
        st.builds(lambda head, rest: Poly((head, *rest)), constant, st.lists(coefficient, max_size=4)),
        st.builds(FileRef, st.text(st.characters(blacklist_categories=("Cs",)), max_size=12)),
    )

    def extend(children):
        return st.one_of(
            st.builds(Inv, children),
            st.builds(Mul, children, children),
            st.builds(
                TailExtend,
                children,
                st.floats(min_value=1e-6, max_value=1e3),
                st.floats(min_value=0.1, max_value=10.0),
                st.integers(min_value=1, max_value=64),
            ),
        )

    return st.recursive(leaves, extend, max_leaves=8)


class SeriesPropertyTests(TestCase):
    """
    Property tests for truncated series arithmetic
    """

    @PROPERTY_SETTINGS
    @given(st.lists(coefficient, min_size=1, max_size=12), st.lists(coefficient, min_size=1, max_size=12))
    def test_cauchy_product_should_commute(self, f, g):
        """
        Test f g = g f

        Pass criteria:
        - equal coefficients to rounding, truncated to the shorter operand
        """
        fg = cauchy_product(polynomial_series(f), polynomial_series(g))
        gf = cauchy_product(polynomial_series(g), polynomial_series(f))

        self.assertEqual(min(len(f), len(g)), fg.trunc_len)
        np.testing.assert_allclose(fg.coeffs, gf.coeffs, rtol=1e-12, atol=1e-12)

    @PROPERTY_SETTINGS
    @given(st.floats(min_value=0.5, max_value=10.0), st.lists(small, max_size=8))
    def test_reciprocal_should_invert(self, head, rest):
        """
        Test f * (1/f) = 1 to degree 8 for f_0 in [0.5, 10] and small higher coefficients

        Pass criteria:
        - the product is the series 1 within 1e-10
        """
        f = polynomial_series([head, *rest], N=8)

        product = cauchy_product(f, series_reciprocal(f, 8))

        np.testing.assert_allclose(product.coeffs, np.eye(1, 9)[0], atol=1e-10)

    @PROPERTY_SETTINGS
    @given(st.floats(min_value=0.05, max_value=5.0), st.integers(min_value=0, max_value=200))
    def test_cesaro_recurrence_should_match_gamma_formula(self, a, n):
        """
        Test k^a(n) from the recurrence against the Gamma formula

        Pass criteria:
        - relative agreement to 1e-10
        """
        self.assertAlmostEqual(1.0, cesaro_number(a, n) / cesaro_number_gamma(a, n), delta=1e-10)

    @PROPERTY_SETTINGS
    @given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=-3.0, max_value=3.0))
    def test_binomial_exponents_should_add(self, a, b):
        """
        Test (1 - t)^a (1 - t)^b = (1 - t)^(a + b) to degree 16

        Pass criteria:
        - agreement within 1e-9
        """
        product = cauchy_product(binomial_series(a, PowSign.PLUS, 16), binomial_series(b, PowSign.PLUS, 16))

        np.testing.assert_allclose(product.coeffs, binomial_series(a + b, PowSign.PLUS, 16).coeffs, atol=1e-9)


class KernelSpecPropertyTests(TestCase):
    """
    Property tests for the canonical printer
    """

    @PROPERTY_SETTINGS
    @given(spec_trees())
    def test_canonical_text_should_reparse_to_same_tree(self, ast):
        """
        Test parse(to_text(ast)) on generated trees

        Pass criteria:
        - the same tree, and printing again gives the same text
        """
        text = to_text(ast)
        reparsed = parse_kernel_spec(text)

        self.assertEqual(ast, reparsed)
        self.assertEqual(text, to_text(reparsed))


class OperatorPropertyTests(TestCase):
    """
    Property tests for operator helpers
    """

    @PROPERTY_SETTINGS
    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2**32 - 1))
    def test_square_root_should_square_back(self, d, seed):
        """
        Test hermitian_sqrt on X X* for seeded complex X

        Pass criteria:
        - the root is Hermitian and squares back to X X*
        """
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        A = X @ X.conj().T

        root = hermitian_sqrt(A).entries

        scale = max(1.0, operator_norm(A))
        np.testing.assert_allclose(root, root.conj().T, atol=1e-10 * scale)
        np.testing.assert_allclose(root @ root, A, atol=1e-9 * scale)

    @PROPERTY_SETTINGS
    @given(st.floats(min_value=0.05, max_value=0.95), st.integers(min_value=1, max_value=8))
    def test_backward_shift_power_norms_should_follow_weights(self, s, m):
        """
        Test ||B^m||^2 = 1 / k^s(m) on the section of the shift with weights k^s, d = 32

        Pass criteria:
        - relative agreement to 1e-10
        """
        B = shift_section(binomial_series(s, PowSign.MINUS, 32), Direction.BACKWARD, 32).operator

        self.assertAlmostEqual(1.0, operator_norm(power(B, m)) ** 2 * cesaro_number(s, m), delta=1e-10)
