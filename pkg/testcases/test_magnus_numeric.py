import os
from fractions import Fraction
from itertools import product
from unittest import mock

import pytest
import softest
import sympy as sym
from ddt import ddt, data, unpack

from dendriform.tree_series import TreeDendriform
from forest.rooted_tree import VERTEX, corolla, enumerate_rooted, ladder
from paths.linalg import inf_norm, rk4_reference, to_float_matrix
from paths.magnus_numeric import (
    THREADS_ENV,
    GradedPath,
    MagnusRoutes,
    graded_product,
    resolve_workers,
    right_nested_words,
)
from paths.mat_poly_path import MatPolyPath, default_path
from utilities.exceptions import AugmentationError, ConfigurationError, DegreeError, TruncationMismatchError


@ddt
@pytest.mark.usefixtures("setup")
class TestMagnusRoutes(softest.TestCase):
    """Tree, pre-Lie and permutation routes on the path given by --path-file."""

    @pytest.fixture(autouse=True)
    def class_setup(self, setup):
        self.routes = MagnusRoutes(self.path)
        self.a = self.path

    def test_tree_evaluation(self):
        self.soft_assert(self.assertEqual, self.routes.eval_tree_path(VERTEX), MatPolyPath.identity(self.a.dim))
        self.soft_assert(self.assertEqual, self.routes.eval_tree_path(ladder(1)), self.a)
        self.soft_assert(self.assertEqual, self.routes.eval_tree_path(corolla(2)), self.a @ self.a.integrate())
        self.soft_assert(self.assertEqual, self.routes.eval_tree_path(ladder(2)), self.a.integrate() @ self.a)
        self.assert_all()

    def test_tree_evaluation_is_a_morphism(self):
        algebra = TreeDendriform(4)
        adapter = self.routes.adapter
        basis = [tau for n in range(1, 3) for tau in enumerate_rooted(n)]
        for s, t in product(basis, repeat=2):
            x, y = algebra.tree(s), algebra.tree(t)
            left, right = self.routes.eval_tree_path(s), self.routes.eval_tree_path(t)
            label = f"{s.render()}, {t.render()}"
            self.soft_assert(self.assertEqual, self.routes.eval_tree_series(algebra.prec(x, y)),
                             adapter.prec(left, right), label)
            self.soft_assert(self.assertEqual, self.routes.eval_tree_series(algebra.succ(x, y)),
                             adapter.succ(left, right), label)
            self.soft_assert(self.assertEqual, self.routes.eval_tree_series(algebra.star(x, y)),
                             adapter.star(left, right), label)
        self.assert_all()

    def test_routes_agree_degree_by_degree(self):
        closed = self.routes.closed_tree_components(4)
        prelie = self.routes.prelie_components(4)
        permutations = self.routes.mps_components(4)
        for n in range(1, 5):
            self.soft_assert(self.assertEqual, closed[n], permutations[n], f"closed tree route, degree {n}")
            self.soft_assert(self.assertEqual, prelie[n], permutations[n], f"pre-Lie route, degree {n}")
        self.assert_all()

    def test_first_order_is_the_integral(self):
        s = Fraction(1, 4)
        self.assertEqual(self.routes.mps_omega(1, s), self.a.integrate().evaluate(s))

    def test_classical_terms(self):
        classical = self.routes.magnus_classical_terms()
        components = self.routes.mps_components(3)
        self.soft_assert(self.assertEqual, components[2], classical[2])
        self.soft_assert(self.assertEqual, components[3], classical[3])
        self.assert_all()

    @data(2, 3, 4)
    def test_right_nested_bracket_form(self, n: int):
        words, brackets = self.routes.dsw_check(n, Fraction(1, 4))
        self.assertEqual(words, brackets)

    def test_evaluation_convention(self):
        passed, message = self.routes.check_evaluation_convention()
        self.assertTrue(passed, message)

    def test_mirrored_evaluation_is_detected(self):
        passed, message = MagnusRoutes(self.a, mirrored_evaluation=True).check_evaluation_convention()
        self.assertFalse(passed)
        self.assertIn("mirrored", message)

    def test_degree_errors(self):
        for route in (self.routes.closed_tree_components, self.routes.prelie_components,
                      self.routes.mps_components, self.routes.chen_path):
            with self.assertRaises(DegreeError):
                route(0)
        with self.assertRaises(DegreeError):
            self.routes.dsw_check(1, Fraction(1, 4))
        with self.assertRaises(DegreeError):
            self.routes.dsw_check(6, Fraction(1, 4))


@ddt
class TestScalarPaths(softest.TestCase):
    """For a scalar path everything commutes and Ω collapses to R(a)."""

    @data(1, 2, 3, 4)
    def test_constant_path(self, n: int):
        routes = MagnusRoutes(MatPolyPath.from_coefficients([[["1"]]]))
        self.assertEqual(routes.mps_omega(n, Fraction(1, 3)), sym.Matrix([[sym.Rational(1, 3)]]))

    @data(2, 3, 4)
    def test_linear_path(self, n: int):
        a = MatPolyPath.from_coefficients([[["1", "1"]]])
        routes = MagnusRoutes(a)
        components = routes.mps_components(n)
        self.soft_assert(self.assertEqual, components[1], a.integrate())
        for degree in range(2, n + 1):
            self.soft_assert(self.assertTrue, components[degree].is_zero(), f"degree {degree}")
        self.soft_assert(self.assertEqual, routes.closed_tree_omega(n, Fraction(1, 2)),
                         sym.Matrix([[sym.Rational(5, 8)]]))
        self.assert_all()


@ddt
class TestAccuracy(softest.TestCase):

    def setUp(self):
        self.routes = MagnusRoutes(default_path())

    def test_first_order_default_value(self):
        expected = sym.Matrix([[0, sym.Rational(1, 4)], [sym.Rational(-9, 32), 0]])
        self.assertEqual(self.routes.mps_omega(1, Fraction(1, 4)), expected)

    @data(3, 4)
    def test_ode_residual_order(self, n: int):
        scan = self.routes.order_scan(n)
        self.assertIsNone(scan[0].order)
        for point in scan[1:]:
            self.soft_assert(self.assertGreaterEqual, point.order, n + 1 - 0.3, str(point))
        self.assert_all()

    @data(3, 4)
    def test_spitzer_residual_order(self, n: int):
        for point in self.routes.order_scan(n, reference_levels=None)[1:]:
            self.soft_assert(self.assertAlmostEqual, point.order, n + 1, None, str(point), 0.3)
        self.assert_all()

    def test_residual_shrinks_with_degree(self):
        s = Fraction(1, 4)
        residuals = [self.routes.ode_residual(n, s) for n in range(1, 5)]
        self.assertEqual(residuals, sorted(residuals, reverse=True))
        self.assertLess(residuals[-1], 1e-4)

    def test_chen_series_matches_rk4(self):
        chen = to_float_matrix(self.routes.chen_reference(14, Fraction(1, 4)))
        self.assertLess(inf_norm(chen - rk4_reference(default_path(), 0.25)), 1e-9)


@ddt
class TestGradedPaths(softest.TestCase):

    def setUp(self):
        self.a = default_path()

    def test_degree_zero_is_rejected(self):
        with self.assertRaises(AugmentationError):
            GradedPath(3, {0: self.a}, 2)

    def test_product_truncates(self):
        x = GradedPath(2, {1: self.a, 2: self.a @ self.a}, 2)
        product = graded_product(lambda f, g: f @ g)(x, x)
        self.assertEqual(set(product.parts), {2})
        self.assertEqual(product.part(2), self.a @ self.a)
        self.assertTrue(product.part(1).is_zero())

    def test_truncation_mismatch(self):
        with self.assertRaises(TruncationMismatchError):
            GradedPath(2, {1: self.a}, 2) + GradedPath(3, {1: self.a}, 2)

    @data(((1,), {(1,): 1}),
          ((1, 2), {(1, 2): 1, (2, 1): -1}),
          ((1, 2, 3), {(1, 2, 3): 1, (2, 3, 1): -1, (1, 3, 2): -1, (3, 2, 1): 1}))
    @unpack
    def test_right_nested_words(self, word, expected):
        self.assertEqual(dict(right_nested_words(word)), expected)


class TestWorkers(softest.TestCase):

    def test_resolve_workers_respects_the_cap(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: "2"}):
            self.soft_assert(self.assertEqual, resolve_workers(8), 2)
            self.soft_assert(self.assertEqual, resolve_workers(1), 1)
            self.soft_assert(self.assertEqual, resolve_workers(0), 1)
        self.assert_all()

    def test_parallel_route_matches_sequential(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: "2"}):
            parallel = MagnusRoutes(default_path(), workers=2)
        sequential = MagnusRoutes(default_path())
        self.assertEqual(parallel.mps_components(3), sequential.mps_components(3))

    def test_malformed_thread_cap_names_the_variable(self):
        for value in ("many", "1.5", "0"):
            with mock.patch.dict(os.environ, {THREADS_ENV: value}):
                with self.assertRaises(ConfigurationError) as raised:
                    resolve_workers(2)
            self.soft_assert(self.assertIn, THREADS_ENV, str(raised.exception))
        self.assert_all()
