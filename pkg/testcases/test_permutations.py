from fractions import Fraction
from itertools import product
from math import comb, factorial

import softest
from ddt import ddt, data, unpack

from base.dendriform_laws import dendriform_axiom_residuals
from dendriform.binary_products import binary_prec, binary_succ
from dendriform.magnus import descent_magnus_coefficient
from dendriform.tree_series import TreeDendriform
from forest.binary_tree import LEAF, Y, descent_count, enumerate_binary, graft_vee
from forest.leveled import LeveledBinaryTree
from forest.rooted_tree import corolla, ladder
from shuffle.level_maps import (
    fiber,
    leveled_to_perm,
    mps_coefficient,
    perm_to_leveled,
    psi,
    psi_star,
    psi_star_series,
)
from shuffle.perm_series import PermDendriform, PermSeries
from shuffle.permutation import (
    Permutation,
    compose,
    concatenate,
    descent_count_perm,
    enumerate_permutations,
    eulerian_numbers,
    identity,
    shuffle_set,
    standardize,
)
from utilities.exceptions import DegreeError, InvalidPermutationError, UnitHalfProductError


def perms(*texts):
    return tuple(Permutation.parse(text) for text in texts)


@ddt
class TestPermutationBasics(softest.TestCase):

    @data(("(341)", "(231)"), ("(25)", "(12)"), ("(2413)", "(2413)"))
    @unpack
    def test_standardize(self, word: str, expected: str):
        values = tuple(int(v) for v in word.strip("()"))
        self.assertEqual(standardize(values), Permutation.parse(expected))

    def test_standardize_rejects_repeats(self):
        with self.assertRaises(InvalidPermutationError):
            standardize((3, 3, 1))

    def test_invalid_word(self):
        with self.assertRaises(InvalidPermutationError):
            Permutation((1, 3))
        with self.assertRaises(InvalidPermutationError):
            Permutation.parse("123")

    def test_descents(self):
        sigma = Permutation.parse("(3142)")
        self.assertEqual(sigma.descent_set(), (1, 3))
        self.assertEqual(descent_count_perm(identity(5)), 0)
        self.assertEqual(descent_count_perm(Permutation.parse("(4321)")), 3)

    def test_concatenate_and_compose(self):
        sigma, tau = perms("(21)", "(1)")
        self.assertEqual(concatenate(sigma, tau), Permutation.parse("(213)"))
        omega = Permutation.parse("(132)")
        self.assertEqual(compose(omega, Permutation.parse("(213)")), Permutation.parse("(312)"))
        self.assertEqual(compose(sigma, sigma.inverse()), identity(2))

    @data((1, (1,)), (2, (1, 1)), (3, (1, 4, 1)), (4, (1, 11, 11, 1)), (5, (1, 26, 66, 26, 1)))
    @unpack
    def test_eulerian_numbers(self, n: int, expected):
        self.assertEqual(eulerian_numbers(n), expected)

    def test_render_and_parse(self):
        sigma = Permutation(tuple(range(10, 0, -1)))
        self.assertEqual(sigma.render(), "(10,9,8,7,6,5,4,3,2,1)")
        self.assertEqual(Permutation.parse(sigma.render()), sigma)
        self.assertEqual(Permutation.parse("()").n, 0)


@ddt
class TestShuffles(softest.TestCase):

    def test_singleton_shuffles(self):
        self.assertEqual(shuffle_set(1, 1, "all"), perms("(12)", "(21)"))
        self.assertEqual(shuffle_set(1, 1, "sh1"), perms("(12)"))
        self.assertEqual(shuffle_set(1, 1, "sh2"), perms("(21)"))

    @data(*[(n, m) for n in range(1, 6) for m in range(1, 6)])
    @unpack
    def test_split_sizes(self, n: int, m: int):
        everything = set(shuffle_set(n, m, "all"))
        first, second = set(shuffle_set(n, m, "sh1")), set(shuffle_set(n, m, "sh2"))
        self.soft_assert(self.assertEqual, len(everything), comb(n + m, n))
        self.soft_assert(self.assertEqual, len(first), comb(n + m - 1, n))
        self.soft_assert(self.assertEqual, first | second, everything)
        self.soft_assert(self.assertFalse, first & second)
        self.assert_all()

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            shuffle_set(1, 1, "sh3")
        with self.assertRaises(ValueError):
            shuffle_set(0, 2, "sh1")
        self.assertEqual(len(shuffle_set(0, 2, "all")), 1)


@ddt
class TestPermDendriform(softest.TestCase):

    def setUp(self):
        self.algebra = PermDendriform(5)
        self.one = self.algebra.perm(identity(1))

    def test_singleton_products(self):
        self.assertEqual(self.algebra.prec(self.one, self.one), self.algebra.perm(Permutation.parse("(21)")))
        self.assertEqual(self.algebra.succ(self.one, self.one), self.algebra.perm(identity(2)))
        self.assertEqual(self.algebra.star(self.one, self.one),
                         PermSeries.sum_of(perms("(12)", "(21)"), 5))

    @data(*[(n, m) for n in range(1, 4) for m in range(1, 3)])
    @unpack
    def test_star_coefficient_sum(self, n: int, m: int):
        sigma, tau = enumerate_permutations(n)[-1], enumerate_permutations(m)[0]
        product_series = self.algebra.star(self.algebra.perm(sigma), self.algebra.perm(tau))
        self.assertEqual(sum(c for _, c in product_series), comb(n + m, n))

    def test_dendriform_axioms(self):
        basis = [sigma for n in range(1, 3) for sigma in enumerate_permutations(n)]
        for triple in product(basis, repeat=3):
            if sum(sigma.n for sigma in triple) > 5:
                continue
            x, y, z = (self.algebra.perm(sigma) for sigma in triple)
            for residual in dendriform_axiom_residuals(self.algebra.prec, self.algebra.succ, x, y, z):
                self.soft_assert(self.assertTrue, residual.is_zero(), str(triple))
        self.assert_all()

    def test_unit(self):
        unit = PermSeries.unit(5)
        x = self.algebra.perm(Permutation.parse("(231)"), Fraction(2, 3))
        self.assertEqual(self.algebra.star(unit, x), x)
        self.assertEqual(self.algebra.star(x, unit), x)
        with self.assertRaises(UnitHalfProductError):
            self.algebra.prec(unit, x)

    def test_json_keys_are_integer_arrays(self):
        series = self.algebra.perm(Permutation.parse("(21)"), Fraction(-1, 2))
        payload = series.to_json()
        self.assertEqual(payload["terms"][0]["perm"], [2, 1])
        self.assertEqual(PermSeries.from_json(payload), series)


@ddt
class TestLevelMaps(softest.TestCase):

    def test_small_cases(self):
        self.assertEqual(perm_to_leveled(identity(1)), LeveledBinaryTree(Y, (1,)))
        self.assertEqual(psi(identity(2)), graft_vee(Y, LEAF))
        self.assertEqual(psi(Permutation.parse("(21)")), graft_vee(LEAF, Y))

    @data(*range(1, 7))
    def test_round_trip(self, n: int):
        for sigma in enumerate_permutations(n):
            self.soft_assert(self.assertEqual, leveled_to_perm(perm_to_leveled(sigma)), sigma, sigma.render())
        self.assert_all()

    @data(*range(1, 7))
    def test_descents_are_preserved(self, n: int):
        for sigma in enumerate_permutations(n):
            self.soft_assert(self.assertEqual, descent_count_perm(sigma), descent_count(psi(sigma)), sigma.render())
        self.assert_all()

    def test_balanced_fiber(self):
        self.assertEqual(fiber(graft_vee(Y, Y)), perms("(132)", "(231)"))
        others = [t for t in enumerate_binary(3) if t != graft_vee(Y, Y)]
        self.assertEqual([len(fiber(t)) for t in others], [1, 1, 1, 1])

    @data(*range(1, 7))
    def test_fibers_partition_the_symmetric_group(self, n: int):
        sizes = [len(fiber(t)) for t in enumerate_binary(n)]
        self.assertEqual(sum(sizes), factorial(n))
        for t in enumerate_binary(n):
            self.soft_assert(self.assertTrue, all(psi(sigma) == t for sigma in fiber(t)), t.render())
        self.assert_all()

    def test_psi_star_of_leaf_is_unit(self):
        self.assertEqual(psi_star(LEAF, 3), PermSeries.unit(3))

    def test_empty_permutation_is_rejected(self):
        with self.assertRaises(DegreeError):
            perm_to_leveled(Permutation(()))
        with self.assertRaises(DegreeError):
            mps_coefficient(Permutation(()))

    def test_psi_star_is_a_morphism(self):
        algebra = PermDendriform(5)
        trees = [t for n in range(1, 4) for t in enumerate_binary(n)]
        for s, t in product(trees, repeat=2):
            if s.degree + t.degree > 5:
                continue
            for name, tree_product, perm_product in (("prec", binary_prec, algebra.prec),
                                                     ("succ", binary_succ, algebra.succ)):
                image = algebra.series()
                for tree, coefficient in tree_product(s, t).items():
                    image = image + coefficient * psi_star(tree, 5)
                self.soft_assert(self.assertEqual, image, perm_product(psi_star(s, 5), psi_star(t, 5)),
                                 f"{s.render()} {name} {t.render()}")
        self.assert_all()

    def test_psi_star_series_through_rotation(self):
        algebra = TreeDendriform(3)
        x = algebra.tree(ladder(2)) - algebra.tree(corolla(2), 2)
        expected = PermSeries(3, {identity(2): 1, Permutation.parse("(21)"): -2})
        self.assertEqual(psi_star_series(x), expected)


@ddt
class TestPermutationCoefficients(softest.TestCase):

    @data(("(12)", Fraction(1, 2)), ("(21)", Fraction(-1, 2)), ("(123)", Fraction(1, 3)),
          ("(132)", Fraction(-1, 6)), ("(321)", Fraction(1, 3)))
    @unpack
    def test_values(self, text: str, expected: Fraction):
        self.assertEqual(mps_coefficient(Permutation.parse(text)), expected)

    @data(2, 3, 4, 5)
    def test_sum_vanishes(self, n: int):
        self.assertEqual(sum(mps_coefficient(sigma) for sigma in enumerate_permutations(n)), 0)

    @data(*range(1, 7))
    def test_transport_from_trees(self, n: int):
        for sigma in enumerate_permutations(n):
            self.soft_assert(self.assertEqual, mps_coefficient(sigma), descent_magnus_coefficient(psi(sigma)),
                             sigma.render())
        self.assert_all()
