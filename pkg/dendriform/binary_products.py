"""Dendriform products on planar binary trees, transported from rooted trees through the rotation."""
from fractions import Fraction
from typing import Dict

from dendriform.tree_series import DEFAULT_TRUNC, SplitConvention, TreeDendriform, TreeSeries
from forest.binary_tree import BinaryTree
from forest.correspondence import rotate, unrotate


def _transport(algebra: TreeDendriform, product, s: BinaryTree, t: BinaryTree) -> Dict[BinaryTree, Fraction]:
    result = product(algebra.tree(rotate(s)), algebra.tree(rotate(t)))
    return {unrotate(tau): coefficient for tau, coefficient in result}


def _algebra(s: BinaryTree, t: BinaryTree, convention: SplitConvention) -> TreeDendriform:
    return TreeDendriform(max(s.degree + t.degree, DEFAULT_TRUNC), convention)


def binary_prec(s: BinaryTree, t: BinaryTree,
                convention: SplitConvention = SplitConvention.FIRST_TERM_PREC) -> Dict[BinaryTree, Fraction]:
    """
    s ≺ t on binary trees, as unrotate(rotate(s) ≺ rotate(t)).

    Args:
        s (BinaryTree): Left operand.
        t (BinaryTree): Right operand.
        convention (SplitConvention): Split of the rooted ⋆ recursion.

    Returns:
        Dict[BinaryTree, Fraction]: Binary tree → coefficient.
    """
    algebra = _algebra(s, t, convention)
    return _transport(algebra, algebra.prec, s, t)


def binary_succ(s: BinaryTree, t: BinaryTree,
                convention: SplitConvention = SplitConvention.FIRST_TERM_PREC) -> Dict[BinaryTree, Fraction]:
    algebra = _algebra(s, t, convention)
    return _transport(algebra, algebra.succ, s, t)


def binary_star(s: BinaryTree, t: BinaryTree) -> Dict[BinaryTree, Fraction]:
    algebra = _algebra(s, t, SplitConvention.FIRST_TERM_PREC)
    return _transport(algebra, algebra.star, s, t)


def rotate_series(x: Dict[BinaryTree, Fraction], trunc: int) -> TreeSeries:
    """Linear extension of the rotation to a binary tree → coefficient map."""
    return TreeSeries(trunc, {rotate(t): coefficient for t, coefficient in x.items()})
