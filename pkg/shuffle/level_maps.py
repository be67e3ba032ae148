"""
Leveled binary trees and permutations: the bijection, the level-forgetting map ψ and its dual ψ*.

A permutation σ ∈ Sₙ is read as the infix sequence of levels of a leveled binary tree;
the root sits at the position of n and both sides of it are handled recursively.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence, Tuple

from dendriform.tree_series import TreeSeries
from forest.binary_tree import LEAF, BinaryTree, graft_vee
from forest.correspondence import unrotate
from forest.leveled import LeveledBinaryTree, level_assignments
from shuffle.perm_series import PermSeries
from shuffle.permutation import Permutation, descent_count_perm, standardize
from utilities.exceptions import DegreeError


def _split_at_max(word: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    top = word.index(max(word))
    return tuple(word[:top]), tuple(word[top + 1:])


@lru_cache(maxsize=None)
def _tree_of_word(word: Tuple[int, ...]) -> BinaryTree:
    if not word:
        return LEAF
    before, after = _split_at_max(word)
    left = _tree_of_word(standardize(before).word) if before else LEAF
    right = _tree_of_word(standardize(after).word) if after else LEAF
    return graft_vee(left, right)


def perm_to_leveled(sigma: Permutation) -> LeveledBinaryTree:
    """
    Leveled tree of σ: the vertex between leaves i and i+1 carries level σ(i).

    Raises:
        DegreeError: For the empty permutation.
    """
    if sigma.n < 1:
        raise DegreeError("perm_to_leveled needs n >= 1")
    return LeveledBinaryTree(_tree_of_word(sigma.word), sigma.word)


def leveled_to_perm(leveled: LeveledBinaryTree) -> Permutation:
    """
    Inverse of perm_to_leveled.

    The word is rebuilt by splitting at the root, recursing on both branches with their
    own levels, and merging the standardized halves around the root level.
    """
    if leveled.tree.degree < 1:
        raise DegreeError("leveled_to_perm needs a tree of degree >= 1")

    def rebuild(tree: BinaryTree, levels: Tuple[int, ...]) -> Tuple[int, ...]:
        if tree.is_leaf:
            return ()
        split = tree.left.degree
        left_levels, root, right_levels = levels[:split], levels[split], levels[split + 1:]
        left = rebuild(tree.left, standardize(left_levels).word) if left_levels else ()
        right = rebuild(tree.right, standardize(right_levels).word) if right_levels else ()
        # each branch comes back standardized; restore its actual values
        left_values = sorted(left_levels)
        right_values = sorted(right_levels)
        return (
            tuple(left_values[v - 1] for v in left)
            + (root,)
            + tuple(right_values[v - 1] for v in right)
        )

    return Permutation(rebuild(leveled.tree, leveled.levels))


def psi(sigma: Permutation) -> BinaryTree:
    """Underlying tree of perm_to_leveled(σ)."""
    return perm_to_leveled(sigma).tree


def fiber(t: BinaryTree) -> Tuple[Permutation, ...]:
    """ψ⁻¹(t), in lexicographic order."""
    perms = (Permutation(leveled.levels) for leveled in level_assignments(t))
    return tuple(sorted(perms, key=Permutation.sort_key))


def psi_star(t: BinaryTree, trunc: int = None) -> PermSeries:
    """
    ψ*(t) = Σ_{ψ(σ)=t} σ; the leaf maps to the unit permutation.

    Args:
        t (BinaryTree): Any binary tree.
        trunc (int, optional): Truncation of the result; defaults to the degree of t.
    """
    trunc = t.degree if trunc is None else trunc
    if t.is_leaf:
        return PermSeries.unit(trunc)
    return PermSeries.sum_of(fiber(t), trunc)


def psi_star_series(x: TreeSeries) -> PermSeries:
    """Linear extension of ψ* to rooted-tree series, through the inverse rotation."""
    result = PermSeries(x.trunc)
    for tau, coefficient in x:
        result = result + coefficient * psi_star(unrotate(tau), x.trunc)
    return result


def mps_coefficient(sigma: Permutation) -> Fraction:
    """(−1)^{d(σ)} / (n·binom(n−1, d(σ)))."""
    if sigma.n < 1:
        raise DegreeError("mps_coefficient needs n >= 1")
    d = descent_count_perm(sigma)
    return Fraction((-1) ** d, sigma.n * comb(sigma.n - 1, d))
