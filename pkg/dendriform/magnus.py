"""Closed Magnus coefficients on planar trees and the brute-force oracles behind them."""
from fractions import Fraction
from math import comb, factorial

from dendriform.flows import FormalFlows
from dendriform.tree_series import TreeDendriform, TreeSeries
from forest.binary_tree import BinaryTree, descent_count
from forest.composition import Composition, compositions
from forest.rooted_tree import RootedTree, enumerate_rooted, ladder, leaf_count
from utilities.exceptions import DegreeError


def _closed_coefficient(n: int, k: int) -> Fraction:
    # (−1)^{k−1} / (n·binom(n−1, k−1))
    return Fraction((-1) ** (k - 1), n * comb(n - 1, k - 1))


def magnus_coefficient(tau: RootedTree) -> Fraction:
    """
    Coefficient of τ in log⋆(1 + Σℓ⁽ⁿ⁾): (−1)^{L(τ)−1} / (n·binom(n−1, L(τ)−1)).

    Raises:
        DegreeError: For the single vertex.
    """
    if tau.degree < 1:
        raise DegreeError("magnus_coefficient needs a tree of degree >= 1")
    return _closed_coefficient(tau.degree, leaf_count(tau))


def fixpoint_log_coefficient(tau: RootedTree) -> Fraction:
    """Coefficient of τ in log⋆ of the ≺-fixpoint X = 1 + a≺X: the closed one times (−1)^{n−1}."""
    return (-1) ** (tau.degree - 1) * magnus_coefficient(tau)


def beta_coefficient(n: int, k: int) -> Fraction:
    """(−1)^{k−1}(k−1)!(n−k)!/n!, the beta-integral form of the closed coefficient."""
    if not 1 <= k <= n:
        raise DegreeError(f"beta_coefficient needs 1 <= k <= n, got k={k}, n={n}")
    return Fraction((-1) ** (k - 1) * factorial(k - 1) * factorial(n - k), factorial(n))


def descent_magnus_coefficient(t: BinaryTree) -> Fraction:
    """(−1)^{d(t)} / (n·binom(n−1, d(t))) for a binary tree of degree n ≥ 1."""
    if t.degree < 1:
        raise DegreeError("descent_magnus_coefficient needs a tree of degree >= 1")
    return _closed_coefficient(t.degree, descent_count(t) + 1)


def closed_magnus_series(trunc: int) -> TreeSeries:
    """Σ_{1≤n≤N} Σ_{|τ|=n} magnus_coefficient(τ)·τ."""
    if trunc < 1:
        raise DegreeError("closed_magnus_series needs N >= 1")
    return TreeSeries(trunc, {
        tau: magnus_coefficient(tau) for n in range(1, trunc + 1) for tau in enumerate_rooted(n)
    })


def fixpoint_log_series(trunc: int) -> TreeSeries:
    if trunc < 1:
        raise DegreeError("fixpoint_log_series needs N >= 1")
    return TreeSeries(trunc, {
        tau: fixpoint_log_coefficient(tau) for n in range(1, trunc + 1) for tau in enumerate_rooted(n)
    })


def ladder_log_oracle(trunc: int) -> TreeSeries:
    """log⋆(1 + Σ_{n≤N} ℓ⁽ⁿ⁾), computed directly with the series logarithm."""
    if trunc < 1:
        raise DegreeError("ladder_log_oracle needs N >= 1")
    algebra = TreeDendriform(trunc)
    return algebra.log_star(algebra.unit() + algebra.ladder_sum())


def ladder_monomial(composition: Composition, algebra: TreeDendriform) -> TreeSeries:
    """ℓ⁽ⁱ¹⁾ ⋆ … ⋆ ℓ⁽ⁱᵏ⁾ for a composition (i₁, …, i_k)."""
    result = algebra.unit()
    for part in composition.parts:
        result = algebra.star(result, algebra.tree(ladder(part)))
    return result


def ladder_log_by_compositions(trunc: int) -> TreeSeries:
    """
    Degree n part Σ_k −(−1)^k/k Σ_{i₁+…+i_k=n} ℓ⁽ⁱ¹⁾⋆…⋆ℓ⁽ⁱᵏ⁾, summed over n ≤ N.

    This is the same series as ladder_log_oracle, organised by compositions.
    """
    algebra = TreeDendriform(trunc)
    result = algebra.series()
    for n in range(1, trunc + 1):
        for composition in compositions(n):
            k = composition.k
            result = result + Fraction(-((-1) ** k), k) * ladder_monomial(composition, algebra)
    return result


def prelie_magnus_series(a: TreeSeries, algebra: TreeDendriform = None) -> TreeSeries:
    """
    Pre-Lie Magnus expansion Ω′(a) in the free dendriform algebra.

    Args:
        a (TreeSeries): Series without constant term; its truncation fixes N.
        algebra (TreeDendriform, optional): Algebra supplying ▷; defaults to the normative one.

    Returns:
        TreeSeries: Ω′ with Ω′ = Σ_m (B_m/m!) L^{(m)}_{Ω′▷}(a).
    """
    algebra = algebra or TreeDendriform(a.trunc)
    return FormalFlows(algebra.prelie).prelie_magnus(a)
