from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Hashable, Tuple

from base.base_series import BaseSeries, accumulate
from forest.rooted_tree import VERTEX, RootedTree, decompose, ladder, left_butcher, parse_rooted
from utilities.exceptions import AugmentationError, DegreeError, UnitHalfProductError
from utilities.utils import Utils

DEFAULT_TRUNC = 7


class SplitConvention(Enum):
    """Which term of the rooted ⋆ recursion is the ≺ half."""

    FIRST_TERM_PREC = "first"
    SECOND_TERM_PREC = "second"


class TreeSeries(BaseSeries):
    """Truncated series over planar rooted trees; the coefficient of • is the constant term."""

    KEY_FIELD = "tree"

    @staticmethod
    def degree_of(key: RootedTree) -> int:
        return key.degree

    @staticmethod
    def sort_key(key: RootedTree):
        return key.sort_key()

    @staticmethod
    def key_to_text(key: RootedTree) -> str:
        return key.render()

    @staticmethod
    def key_from_text(text: str) -> RootedTree:
        return parse_rooted(text)

    @classmethod
    def unit_key(cls) -> Hashable:
        return VERTEX


# Basis products are memoized as immutable tuples of (tree, multiplicity).

@lru_cache(maxsize=None)
def _star_basis(s: RootedTree, t: RootedTree) -> Tuple[Tuple[RootedTree, int], ...]:
    if s.is_vertex:
        return ((t, 1),)
    if t.is_vertex:
        return ((s, 1),)
    s1, s2 = decompose(s)
    t1, t2 = decompose(t)
    terms: Dict[RootedTree, int] = {}
    for tree, count in _star_basis(s2, t):
        key = left_butcher(s1, tree)
        terms[key] = terms.get(key, 0) + count
    for tree, count in _star_basis(s, t1):
        key = left_butcher(tree, t2)
        terms[key] = terms.get(key, 0) + count
    return tuple(terms.items())


def _first_half(s: RootedTree, t: RootedTree) -> Tuple[Tuple[RootedTree, int], ...]:
    s1, s2 = decompose(s)
    return tuple((left_butcher(s1, tree), count) for tree, count in _star_basis(s2, t))


def _second_half(s: RootedTree, t: RootedTree) -> Tuple[Tuple[RootedTree, int], ...]:
    t1, t2 = decompose(t)
    return tuple((left_butcher(tree, t2), count) for tree, count in _star_basis(s, t1))


@lru_cache(maxsize=None)
def _prec_basis(s: RootedTree, t: RootedTree, convention: SplitConvention) -> Tuple[Tuple[RootedTree, int], ...]:
    if s.is_vertex and t.is_vertex:
        raise UnitHalfProductError("1 ≺ 1 is not defined.")
    if s.is_vertex:
        return ()
    if t.is_vertex:
        return ((s, 1),)
    if convention is SplitConvention.FIRST_TERM_PREC:
        return _first_half(s, t)
    return _second_half(s, t)


@lru_cache(maxsize=None)
def _succ_basis(s: RootedTree, t: RootedTree, convention: SplitConvention) -> Tuple[Tuple[RootedTree, int], ...]:
    if s.is_vertex and t.is_vertex:
        raise UnitHalfProductError("1 ≻ 1 is not defined.")
    if s.is_vertex:
        return ((t, 1),)
    if t.is_vertex:
        return ()
    if convention is SplitConvention.FIRST_TERM_PREC:
        return _second_half(s, t)
    return _first_half(s, t)


class TreeDendriform:
    """
    TreeDendriform realizes the free unital dendriform algebra on one generator on planar
    rooted trees, truncated at a fixed degree.

    It provides the associative product ⋆, its halves ≺ and ≻ under a chosen split convention,
    the pre-Lie product, the ⋆-exponential and logarithm, and the linear fixpoint equations.
    """

    def __init__(self, trunc: int = DEFAULT_TRUNC, convention: SplitConvention = SplitConvention.FIRST_TERM_PREC):
        """
        Initializes the algebra with a truncation degree and a split convention.

        Args:
            trunc (int): Maximum degree N of every series produced. Defaults to 7.
            convention (SplitConvention): Normative value is FIRST_TERM_PREC.
        """
        self.trunc = trunc
        self.convention = convention
        self.logger = Utils.custom_logger(__name__)

    # Elements

    def series(self, terms=None) -> TreeSeries:
        return TreeSeries(self.trunc, terms)

    def tree(self, tau: RootedTree, coefficient=1) -> TreeSeries:
        return TreeSeries.basis(tau, self.trunc, coefficient)

    def unit(self) -> TreeSeries:
        return TreeSeries.unit(self.trunc)

    def generator(self) -> TreeSeries:
        """The generator a, i.e. the one-edge tree ℓ⁽¹⁾."""
        return self.tree(ladder(1))

    def ladder_sum(self) -> TreeSeries:
        """L = Σ_{1≤n≤N} ℓ⁽ⁿ⁾."""
        return TreeSeries.sum_of((ladder(n) for n in range(1, self.trunc + 1)), self.trunc)

    # Products

    def star(self, x: TreeSeries, y: TreeSeries) -> TreeSeries:
        """Associative product s⋆t = s₁↘(s₂⋆t) + (s⋆t₁)↘t₂ with unit •."""
        return x.bilinear(y, lambda s, t: dict(_star_basis(s, t)))

    def prec(self, x: TreeSeries, y: TreeSeries) -> TreeSeries:
        """
        Left half-product ≺.

        Raises:
            UnitHalfProductError: If both arguments have a nonzero constant term.
        """
        return x.bilinear(y, lambda s, t: dict(_prec_basis(s, t, self.convention)))

    def succ(self, x: TreeSeries, y: TreeSeries) -> TreeSeries:
        """Right half-product ≻; same unit restrictions as prec."""
        return x.bilinear(y, lambda s, t: dict(_succ_basis(s, t, self.convention)))

    def prelie(self, x: TreeSeries, y: TreeSeries) -> TreeSeries:
        """
        Left pre-Lie product x ▷ y = x ≻ y − y ≺ x.

        Raises:
            AugmentationError: If either argument has a nonzero constant term.
        """
        self._require_augmentation(x, "prelie")
        self._require_augmentation(y, "prelie")
        return self.succ(x, y) - self.prec(y, x)

    def bracket(self, x: TreeSeries, y: TreeSeries) -> TreeSeries:
        return self.prelie(x, y) - self.prelie(y, x)

    def power(self, x: TreeSeries, k: int) -> TreeSeries:
        result = self.unit()
        for _ in range(k):
            result = self.star(result, x)
        return result

    def ladder_star(self, n: int, m: int) -> TreeSeries:
        """
        Closed form of ℓ⁽ⁿ⁾ ⋆ ℓ⁽ᵐ⁾: the sum over r = 0..m of ℓ⁽ⁿ⁻¹⁾ ↘ ℓ⁽ᵐ⁻ʳ⁾ followed by r graftings ↘ •.
        """
        if n < 1 or m < 1:
            raise DegreeError(f"ladder_star needs n, m >= 1, got ({n}, {m})")
        terms: Dict[RootedTree, Fraction] = {}
        for r in range(m + 1):
            tree = left_butcher(ladder(n - 1), ladder(m - r))
            for _ in range(r):
                tree = left_butcher(tree, VERTEX)
            accumulate(terms, tree, 1)
        return self.series(terms)

    # Exponential and logarithm

    def exp_star(self, x: TreeSeries) -> TreeSeries:
        """Σ x^{⋆n}/n! for x without constant term."""
        self._require_augmentation(x, "exp_star")
        result = self.unit()
        term = self.unit()
        for k in range(1, self.trunc + 1):
            term = Fraction(1, k) * self.star(term, x)
            if term.is_zero():
                break
            result = result + term
        return result

    def log_star(self, u: TreeSeries) -> TreeSeries:
        """−Σ (−1)ⁿ (u−1)^{⋆n}/n for u with constant term exactly 1."""
        if u.constant_term != 1:
            self.logger.error(f"log_star needs constant term 1, got {u.constant_term}")
            raise AugmentationError(f"log_star needs constant term 1, got {u.constant_term}")
        shifted = u - self.unit()
        result = self.series()
        power = self.unit()
        for k in range(1, self.trunc + 1):
            power = self.star(power, shifted)
            if power.is_zero():
                break
            result = result + Fraction((-1) ** (k + 1), k) * power
        return result

    def inverse_star(self, u: TreeSeries) -> TreeSeries:
        """⋆-inverse Σ (1−u)^{⋆n} of a series with constant term 1."""
        if u.constant_term != 1:
            raise AugmentationError(f"inverse_star needs constant term 1, got {u.constant_term}")
        shifted = self.unit() - u
        result = self.unit()
        power = self.unit()
        for _ in range(self.trunc):
            power = self.star(power, shifted)
            result = result + power
        return result

    # Linear dendriform equations

    def solve_left_fixpoint(self, a: TreeSeries) -> TreeSeries:
        """
        Solves X = 1 + a ≺ X degree by degree.

        Args:
            a (TreeSeries): Series without constant term.

        Returns:
            TreeSeries: The unique solution up to the truncation degree.
        """
        self._require_augmentation(a, "solve_left_fixpoint")
        x = self.unit()
        for _ in range(self.trunc):
            x = self.unit() + self.prec(a, x)
        self.logger.debug(f"Left fixpoint solved with {len(x)} terms at trunc {self.trunc}")
        return x

    def solve_right_fixpoint(self, a: TreeSeries) -> TreeSeries:
        """Solves Y = 1 + Y ≻ a; for a = ℓ⁽¹⁾ this is the ladder sum 1 + L."""
        self._require_augmentation(a, "solve_right_fixpoint")
        y = self.unit()
        for _ in range(self.trunc):
            y = self.unit() + self.succ(y, a)
        return y

    def _require_augmentation(self, x: TreeSeries, operation: str) -> None:
        if x.constant_term != 0:
            self.logger.error(f"{operation} needs a series without constant term, got {x.constant_term}")
            raise AugmentationError(f"{operation} needs a series without constant term")
