from functools import lru_cache
from typing import Dict, Hashable, Tuple

from base.base_series import BaseSeries
from shuffle.permutation import UNIT_PERMUTATION, Permutation, compose, concatenate, shuffle_set
from utilities.exceptions import UnitHalfProductError
from utilities.utils import Utils


class PermSeries(BaseSeries):
    """Truncated linear combination of permutations graded by n."""

    KEY_FIELD = "perm"

    @staticmethod
    def degree_of(key: Permutation) -> int:
        return key.n

    @staticmethod
    def sort_key(key: Permutation):
        return key.sort_key()

    @staticmethod
    def key_to_text(key: Permutation) -> str:
        return key.render()

    @staticmethod
    def key_from_text(text: str) -> Permutation:
        return Permutation.parse(text)

    def key_to_json(self, key: Permutation):
        return list(key.word)

    @classmethod
    def key_from_json(cls, value) -> Permutation:
        return Permutation(tuple(value))

    @classmethod
    def unit_key(cls) -> Hashable:
        return UNIT_PERMUTATION


@lru_cache(maxsize=None)
def _shuffle_half(sigma: Permutation, tau: Permutation, kind: str) -> Tuple[Tuple[Permutation, int], ...]:
    if sigma.n == 0 or tau.n == 0:
        raise UnitHalfProductError("Half-products are defined on the augmentation ideal only.")
    product = concatenate(sigma, tau)
    terms: Dict[Permutation, int] = {}
    for omega in shuffle_set(sigma.n, tau.n, kind):
        key = compose(omega, product)
        terms[key] = terms.get(key, 0) + 1
    return tuple(terms.items())


@lru_cache(maxsize=None)
def _shuffle_star(sigma: Permutation, tau: Permutation) -> Tuple[Tuple[Permutation, int], ...]:
    if sigma.n == 0:
        return ((tau, 1),)
    if tau.n == 0:
        return ((sigma, 1),)
    terms: Dict[Permutation, int] = dict(_shuffle_half(sigma, tau, "sh2"))
    for key, count in _shuffle_half(sigma, tau, "sh1"):
        terms[key] = terms.get(key, 0) + count
    return tuple(terms.items())


class PermDendriform:
    """
    PermDendriform holds the dendriform structure on ⊕ₙ k[Sₙ] given by splitting the
    shuffle product according to where the largest value lands.
    """

    def __init__(self, trunc: int):
        self.trunc = trunc
        self.logger = Utils.custom_logger(__name__)

    def series(self, terms=None) -> PermSeries:
        """Series in this algebra's truncation from a {Permutation: coefficient} mapping."""
        return PermSeries(self.trunc, terms)

    def perm(self, sigma: Permutation, coefficient=1) -> PermSeries:
        """
        Single basis permutation as a series.

        Args:
            sigma (Permutation): Basis element; above the truncation the series is zero.
            coefficient: Rational coefficient, default 1.

        Returns:
            PermSeries: coefficient·σ.
        """
        return PermSeries.basis(sigma, self.trunc, coefficient)

    def prec(self, x: PermSeries, y: PermSeries) -> PermSeries:
        """σ≺τ = Σ_{ω∈Sh²} ω∘(σ×τ)."""
        return x.bilinear(y, lambda s, t: dict(_shuffle_half(s, t, "sh2")))

    def succ(self, x: PermSeries, y: PermSeries) -> PermSeries:
        """σ≻τ = Σ_{ω∈Sh¹} ω∘(σ×τ)."""
        return x.bilinear(y, lambda s, t: dict(_shuffle_half(s, t, "sh1")))

    def star(self, x: PermSeries, y: PermSeries) -> PermSeries:
        """
        Full shuffle product σ⋆τ = σ≺τ + σ≻τ, truncated.

        Args:
            x (PermSeries): Left factor.
            y (PermSeries): Right factor, with the same truncation.

        Returns:
            PermSeries: Sum over all shuffles ω of ω∘(σ×τ).

        Raises:
            TruncationMismatchError: If the truncations differ.
        """
        return x.bilinear(y, lambda s, t: dict(_shuffle_star(s, t)))
