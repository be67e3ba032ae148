from fractions import Fraction
from math import factorial
from typing import Callable, TypeVar

from dendriform.bernoulli import bernoulli
from utilities.exceptions import AugmentationError
from utilities.utils import Utils

T = TypeVar("T")


class FormalFlows:
    """
    FormalFlows implements the group of formal flows of a complete filtered pre-Lie algebra.

    The algebra is given by its pre-Lie product only; elements must support ``+``, ``-``,
    multiplication by a Fraction, ``zero_like()``, ``constant_term`` and ``trunc`` (the
    filtration depth up to which every computation is exact). A fictitious unit with
    a ▷ 1 = a is used for W and the inverse.
    """

    def __init__(self, product: Callable[[T, T], T]):
        """
        Initializes the flow group over a pre-Lie product.

        Args:
            product (Callable[[T, T], T]): The pre-Lie product ▷.
        """
        self.product = product
        self.logger = Utils.custom_logger(__name__)

    def _check(self, x: T, operation: str) -> None:
        if x.constant_term != 0:
            self.logger.error(f"{operation} needs an element of the augmentation ideal")
            raise AugmentationError(f"{operation} needs an element without constant term")

    def exp_action(self, x: T, b: T) -> T:
        """e^{L_{x▷}} b = Σ_k (x▷)^k b / k!."""
        result = b
        term = b
        for k in range(1, x.trunc + 1):
            term = Fraction(1, k) * self.product(x, term)
            result = result + term
        return result

    def flow_w(self, a: T) -> T:
        """W(a) = e^{L_{a▷}}1 − 1 = a + ½ a▷a + ⅙ a▷(a▷a) + …"""
        self._check(a, "flow_w")
        result = a
        term = a
        for k in range(2, a.trunc + 1):
            term = self.product(a, term)
            result = result + Fraction(1, factorial(k)) * term
        return result

    def flow_omega(self, b: T) -> T:
        """
        Functional inverse of W, solved degree by degree as Ω = b − (W(Ω) − Ω).

        Args:
            b: Element without constant term.

        Returns:
            The unique Ω with W(Ω) = b up to the truncation.
        """
        self._check(b, "flow_omega")
        omega = b
        for _ in range(b.trunc):
            omega = b - (self.flow_w(omega) - omega)
        return omega

    def prelie_magnus(self, a: T) -> T:
        """
        Pre-Lie Magnus expansion Ω′ = Σ_m (B_m/m!) L^{(m)}_{Ω′▷}(a).

        The degree-n part of the right-hand side only involves lower-degree parts of Ω′,
        so iterating trunc times from Ω′ = a reaches the fixpoint.

        Args:
            a: Element without constant term.

        Returns:
            Ω′ up to the truncation.
        """
        self._check(a, "prelie_magnus")
        omega = a
        for _ in range(a.trunc):
            result = a
            term = a
            for m in range(1, a.trunc):
                term = self.product(omega, term)
                coefficient = bernoulli(m) / factorial(m)
                if coefficient:
                    result = result + coefficient * term
            omega = result
        return omega

    def sharp(self, a: T, b: T) -> T:
        """a # b = a + e^{L_{Ω(a)▷}} b."""
        self._check(a, "sharp")
        self._check(b, "sharp")
        return a + self.exp_action(self.flow_omega(a), b)

    def sharp_inverse(self, a: T) -> T:
        """a^{#−1} = e^{−L_{Ω(a)▷}}1 − 1 = W(−Ω(a))."""
        return self.flow_w(-self.flow_omega(a))

    def sharp_many(self, *elements: T) -> T:
        """Left-to-right product a₁ # a₂ # … # aₙ."""
        if not elements:
            raise ValueError("sharp_many needs at least one element")
        result = elements[0]
        for element in elements[1:]:
            result = self.sharp(result, element)
        return result
