"""Residuals of the dendriform and pre-Lie identities for any algebra with +, - and the products."""
from typing import Callable, Tuple, TypeVar

T = TypeVar("T")
Product = Callable[[T, T], T]


def dendriform_axiom_residuals(prec: Product, succ: Product, x: T, y: T, z: T) -> Tuple[T, T, T]:
    """
    Residuals of the three dendriform axioms on (x, y, z), with ⋆ = ≺ + ≻:

        (x≺y)≺z − x≺(y⋆z),   (x≻y)≺z − x≻(y≺z),   x≻(y≻z) − (x⋆y)≻z.

    All three vanish in a dendriform algebra.
    """
    y_star_z = prec(y, z) + succ(y, z)
    x_star_y = prec(x, y) + succ(x, y)
    first = prec(prec(x, y), z) - prec(x, y_star_z)
    second = prec(succ(x, y), z) - succ(x, prec(y, z))
    third = succ(x, succ(y, z)) - succ(x_star_y, z)
    return first, second, third


def prelie_residual(prelie: Product, x: T, y: T, z: T) -> T:
    """Left pre-Lie associator difference (x▷y)▷z − x▷(y▷z) − (y▷x)▷z + y▷(x▷z)."""
    return (prelie(prelie(x, y), z) - prelie(x, prelie(y, z))) - (prelie(prelie(y, x), z) - prelie(y, prelie(x, z)))


def associator(product: Product, x: T, y: T, z: T) -> T:
    return product(product(x, y), z) - product(x, product(y, z))
