from fractions import Fraction
from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """
    Bernoulli number B_m with B₁ = −1/2.

    Uses the recurrence Σ_{j≤m} binom(m+1, j) B_j = 0 with B₀ = 1.

    Args:
        m (int): Index, m ≥ 0.

    Returns:
        Fraction: B_m.
    """
    if m < 0:
        raise ValueError(f"Bernoulli index must be non-negative, got {m}")
    if m == 0:
        return Fraction(1)
    total = sum(comb(m + 1, j) * bernoulli(j) for j in range(m))
    return -total / (m + 1)
