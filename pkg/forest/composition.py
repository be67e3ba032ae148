from dataclasses import dataclass
from typing import Iterator, Tuple

from utilities.exceptions import DegreeError


@dataclass(frozen=True)
class Composition:
    """Ordered composition (i₁, …, i_k) of n = i₁ + … + i_k with positive parts."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(part < 1 for part in self.parts):
            raise DegreeError(f"A composition needs non-empty positive parts, got {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(part) for part in self.parts) + ")"


def compositions(n: int) -> Iterator[Composition]:
    """All 2^(n−1) compositions of n ≥ 1, in lexicographic order."""
    if n < 1:
        raise DegreeError(f"Compositions need n >= 1, got {n}")

    def build(remaining: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(1, remaining + 1):
            for rest in build(remaining - first):
                yield (first,) + rest

    for parts in build(n):
        yield Composition(parts)
