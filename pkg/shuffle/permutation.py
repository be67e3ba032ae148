from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import List, Sequence, Tuple

from utilities.exceptions import InvalidPermutationError

SHUFFLE_KINDS = ("all", "sh1", "sh2")


@dataclass(frozen=True)
class Permutation:
    """
    Permutation of {1..n} in one-line notation.

    The empty word (n = 0) is the unit of the shuffle algebra.
    """

    word: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if sorted(self.word) != list(range(1, len(self.word) + 1)):
            raise InvalidPermutationError(f"{self.word} is not a permutation of 1..{len(self.word)}")

    @property
    def n(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.n, self.word

    def descent_set(self) -> Tuple[int, ...]:
        """D(σ) = {i : σ(i) > σ(i+1)}."""
        return tuple(i for i in range(1, self.n) if self.word[i - 1] > self.word[i])

    def inverse(self) -> "Permutation":
        inverse = [0] * self.n
        for position, value in enumerate(self.word, start=1):
            inverse[value - 1] = position
        return Permutation(tuple(inverse))

    def render(self) -> str:
        if self.n < 10:
            return "(" + "".join(str(v) for v in self.word) + ")"
        return "(" + ",".join(str(v) for v in self.word) + ")"

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise InvalidPermutationError(f"Permutation text must be parenthesized, got '{text}'")
        body = body[1:-1]
        if not body:
            return cls(())
        values = body.split(",") if "," in body else list(body)
        try:
            return cls(tuple(int(v) for v in values))
        except ValueError:
            raise InvalidPermutationError(f"Permutation text must contain integers, got '{text}'")


UNIT_PERMUTATION = Permutation(())


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def descent_count_perm(sigma: Permutation) -> int:
    return len(sigma.descent_set())


def standardize(word: Sequence[int]) -> Permutation:
    """
    Order-isomorphic permutation of a word of distinct integers.

    Raises:
        InvalidPermutationError: If the word has repeated entries.
    """
    if len(set(word)) != len(word):
        raise InvalidPermutationError(f"Cannot standardize a word with repeated entries: {tuple(word)}")
    ranks = {value: rank for rank, value in enumerate(sorted(word), start=1)}
    return Permutation(tuple(ranks[value] for value in word))


def concatenate(sigma: Permutation, tau: Permutation) -> Permutation:
    """σ × τ: σ on the first n letters, τ shifted by n on the last m."""
    return Permutation(sigma.word + tuple(sigma.n + value for value in tau.word))


def compose(omega: Permutation, pi: Permutation) -> Permutation:
    """(ω ∘ π)(i) = ω(π(i))."""
    return Permutation(tuple(omega.word[value - 1] for value in pi.word))


@lru_cache(maxsize=None)
def shuffle_set(n: int, m: int, kind: str = "all") -> Tuple[Permutation, ...]:
    """
    The (n, m)-shuffles ω (increasing on 1..n and on n+1..n+m), optionally split.

    Args:
        n (int): Size of the first block.
        m (int): Size of the second block.
        kind (str): 'all', 'sh1' (ω(n+m) = n+m) or 'sh2' (ω(n) = n+m).

    Returns:
        Tuple[Permutation, ...]: The shuffles in lexicographic order.
    """
    if kind not in SHUFFLE_KINDS:
        raise ValueError(f"Unknown shuffle kind '{kind}'; expected one of {SHUFFLE_KINDS}")
    if n < 0 or m < 0:
        raise ValueError(f"Block sizes must be non-negative, got ({n}, {m})")
    if kind != "all" and (n < 1 or m < 1):
        raise ValueError(f"Split shuffles need n, m >= 1, got ({n}, {m})")
    total = n + m
    shuffles: List[Permutation] = []
    for first in combinations(range(1, total + 1), n):
        chosen = set(first)
        second = tuple(v for v in range(1, total + 1) if v not in chosen)
        if kind == "sh1" and total in chosen:
            continue
        if kind == "sh2" and total not in chosen:
            continue
        shuffles.append(Permutation(first + second))
    return tuple(sorted(shuffles, key=Permutation.sort_key))


@lru_cache(maxsize=None)
def enumerate_permutations(n: int) -> Tuple[Permutation, ...]:
    return tuple(Permutation(word) for word in permutations(range(1, n + 1)))


def eulerian_numbers(n: int) -> Tuple[int, ...]:
    """Number of permutations of Sₙ with k descents, for k = 0..n−1."""
    counts = [0] * max(n, 1)
    for sigma in enumerate_permutations(n):
        counts[descent_count_perm(sigma)] += 1
    return tuple(counts)
