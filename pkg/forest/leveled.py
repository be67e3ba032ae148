from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, List, Tuple

from forest.binary_tree import BinaryTree
from utilities.exceptions import InvalidLevelsError


def _internal_parent_links(tree: BinaryTree) -> List[Tuple[int, int]]:
    """(parent, child) pairs of internal vertices, indexed in infix order."""
    links: List[Tuple[int, int]] = []

    def walk(t: BinaryTree, offset: int) -> int:
        # returns the infix index of the root of t
        if t.is_leaf:
            return -1
        root = offset + t.left.degree
        left_root = walk(t.left, offset)
        right_root = walk(t.right, root + 1)
        for child in (left_root, right_root):
            if child >= 0:
                links.append((root, child))
        return root

    walk(tree, 0)
    return links


@dataclass(frozen=True)
class LeveledBinaryTree:
    """
    Planar binary tree with a bijective decreasing level map.

    ``levels[i]`` is the level of the i-th internal vertex in infix order, i.e. the
    vertex between leaves i+1 and i+2. The root carries the largest level n and
    every internal child carries a smaller level than its parent.
    """

    tree: BinaryTree
    levels: Tuple[int, ...]

    def __post_init__(self):
        n = self.tree.degree
        if len(self.levels) != n or sorted(self.levels) != list(range(1, n + 1)):
            raise InvalidLevelsError(f"Levels {self.levels} are not a bijection onto 1..{n}")
        for parent, child in _internal_parent_links(self.tree):
            if self.levels[parent] <= self.levels[child]:
                raise InvalidLevelsError(
                    f"Level of vertex {parent} ({self.levels[parent]}) must exceed "
                    f"level of its child {child} ({self.levels[child]})"
                )


def is_decreasing(tree: BinaryTree, levels: Tuple[int, ...]) -> bool:
    return all(levels[parent] > levels[child] for parent, child in _internal_parent_links(tree))


def level_assignments(tree: BinaryTree) -> Iterator[LeveledBinaryTree]:
    """All decreasing level maps of ``tree`` (brute force over Sₙ)."""
    n = tree.degree
    for levels in permutations(range(1, n + 1)):
        if is_decreasing(tree, levels):
            yield LeveledBinaryTree(tree, levels)
