from functools import lru_cache
from typing import Any, Optional, Tuple

from utilities.exceptions import TreeParseError


class BinaryTree:
    """
    Immutable planar binary tree: either the leaf ``|`` or a node ``left ∨ right``.

    Trees are hashable values with structural equality; the hash and the degree
    (number of internal vertices) are computed once at construction.
    """

    __slots__ = ("left", "right", "degree", "_hash", "_text")

    def __init__(self, left: Optional["BinaryTree"] = None, right: Optional["BinaryTree"] = None):
        if (left is None) != (right is None):
            raise ValueError("A binary tree node needs both a left and a right branch.")
        self.left = left
        self.right = right
        self.degree = 0 if left is None else left.degree + right.degree + 1
        self._hash = hash(("bin", left, right))
        self._text = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if not isinstance(other, BinaryTree) or self._hash != other._hash or self.degree != other.degree:
            return False
        return self.left == other.left and self.right == other.right

    def render(self) -> str:
        """Canonical text: ``.`` for the leaf, ``(L R)`` for a node."""
        if self._text is None:
            self._text = "." if self.is_leaf else f"({self.left.render()} {self.right.render()})"
        return self._text

    def sort_key(self) -> Tuple[int, str]:
        """Canonical order: by degree, then by rendered text."""
        return self.degree, self.render()

    def __repr__(self) -> str:
        return f"BinaryTree('{self.render()}')"

    def to_json(self) -> Any:
        """
        JSON form of the tree.

        Returns:
            Any: None for the leaf, otherwise a 2-array [left, right] of the same form.
        """
        return None if self.is_leaf else [self.left.to_json(), self.right.to_json()]

    @classmethod
    def from_json(cls, value: Any) -> "BinaryTree":
        """
        Inverse of to_json.

        Args:
            value (Any): None or a nested 2-array.

        Returns:
            BinaryTree: The decoded tree.

        Raises:
            ValueError: If a node is neither None nor a 2-array.
        """
        if value is None:
            return LEAF
        if not isinstance(value, list) or len(value) != 2:
            raise ValueError(f"Binary tree JSON must be null or a 2-array, got {value!r}")
        return graft_vee(cls.from_json(value[0]), cls.from_json(value[1]))


LEAF = BinaryTree()
Y = BinaryTree(LEAF, LEAF)


def graft_vee(t1: BinaryTree, t2: BinaryTree) -> BinaryTree:
    """Graft two trees on a new root: ``t1 ∨ t2``."""
    return BinaryTree(t1, t2)


def decompose(t: BinaryTree) -> Tuple[BinaryTree, BinaryTree]:
    """Inverse of graft_vee for a non-leaf tree."""
    if t.is_leaf:
        raise ValueError("The leaf has no decomposition t1 ∨ t2.")
    return t.left, t.right


def _left_pointing_leaves(t: BinaryTree, is_left: bool) -> int:
    if t.is_leaf:
        return 1 if is_left else 0
    return _left_pointing_leaves(t.left, True) + _left_pointing_leaves(t.right, False)


def descent_count(t: BinaryTree) -> int:
    """
    Number of descents of a planar binary tree.

    A descent is a leaf that is the left child of its parent, the leftmost leaf excluded.

    Args:
        t (BinaryTree): Any binary tree.

    Returns:
        int: d(t); the leaf tree has no descent.
    """
    if t.is_leaf:
        return 0
    return _left_pointing_leaves(t, False) - 1


@lru_cache(maxsize=None)
def enumerate_binary(n: int) -> Tuple[BinaryTree, ...]:
    """All binary trees of degree n in canonical order; there are c_n of them."""
    if n < 0:
        raise ValueError(f"Degree must be non-negative, got {n}")
    if n == 0:
        return (LEAF,)
    trees = [
        graft_vee(left, right)
        for k in range(n)
        for left in enumerate_binary(k)
        for right in enumerate_binary(n - 1 - k)
    ]
    return tuple(sorted(trees, key=BinaryTree.sort_key))


def left_comb(n: int) -> BinaryTree:
    """τ_l⁽ⁿ⁺¹⁾ = τ_l⁽ⁿ⁾ ∨ |."""
    tree = LEAF
    for _ in range(n):
        tree = graft_vee(tree, LEAF)
    return tree


def right_comb(n: int) -> BinaryTree:
    """τ_r⁽ⁿ⁺¹⁾ = | ∨ τ_r⁽ⁿ⁾."""
    tree = LEAF
    for _ in range(n):
        tree = graft_vee(LEAF, tree)
    return tree


def parse_binary(text: str) -> BinaryTree:
    """
    Parses the grammar ``BinaryTree := "." | "(" BinaryTree " " BinaryTree ")"``.

    Args:
        text (str): Tree text, no surrounding whitespace.

    Returns:
        BinaryTree: The parsed tree.

    Raises:
        TreeParseError: On malformed input, with the byte offset of the problem.
    """
    data = text.encode("utf-8")

    def expect(pos: int, char: int, name: str) -> int:
        if pos >= len(data) or data[pos] != char:
            raise TreeParseError(f"Expected {name}", pos)
        return pos + 1

    def parse_at(pos: int) -> Tuple[BinaryTree, int]:
        if pos >= len(data):
            raise TreeParseError("Unexpected end of input", pos)
        if data[pos] == ord("."):
            return LEAF, pos + 1
        pos = expect(pos, ord("("), "'(' or '.'")
        left, pos = parse_at(pos)
        pos = expect(pos, ord(" "), "' '")
        right, pos = parse_at(pos)
        pos = expect(pos, ord(")"), "')'")
        return graft_vee(left, right), pos

    tree, end = parse_at(0)
    if end != len(data):
        raise TreeParseError("Trailing characters", end)
    return tree
