from functools import lru_cache
from typing import Any, List, Tuple

from forest.composition import Composition
from utilities.exceptions import DegreeError, TreeParseError


class RootedTree:
    """
    Immutable planar rooted tree given by the ordered sequence of its branches.

    The empty sequence is the single vertex •. The degree is the number of edges.
    """

    __slots__ = ("children", "degree", "_hash", "_text", "_leaves")

    def __init__(self, children: Tuple["RootedTree", ...] = ()):
        self.children = tuple(children)
        self.degree = sum(1 + child.degree for child in self.children)
        self._hash = hash(("rooted", self.children))
        self._text = None
        self._leaves = None

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if not isinstance(other, RootedTree) or self._hash != other._hash or self.degree != other.degree:
            return False
        return self.children == other.children

    @property
    def is_vertex(self) -> bool:
        return not self.children

    def render(self) -> str:
        """Canonical bracket text, e.g. ``[[][]]`` for the corolla c⁽²⁾."""
        if self._text is None:
            self._text = "[" + "".join(child.render() for child in self.children) + "]"
        return self._text

    def sort_key(self) -> Tuple[int, str]:
        return self.degree, self.render()

    def __repr__(self) -> str:
        return f"RootedTree('{self.render()}')"

    def to_json(self) -> List:
        return [child.to_json() for child in self.children]

    @classmethod
    def from_json(cls, value: Any) -> "RootedTree":
        if not isinstance(value, list):
            raise ValueError(f"Rooted tree JSON must be a nested array, got {value!r}")
        return cls(tuple(cls.from_json(child) for child in value))


VERTEX = RootedTree()


def b_plus(*branches: RootedTree) -> RootedTree:
    """B₊: graft the branches, in order, on a new root."""
    return RootedTree(branches)


def left_butcher(t: RootedTree, u: RootedTree) -> RootedTree:
    """Left Butcher product t ↘ u: t becomes the leftmost branch of the root of u."""
    return RootedTree((t,) + u.children)


def decompose(tau: RootedTree) -> Tuple[RootedTree, RootedTree]:
    """Unique decomposition τ = t₁ ↘ t₂ of a tree of degree ≥ 1."""
    if tau.is_vertex:
        raise DegreeError("The single vertex has no decomposition t1 ↘ t2.")
    return tau.children[0], RootedTree(tau.children[1:])


def leaf_count(tau: RootedTree) -> int:
    """Number of vertices without children; L(•) = 1."""
    if tau._leaves is None:
        tau._leaves = 1 if tau.is_vertex else sum(leaf_count(child) for child in tau.children)
    return tau._leaves


@lru_cache(maxsize=None)
def enumerate_rooted(n: int) -> Tuple[RootedTree, ...]:
    """All rooted trees of degree n in canonical order, built as t₁ ↘ t₂."""
    if n < 0:
        raise ValueError(f"Degree must be non-negative, got {n}")
    if n == 0:
        return (VERTEX,)
    trees = [
        left_butcher(first, rest)
        for k in range(n)
        for first in enumerate_rooted(k)
        for rest in enumerate_rooted(n - 1 - k)
    ]
    return tuple(sorted(trees, key=RootedTree.sort_key))


def ladder(n: int) -> RootedTree:
    """ℓ⁽⁰⁾ = •, ℓ⁽ⁿ⁺¹⁾ = ℓ⁽ⁿ⁾ ↘ •."""
    tree = VERTEX
    for _ in range(n):
        tree = left_butcher(tree, VERTEX)
    return tree


def corolla(n: int) -> RootedTree:
    """c⁽⁰⁾ = •, c⁽ⁿ⁺¹⁾ = • ↘ c⁽ⁿ⁾."""
    tree = VERTEX
    for _ in range(n):
        tree = left_butcher(VERTEX, tree)
    return tree


def _leaf_paths(tau: RootedTree, prefix: Tuple[int, ...], out: List[Tuple[int, ...]]) -> None:
    if tau.is_vertex:
        out.append(prefix)
        return
    for index, child in enumerate(tau.children):
        _leaf_paths(child, prefix + (index,), out)


def tree_composition(tau: RootedTree) -> Composition:
    """
    Ordered composition of the degree attached to a rooted tree.

    Leaves are numbered from left to right. The last part is the height of the
    rightmost leaf; part s < k is the number of edges from leaf s down to the
    first vertex on the root path of leaf s+1.

    Args:
        tau (RootedTree): Tree of degree ≥ 1.

    Returns:
        Composition: Parts summing to the degree, one part per leaf.

    Raises:
        DegreeError: For the single vertex.
    """
    if tau.is_vertex:
        raise DegreeError("tree_composition is undefined on the single vertex.")
    paths: List[Tuple[int, ...]] = []
    _leaf_paths(tau, (), paths)
    parts = []
    for current, following in zip(paths, paths[1:]):
        common = 0
        while common < min(len(current), len(following)) and current[common] == following[common]:
            common += 1
        parts.append(len(current) - common)
    parts.append(len(paths[-1]))
    return Composition(tuple(parts))


def parse_rooted(text: str) -> RootedTree:
    """
    Parses the grammar ``RootedTree := "[" RootedTree* "]"``.

    Raises:
        TreeParseError: On malformed input, with the byte offset of the problem.
    """
    data = text.encode("utf-8")

    def parse_at(pos: int) -> Tuple[RootedTree, int]:
        if pos >= len(data):
            raise TreeParseError("Unexpected end of input", pos)
        if data[pos] != ord("["):
            raise TreeParseError("Expected '['", pos)
        pos += 1
        children = []
        while pos < len(data) and data[pos] == ord("["):
            child, pos = parse_at(pos)
            children.append(child)
        if pos >= len(data) or data[pos] != ord("]"):
            raise TreeParseError("Expected '[' or ']'", pos)
        return RootedTree(tuple(children)), pos + 1

    tree, end = parse_at(0)
    if end != len(data):
        raise TreeParseError("Trailing characters", end)
    return tree
