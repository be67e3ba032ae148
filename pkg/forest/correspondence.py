"""Knuth's rotation correspondence and kind-dispatching helpers."""
from functools import lru_cache
from typing import Tuple, Union

from forest.binary_tree import (
    LEAF,
    BinaryTree,
    enumerate_binary,
    graft_vee,
    left_comb,
    parse_binary,
    right_comb,
)
from forest.rooted_tree import (
    VERTEX,
    RootedTree,
    corolla,
    decompose,
    enumerate_rooted,
    ladder,
    left_butcher,
    parse_rooted,
)

Tree = Union[BinaryTree, RootedTree]

TREE_KINDS = ("binary", "rooted")
FAMILY_KINDS = ("ladder", "corolla", "left_comb", "right_comb")


@lru_cache(maxsize=None)
def rotate(t: BinaryTree) -> RootedTree:
    """Φ(|) = •, Φ(t₁ ∨ t₂) = Φ(t₁) ↘ Φ(t₂)."""
    if t.is_leaf:
        return VERTEX
    return left_butcher(rotate(t.left), rotate(t.right))


@lru_cache(maxsize=None)
def unrotate(tau: RootedTree) -> BinaryTree:
    """Two-sided inverse of rotate."""
    if tau.is_vertex:
        return LEAF
    first, rest = decompose(tau)
    return graft_vee(unrotate(first), unrotate(rest))


def enumerate_trees(kind: str, n: int) -> Tuple[Tree, ...]:
    """
    All planar trees of one kind and degree, in canonical order.

    Args:
        kind (str): 'binary' or 'rooted'.
        n (int): Degree; internal nodes for binary trees, non-root vertices for rooted trees.

    Returns:
        Tuple[Tree, ...]: The Catalan(n) trees sorted by their rendered text.

    Raises:
        ValueError: If kind is neither 'binary' nor 'rooted'.
    """
    if kind == "binary":
        return enumerate_binary(n)
    if kind == "rooted":
        return enumerate_rooted(n)
    raise ValueError(f"Unknown tree kind '{kind}'; expected one of {TREE_KINDS}")


def family(kind: str, n: int) -> Tree:
    """The named recursive families: ladder and corolla (rooted), left and right combs (binary)."""
    builders = {
        "ladder": ladder,
        "corolla": corolla,
        "left_comb": left_comb,
        "right_comb": right_comb,
    }
    try:
        builder = builders[kind]
    except KeyError:
        raise ValueError(f"Unknown family '{kind}'; expected one of {FAMILY_KINDS}")
    if n < 0:
        raise ValueError(f"Degree must be non-negative, got {n}")
    return builder(n)


def parse_tree(kind: str, text: str) -> Tree:
    """
    Parses the canonical text of a tree.

    Args:
        kind (str): 'binary' for ``(L R)`` / ``.`` text, 'rooted' for nested brackets.
        text (str): Text as produced by ``render()``.

    Returns:
        Tree: The parsed tree.

    Raises:
        TreeParseError: If the text is malformed for the given kind.
        ValueError: If kind is neither 'binary' nor 'rooted'.
    """
    if kind == "binary":
        return parse_binary(text)
    if kind == "rooted":
        return parse_rooted(text)
    raise ValueError(f"Unknown tree kind '{kind}'; expected one of {TREE_KINDS}")
