"""Decorated term trees shared by p-terms and pseudo-terms.

A decorated term is a :class:`Node` (a door plus a head).  In a p-term the
door is an integer parameter and annotations are p-types; in a pseudo-term
the door is a signed count (positive: opening doors, negative: closing
doors) and annotations are DLAL* types.  Storing one count per node keeps
pseudo-terms regular by construction.

Nodes and heads compare by identity, so they double as subterm positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Union


@dataclass(eq=False)
class Node:
    door: Any
    head: "Head"


@dataclass(eq=False)
class Occ:
    """Variable occurrence."""

    name: str
    ty: Any


@dataclass(eq=False)
class Abs:
    name: str
    ty: Any
    body: Node


@dataclass(eq=False)
class Apply:
    fun: Node
    arg: Node


@dataclass(eq=False)
class TAbs:
    binder: str
    body: Node


@dataclass(eq=False)
class TApply:
    fun: Node
    ty: Any


Head = Union[Occ, Abs, Apply, TAbs, TApply]
Position = Union[Node, Occ, Abs, Apply, TAbs, TApply]


def children(head: Head) -> tuple[Node, ...]:
    if isinstance(head, (Abs, TAbs)):
        return (head.body,)
    if isinstance(head, Apply):
        return (head.fun, head.arg)
    if isinstance(head, TApply):
        return (head.fun,)
    return ()


def nodes(root: Node) -> Iterator[Node]:
    """Pre-order traversal of the nodes."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node.head)))


def walk(root: Node) -> Iterator[tuple[Node, tuple]]:
    """Pre-order ``(node, path)`` pairs, ``path`` the doors from the root
    down to and including ``node``'s own door."""
    stack = [(root, (root.door,))]
    while stack:
        node, path = stack.pop()
        yield node, path
        for child in reversed(children(node.head)):
            stack.append((child, path + (child.door,)))


def occurrences(root: Node) -> Iterator[Occ]:
    for node in nodes(root):
        if isinstance(node.head, Occ):
            yield node.head


def free_occurrences(root: Node) -> list[Node]:
    """Nodes holding an occurrence of a variable not bound inside ``root``."""
    found = []
    stack = [(root, frozenset())]
    while stack:
        node, bound = stack.pop()
        head = node.head
        if isinstance(head, Occ):
            if head.name not in bound:
                found.append(node)
            continue
        if isinstance(head, Abs):
            bound = bound | {head.name}
        for child in reversed(children(head)):
            stack.append((child, bound))
    return found


def node_count(root: Node) -> int:
    return sum(1 for _ in nodes(root))


def map_tree(root: Node, door, annot) -> Node:
    """Rebuild the tree with ``door(d)`` and ``annot(ty)`` applied."""

    def go(node: Node) -> Node:
        head = node.head
        if isinstance(head, Occ):
            new = Occ(head.name, annot(head.ty))
        elif isinstance(head, Abs):
            new = Abs(head.name, annot(head.ty), go(head.body))
        elif isinstance(head, Apply):
            new = Apply(go(head.fun), go(head.arg))
        elif isinstance(head, TAbs):
            new = TAbs(head.binder, go(head.body))
        elif isinstance(head, TApply):
            new = TApply(go(head.fun), annot(head.ty))
        else:
            raise TypeError(f"not a head: {head!r}")
        return Node(door(node.door), new)

    return go(root)
