"""Graphviz export of pseudo-terms.

One graph node per constructor and one per door: a door count ``k > 0``
becomes ``k`` opening doors, ``k < 0`` becomes ``-k`` closing doors,
chained between the parent and the constructor they guard.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dlal_types as D
from .pterms import Abs, Apply, Node, Occ, TAbs, TApply, children

OPEN_STYLE = 'shape=invtriangle, label="$", color=blue'
CLOSE_STYLE = 'shape=triangle, label="~", color=red, style=dashed'


@dataclass
class DotGraph:
    text: str
    constructors: int
    opening: int
    closing: int


def _label(head) -> str:
    if isinstance(head, Occ):
        return head.name
    if isinstance(head, Abs):
        return f"\\\\{head.name} : {D.print_dtype(head.ty)}"
    if isinstance(head, Apply):
        return "@"
    if isinstance(head, TAbs):
        return f"/\\\\{head.binder}"
    if isinstance(head, TApply):
        return f"[{D.print_dtype(head.ty)}]"
    raise TypeError(f"not a head: {head!r}")


def _escape(s: str) -> str:
    return s.replace('"', '\\"')


def export_dot(t: Node, name: str = "pseudo") -> DotGraph:
    """Graph of a pseudo-term (integer doors)."""
    lines = [f"digraph {name} {{", "  node [fontname=monospace];"]
    counter = 0
    opening = closing = constructors = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"n{counter}"

    # (node, parent graph id, edge label)
    stack: list[tuple[Node, str, str]] = [(t, "", "")]
    while stack:
        node, parent, label = stack.pop()
        if not isinstance(node.door, int):
            raise TypeError("export_dot needs a pseudo-term with integer doors")
        prev, prev_label = parent, label
        for _ in range(abs(node.door)):
            d = fresh()
            lines.append(f"  {d} [{OPEN_STYLE if node.door > 0 else CLOSE_STYLE}];")
            if node.door > 0:
                opening += 1
            else:
                closing += 1
            if prev:
                lines.append(f'  {prev} -> {d} [label="{prev_label}"];')
            prev, prev_label = d, ""
        c = fresh()
        constructors += 1
        shape = "ellipse" if isinstance(node.head, Occ) else "box"
        lines.append(f'  {c} [shape={shape}, label="{_escape(_label(node.head))}"];')
        if prev:
            lines.append(f'  {prev} -> {c} [label="{prev_label}"];')
        kids = children(node.head)
        labels = ("fun", "arg") if isinstance(node.head, Apply) else ("",) * len(kids)
        for child, lab in reversed(list(zip(kids, labels))):
            stack.append((child, c, lab))
    lines.append("}")
    return DotGraph("\n".join(lines) + "\n", constructors, opening, closing)
