"""Well-structuredness checker for regular pseudo-terms.

A pseudo-term is a :class:`~dlal.pterms.Node` tree whose doors are signed
integers and whose annotations are DLAL* types.  The checker decides the
four conditions directly on that tree: local typing, bracketing, bang and
type-abstraction scope.  It does not look at constraint sets, so it can
serve as an oracle for the constraint generator and the solver.

Door words are handled as runs: the prefix sums of a word made of signed
runs move monotonically inside each run, so their minimum is reached at a
run boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import dlal_types as D
from .pterms import Abs, Apply, Node, Occ, TAbs, TApply, children

LOCAL, BRACKETING, BANG, SCOPE = "local typing", "bracketing", "bang", "scope"


@dataclass
class Failure:
    condition: str
    position: str
    explanation: str

    def __str__(self) -> str:
        return f"[{self.condition}] at {self.position}: {self.explanation}"


@dataclass
class CheckReport:
    failures: list[Failure] = field(default_factory=list)
    output_type: Optional[D.DType] = None

    @property
    def passed(self) -> bool:
        return not self.failures and self.output_type is not None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def conditions(self) -> set[str]:
        return {f.condition for f in self.failures}

    def __str__(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        if self.output_type is not None:
            lines.append(f"type: {D.print_dtype(self.output_type)}")
        lines.extend(str(f) for f in self.failures)
        return "\n".join(lines)


# ---------------------------------------------------------------- traversal


@dataclass
class _Info:
    node: Node
    path: str
    runs: tuple[int, ...]  # doors from the root down to and including this node
    parent: Optional["_Info"]


def _infos(t: Node) -> list[_Info]:
    out = []
    stack = [_Info(t, "root", (t.door,), None)]
    while stack:
        info = stack.pop()
        out.append(info)
        head = info.node.head
        if isinstance(head, (Abs, TAbs)):
            steps = [("body", head.body)]
        elif isinstance(head, Apply):
            steps = [("fun", head.fun), ("arg", head.arg)]
        elif isinstance(head, TApply):
            steps = [("fun", head.fun)]
        else:
            steps = []
        for label, child in reversed(steps):
            stack.append(_Info(child, f"{info.path}.{label}", info.runs + (child.door,), info))
    return out


def _min_prefix(runs: Iterable[int]) -> int:
    s, low = 0, 0
    for k in runs:
        s += k
        low = min(low, s)
    return low


def weakly_bracketed(runs: Iterable[int]) -> bool:
    return _min_prefix(runs) >= 0


def well_bracketed(runs) -> bool:
    runs = list(runs)
    return weakly_bracketed(runs) and sum(runs) == 0


def _subtree(root: _Info, by_node: dict[int, _Info]) -> list[_Info]:
    out = []
    stack = [root.node]
    while stack:
        node = stack.pop()
        out.append(by_node[id(node)])
        stack.extend(reversed(children(node.head)))
    return out


def _free_occurrences(root: _Info, by_node: dict[int, _Info]) -> list[_Info]:
    """Occurrences under ``root`` of variables not bound under ``root``."""
    found = []
    stack = [(root.node, frozenset())]
    while stack:
        node, bound = stack.pop()
        head = node.head
        if isinstance(head, Occ):
            if head.name not in bound:
                found.append(by_node[id(node)])
            continue
        if isinstance(head, Abs):
            bound = bound | {head.name}
        for child in reversed(children(head)):
            stack.append((child, bound))
    return found


# ---------------------------------------------------------------- local typing


def _well_formed(ty: D.DType, allow_bang: bool) -> Optional[str]:
    if isinstance(ty, D.Bang):
        if not allow_bang:
            return "bang outside an arrow domain"
        if isinstance(ty.body, D.Bang):
            return "bang over bang"
        return _well_formed(ty.body, False)
    if isinstance(ty, D.Implies):
        return "intuitionistic arrow in a DLAL* type"
    if isinstance(ty, D.Lolli):
        return _well_formed(ty.dom, True) or _well_formed(ty.cod, False)
    if isinstance(ty, (D.Para, D.DForall)):
        return _well_formed(ty.body, False)
    return None


def _circ(ty: D.DType) -> D.DType:
    return D.Para(ty.body) if isinstance(ty, D.Bang) else ty


class _LocalTyper:
    def __init__(self):
        self.failures: list[Failure] = []
        self.types: dict[int, D.DType] = {}

    def fail(self, path: str, msg: str) -> None:
        self.failures.append(Failure(LOCAL, path, msg))

    def node(self, node: Node, path: str) -> Optional[D.DType]:
        ty = self.head(node.head, path)
        if ty is None:
            return None
        self.types[id(node.head)] = ty
        k = node.door
        if k >= 0:
            ty = D.paras(k, ty)
        else:
            for _ in range(-k):
                if not isinstance(ty, D.Para):
                    self.fail(path, f"closing door on {D.print_dtype(ty)}, which is not a paragraph")
                    return None
                ty = ty.body
        self.types[id(node)] = ty
        return ty

    def head(self, head, path: str) -> Optional[D.DType]:
        if isinstance(head, Occ):
            bad = _well_formed(head.ty, True)
            if bad:
                self.fail(path, f"annotation of {head.name}: {bad}")
                return None
            return _circ(head.ty)
        if isinstance(head, Abs):
            bad = _well_formed(head.ty, True)
            if bad:
                self.fail(path, f"annotation of {head.name}: {bad}")
                return None
            body = self.node(head.body, path + ".body")
            return None if body is None else D.Lolli(head.ty, body)
        if isinstance(head, Apply):
            f = self.node(head.fun, path + ".fun")
            a = self.node(head.arg, path + ".arg")
            if f is None or a is None:
                return None
            if not isinstance(f, D.Lolli):
                self.fail(path, f"applying a term of type {D.print_dtype(f)}")
                return None
            if _circ(f.dom) != a:
                self.fail(
                    path,
                    f"type mismatch between {D.print_dtype(f.dom)} and {D.print_dtype(a)}",
                )
                return None
            return f.cod
        if isinstance(head, TAbs):
            body = self.node(head.body, path + ".body")
            return None if body is None else D.DForall(head.binder, body)
        if isinstance(head, TApply):
            bad = _well_formed(head.ty, False)
            if bad:
                self.fail(path, f"type argument: {bad}")
                return None
            f = self.node(head.fun, path + ".fun")
            if f is None:
                return None
            if not isinstance(f, D.DForall):
                self.fail(path, f"type application to a term of type {D.print_dtype(f)}")
                return None
            return D.subst(f.body, f.binder, head.ty)
        raise TypeError(f"not a head: {head!r}")


def local_types(t: Node) -> tuple[Optional[D.DType], dict[int, D.DType], list[Failure]]:
    """Output types of every node and head (by ``id``), plus failures."""
    typer = _LocalTyper()
    root = typer.node(t, "root")
    failures = list(typer.failures)
    infos = _infos(t)
    # (ii) multiplicity
    counts: dict[str, list[_Info]] = {}
    for info in infos:
        if isinstance(info.node.head, Occ):
            counts.setdefault(info.node.head.name, []).append(info)
    for name, occ in counts.items():
        if len(occ) > 1:
            for info in occ:
                if not isinstance(info.node.head.ty, D.Bang):
                    failures.append(
                        Failure(LOCAL, info.path, f"{name} occurs {len(occ)} times with the linear type "
                                f"{D.print_dtype(info.node.head.ty)}")
                    )
                    break
    # (iii) eigenvariable condition
    by_node = {id(i.node): i for i in infos}
    for info in infos:
        head = info.node.head
        if isinstance(head, TAbs):
            for occ in _free_occurrences(by_node[id(head.body)], by_node):
                if head.binder in D.free_vars(occ.node.head.ty):
                    failures.append(
                        Failure(LOCAL, info.path, f"{head.binder} is free in the type of {occ.node.head.name}")
                    )
    return root, typer.types, failures


def check_local_typing(t: Node) -> Optional[D.DType]:
    root, _, failures = local_types(t)
    return None if failures else root


# ---------------------------------------------------------------- bracketing


def check_bracketing(t: Node) -> list[Failure]:
    out = []
    infos = _infos(t)
    for info in infos:
        head = info.node.head
        if isinstance(head, Abs):
            if not weakly_bracketed(info.runs):
                out.append(Failure(BRACKETING, info.path, f"(ii.a) path to abstraction of {head.name} "
                                   f"is not weakly well-bracketed: {list(info.runs)}"))
    for info in infos:
        head = info.node.head
        if not isinstance(head, Occ):
            continue
        binder = info.parent
        while binder is not None and not (
            isinstance(binder.node.head, Abs) and binder.node.head.name == head.name
        ):
            binder = binder.parent
        if binder is None:
            if not well_bracketed(info.runs):
                out.append(Failure(BRACKETING, info.path, f"(i) free occurrence of {head.name} "
                                   f"is not well-bracketed: {list(info.runs)}"))
        else:
            word = info.runs[len(binder.runs):]
            if not well_bracketed(word):
                out.append(Failure(BRACKETING, info.path, f"(ii.b) path from the binder of {head.name} "
                                   f"is not well-bracketed: {list(word)}"))
    return out


# ---------------------------------------------------------------- bang


def check_bang(t: Node, types: Optional[dict[int, D.DType]] = None) -> list[Failure]:
    if types is None:
        _, types, _ = local_types(t)
    out = []
    infos = _infos(t)
    by_node = {id(i.node): i for i in infos}
    for info in infos:
        head = info.node.head
        if not isinstance(head, Apply):
            continue
        fty = types.get(id(head.fun))
        if not (isinstance(fty, D.Lolli) and isinstance(fty.dom, D.Bang)):
            continue
        u = by_node[id(head.arg)]
        inside = _subtree(u, by_node)
        free = _free_occurrences(u, by_node)
        x = None
        if len(free) > 1:
            names = ", ".join(f.node.head.name for f in free)
            out.append(Failure(BANG, u.path, f"(i) bang subterm has {len(free)} free occurrences ({names})"))
        elif free:
            x = free[0]
            if not isinstance(x.node.head.ty, D.Bang):
                out.append(Failure(BANG, u.path, f"(i) free variable {x.node.head.name} has the linear type "
                                   f"{D.print_dtype(x.node.head.ty)}"))
        base = len(u.runs) - 1
        for w in inside:
            word = w.runs[base:]
            # door-extreme subterms: the bottom of w (its head) and, when w
            # carries doors, its top; u itself is excluded
            bottom = sum(word)
            if w is x:
                if bottom != 0:
                    out.append(Failure(BANG, w.path, f"(ii) s = {bottom} on the path to the free variable, expected 0"))
            elif bottom < 1:
                out.append(Failure(BANG, w.path, f"(ii) s = {bottom} on the path to a subterm, expected >= 1"))
            if w is not u and w.node.door != 0:
                top = sum(word[:-1])
                if top < 1:
                    out.append(Failure(BANG, w.path, f"(ii) s = {top} on the path to a subterm, expected >= 1"))
    return out


# ---------------------------------------------------------------- scope


def check_scope(t: Node, types: Optional[dict[int, D.DType]] = None) -> list[Failure]:
    if types is None:
        _, types, _ = local_types(t)
    out = []
    infos = _infos(t)
    by_node = {id(i.node): i for i in infos}
    for info in infos:
        head = info.node.head
        if not isinstance(head, TAbs):
            continue
        u = by_node[id(head.body)]
        base = len(u.runs) - 1
        for w in _subtree(u, by_node):
            ty = types.get(id(w.node.head))
            if ty is None or head.binder not in D.free_vars(ty):
                continue
            word = w.runs[base:]
            if not weakly_bracketed(word):
                out.append(Failure(SCOPE, w.path, f"depends on {head.binder} but the path from its "
                                   f"abstraction is not weakly well-bracketed: {list(word)}"))
    return out


# ---------------------------------------------------------------- all


def check_well_structured(t: Node) -> CheckReport:
    root, types, failures = local_types(t)
    report = CheckReport(list(failures), root)
    report.failures += check_bracketing(t)
    if root is not None:
        report.failures += check_bang(t, types)
        report.failures += check_scope(t, types)
    return report


# ---------------------------------------------------------------- display


def print_pseudo(t: Node, annotate: bool = True) -> str:
    """Inline display: ``$`` opens a door, ``~`` closes one."""

    def ty(d) -> str:
        return D.print_dtype(d)

    def go(node: Node, atom: bool) -> str:
        k = node.door
        prefix = "$" * k if k > 0 else "~" * (-k)
        head = node.head
        if isinstance(head, Occ):
            return prefix + head.name
        if isinstance(head, Abs):
            ann = f":{ty(head.ty)}" if annotate else ""
            s = f"\\{head.name}{ann}. {go(head.body, False)}"
        elif isinstance(head, TAbs):
            s = f"/\\{head.binder}. {go(head.body, False)}"
        elif isinstance(head, Apply):
            s = f"({go(head.fun, False)}) {go(head.arg, True)}"
        elif isinstance(head, TApply):
            s = f"({go(head.fun, False)}) [{ty(head.ty)}]"
        else:
            raise TypeError(f"not a head: {head!r}")
        if prefix or atom:
            return f"{prefix}({s})"
        return s

    return go(t, False)
