"""Constraint vocabulary and generation from a free decoration.

Eight shapes exist, in three families::

    boolean  BoolEq  b1 = b2       BoolConst  b = i      BoolImp    b -> b'
    linear   LinEq   c1 = c2       LinGeq0    c >= 0     LinEq0     c = 0
    mixed    MixedEq0  b -> c = 0  MixedGeq1  b -> c >= 1

:class:`LinGeq1` only appears once mixed constraints have been
instantiated by a boolean solution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .param import (
    LinComb,
    Param,
    PArrow,
    PBang,
    PForall,
    PLin,
    PTVar,
    PType,
    ZERO,
    adm_constraints,
    ptype_free_vars,
    ptype_subst,
)
from .pterms import Abs, Apply, Node, Occ, TAbs, TApply, children, free_occurrences, walk


class Constraint:
    family = ""

    def is_trivial(self) -> bool:
        return False


@dataclass(frozen=True)
class BoolEq(Constraint):
    left: Param
    right: Param
    family = "boolean"

    def __post_init__(self):
        if self.right < self.left:
            a, b = self.right, self.left
            object.__setattr__(self, "left", a)
            object.__setattr__(self, "right", b)

    def is_trivial(self) -> bool:
        return self.left == self.right

    def __str__(self) -> str:
        return f"B {self.left} = {self.right}"


@dataclass(frozen=True)
class BoolConst(Constraint):
    param: Param
    value: int
    family = "boolean"

    def __str__(self) -> str:
        return f"B {self.param} = {self.value}"


@dataclass(frozen=True)
class BoolImp(Constraint):
    """``premise = 1`` implies ``conclusion = 1``."""

    premise: Param
    conclusion: Param
    family = "boolean"

    def is_trivial(self) -> bool:
        return self.premise == self.conclusion

    def __str__(self) -> str:
        return f"B {self.premise} -> {self.conclusion}"


class _Linear(Constraint):
    family = "linear"
    op = ""
    bound = 0

    def row(self) -> tuple[LinComb, str, int]:
        """``(expression, "=" or ">=", constant)``."""
        raise NotImplementedError

    def holds(self, values) -> bool:
        expr, op, k = self.row()
        v = expr.evaluate(values)
        return v == k if op == "=" else v >= k


@dataclass(frozen=True)
class LinEq(_Linear):
    left: LinComb
    right: LinComb

    def __post_init__(self):
        if str(self.right) < str(self.left):
            a, b = self.right, self.left
            object.__setattr__(self, "left", a)
            object.__setattr__(self, "right", b)

    def row(self):
        return (self.left - self.right, "=", 0)

    def is_trivial(self) -> bool:
        return self.left == self.right

    def __str__(self) -> str:
        return f"L {self.left} = {self.right}"


@dataclass(frozen=True)
class LinGeq0(_Linear):
    expr: LinComb

    def row(self):
        return (self.expr, ">=", 0)

    def is_trivial(self) -> bool:
        return not self.expr

    def __str__(self) -> str:
        return f"L {self.expr} >= 0"


@dataclass(frozen=True)
class LinEq0(_Linear):
    expr: LinComb

    def row(self):
        return (self.expr, "=", 0)

    def is_trivial(self) -> bool:
        return not self.expr

    def __str__(self) -> str:
        return f"L {self.expr} = 0"


@dataclass(frozen=True)
class LinGeq1(_Linear):
    expr: LinComb

    def row(self):
        return (self.expr, ">=", 1)

    def __str__(self) -> str:
        return f"L {self.expr} >= 1"


@dataclass(frozen=True)
class MixedEq0(Constraint):
    guard: Param
    expr: LinComb
    family = "mixed"

    def is_trivial(self) -> bool:
        return not self.expr

    def body(self) -> _Linear:
        return LinEq0(self.expr)

    def __str__(self) -> str:
        return f"M {self.guard} -> {self.expr} = 0"


@dataclass(frozen=True)
class MixedGeq1(Constraint):
    guard: Param
    expr: LinComb
    family = "mixed"

    def body(self) -> _Linear:
        return LinGeq1(self.expr)

    def __str__(self) -> str:
        return f"M {self.guard} -> {self.expr} >= 1"


LINEAR_SHAPES = (LinEq, LinGeq0, LinEq0, LinGeq1)
BOOLEAN_SHAPES = (BoolEq, BoolConst, BoolImp)
MIXED_SHAPES = (MixedEq0, MixedGeq1)


class ConstraintSet:
    """Ordered, deduplicated constraints with origin tags.

    Trivially true constraints (``0 >= 0``, ``0 = 0``, ``b = b``) are
    dropped.  When a constraint is added twice the first origin is kept.
    """

    def __init__(self, items: Iterable[tuple[Constraint, str]] = ()):
        self._items: dict[Constraint, str] = {}
        for c, origin in items:
            self.add(c, origin)

    def add(self, c: Constraint, origin: str = "") -> None:
        if c.is_trivial():
            return
        if c not in self._items:
            self._items[c] = origin

    def update(self, other: "ConstraintSet") -> None:
        for c, origin in other.items():
            self.add(c, origin)

    def __or__(self, other: "ConstraintSet") -> "ConstraintSet":
        out = ConstraintSet(self.items())
        out.update(other)
        return out

    def items(self) -> Iterator[tuple[Constraint, str]]:
        return iter(self._items.items())

    def origin(self, c: Constraint) -> str:
        return self._items[c]

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, c: object) -> bool:
        return c in self._items

    def params(self) -> list[Param]:
        seen: set[Param] = set()
        for c in self:
            seen.update(constraint_params(c))
        return sorted(seen)

    def split(self) -> tuple["ConstraintSet", "ConstraintSet", "ConstraintSet"]:
        return split(self)

    def dump(self) -> str:
        return "".join(f"{c}  # origin: {o}\n" for c, o in self.items())

    def __repr__(self) -> str:
        return f"ConstraintSet({len(self)} constraints)"


def constraint_params(c: Constraint) -> tuple[Param, ...]:
    if isinstance(c, BoolEq):
        return (c.left, c.right)
    if isinstance(c, BoolConst):
        return (c.param,)
    if isinstance(c, BoolImp):
        return (c.premise, c.conclusion)
    if isinstance(c, LinEq):
        return c.left.params + c.right.params
    if isinstance(c, (LinGeq0, LinEq0, LinGeq1)):
        return c.expr.params
    if isinstance(c, (MixedEq0, MixedGeq1)):
        return (c.guard,) + c.expr.params
    raise TypeError(f"not a constraint: {c!r}")


def split(S: ConstraintSet) -> tuple[ConstraintSet, ConstraintSet, ConstraintSet]:
    """Partition into (boolean, linear, mixed) by shape."""
    parts = {"boolean": ConstraintSet(), "linear": ConstraintSet(), "mixed": ConstraintSet()}
    for c, origin in S.items():
        parts[c.family].add(c, origin)
    return parts["boolean"], parts["linear"], parts["mixed"]


def holds(c: Constraint, values) -> bool:
    """Evaluate a constraint under a parameter valuation (a mapping)."""
    if isinstance(c, BoolEq):
        return values[c.left] == values[c.right]
    if isinstance(c, BoolConst):
        return values[c.param] == c.value
    if isinstance(c, BoolImp):
        return values[c.premise] == 0 or values[c.conclusion] == 1
    if isinstance(c, _Linear):
        return c.holds(values)
    if isinstance(c, (MixedEq0, MixedGeq1)):
        return values[c.guard] == 0 or c.body().holds(values)
    raise TypeError(f"not a constraint: {c!r}")


# ---------------------------------------------------------------- unification


class UnificationError(Exception):
    """Two p-types have different erasures (an internal error)."""


def unif(E1: PType, E2: PType) -> ConstraintSet:
    """Constraints equivalent to ``phi(E1) = phi(E2)``."""
    out = ConstraintSet()

    def go(a: PType, b: PType) -> None:
        if isinstance(a, PBang) and isinstance(b, PBang):
            out.add(BoolEq(a.bang, b.bang), "unification")
            out.add(LinEq(a.exps, b.exps), "unification")
            go(a.body, b.body)
        elif isinstance(a, PLin) and isinstance(b, PLin):
            out.add(LinEq(a.exps, b.exps), "unification")
            go(a.body, b.body)
        elif isinstance(a, PTVar) and isinstance(b, PTVar):
            pass
        elif isinstance(a, PArrow) and isinstance(b, PArrow):
            go(a.dom, b.dom)
            go(a.cod, b.cod)
        elif isinstance(a, PForall) and isinstance(b, PForall):
            go(a.body, b.body)
        else:
            raise UnificationError(f"shape mismatch: {a} vs {b}")

    go(E1, E2)
    return out


# ---------------------------------------------------------------- local typing


@dataclass
class Typing:
    """Result of local typing: the type of the root and of every position."""

    root_type: PLin
    types: dict[int, PLin]
    constraints: ConstraintSet

    def type_of(self, position) -> PLin:
        return self.types[id(position)]


def _site(node: Node) -> str:
    return str(node.door)


def local_typing(t: Node) -> Typing:
    """Local typing rules and the constraints ``Mc(t)``."""
    cs = ConstraintSet()
    types: dict[int, PLin] = {}
    # Post-order with an explicit stack: deep terms exceed the recursion limit.
    stack: list[tuple[Node, bool]] = [(t, False)]
    while stack:
        node, done = stack.pop()
        head = node.head
        if not done:
            stack.append((node, True))
            for child in reversed(children(head)):
                stack.append((child, False))
            continue
        site = _site(node)
        if isinstance(head, Occ):
            ty = head.ty.linear
            for c, _ in adm_constraints(head.ty).items():
                cs.add(c, f"ltype: admissibility of {head.name} at {site}")
        elif isinstance(head, Abs):
            body_ty = types[id(head.body)]
            ty = PLin(ZERO, PArrow(head.ty, body_ty))
            for c, _ in adm_constraints(head.ty).items():
                cs.add(c, f"ltype: admissibility of binder {head.name} at {site}")
        elif isinstance(head, Apply):
            fty = types[id(head.fun)]
            aty = types[id(head.arg)]
            if not isinstance(fty.body, PArrow):
                raise UnificationError(f"application of a non-arrow at {site}")
            cs.add(LinEq0(fty.exps), f"ltype: function position at {site}")
            for c, _ in unif(fty.body.dom.linear, aty).items():
                cs.add(c, f"ltype: argument unification at {site}")
            ty = fty.body.cod
        elif isinstance(head, TAbs):
            ty = PLin(ZERO, PForall(head.binder, types[id(head.body)]))
        elif isinstance(head, TApply):
            fty = types[id(head.fun)]
            if not isinstance(fty.body, PForall):
                raise UnificationError(f"type application of a non-forall at {site}")
            cs.add(LinEq0(fty.exps), f"ltype: type-application function at {site}")
            for c, _ in adm_constraints(head.ty).items():
                cs.add(c, f"ltype: admissibility of type argument at {site}")
            ty = ptype_subst(fty.body.body, fty.body.binder, head.ty)
        else:
            raise TypeError(f"not a head: {head!r}")
        types[id(head)] = ty
        node_ty = PLin(LinComb.of(node.door) + ty.exps, ty.body)
        types[id(node)] = node_ty
        cs.add(LinGeq0(node_ty.exps), f"ltype: door at {site}")
    return Typing(types[id(t)], types, cs)


def multiplicity_constraints(t: Node) -> ConstraintSet:
    counts: Counter = Counter()
    decs = {}
    for node, _ in walk(t):
        if isinstance(node.head, Occ):
            counts[node.head.name] += 1
            decs[node.head.name] = node.head.ty
    cs = ConstraintSet()
    for name, k in counts.items():
        if k >= 2:
            cs.add(BoolConst(decs[name].bang, 1), f"ltype: {name} occurs {k} times")
    return cs


def ltype(t: Node, typing: Optional[Typing] = None) -> ConstraintSet:
    typing = typing or local_typing(t)
    return typing.constraints | multiplicity_constraints(t)


# ---------------------------------------------------------------- door words


def doors(t: Node, u) -> list[Param]:
    """The word ``<t>_u``: door parameters on the path from ``t`` to ``u``.

    ``u`` is a node or a head; a node's own door lies on the path to its
    head but not on the path to the node itself.
    """
    for node, path in walk(t):
        if node is u:
            return list(path[:-1])
        if node.head is u:
            return list(path)
    raise ValueError("position not in term")


def word_sum(word: Iterable[Param]) -> LinComb:
    return LinComb.of(*word)


def wbracket(word) -> list[Constraint]:
    out = []
    acc: list[Param] = []
    for m in word:
        acc.append(m)
        out.append(LinGeq0(LinComb.of(*acc)))
    return out


def bracket(word) -> list[Constraint]:
    word = list(word)
    return wbracket(word) + [LinEq0(LinComb.of(*word))]


def bracket_constraints(t: Node) -> ConstraintSet:
    cs = ConstraintSet()
    binders: dict[str, tuple[Node, int]] = {}
    for node, path in walk(t):
        head = node.head
        if isinstance(head, Abs):
            for c in wbracket(path):
                cs.add(c, f"bracket: abstraction {head.name} at {_site(node)}")
            binders[head.name] = (head.body, len(path))
        elif isinstance(head, Occ):
            if head.name in binders:
                body, k = binders[head.name]
                origin = f"bracket: {head.name} from its binder to {_site(node)}"
                for c in bracket(path[k:]):
                    cs.add(c, origin)
            else:
                for c in bracket(path):
                    cs.add(c, f"bracket: free occurrence of {head.name} at {_site(node)}")
    return cs


# ---------------------------------------------------------------- bang


def bang_subterms(t: Node, typing: Typing) -> list[tuple[Node, Param]]:
    """Arguments of applications whose function has a bang domain, each
    with its critical parameter."""
    out = []
    for node, _ in walk(t):
        head = node.head
        if isinstance(head, Apply):
            fty = typing.type_of(head.fun)
            if isinstance(fty.body, PArrow):
                out.append((head.arg, fty.body.dom.bang))
    return out


def _relative_sums(u: Node):
    """``(node, s(<u>_head))`` for every node of ``u``, pre-order."""
    stack = [(u, LinComb.of(u.door))]
    while stack:
        node, s = stack.pop()
        yield node, s
        for child in reversed(children(node.head)):
            stack.append((child, s + LinComb.of(child.door)))


def bang_constraints(t: Node, typing: Optional[Typing] = None) -> ConstraintSet:
    typing = typing or local_typing(t)
    cs = ConstraintSet()
    for u, b in bang_subterms(t, typing):
        site = _site(u)
        occ = free_occurrences(u)
        x_node = None
        if len(occ) >= 2:
            names = ", ".join(sorted({n.head.name for n in occ}))
            cs.add(BoolConst(b, 0), f"bang(i): argument at {site} has free {names}")
        elif len(occ) == 1:
            x_node = occ[0]
            cs.add(
                BoolImp(b, x_node.head.ty.bang),
                f"bang(i): free {x_node.head.name} of argument at {site}",
            )
        # Every proper subterm v of u other than x: the word <u>_v is the
        # word to some node's head (a node v reaches its parent's head).
        for node, s in _relative_sums(u):
            if node is x_node:
                cs.add(MixedEq0(b, s), f"bang(ii): free {node.head.name} inside argument at {site}")
            else:
                cs.add(MixedGeq1(b, s), f"bang(ii): argument at {site} to {_site(node)}")
    return cs


# ---------------------------------------------------------------- scope


def scope_constraints(t: Node, typing: Optional[Typing] = None) -> ConstraintSet:
    """Weak well-bracketing from each type abstraction to every position
    whose type depends on its variable."""
    typing = typing or local_typing(t)
    cs = ConstraintSet()
    for node, _ in walk(t):
        head = node.head
        if not isinstance(head, TAbs):
            continue
        alpha = head.binder
        u = head.body
        origin = f"scope: {alpha} at {_site(node)}"
        # Mark nodes whose head depends on alpha, then all their ancestors
        # within u; each marked node contributes its prefix sum.
        parent: dict[int, Optional[Node]] = {id(u): None}
        order = []
        for w, s in _relative_sums(u):
            order.append((w, s))
            for child in children(w.head):
                parent[id(child)] = w
        marked: set[int] = set()
        for w, _ in order:
            if alpha in ptype_free_vars(typing.type_of(w.head)):
                cur: Optional[Node] = w
                while cur is not None and id(cur) not in marked:
                    marked.add(id(cur))
                    cur = parent[id(cur)]
        for w, s in order:
            if id(w) in marked:
                cs.add(LinGeq0(s), origin)
    return cs


# ---------------------------------------------------------------- all


def const_all(t: Node, typing: Optional[Typing] = None) -> ConstraintSet:
    """``Ltype ∪ Bracket ∪ Bang ∪ Scope``."""
    typing = typing or local_typing(t)
    cs = ltype(t, typing)
    cs.update(bracket_constraints(t))
    cs.update(bang_constraints(t, typing))
    cs.update(scope_constraints(t, typing))
    return cs


def family_counts(t: Node, typing: Optional[Typing] = None) -> dict[str, int]:
    typing = typing or local_typing(t)
    return {
        "ltype": len(ltype(t, typing)),
        "bracket": len(bracket_constraints(t)),
        "bang": len(bang_constraints(t, typing)),
        "scope": len(scope_constraints(t, typing)),
    }
