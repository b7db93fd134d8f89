"""Parameters, p-types, free decorations, instantiation and admissibility.

P-type grammar::

    F ::= a | D -o A | forall a. A        (PTVar, PArrow, PForall)
    A ::= $^c F                           (PLin, c a linear combination)
    D ::= $^{b,c} F                       (PBang, b a boolean parameter)

A free decoration numbers boolean and exponent parameters with one shared
counter (``b3`` and ``n3`` decorate the same position) and door parameters
with their own counter.  Both run in pre-order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from . import dlal_types as D
from . import fsyntax as F
from .pterms import Abs, Apply, Node, Occ, TAbs, TApply, map_tree

BOOL, EXP, DOOR = "b", "n", "m"


@dataclass(frozen=True, order=True)
class Param:
    """A boolean (``b``), type-exponent (``n``) or door (``m``) parameter."""

    kind: str
    index: int
    origin: str = field(default="", compare=False, hash=False)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"

    @property
    def is_bool(self) -> bool:
        return self.kind == BOOL

    @property
    def is_door(self) -> bool:
        return self.kind == DOOR

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return self.name


def param_from_name(name: str) -> Param:
    kind, digits = name[0], name[1:]
    if kind not in (BOOL, EXP, DOOR) or not digits.isdigit():
        raise ValueError(f"not a parameter name: {name!r}")
    return Param(kind, int(digits))


class LinComb:
    """Integer linear combination of integer parameters (no constant term).

    Free decorations only produce sums of distinct parameters; signed
    coefficients appear in data-type rows such as ``n7 - n4 >= 0``.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Union[Mapping[Param, int], Iterable[tuple[Param, int]]] = ()):
        acc: dict[Param, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for p, k in items:
            acc[p] = acc.get(p, 0) + k
        self.terms: tuple[tuple[Param, int], ...] = tuple(
            sorted(((p, k) for p, k in acc.items() if k), key=lambda pk: pk[0])
        )
        self._hash = hash(self.terms)

    @classmethod
    def of(cls, *params: Param) -> "LinComb":
        return cls((p, 1) for p in params)

    def __add__(self, other: "LinComb") -> "LinComb":
        return LinComb(itertools.chain(self.terms, other.terms))

    def __neg__(self) -> "LinComb":
        return LinComb((p, -k) for p, k in self.terms)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def params(self) -> tuple[Param, ...]:
        return tuple(p for p, _ in self.terms)

    def evaluate(self, values: Mapping[Param, int]):
        return sum(k * values[p] for p, k in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (p, k) in enumerate(self.terms):
            sign = "-" if k < 0 else "+"
            mag = abs(k)
            body = p.name if mag == 1 else f"{mag}*{p.name}"
            if i == 0:
                out.append(body if k > 0 else f"-{body}")
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"LinComb({self})"


ZERO = LinComb()


# ---------------------------------------------------------------- p-types


@dataclass(frozen=True)
class PTVar:
    name: str


@dataclass(frozen=True)
class PArrow:
    dom: "PBang"
    cod: "PLin"


@dataclass(frozen=True)
class PForall:
    binder: str
    body: "PLin"


@dataclass(frozen=True)
class PLin:
    exps: LinComb
    body: "PF"


@dataclass(frozen=True)
class PBang:
    bang: Param
    exps: LinComb
    body: "PF"

    @property
    def linear(self) -> PLin:
        """``D°``: drop the boolean."""
        return PLin(self.exps, self.body)


PF = Union[PTVar, PArrow, PForall]
PType = Union[PTVar, PArrow, PForall, PLin, PBang]


class ParamSource:
    """Fresh parameters for one inference job."""

    def __init__(self):
        self._pos = itertools.count(1)
        self._door = itertools.count(1)
        self.params: list[Param] = []

    def position(self, origin: str, bang: bool) -> tuple[Optional[Param], Param]:
        k = next(self._pos)
        b = Param(BOOL, k, origin) if bang else None
        n = Param(EXP, k, origin)
        if b is not None:
            self.params.append(b)
        self.params.append(n)
        return b, n

    def door(self, origin: str) -> Param:
        m = Param(DOOR, next(self._door), origin)
        self.params.append(m)
        return m


def free_decorate_type(t: F.FType, kind: str, fresh: ParamSource, origin: str = ""):
    """Free ``"linear"`` (``$^n F``) or ``"bang"`` (``$^{b,n} F``) decoration."""

    def body(ty: F.FType) -> PF:
        if isinstance(ty, F.TVar):
            return PTVar(ty.name)
        if isinstance(ty, F.Arrow):
            return PArrow(bang_(ty.dom), lin(ty.cod))
        if isinstance(ty, F.Forall):
            return PForall(ty.binder, lin(ty.body))
        raise TypeError(f"not a System F type: {ty!r}")

    def lin(ty: F.FType) -> PLin:
        _, n = fresh.position(origin, False)
        return PLin(LinComb.of(n), body(ty))

    def bang_(ty: F.FType) -> PBang:
        b, n = fresh.position(origin, True)
        return PBang(b, LinComb.of(n), body(ty))

    if kind == "linear":
        return lin(t)
    if kind == "bang":
        return bang_(t)
    raise ValueError(f"decoration kind must be 'linear' or 'bang', not {kind!r}")


def free_decorate_term(M: F.FTerm, fresh: Optional[ParamSource] = None) -> Node:
    """The free decoration: fresh doors everywhere, one bang decoration per
    variable shared by all its occurrences, fresh linear decorations for
    type arguments."""
    fresh = fresh or ParamSource()
    decs: dict[str, PBang] = {}

    def go(t: F.FTerm) -> Node:
        if isinstance(t, F.Var):
            m = fresh.door(f"occurrence of {t.name}")
            if t.name not in decs:
                decs[t.name] = free_decorate_type(t.ty, "bang", fresh, f"free variable {t.name}")
            return Node(m, Occ(t.name, decs[t.name]))
        if isinstance(t, F.Lam):
            m = fresh.door(f"abstraction of {t.name}")
            decs[t.name] = free_decorate_type(t.ty, "bang", fresh, f"variable {t.name}")
            return Node(m, Abs(t.name, decs[t.name], go(t.body)))
        if isinstance(t, F.App):
            m = fresh.door("application")
            return Node(m, Apply(go(t.fun), go(t.arg)))
        if isinstance(t, F.TLam):
            m = fresh.door(f"type abstraction of {t.binder}")
            return Node(m, TAbs(t.binder, go(t.body)))
        if isinstance(t, F.TApp):
            m = fresh.door("type application")
            return Node(m, TApply(go(t.fun), free_decorate_type(t.ty, "linear", fresh, "type argument")))
        raise TypeError(f"not a System F term: {t!r}")

    return go(M)


# ---------------------------------------------------------------- operations


def ptype_free_vars(t: PType) -> frozenset[str]:
    if isinstance(t, PTVar):
        return frozenset([t.name])
    if isinstance(t, PArrow):
        return ptype_free_vars(t.dom) | ptype_free_vars(t.cod)
    if isinstance(t, PForall):
        return ptype_free_vars(t.body) - {t.binder}
    return ptype_free_vars(t.body)


def _ptype_names(t: PType) -> set[str]:
    if isinstance(t, PTVar):
        return {t.name}
    if isinstance(t, PArrow):
        return _ptype_names(t.dom) | _ptype_names(t.cod)
    if isinstance(t, PForall):
        return {t.binder} | _ptype_names(t.body)
    return _ptype_names(t.body)


def ptype_subst(B: PType, binder: str, A: PLin) -> PType:
    """``B[A/binder]``: ``$^{c'}a`` becomes ``$^{c'+c}F`` and
    ``$^{b,c'}a`` becomes ``$^{b,c'+c}F`` for ``A = $^c F``."""
    fv = ptype_free_vars(A)

    def f(t: PF) -> PF:
        if isinstance(t, PTVar):
            return t
        if isinstance(t, PArrow):
            return PArrow(layer(t.dom), layer(t.cod))
        if isinstance(t, PForall):
            if t.binder == binder:
                return t
            if t.binder in fv:
                new = F.fresh_name(t.binder, fv | _ptype_names(t.body) | {binder})
                renamed = ptype_subst(t.body, t.binder, PLin(ZERO, PTVar(new)))
                return PForall(new, layer(renamed))
            return PForall(t.binder, layer(t.body))
        raise TypeError(f"not a p-type body: {t!r}")

    def layer(t):
        if isinstance(t.body, PTVar) and t.body.name == binder:
            if isinstance(t, PBang):
                return PBang(t.bang, t.exps + A.exps, A.body)
            return PLin(t.exps + A.exps, A.body)
        if isinstance(t, PBang):
            return PBang(t.bang, t.exps, f(t.body))
        return PLin(t.exps, f(t.body))

    if isinstance(B, (PLin, PBang)):
        return layer(B)
    if isinstance(B, PTVar) and B.name == binder:
        raise ValueError("cannot substitute for a bare variable without an exponent layer")
    return f(B)


def layers(t: PType) -> Iterable[Union[PLin, PBang]]:
    """Every exponent layer of ``t`` in pre-order."""
    if isinstance(t, (PLin, PBang)):
        yield t
        yield from layers(t.body)
    elif isinstance(t, PArrow):
        yield from layers(t.dom)
        yield from layers(t.cod)
    elif isinstance(t, PForall):
        yield from layers(t.body)


def ptype_params(t: PType) -> list[Param]:
    out: list[Param] = []
    for layer in layers(t):
        if isinstance(layer, PBang):
            out.append(layer.bang)
        out.extend(layer.exps.params)
    return out


def erase_ptype(t: PType) -> F.FType:
    if isinstance(t, PTVar):
        return F.TVar(t.name)
    if isinstance(t, PArrow):
        return F.Arrow(erase_ptype(t.dom), erase_ptype(t.cod))
    if isinstance(t, PForall):
        return F.Forall(t.binder, erase_ptype(t.body))
    return erase_ptype(t.body)


def adm_constraints(E: PType):
    """``Adm(E)``: exponents are non-negative and a bang needs one paragraph."""
    from .constraints import ConstraintSet, LinGeq0, MixedGeq1

    out = ConstraintSet()
    for layer in layers(E):
        out.add(LinGeq0(layer.exps), "admissibility")
        if isinstance(layer, PBang):
            out.add(MixedGeq1(layer.bang, layer.exps), "admissibility")
    return out


# ---------------------------------------------------------------- instantiation


class AdmissibilityError(ValueError):
    def __init__(self, message: str, param: Optional[Param] = None):
        super().__init__(message)
        self.param = param


@dataclass
class Instantiation:
    bool_map: dict[Param, int] = field(default_factory=dict)
    int_map: dict[Param, int] = field(default_factory=dict)

    def __getitem__(self, p: Param) -> int:
        return self.bool_map[p] if p.is_bool else self.int_map[p]

    def value(self, c: LinComb) -> int:
        return c.evaluate(self.int_map)

    def as_dict(self) -> dict[str, int]:
        items = list(self.bool_map.items()) + list(self.int_map.items())
        return {p.name: v for p, v in sorted(items)}

    @classmethod
    def from_values(cls, values: Mapping[Param, int]) -> "Instantiation":
        inst = cls()
        for p, v in values.items():
            (inst.bool_map if p.is_bool else inst.int_map)[p] = v
        return inst


def instantiate_type(phi: Instantiation, E: PType) -> D.DType:
    """Map a p-type to a DLAL* type; raises :class:`AdmissibilityError`."""
    if isinstance(E, PTVar):
        return D.DVar(E.name)
    if isinstance(E, PArrow):
        return D.Lolli(instantiate_type(phi, E.dom), instantiate_type(phi, E.cod))
    if isinstance(E, PForall):
        return D.DForall(E.binder, instantiate_type(phi, E.body))
    c = phi.value(E.exps)
    if c < 0:
        bad = E.exps.params[0] if E.exps else None
        raise AdmissibilityError(f"negative exponent {E.exps} = {c}", bad)
    body = instantiate_type(phi, E.body)
    if isinstance(E, PBang) and phi[E.bang] == 1:
        if c < 1:
            raise AdmissibilityError(
                f"{E.bang} = 1 requires {E.exps} >= 1, found {c}", E.bang
            )
        return D.Bang(D.paras(c - 1, body))
    return D.paras(c, body)


def instantiate_term(phi: Instantiation, t: Node) -> Node:
    """The regular pseudo-term ``phi(t)``: doors become signed counts."""
    return map_tree(t, lambda m: phi.int_map[m], lambda ty: instantiate_type(phi, ty))


def term_params(t: Node) -> list[Param]:
    """Parameters of a p-term: doors, then decoration parameters, deduplicated."""
    from .pterms import nodes

    seen: dict[Param, None] = {}
    for node in nodes(t):
        seen[node.door] = None
        head = node.head
        if isinstance(head, (Occ, Abs, TApply)):
            for p in ptype_params(head.ty):
                seen[p] = None
    return sorted(seen)


# ---------------------------------------------------------------- display


def print_ptype(t: PType) -> str:
    if isinstance(t, PTVar):
        return t.name
    if isinstance(t, PArrow):
        return f"({print_ptype(t.dom)} -o {print_ptype(t.cod)})"
    if isinstance(t, PForall):
        return f"(forall {t.binder}. {print_ptype(t.body)})"
    exps = str(t.exps).replace(" ", "")
    if isinstance(t, PBang):
        return f"$^{{{t.bang},{exps}}}{print_ptype(t.body)}"
    return f"$^{{{exps}}}{print_ptype(t.body)}"
