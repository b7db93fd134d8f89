"""Constraint sets forcing a decoration to be a genuine data type.

For a decoration of ``N`` the positions are numbered as in::

    $^{n1} forall a. $^{n2} [ $^{b3,n3}($^{b4,n4}a -o $^{n5}a)
                              -o $^{n6}($^{b7,n7}a -o $^{n8}a) ]

and for ``W`` likewise with twelve positions.  The exponent at a position
may be any linear combination (result types carry sums of doors and
exponents), so the rows use the combinations found there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from . import fsyntax as F
from .constraints import (
    BoolConst,
    ConstraintSet,
    LinEq,
    LinEq0,
    LinGeq0,
    MixedGeq1,
)
from .param import PArrow, PBang, PForall, PLin, erase_ptype
from .pterms import Abs, Node, walk

NAT, WORD = "N", "W"


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class DomainSpec:
    entries: tuple[tuple[str, str], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "DomainSpec":
        """``"n:N,l:W"``"""
        entries = []
        for item in filter(None, (s.strip() for s in text.split(","))):
            var, sep, sort = item.partition(":")
            sort = sort.strip()
            if not sep or sort not in (NAT, WORD) or not var.strip():
                raise DomainError(f"bad domain entry {item!r}; expected var:N or var:W")
            entries.append((var.strip(), sort))
        return cls(tuple(entries))

    def __iter__(self):
        return iter(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


def _layers(E: Union[PLin, PBang], sort: str) -> dict[int, Union[PLin, PBang]]:
    """Positions 1..8 (N) or 1..12 (W) of a decoration, or DomainError."""
    expected = F.N_F if sort == NAT else F.W_F
    if erase_ptype(E) != expected:
        raise DomainError(f"type {F.print_type(erase_ptype(E), False)} is not {sort}")
    pos: dict[int, Union[PLin, PBang]] = {1: E}
    forall = E.body
    assert isinstance(forall, PForall)
    pos[2] = forall.body
    counter = [2]

    def step(layer) -> None:
        counter[0] += 1
        pos[counter[0]] = layer

    def arrow_parts(layer):
        body = layer.body
        assert isinstance(body, PArrow)
        return body.dom, body.cod

    dom, rest = arrow_parts(pos[2])
    # step function (a -o a) for each constructor, then the final a -o a
    n_steps = 1 if sort == NAT else 2
    for i in range(n_steps):
        step(dom)
        d_in, d_out = arrow_parts(dom)
        step(d_in)
        step(d_out)
        if i + 1 < n_steps:
            step(rest)
            dom, rest = arrow_parts(rest)
    step(rest)
    r_in, r_out = arrow_parts(rest)
    step(r_in)
    step(r_out)
    return pos


def positions(E, sort: str):
    """Boolean and exponent maps ``(b, c)`` keyed by position number."""
    pos = _layers(E, sort)
    c = {i: layer.exps for i, layer in pos.items()}
    b = {i: layer.bang for i, layer in pos.items() if isinstance(layer, PBang)}
    return b, c


def nat_constraints(E: Union[PLin, PBang], strict: bool = False, origin: str = "N") -> ConstraintSet:
    """``N(E)``; ``strict`` adds ``c7 = 0``, ruling out ``$a -o $a`` results."""
    b, c = positions(E, NAT)
    out = ConstraintSet()
    tag = f"datatype {origin}"
    out.add(BoolConst(b[3], 1), tag)
    out.add(BoolConst(b[4], 0), tag)
    out.add(BoolConst(b[7], 0), tag)
    out.add(LinEq(c[4], c[5]), tag)
    out.add(LinEq(c[7], c[8]), tag)
    out.add(LinEq(c[3] + c[4], c[6] + c[7]), tag)
    out.add(LinGeq0(c[7] - c[4]), tag)
    for i in range(1, 9):
        out.add(LinGeq0(c[i]), tag)
    out.add(MixedGeq1(b[3], c[3]), tag)
    if strict:
        out.add(LinEq0(c[7]), f"{tag} (strict)")
    return out


def word_constraints(E: Union[PLin, PBang], origin: str = "W") -> ConstraintSet:
    """``W(E)``."""
    b, c = positions(E, WORD)
    out = ConstraintSet()
    tag = f"datatype {origin}"
    out.add(BoolConst(b[3], 1), tag)
    out.add(BoolConst(b[7], 1), tag)
    for j in (4, 8, 11):
        out.add(BoolConst(b[j], 0), tag)
    out.add(LinEq(c[4], c[5]), tag)
    out.add(LinEq(c[8], c[9]), tag)
    out.add(LinEq(c[11], c[12]), tag)
    out.add(LinEq(c[3] + c[4], c[6] + c[7] + c[8]), tag)
    out.add(LinEq(c[7] + c[8], c[10] + c[11]), tag)
    out.add(LinGeq0(c[11] - c[8]), tag)
    out.add(LinGeq0(c[11] - c[4]), tag)
    for i in range(1, 13):
        out.add(LinGeq0(c[i]), tag)
    out.add(MixedGeq1(b[3], c[3]), tag)
    out.add(MixedGeq1(b[7], c[7]), tag)
    return out


def sort_constraints(E, sort: str, strict: bool = False, origin: str = "") -> ConstraintSet:
    if sort == NAT:
        return nat_constraints(E, strict, origin or NAT)
    if sort == WORD:
        return word_constraints(E, origin or WORD)
    raise DomainError(f"unknown sort {sort!r}")


def domain_constraints(t: Node, spec: Iterable[tuple[str, str]], strict: bool = False) -> ConstraintSet:
    """Union of the data-type sets over the decorations of bound variables."""
    decs = {}
    for node, _ in walk(t):
        if isinstance(node.head, Abs):
            decs.setdefault(node.head.name, node.head.ty)
    out = ConstraintSet()
    for var, sort in spec:
        if var not in decs:
            raise DomainError(f"{var} is not a bound variable of the term")
        dec = decs[var]
        try:
            out.update(sort_constraints(dec.linear, sort, False, f"{sort} for {var}"))
        except DomainError as e:
            raise DomainError(f"{var}: {e}") from None
    return out


def find_sort(E) -> str | None:
    """``"N"`` or ``"W"`` when the erasure of ``E`` is that data type."""
    erased = erase_ptype(E)
    if erased == F.N_F:
        return NAT
    if erased == F.W_F:
        return WORD
    return None
