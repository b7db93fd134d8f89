"""DLAL and DLAL* types.

One family of type constructors covers both languages: DLAL types use
:class:`Lolli`, :class:`Implies`, :class:`Para`, :class:`DVar` and
:class:`DForall`; DLAL* types replace ``A => B`` by ``!A -o B`` using
:class:`Bang`.  Bang only occurs as the domain of a :class:`Lolli` in a
well-formed DLAL* type.

ASCII display: ``-o`` (linear arrow), ``=>`` (intuitionistic arrow),
``$`` (paragraph), ``!`` (bang), ``forall a.``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import fsyntax as F


class DType:
    """Base class; equality and hashing are up to alpha-equivalence."""

    __slots__ = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DType):
            return NotImplemented
        return self is other or alpha_key(self) == alpha_key(other)

    def __hash__(self) -> int:
        return hash(alpha_key(self))

    def __str__(self) -> str:
        return print_dtype(self)


@dataclass(frozen=True, eq=False)
class DVar(DType):
    name: str


@dataclass(frozen=True, eq=False)
class Lolli(DType):
    dom: DType
    cod: DType


@dataclass(frozen=True, eq=False)
class Implies(DType):
    dom: DType
    cod: DType


@dataclass(frozen=True, eq=False)
class Para(DType):
    body: DType


@dataclass(frozen=True, eq=False)
class Bang(DType):
    body: DType


@dataclass(frozen=True, eq=False)
class DForall(DType):
    binder: str
    body: DType


def alpha_key(t: DType, env: Optional[dict] = None, depth: int = 0):
    env = {} if env is None else env
    if isinstance(t, DVar):
        return ("b", depth - env[t.name]) if t.name in env else ("f", t.name)
    if isinstance(t, Lolli):
        return ("-o", alpha_key(t.dom, env, depth), alpha_key(t.cod, env, depth))
    if isinstance(t, Implies):
        return ("=>", alpha_key(t.dom, env, depth), alpha_key(t.cod, env, depth))
    if isinstance(t, Para):
        return ("$", alpha_key(t.body, env, depth))
    if isinstance(t, Bang):
        return ("!", alpha_key(t.body, env, depth))
    if isinstance(t, DForall):
        inner = dict(env)
        inner[t.binder] = depth + 1
        return ("all", alpha_key(t.body, inner, depth + 1))
    raise TypeError(f"not a DLAL type: {t!r}")


def paras(k: int, t: DType) -> DType:
    for _ in range(k):
        t = Para(t)
    return t


def free_vars(t: DType) -> frozenset[str]:
    if isinstance(t, DVar):
        return frozenset([t.name])
    if isinstance(t, (Lolli, Implies)):
        return free_vars(t.dom) | free_vars(t.cod)
    if isinstance(t, (Para, Bang)):
        return free_vars(t.body)
    if isinstance(t, DForall):
        return free_vars(t.body) - {t.binder}
    raise TypeError(f"not a DLAL type: {t!r}")


def _names(t: DType) -> set[str]:
    if isinstance(t, DVar):
        return {t.name}
    if isinstance(t, (Lolli, Implies)):
        return _names(t.dom) | _names(t.cod)
    if isinstance(t, (Para, Bang)):
        return _names(t.body)
    return {t.binder} | _names(t.body)


def subst(t: DType, binder: str, u: DType) -> DType:
    """Capture-avoiding ``t[binder := u]``."""
    if isinstance(t, DVar):
        return u if t.name == binder else t
    if isinstance(t, (Lolli, Implies)):
        return type(t)(subst(t.dom, binder, u), subst(t.cod, binder, u))
    if isinstance(t, (Para, Bang)):
        return type(t)(subst(t.body, binder, u))
    if isinstance(t, DForall):
        if t.binder == binder or binder not in free_vars(t.body):
            return t
        fv = free_vars(u)
        if t.binder in fv:
            new = F.fresh_name(t.binder, fv | _names(t.body) | {binder})
            return DForall(new, subst(subst(t.body, t.binder, DVar(new)), binder, u))
        return DForall(t.binder, subst(t.body, binder, u))
    raise TypeError(f"not a DLAL type: {t!r}")


def erase_dlal(t: DType) -> F.FType:
    """Forget modalities and collapse both arrows to ``->``."""
    if isinstance(t, DVar):
        return F.TVar(t.name)
    if isinstance(t, (Lolli, Implies)):
        return F.Arrow(erase_dlal(t.dom), erase_dlal(t.cod))
    if isinstance(t, (Para, Bang)):
        return erase_dlal(t.body)
    if isinstance(t, DForall):
        return F.Forall(t.binder, erase_dlal(t.body))
    raise TypeError(f"not a DLAL type: {t!r}")


def star(t: DType) -> DType:
    """Rewrite every ``A => B`` as ``!A* -o B*``."""
    if isinstance(t, DVar):
        return t
    if isinstance(t, Implies):
        return Lolli(Bang(star(t.dom)), star(t.cod))
    if isinstance(t, Lolli):
        return Lolli(star(t.dom), star(t.cod))
    if isinstance(t, (Para, Bang)):
        return type(t)(star(t.body))
    if isinstance(t, DForall):
        return DForall(t.binder, star(t.body))
    raise TypeError(f"not a DLAL type: {t!r}")


def unstar(t: DType) -> DType:
    """Rewrite every ``!A -o B`` as ``A => B`` (inverse of :func:`star`)."""
    if isinstance(t, DVar):
        return t
    if isinstance(t, Lolli):
        if isinstance(t.dom, Bang):
            return Implies(unstar(t.dom.body), unstar(t.cod))
        return Lolli(unstar(t.dom), unstar(t.cod))
    if isinstance(t, Implies):
        return Implies(unstar(t.dom), unstar(t.cod))
    if isinstance(t, (Para, Bang)):
        return type(t)(unstar(t.body))
    if isinstance(t, DForall):
        return DForall(t.binder, unstar(t.body))
    raise TypeError(f"not a DLAL type: {t!r}")


def depth(t: DType) -> int:
    """Nesting depth of paragraphs and intuitionistic arrows.

    A bang in a DLAL* type counts like the domain of ``=>``.
    """
    if isinstance(t, DVar):
        return 0
    if isinstance(t, DForall):
        return depth(t.body)
    if isinstance(t, Lolli):
        return max(depth(t.dom), depth(t.cod))
    if isinstance(t, Implies):
        return max(depth(t.dom) + 1, depth(t.cod))
    if isinstance(t, (Para, Bang)):
        return depth(t.body) + 1
    raise TypeError(f"not a DLAL type: {t!r}")


def is_pi1(t: DType) -> bool:
    """True when no universal quantifier occurs negatively."""

    def go(ty: DType, positive: bool) -> bool:
        if isinstance(ty, DVar):
            return True
        if isinstance(ty, DForall):
            return positive and go(ty.body, positive)
        if isinstance(ty, (Lolli, Implies)):
            return go(ty.dom, not positive) and go(ty.cod, positive)
        return go(ty.body, positive)

    return go(t, True)


@dataclass(frozen=True)
class ComplexityBound:
    depth: int
    size: int
    pi1: bool

    @property
    def expression(self) -> str:
        return f"{self.size}^(2^{self.depth})"

    def __str__(self) -> str:
        return self.expression


def complexity_bound(t: DType, size: int) -> ComplexityBound:
    """Symbolic normalization bound ``size^(2^d)``, d the depth of ``t``."""
    return ComplexityBound(depth(t), size, is_pi1(t))


def nat_dlal(binder: str = "a") -> DType:
    """``forall a. (a -o a) => $(a -o a)``"""
    a = DVar(binder)
    return DForall(binder, Implies(Lolli(a, a), Para(Lolli(a, a))))


def nat_dlal_prime(binder: str = "a") -> DType:
    """``forall a. (a -o a) => ($a -o $a)``"""
    a = DVar(binder)
    return DForall(binder, Implies(Lolli(a, a), Lolli(Para(a), Para(a))))


def word_dlal(binder: str = "a") -> DType:
    """``forall a. (a -o a) => (a -o a) => $(a -o a)``"""
    a = DVar(binder)
    step = Lolli(a, a)
    return DForall(binder, Implies(step, Implies(step, Para(step))))


N_DLAL = nat_dlal()
N_DLAL_PRIME = nat_dlal_prime()
W_DLAL = word_dlal()


# ---------------------------------------------------------------- display


def print_dtype(t: DType, abbreviate: bool = False) -> str:
    names = ((N_DLAL, "N"), (N_DLAL_PRIME, "N'"), (W_DLAL, "W"))

    def go(ty: DType, prec: int) -> str:
        # prec: 0 top, 1 left of arrow, 2 under a prefix operator
        if abbreviate and isinstance(ty, DForall):
            for full, short in names:
                if ty == full:
                    return short
        if isinstance(ty, DVar):
            return ty.name
        if isinstance(ty, (Lolli, Implies)):
            op = "-o" if isinstance(ty, Lolli) else "=>"
            s = f"{go(ty.dom, 1)} {op} {go(ty.cod, 0)}"
            return f"({s})" if prec else s
        if isinstance(ty, (Para, Bang)):
            op = "$" if isinstance(ty, Para) else "!"
            return op + go(ty.body, 2)
        if isinstance(ty, DForall):
            s = f"forall {ty.binder}. {go(ty.body, 0)}"
            return f"({s})" if prec else s
        raise TypeError(f"not a DLAL type: {ty!r}")

    return go(t, 0)


_DTOKEN = re.compile(r"\s*(?:(-o|⊸)|(=>|⇒)|([$§!().])|(forall|∀)|([A-Za-z_][A-Za-z0-9_']*))")


def parse_dtype(text: str) -> DType:
    """Parse the ASCII display syntax (``N``/``W`` are not expanded)."""
    tokens: list[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _DTOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise F.FSyntaxError(f"bad DLAL type at offset {pos}: {text[pos:]!r}")
        tok = m.group(m.lastindex)
        tokens.append({"⊸": "-o", "⇒": "=>", "§": "$", "∀": "forall"}.get(tok, tok))
        pos = m.end()
    tokens.append("")
    i = 0

    def peek() -> str:
        return tokens[i]

    def take(expected: Optional[str] = None) -> str:
        nonlocal i
        tok = tokens[i]
        if expected is not None and tok != expected:
            raise F.FSyntaxError(f"expected {expected!r}, found {tok!r} in {text!r}")
        i += 1
        return tok

    def typ() -> DType:
        if peek() == "forall":
            take()
            name = take()
            take(".")
            return DForall(name, typ())
        dom = prefix()
        if peek() == "-o":
            take()
            return Lolli(dom, typ())
        if peek() == "=>":
            take()
            return Implies(dom, typ())
        return dom

    def prefix() -> DType:
        tok = peek()
        if tok == "$":
            take()
            return Para(prefix())
        if tok == "!":
            take()
            return Bang(prefix())
        if tok == "(":
            take()
            t = typ()
            take(")")
            return t
        if tok and (tok[0].isalpha() or tok[0] == "_") and tok != "forall":
            take()
            return DVar(tok)
        raise F.FSyntaxError(f"unexpected {tok!r} in {text!r}")

    result = typ()
    if peek() != "":
        raise F.FSyntaxError(f"trailing input {peek()!r} in {text!r}")
    return result
