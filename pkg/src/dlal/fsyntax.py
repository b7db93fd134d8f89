"""Church-style System F: types, terms, parsing, printing and type checking.

Concrete syntax (ASCII; a few Unicode aliases are accepted)::

    term ::= ident | \\x:T. term | term term | /\\a. term | term [T] | (term)
    type ::= ident | T -> T | forall a. T | (T) | N | W

Application is left-associative, ``->`` is right-associative and ``--``
starts a line comment.  ``N`` and ``W`` expand to the Church types of
unary integers and binary words.

Parsing renames binders so that every term binder and every type binder
of the resulting AST carries a distinct identifier.  A binder keeps its
source name the first time that name is used as a binder; later binders
with the same name are renamed ``name_1``, ``name_2`` ... avoiding every
identifier of the input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional


class FSyntaxError(Exception):
    """Malformed concrete syntax."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.line = line
        self.column = column


class UnboundVariableError(FSyntaxError):
    pass


class FTypeError(Exception):
    """The term is not well typed in System F."""


class TypeMismatchError(FTypeError):
    pass


class EigenvariableError(FTypeError):
    pass


class NotAForallError(FTypeError):
    pass


# ---------------------------------------------------------------- types


class FType:
    """Base class of System F types.

    Equality and hashing are up to alpha-equivalence.
    """

    __slots__ = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FType):
            return NotImplemented
        return self is other or alpha_key(self) == alpha_key(other)

    def __hash__(self) -> int:
        return hash(alpha_key(self))

    def __str__(self) -> str:
        return print_type(self)


@dataclass(frozen=True, eq=False)
class TVar(FType):
    name: str

    def __repr__(self) -> str:
        return f"TVar({self.name!r})"


@dataclass(frozen=True, eq=False)
class Arrow(FType):
    dom: FType
    cod: FType

    def __repr__(self) -> str:
        return f"Arrow({self.dom!r}, {self.cod!r})"


@dataclass(frozen=True, eq=False)
class Forall(FType):
    binder: str
    body: FType

    def __repr__(self) -> str:
        return f"Forall({self.binder!r}, {self.body!r})"


def alpha_key(t: FType, env: Optional[dict] = None, depth: int = 0):
    """Canonical nested-tuple form with de Bruijn levels for bound variables."""
    env = {} if env is None else env
    if isinstance(t, TVar):
        if t.name in env:
            return ("b", depth - env[t.name])
        return ("f", t.name)
    if isinstance(t, Arrow):
        return ("->", alpha_key(t.dom, env, depth), alpha_key(t.cod, env, depth))
    if isinstance(t, Forall):
        inner = dict(env)
        inner[t.binder] = depth + 1
        return ("all", alpha_key(t.body, inner, depth + 1))
    raise TypeError(f"not a System F type: {t!r}")


def free_type_vars(t: FType) -> frozenset[str]:
    if isinstance(t, TVar):
        return frozenset([t.name])
    if isinstance(t, Arrow):
        return free_type_vars(t.dom) | free_type_vars(t.cod)
    if isinstance(t, Forall):
        return free_type_vars(t.body) - {t.binder}
    raise TypeError(f"not a System F type: {t!r}")


def _all_names(t: FType) -> set[str]:
    if isinstance(t, TVar):
        return {t.name}
    if isinstance(t, Arrow):
        return _all_names(t.dom) | _all_names(t.cod)
    return {t.binder} | _all_names(t.body)


def fresh_name(base: str, avoid) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def subst_type(t: FType, binder: str, u: FType) -> FType:
    """Capture-avoiding substitution ``t[binder := u]``."""
    if isinstance(t, TVar):
        return u if t.name == binder else t
    if isinstance(t, Arrow):
        return Arrow(subst_type(t.dom, binder, u), subst_type(t.cod, binder, u))
    if isinstance(t, Forall):
        if t.binder == binder:
            return t
        if binder not in free_type_vars(t.body):
            return t
        fv = free_type_vars(u)
        if t.binder in fv:
            new = fresh_name(t.binder, fv | _all_names(t.body) | {binder})
            body = subst_type(t.body, t.binder, TVar(new))
            return Forall(new, subst_type(body, binder, u))
        return Forall(t.binder, subst_type(t.body, binder, u))
    raise TypeError(f"not a System F type: {t!r}")


def nat_type(binder: str = "a") -> FType:
    """``forall a. (a -> a) -> (a -> a)``"""
    a = TVar(binder)
    return Forall(binder, Arrow(Arrow(a, a), Arrow(a, a)))


def word_type(binder: str = "a") -> FType:
    """``forall a. (a -> a) -> (a -> a) -> (a -> a)``"""
    a = TVar(binder)
    step = Arrow(a, a)
    return Forall(binder, Arrow(step, Arrow(step, step)))


N_F = nat_type()
W_F = word_type()


# ---------------------------------------------------------------- terms


class FTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Var(FTerm):
    name: str
    ty: FType


@dataclass(frozen=True)
class Lam(FTerm):
    name: str
    ty: FType
    body: FTerm


@dataclass(frozen=True)
class App(FTerm):
    fun: FTerm
    arg: FTerm


@dataclass(frozen=True)
class TLam(FTerm):
    binder: str
    body: FTerm


@dataclass(frozen=True)
class TApp(FTerm):
    fun: FTerm
    ty: FType


def term_size(t: FTerm) -> int:
    """Number of AST nodes (each constructor counts 1)."""
    size = 0
    stack = [t]
    while stack:
        node = stack.pop()
        size += 1
        if isinstance(node, Lam):
            stack.append(node.body)
        elif isinstance(node, App):
            stack.append(node.fun)
            stack.append(node.arg)
        elif isinstance(node, TLam):
            stack.append(node.body)
        elif isinstance(node, TApp):
            stack.append(node.fun)
    return size


def free_term_vars(t: FTerm) -> dict[str, FType]:
    """Free term variables with their annotations."""
    if isinstance(t, Var):
        return {t.name: t.ty}
    if isinstance(t, Lam):
        fv = free_term_vars(t.body)
        fv.pop(t.name, None)
        return fv
    if isinstance(t, App):
        fv = free_term_vars(t.fun)
        fv.update(free_term_vars(t.arg))
        return fv
    if isinstance(t, TLam):
        return free_term_vars(t.body)
    if isinstance(t, TApp):
        return free_term_vars(t.fun)
    raise TypeError(f"not a System F term: {t!r}")


def subterms(t: FTerm) -> Iterator[FTerm]:
    yield t
    if isinstance(t, (Lam, TLam)):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.fun)
        yield from subterms(t.arg)
    elif isinstance(t, TApp):
        yield from subterms(t.fun)


def typecheck_f(t: FTerm, context: Optional[Mapping[str, FType]] = None) -> FType:
    """Return the type of a Church-style term.

    ``context`` optionally types free term variables; occurrences must agree
    with it.  Raises :class:`FTypeError` on ill-typed terms.
    """
    context = dict(context or {})
    cache: dict[int, frozenset] = {}

    def fv_types(node: FTerm) -> frozenset:
        key = id(node)
        if key not in cache:
            cache[key] = frozenset(free_term_vars(node).items())
        return cache[key]

    def check(node: FTerm, env: dict[str, FType]) -> FType:
        if isinstance(node, Var):
            if node.name in env and env[node.name] != node.ty:
                raise TypeMismatchError(
                    f"variable {node.name} annotated {node.ty}, bound at {env[node.name]}"
                )
            return node.ty
        if isinstance(node, Lam):
            inner = dict(env)
            inner[node.name] = node.ty
            return Arrow(node.ty, check(node.body, inner))
        if isinstance(node, App):
            ft = check(node.fun, env)
            at = check(node.arg, env)
            if not isinstance(ft, Arrow):
                raise TypeMismatchError(f"applying a term of non-arrow type {ft}")
            if ft.dom != at:
                raise TypeMismatchError(
                    f"argument of type {at} where {ft.dom} is expected"
                )
            return ft.cod
        if isinstance(node, TLam):
            for name, ty in fv_types(node.body):
                if node.binder in free_type_vars(ty):
                    raise EigenvariableError(
                        f"type variable {node.binder} occurs free in the type {ty} "
                        f"of the free variable {name}"
                    )
            return Forall(node.binder, check(node.body, env))
        if isinstance(node, TApp):
            ft = check(node.fun, env)
            if not isinstance(ft, Forall):
                raise NotAForallError(f"type application to a term of type {ft}")
            return subst_type(ft.body, ft.binder, node.ty)
        raise TypeError(f"not a System F term: {node!r}")

    return check(t, context)


# ---------------------------------------------------------------- printing

_ABBREVIATIONS = ((N_F, "N"), (W_F, "W"))


def print_type(t: FType, abbreviate: bool = True) -> str:
    def go(ty: FType, prec: int) -> str:
        # prec 0: anything, 1: left of an arrow
        if abbreviate and isinstance(ty, Forall):
            for full, short in _ABBREVIATIONS:
                if ty == full:
                    return short
        if isinstance(ty, TVar):
            return ty.name
        if isinstance(ty, Arrow):
            s = f"{go(ty.dom, 1)} -> {go(ty.cod, 0)}"
            return f"({s})" if prec else s
        if isinstance(ty, Forall):
            s = f"forall {ty.binder}. {go(ty.body, 0)}"
            return f"({s})" if prec else s
        raise TypeError(f"not a System F type: {ty!r}")

    return go(t, 0)


def print_term(t: FTerm, abbreviate: bool = True) -> str:
    ty = lambda x: print_type(x, abbreviate)  # noqa: E731

    def go(node: FTerm, ctx: str) -> str:
        # ctx: "top" | "fun" (left of application) | "arg" (right of application)
        if isinstance(node, Var):
            return node.name
        if isinstance(node, (Lam, TLam)):
            if isinstance(node, Lam):
                s = f"\\{node.name}:{ty(node.ty)}. {go(node.body, 'top')}"
            else:
                s = f"/\\{node.binder}. {go(node.body, 'top')}"
            return s if ctx == "top" else f"({s})"
        if isinstance(node, App):
            s = f"{go(node.fun, 'fun')} {go(node.arg, 'arg')}"
            return f"({s})" if ctx == "arg" else s
        if isinstance(node, TApp):
            s = f"{go(node.fun, 'fun')} [{ty(node.ty)}]"
            return f"({s})" if ctx == "arg" else s
        raise TypeError(f"not a System F term: {node!r}")

    return go(t, "top")


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<tlam>/\\|Λ)
  | (?P<lam>\\|λ)
  | (?P<arrow>->|→)
  | (?P<forall>∀)
  | (?P<punct>[.:()\[\]])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            if kind == "ident" and value == "forall":
                kind = "forall"
            elif kind == "punct":
                kind = value
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.used = {t.text for t in self.tokens if t.kind == "ident"}
        self.binders: set[str] = set()

    # -- helpers
    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.tok
        raise FSyntaxError(message, tok.line, tok.column)

    def bind(self, name: str) -> str:
        if name not in self.binders:
            self.binders.add(name)
            return name
        k = 1
        while f"{name}_{k}" in self.used:
            k += 1
        new = f"{name}_{k}"
        self.used.add(new)
        self.binders.add(new)
        return new

    # -- types
    def type_(self, tenv: dict[str, str]) -> FType:
        if self.tok.kind == "forall":
            self.advance()
            name = self.expect("ident").text
            self.expect(".")
            internal = self.bind(name)
            inner = dict(tenv)
            inner[name] = internal
            return Forall(internal, self.type_(inner))
        dom = self.type_atom(tenv)
        if self.tok.kind == "arrow":
            self.advance()
            return Arrow(dom, self.type_(tenv))
        return dom

    def type_atom(self, tenv: dict[str, str]) -> FType:
        tok = self.tok
        if tok.kind == "(":
            self.advance()
            t = self.type_(tenv)
            self.expect(")")
            return t
        if tok.kind == "ident":
            self.advance()
            if tok.text in ("N", "W") and tok.text not in tenv:
                binder = self.bind("a")
                return nat_type(binder) if tok.text == "N" else word_type(binder)
            return TVar(tenv.get(tok.text, tok.text))
        self.fail(f"expected a type, found {tok.text or 'end of input'!r}")

    # -- terms
    def term(self, env: dict, tenv: dict) -> FTerm:
        if self.tok.kind == "lam":
            self.advance()
            name = self.expect("ident").text
            self.expect(":")
            ty = self.type_(tenv)
            self.expect(".")
            internal = self.bind(name)
            inner = dict(env)
            inner[name] = (internal, ty)
            return Lam(internal, ty, self.term(inner, tenv))
        if self.tok.kind == "tlam":
            self.advance()
            name = self.expect("ident").text
            self.expect(".")
            internal = self.bind(name)
            inner = dict(tenv)
            inner[name] = internal
            return TLam(internal, self.term(env, inner))
        return self.application(env, tenv)

    def application(self, env: dict, tenv: dict) -> FTerm:
        head = self.atom(env, tenv)
        while True:
            kind = self.tok.kind
            if kind == "[":
                self.advance()
                ty = self.type_(tenv)
                self.expect("]")
                head = TApp(head, ty)
            elif kind in ("ident", "("):
                head = App(head, self.atom(env, tenv))
            elif kind in ("lam", "tlam"):
                head = App(head, self.term(env, tenv))
            else:
                return head

    def atom(self, env: dict, tenv: dict) -> FTerm:
        tok = self.tok
        if tok.kind == "(":
            self.advance()
            t = self.term(env, tenv)
            self.expect(")")
            return t
        if tok.kind == "ident":
            self.advance()
            if tok.text not in env:
                raise UnboundVariableError(
                    f"unbound variable {tok.text}", tok.line, tok.column
                )
            internal, ty = env[tok.text]
            return Var(internal, ty)
        self.fail(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_term(text: str) -> FTerm:
    """Parse a closed-or-open term; free term variables are an error."""
    p = _Parser(text)
    t = p.term({}, {})
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r}")
    return t


def parse_type(text: str) -> FType:
    p = _Parser(text)
    t = p.type_({})
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r}")
    return t
