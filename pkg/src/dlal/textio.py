"""Text dumps of p-terms and pseudo-terms, and instantiation files.

Both dumps are indented trees with one node per line::

    # pterm                          # pseudo
    ^m1 /\\a                          ^0 /\\a
      ^m2 \\x : $^{b1,n1}a              ^0 \\x : a
        ^m3 x : $^{b1,n1}a               ^0 x : a

Heads are written ``x : TYPE`` (occurrence), ``\\x : TYPE`` (abstraction),
``@`` (application, two children), ``/\\a`` (type abstraction) and
``[TYPE]`` (type application, one child).  A p-term dump uses door
parameters and p-types; a pseudo-term dump uses signed door counts and
DLAL* types.
"""

from __future__ import annotations

import re
from typing import Callable

from . import dlal_types as D
from .fsyntax import FSyntaxError
from .param import (
    Instantiation,
    LinComb,
    PArrow,
    PBang,
    PForall,
    PLin,
    PTVar,
    param_from_name,
    print_ptype,
)
from .pterms import Abs, Apply, Node, Occ, TAbs, TApply, children

PTERM_HEADER = "# pterm"
PSEUDO_HEADER = "# pseudo"


def _dump(t: Node, door: Callable, ty: Callable, header: str) -> str:
    lines = [header]
    stack = [(t, 0)]
    while stack:
        node, depth = stack.pop()
        head = node.head
        if isinstance(head, Occ):
            desc = f"{head.name} : {ty(head.ty)}"
        elif isinstance(head, Abs):
            desc = f"\\{head.name} : {ty(head.ty)}"
        elif isinstance(head, Apply):
            desc = "@"
        elif isinstance(head, TAbs):
            desc = f"/\\{head.binder}"
        elif isinstance(head, TApply):
            desc = f"[{ty(head.ty)}]"
        else:
            raise TypeError(f"not a head: {head!r}")
        lines.append(f"{'  ' * depth}^{door(node.door)} {desc}")
        for child in reversed(children(head)):
            stack.append((child, depth + 1))
    return "\n".join(lines) + "\n"


def dump_pterm(t: Node) -> str:
    return _dump(t, str, print_ptype, PTERM_HEADER)


def dump_pseudo(t: Node) -> str:
    return _dump(t, str, D.print_dtype, PSEUDO_HEADER)


# ---------------------------------------------------------------- p-type parser

_PTOK = re.compile(r"\s*(\$\^\{|-o|forall|[(){},.+\-*]|[A-Za-z_][A-Za-z0-9_']*|\d+)")


def parse_ptype(text: str):
    """Parse ``$^{c}F`` or ``$^{b,c}F`` (or a bare ``F``)."""
    tokens = []
    pos = 0
    stripped = text.strip()
    while pos < len(stripped):
        m = _PTOK.match(stripped, pos)
        if not m:
            raise FSyntaxError(f"bad p-type at offset {pos}: {stripped!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("")
    i = 0

    def peek():
        return tokens[i]

    def take(expected=None):
        nonlocal i
        tok = tokens[i]
        if expected is not None and tok != expected:
            raise FSyntaxError(f"expected {expected!r}, found {tok!r} in {text!r}")
        i += 1
        return tok

    def lincomb() -> LinComb:
        terms = []
        sign = 1
        if peek() == "-":
            take()
            sign = -1
        while True:
            tok = take()
            k = 1
            if tok.isdigit():
                if peek() == "*":
                    take()
                    k = int(tok)
                    tok = take()
                elif int(tok) == 0:
                    tok = None
                else:
                    raise FSyntaxError(f"constants are not allowed in exponents: {text!r}")
            if tok is not None:
                terms.append((param_from_name(tok), sign * k))
            if peek() == "+":
                take()
                sign = 1
            elif peek() == "-":
                take()
                sign = -1
            else:
                return LinComb(terms)

    def layer():
        take("$^{")
        first = lincomb()
        if peek() == ",":
            take()
            if len(first) != 1 or first.terms[0][1] != 1 or not first.terms[0][0].is_bool:
                raise FSyntaxError(f"expected a boolean parameter before ',' in {text!r}")
            b = first.terms[0][0]
            exps = lincomb()
            take("}")
            return PBang(b, exps, body())
        take("}")
        return PLin(first, body())

    def body():
        if peek() == "(":
            take()
            if peek() == "forall":
                take()
                name = take()
                take(".")
                inner = layer()
                take(")")
                return PForall(name, inner)
            dom = layer()
            take("-o")
            cod = layer()
            take(")")
            if not isinstance(dom, PBang) or not isinstance(cod, PLin):
                raise FSyntaxError(f"arrow needs $^{{b,c}} domain and $^{{c}} codomain in {text!r}")
            return PArrow(dom, cod)
        tok = take()
        if not tok or not (tok[0].isalpha() or tok[0] == "_"):
            raise FSyntaxError(f"unexpected {tok!r} in {text!r}")
        return PTVar(tok)

    result = layer() if peek() == "$^{" else body()
    if peek() != "":
        raise FSyntaxError(f"trailing input {peek()!r} in {text!r}")
    return result


# ---------------------------------------------------------------- dump parser

_LINE = re.compile(r"^(?P<indent> *)\^(?P<door>-?\d+|m\d+)\s+(?P<head>.*?)\s*$")


def parse_dump(text: str) -> tuple[str, Node]:
    """Parse either dump; returns ``("pterm" | "pseudo", tree)``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() not in (PTERM_HEADER, PSEUDO_HEADER):
        raise FSyntaxError(f"a dump starts with {PTERM_HEADER!r} or {PSEUDO_HEADER!r}")
    kind = "pterm" if lines[0].strip() == PTERM_HEADER else "pseudo"
    parse_ty = parse_ptype if kind == "pterm" else D.parse_dtype
    entries = []
    for lineno, raw in enumerate(lines[1:], 2):
        m = _LINE.match(raw)
        if not m:
            raise FSyntaxError(f"malformed dump line: {raw!r}", lineno)
        indent = len(m.group("indent"))
        if indent % 2:
            raise FSyntaxError("indentation must be a multiple of two spaces", lineno)
        door_text = m.group("door")
        if kind == "pterm":
            if not door_text.startswith("m"):
                raise FSyntaxError("p-term doors are parameters m<k>", lineno)
            door = param_from_name(door_text)
        else:
            if door_text.startswith("m"):
                raise FSyntaxError("pseudo-term doors are integers", lineno)
            door = int(door_text)
        entries.append((indent // 2, door, m.group("head"), lineno))

    pos = 0

    def build(depth: int) -> Node:
        nonlocal pos
        if pos >= len(entries):
            raise FSyntaxError("dump ended early")
        d, door, desc, lineno = entries[pos]
        if d != depth:
            raise FSyntaxError(f"expected depth {depth}, found {d}", lineno)
        pos += 1
        try:
            if desc == "@":
                fun = build(depth + 1)
                return Node(door, Apply(fun, build(depth + 1)))
            if desc.startswith("/\\"):
                return Node(door, TAbs(desc[2:].strip(), build(depth + 1)))
            if desc.startswith("[") and desc.endswith("]"):
                ty = parse_ty(desc[1:-1])
                return Node(door, TApply(build(depth + 1), ty))
            name, sep, ty_text = desc.partition(":")
            if not sep:
                raise FSyntaxError(f"cannot read head {desc!r}", lineno)
            name = name.strip()
            ty = parse_ty(ty_text)
            if name.startswith("\\"):
                return Node(door, Abs(name[1:].strip(), ty, build(depth + 1)))
            return Node(door, Occ(name, ty))
        except FSyntaxError as e:
            if e.line:
                raise
            raise FSyntaxError(str(e), lineno) from None

    root = build(0)
    if pos != len(entries):
        raise FSyntaxError("trailing lines after the root term", entries[pos][3])
    return kind, root


# ---------------------------------------------------------------- instantiations


def parse_instantiation(text: str) -> Instantiation:
    """``param = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        if not sep:
            raise FSyntaxError(f"expected 'param = value', found {raw!r}", lineno)
        try:
            values[param_from_name(name.strip())] = int(value.strip())
        except ValueError as e:
            raise FSyntaxError(str(e), lineno) from None
    return Instantiation.from_values(values)


def format_instantiation(phi: Instantiation) -> str:
    return "".join(f"{k} = {v}\n" for k, v in phi.as_dict().items())
