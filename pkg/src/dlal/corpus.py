"""Example terms: Church data, rev, pred, exp and the polynomial family.

Terms are produced as source text in the fsyntax grammar and parsed, so
every generator returns a checked, closed F term.  Monomials follow the
induction::

    t_{X^0} = \\x. 1        t_{X^1} = \\x. x
    t_{X^{n+1}} = \\x. C1_x[(\\n2. \\m2. C2[C1[u]]) (t_{X^n} x) (coerc x)]

with the coercion contexts ``C1[e] = m [N->N] (\\g.\\p. g (succ p)) (\\n. e) 0``
and ``C2[e] = (\\m. e) (m2 [N] succ 0)``.  Sums use Church addition
``\\f.\\x. n f (m f x)`` wrapped exactly as multiplication is, with
``coerc`` on each summand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import fsyntax as F

ZERO = r"(/\a. \f:a->a. \x:a. x)"
SUCC = r"(\n:N. /\a. \f:a->a. \x:a. f (n [a] f x))"
COERC = rf"(\n:N. n [N] {SUCC} {ZERO})"
MULT_CORE = rf"(m [N] (\k:N. /\a. \f:a->a. \x:a. n [a] f (k [a] f x)) {ZERO})"
ADD_CORE = r"(/\a. \f:a->a. \x:a. n [a] f (m [a] f x))"


def church_nat_source(k: int) -> str:
    if k < 0:
        raise ValueError("Church integers are non-negative")
    body = "x"
    for _ in range(k):
        body = f"f ({body})" if body != "x" else "f x"
    return rf"/\a. \f:a->a. \x:a. {body}"


def church_nat(k: int) -> F.FTerm:
    """``/\\a. \\f. \\x. f (... (f x))`` with ``k`` applications."""
    return F.parse_term(church_nat_source(k))


def _check_bits(bits: str) -> str:
    if any(c not in "01" for c in bits):
        raise ValueError(f"not a binary word: {bits!r}")
    return bits


def church_word_source(bits: str) -> str:
    body = "x"
    for c in reversed(_check_bits(bits)):
        body = f"s{c} ({body})" if body != "x" else f"s{c} x"
    return rf"/\a. \s0:a->a. \s1:a->a. \x:a. {body}"


def church_word(bits: str) -> F.FTerm:
    """The first bit is the outermost application."""
    return F.parse_term(church_word_source(bits))


REV = (
    r"(\l:W. /\b. \so:b->b. \si:b->b. l [b->b]"
    r" (\a:b->b. \x:b. a (so x))"
    r" (\a:b->b. \x:b. a (si x))"
    r" (\z:b. z))"
)

_PAIR = "((b->b)->(b->b))"
PRED = (
    rf"(\n:N. /\b. \f:b->b. \x:b."
    rf" n [{_PAIR}->b]"
    rf" (\p:{_PAIR}->b. \z:{_PAIR}. z f (p (\x:b->b. \y:b. x y)))"
    rf" (\z:{_PAIR}. z (\a:b. a) x)"
    rf" (\x:b->b. \y:b. y))"
)

EXP = rf"(\n:N. /\b. n [b->b] (({church_nat_source(2)}) [b]))"


def rev_term() -> F.FTerm:
    return F.parse_term(REV)


def pred_term() -> F.FTerm:
    return F.parse_term(PRED)


def exp_term() -> F.FTerm:
    return F.parse_term(EXP)


def rev_applied(bits: str = "1010") -> F.FTerm:
    return F.parse_term(f"{REV} ({church_word_source(bits)})")


def pred_applied(k: int = 2) -> F.FTerm:
    return F.parse_term(f"{PRED} ({church_nat_source(k)})")


# ---------------------------------------------------------------- polynomials


@dataclass(frozen=True)
class Polynomial:
    """``(coefficient, exponent)`` terms with strictly decreasing exponents."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        exps = [e for _, e in self.terms]
        if not self.terms:
            raise ValueError("a polynomial needs at least one term")
        if any(c < 1 for c, _ in self.terms) or any(e < 0 for e in exps):
            raise ValueError("coefficients must be >= 1 and exponents >= 0")
        if any(a <= b for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly decreasing")

    @classmethod
    def monomial(cls, n: int) -> "Polynomial":
        return cls(((1, n),))

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """``"3X^2+1"``, ``"X^3 + 2X"``; like exponents are summed."""
        acc: dict[int, int] = {}
        for part in text.replace(" ", "").split("+"):
            m = re.fullmatch(r"(\d*)(?:(\*?)([Xx])(?:\^(\d+))?)?", part)
            if not part or not m or (not m.group(1) and not m.group(3)):
                raise ValueError(f"cannot read polynomial term {part!r} in {text!r}")
            coeff = int(m.group(1)) if m.group(1) else 1
            exp = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
            if coeff:
                acc[exp] = acc.get(exp, 0) + coeff
        if not acc:
            raise ValueError(f"zero polynomial: {text!r}")
        return cls(tuple((c, e) for e, c in sorted(acc.items(), reverse=True)))

    def __str__(self) -> str:
        parts = []
        for c, e in self.terms:
            mono = "" if e == 0 else ("X" if e == 1 else f"X^{e}")
            parts.append(f"{c if c != 1 or e == 0 else ''}{mono}")
        return "+".join(parts)

    def __call__(self, x: int) -> int:
        return sum(c * x**e for c, e in self.terms)


def _c1(iterator: str, bound: str, body: str) -> str:
    """``C1``: iterate on ``iterator``, binding ``bound`` in ``body``."""
    return (
        rf"({iterator} [N->N] (\g:N->N. \p:N. g ({SUCC} p))"
        rf" (\{bound}:N. {body}) {ZERO})"
    )


def _c2(iterator: str, bound: str, body: str) -> str:
    return rf"((\{bound}:N. {body}) ({iterator} [N] {SUCC} {ZERO}))"


def _sum(left: str, right: str) -> str:
    """``\\x. C1_x[(\\n2. \\m2. C2[C1[add]]) (coerc (L x)) (coerc (R x))]``."""
    op = rf"(\n2:N. \m2:N. {_c2('m2', 'm', _c1('n2', 'n', ADD_CORE))})"
    lhs = f"({COERC} ({left} x))"
    rhs = f"({COERC} ({right} x))"
    return rf"(\x:N. {_c1('x', 'x', f'{op} {lhs} {rhs}')})"


def monomial_source(n: int, coercions: bool = True) -> str:
    if n == 0:
        return rf"(\x:N. {church_nat_source(1)})"
    if n == 1:
        return r"(\x:N. x)"
    prev = monomial_source(n - 1, coercions)
    if not coercions:
        return rf"(\x:N. (\n:N. \m:N. {MULT_CORE}) ({prev} x) x)"
    op = rf"(\n2:N. \m2:N. {_c2('m2', 'm', _c1('n2', 'n', MULT_CORE))})"
    return rf"(\x:N. {_c1('x', 'x', f'{op} ({prev} x) ({COERC} x)')})"


def poly_source(p: Polynomial) -> str:
    summands = []
    for c, e in p.terms:
        if e == 0:
            summands.append(rf"(\x:N. {church_nat_source(c)})")
        else:
            summands.extend([monomial_source(e)] * c)
    acc = summands[0]
    for s in summands[1:]:
        acc = _sum(acc, s)
    return acc


def poly_term(p: Polynomial | str | int, coercions: bool = True) -> F.FTerm:
    """``t_P : N -> N``; an int ``n`` stands for ``X^n``."""
    if isinstance(p, int):
        return F.parse_term(monomial_source(p, coercions))
    if isinstance(p, str):
        p = Polynomial.parse(p)
    if not coercions:
        if len(p.terms) != 1 or p.terms[0][0] != 1:
            raise ValueError("the coercion-free variant exists for monomials only")
        return F.parse_term(monomial_source(p.terms[0][1], False))
    return F.parse_term(poly_source(p))


def identity() -> F.FTerm:
    return F.parse_term(r"/\a. \x:a. x")
