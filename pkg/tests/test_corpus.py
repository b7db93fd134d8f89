import pytest

from dlal import corpus as C
from dlal import fsyntax as F


@pytest.mark.parametrize("k", range(5))
def test_church_nat(k):
    t = C.church_nat(k)
    assert F.typecheck_f(t) == F.N_F
    # /\a, \f, \x and x, then an application and an f per step
    assert F.term_size(t) == 4 + 2 * k


def test_church_word():
    t = C.church_word("10")
    assert F.typecheck_f(t) == F.W_F
    with pytest.raises(ValueError):
        C.church_word("102")


@pytest.mark.parametrize("build,ty", [
    (C.rev_term, "W -> W"),
    (C.pred_term, "N -> N"),
    (C.exp_term, "N -> forall b. (b -> b) -> b -> b"),
    (C.identity, "forall a. a -> a"),
])
def test_closed_terms_typecheck(build, ty):
    assert F.typecheck_f(build()) == F.parse_type(ty)


def test_applied_terms():
    assert F.typecheck_f(C.rev_applied("1010")) == F.W_F
    assert F.typecheck_f(C.pred_applied(3)) == F.N_F


@pytest.mark.parametrize("p", [0, 1, 2, 3, "2X+1", "X^2+X"])
def test_polynomials_typecheck(p):
    assert F.typecheck_f(C.poly_term(p)) == F.parse_type("N -> N")


def test_coercion_free_monomial():
    assert F.typecheck_f(C.poly_term(2, coercions=False)) == F.parse_type("N -> N")
    with pytest.raises(ValueError):
        C.poly_term("X+1", coercions=False)


def test_polynomial_parse():
    p = C.Polynomial.parse("3X^2 + 1 + X^2 + 2x")
    assert p.terms == ((4, 2), (2, 1), (1, 0))
    assert str(p) == "4X^2+2X+1"
    assert p(3) == 43
    assert C.Polynomial.parse("X") == C.Polynomial.monomial(1)
    for bad in ("", "X^", "Y", "3X^2+"):
        with pytest.raises(ValueError):
            C.Polynomial.parse(bad)


def test_polynomial_validation():
    with pytest.raises(ValueError):
        C.Polynomial(((1, 1), (1, 2)))
    with pytest.raises(ValueError):
        C.Polynomial(())
