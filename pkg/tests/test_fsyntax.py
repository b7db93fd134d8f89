import pytest

from dlal import fsyntax as F
from dlal.fsyntax import Arrow, Forall, TVar

a, b = TVar("a"), TVar("b")


def test_parse_identity():
    t = F.parse_term(r"/\a. \x:a. x")
    assert t == F.TLam("a", F.Lam("x", a, F.Var("x", a)))


def test_parse_nat_abbreviation():
    t = F.parse_term(r"\n:N. n")
    assert isinstance(t, F.Lam)
    assert t.ty == F.N_F
    assert F.N_F == Forall("a", Arrow(Arrow(a, a), Arrow(a, a)))


def test_unbound_variable():
    with pytest.raises(F.UnboundVariableError):
        F.parse_term(r"\x:a. y")


def test_syntax_error_has_position():
    with pytest.raises(F.FSyntaxError) as e:
        F.parse_term("\\x:a. (x")
    assert e.value.line == 1


def test_parse_renames_repeated_binders():
    t = F.parse_term(r"\x:a. \x:a. x")
    assert t.name == "x" and t.body.name != "x"
    # the occurrence refers to the inner binder
    assert t.body.body.name == t.body.name


def test_application_is_left_associative():
    t = F.parse_term(r"\f:a->a->a. \x:a. f x x")
    body = t.body.body
    assert isinstance(body, F.App) and isinstance(body.fun, F.App)


def test_typecheck_identity():
    assert F.typecheck_f(F.parse_term(r"/\a. \x:a. x")) == Forall("b", Arrow(b, b))


def test_typecheck_church_two():
    two = F.parse_term(r"/\a. \f:a->a. \x:a. f (f x)")
    assert F.typecheck_f(two) == F.N_F


def test_typecheck_eigenvariable():
    # \x:a. /\a. x would capture the free a of x's type
    t = F.Lam("x", a, F.TLam("a", F.Var("x", a)))
    with pytest.raises(F.EigenvariableError):
        F.typecheck_f(t)


def test_typecheck_mismatch():
    t = F.parse_term(r"\f:a->a. \y:b. f y")
    with pytest.raises(F.TypeMismatchError):
        F.typecheck_f(t)


def test_typecheck_type_application():
    t = F.parse_term(r"\n:N. n [b]")
    assert F.typecheck_f(t) == Arrow(F.N_F, Arrow(Arrow(b, b), Arrow(b, b)))


def test_type_application_of_non_forall():
    t = F.parse_term(r"\x:a. x [b]")
    with pytest.raises(F.NotAForallError):
        F.typecheck_f(t)


def test_subst_simple():
    assert F.subst_type(Arrow(a, a), "a", Arrow(b, b)) == Arrow(Arrow(b, b), Arrow(b, b))


def test_subst_shadowed():
    t = Forall("a", a)
    assert F.subst_type(t, "a", b) == t


def test_subst_capture_avoiding():
    out = F.subst_type(Forall("b", Arrow(a, b)), "a", b)
    assert isinstance(out, Forall) and out.binder != "b"
    assert out == Forall("c", Arrow(b, TVar("c")))


def test_alpha_equivalence():
    assert Forall("a", Arrow(a, a)) == Forall("b", Arrow(b, b))
    assert Forall("a", Arrow(a, b)) != Forall("b", Arrow(b, b))
    assert hash(Forall("a", a)) == hash(Forall("c", TVar("c")))


def test_term_size():
    assert F.term_size(F.Var("x", a)) == 1
    assert F.term_size(F.parse_term(r"\x:a. x")) == 2
    # TLam, Lam f, Lam x, App, f, App, f, x
    assert F.term_size(F.parse_term(r"/\a. \f:a->a. \x:a. f (f x)")) == 8


def test_free_term_vars():
    t = F.App(F.Var("f", Arrow(a, a)), F.Var("y", a))
    assert F.free_term_vars(t) == {"f": Arrow(a, a), "y": a}


def test_print_parse_roundtrip():
    src = r"\l:W. /\b. \so:b -> b. \si:b -> b. l [b -> b] (\a:b -> b. \x:b. a (so x))"
    t = F.parse_term(src)
    assert F.parse_term(F.print_term(t)) == t
    assert F.print_type(F.W_F) == "W"
    assert F.print_type(F.W_F, abbreviate=False) == "forall a. (a -> a) -> (a -> a) -> a -> a"


def test_parse_type():
    assert F.parse_type("forall a. a -> a") == Forall("z", Arrow(TVar("z"), TVar("z")))
    assert F.parse_type("a -> b -> a") == Arrow(a, Arrow(b, a))
