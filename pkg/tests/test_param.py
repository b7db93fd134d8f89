import pytest

from dlal import dlal_types as D
from dlal import fsyntax as F
from dlal.param import (
    AdmissibilityError,
    Instantiation,
    LinComb,
    Param,
    ParamSource,
    PArrow,
    PBang,
    PForall,
    PLin,
    PTVar,
    ZERO,
    adm_constraints,
    erase_ptype,
    free_decorate_term,
    free_decorate_type,
    instantiate_term,
    instantiate_type,
    param_from_name,
    print_ptype,
    ptype_subst,
    term_params,
)
from dlal.pterms import Abs, Occ

b1, n1, n2, n3 = Param("b", 1), Param("n", 1), Param("n", 2), Param("n", 3)


def test_param_names():
    assert n2.name == "n2" and str(Param("m", 4)) == "m4"
    assert param_from_name("b12") == Param("b", 12)
    with pytest.raises(ValueError):
        param_from_name("x3")
    # origin is not part of identity
    assert Param("n", 1, "somewhere") == n1


def test_lincomb_algebra():
    c = LinComb.of(n1, n2) + LinComb.of(n2)
    assert dict(c.terms) == {n1: 1, n2: 2}
    assert (c - c) == ZERO and not (c - c)
    assert str(LinComb({n1: 1, n3: -2})) == "n1 - 2*n3"
    assert c.evaluate({n1: 3, n2: 5}) == 13


def test_free_decoration_numbering():
    fresh = ParamSource()
    ty = free_decorate_type(F.parse_type("a -> a"), "bang", fresh)
    # positions are numbered in pre-order, each bang position carries b and n
    assert ty == PBang(b1, LinComb.of(n1), PArrow(
        PBang(Param("b", 2), LinComb.of(n2), PTVar("a")),
        PLin(LinComb.of(n3), PTVar("a")),
    ))
    assert [p.name for p in fresh.params] == ["b1", "n1", "b2", "n2", "n3"]


def test_free_decoration_bad_kind():
    with pytest.raises(ValueError):
        free_decorate_type(F.TVar("a"), "other", ParamSource())


def test_free_decorate_term_shares_variable_decoration():
    t = free_decorate_term(F.parse_term(r"\f:a->a. \x:a. f (f x)"))
    assert isinstance(t.head, Abs)
    body = t.head.body.head.body
    outer_f, inner_f = body.head.fun, body.head.arg.head.fun
    assert isinstance(outer_f.head, Occ) and outer_f.head.ty is inner_f.head.ty
    assert outer_f.head.ty is t.head.ty
    # every node has its own door
    doors = [p for p in term_params(t) if p.is_door]
    assert len(doors) == 7


def test_erase():
    E = free_decorate_type(F.N_F, "linear", ParamSource())
    assert erase_ptype(E) == F.N_F


def test_ptype_subst_adds_exponents():
    # B = $^{b1,n1} a and A = $^{n2} c
    A = PLin(LinComb.of(n2), PTVar("c"))
    B = PBang(b1, LinComb.of(n1), PTVar("a"))
    assert ptype_subst(B, "a", A) == PBang(b1, LinComb.of(n1, n2), PTVar("c"))
    # bound occurrences are untouched
    bound = PLin(ZERO, PForall("a", PLin(LinComb.of(n1), PTVar("a"))))
    assert ptype_subst(bound, "a", A) == bound


def test_ptype_subst_avoids_capture():
    A = PLin(LinComb.of(n2), PTVar("c"))
    B = PLin(ZERO, PForall("c", PLin(LinComb.of(n1), PArrow(
        PBang(b1, ZERO, PTVar("a")), PLin(ZERO, PTVar("c"))))))
    out = ptype_subst(B, "a", A)
    assert out.body.binder != "c"
    arrow = out.body.body.body
    assert arrow.dom == PBang(b1, LinComb.of(n2), PTVar("c"))
    assert arrow.cod.body == PTVar(out.body.binder)


def test_adm_constraints():
    E = free_decorate_type(F.parse_type("a -> a"), "bang", ParamSource())
    S = adm_constraints(E)
    # one non-negativity row per layer and one mixed row per bang
    assert len(S) == 3 + 2


def test_instantiate_type():
    E = PBang(b1, LinComb.of(n1), PTVar("a"))
    assert instantiate_type(Instantiation({b1: 1}, {n1: 3}), E) == D.Bang(D.Para(D.Para(D.DVar("a"))))
    assert instantiate_type(Instantiation({b1: 0}, {n1: 2}), E) == D.Para(D.Para(D.DVar("a")))
    with pytest.raises(AdmissibilityError):
        instantiate_type(Instantiation({b1: 1}, {n1: 0}), E)
    with pytest.raises(AdmissibilityError):
        instantiate_type(Instantiation({}, {n1: -1}), PLin(LinComb.of(n1), PTVar("a")))


def test_instantiate_term_doors():
    t = free_decorate_term(F.parse_term(r"\x:a. x"))
    params = term_params(t)
    phi = Instantiation.from_values({p: (0 if not p.is_door else 1) for p in params})
    out = instantiate_term(phi, t)
    assert out.door == 1 and out.head.body.door == 1
    assert out.head.ty == D.DVar("a")


def test_instantiation_dict():
    phi = Instantiation.from_values({n2: 4, b1: 1, n1: 0})
    assert phi.as_dict() == {"b1": 1, "n1": 0, "n2": 4}
    assert phi[b1] == 1 and phi.value(LinComb.of(n1, n2)) == 4


def test_print_ptype():
    E = PBang(b1, LinComb.of(n1, n2), PTVar("a"))
    assert print_ptype(E) == "$^{b1,n1+n2}a"
