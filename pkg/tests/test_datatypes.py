import pytest

from dlal import corpus as C
from dlal import dlal_types as D
from dlal import fsyntax as F
from dlal.constraints import holds
from dlal.datatypes import (
    DomainError,
    DomainSpec,
    find_sort,
    nat_constraints,
    positions,
    sort_constraints,
    word_constraints,
)
from dlal.param import Instantiation, ParamSource, free_decorate_type, instantiate_type
from dlal.pipeline import ERROR, TYPABLE, Options, infer
from dlal.solver import solve


def decorated(sort):
    return free_decorate_type(F.N_F if sort == "N" else F.W_F, "linear", ParamSource())


def test_nat_positions_follow_preorder():
    b, c = positions(decorated("N"), "N")
    assert sorted(c) == list(range(1, 9))
    assert sorted(b) == [3, 4, 7]
    # the free decoration numbers positions in pre-order
    assert [str(c[i]) for i in range(1, 9)] == [f"n{i}" for i in range(1, 9)]


def test_word_positions():
    b, c = positions(decorated("W"), "W")
    assert sorted(c) == list(range(1, 13))
    assert sorted(b) == [3, 4, 7, 8, 11]


def nat_instantiation(E, values, bangs):
    b, c = positions(E, "N")
    ints = {c[i].params[0]: values.get(i, 0) for i in c}
    bools = {b[i]: bangs.get(i, 0) for i in b}
    return Instantiation(bools, ints)


def test_nat_dlal_and_prime_satisfy_nat():
    E = decorated("N")
    S = nat_constraints(E)
    phi = nat_instantiation(E, {3: 1, 6: 1}, {3: 1})
    assert all(holds(c, {**phi.bool_map, **phi.int_map}) for c in S)
    assert D.unstar(instantiate_type(phi, E)) == D.N_DLAL
    prime = nat_instantiation(E, {3: 1, 7: 1, 8: 1}, {3: 1})
    assert all(holds(c, {**prime.bool_map, **prime.int_map}) for c in S)
    assert D.unstar(instantiate_type(prime, E)) == D.N_DLAL_PRIME
    # the strict form rules the primed variant out
    strict = nat_constraints(E, strict=True)
    assert not all(holds(c, {**prime.bool_map, **prime.int_map}) for c in strict)


def test_minimal_nat_solution_is_nat_dlal():
    E = decorated("N")
    phi = solve(nat_constraints(E))
    assert D.unstar(instantiate_type(phi, E)) == D.N_DLAL


def test_minimal_word_solution_is_w_dlal():
    E = decorated("W")
    phi = solve(word_constraints(E))
    assert D.unstar(instantiate_type(phi, E)) == D.W_DLAL


def test_sort_mismatch():
    with pytest.raises(DomainError):
        nat_constraints(decorated("W"))
    with pytest.raises(DomainError):
        sort_constraints(decorated("N"), "Q")


def test_find_sort():
    assert find_sort(decorated("N")) == "N"
    assert find_sort(decorated("W")) == "W"
    assert find_sort(free_decorate_type(F.TVar("a"), "linear", ParamSource())) is None


def test_domain_spec_parse():
    assert list(DomainSpec.parse("n:N, l:W")) == [("n", "N"), ("l", "W")]
    assert not DomainSpec.parse("")
    for bad in ("n", "n:Q", ":N"):
        with pytest.raises(DomainError):
            DomainSpec.parse(bad)


def test_domain_on_unknown_variable_is_an_error():
    report = infer(C.rev_term(), Options(domain=DomainSpec.parse("zz:W")))
    assert report.verdict == ERROR


def test_rev_with_word_domain():
    report = infer(C.rev_term(), Options(domain=DomainSpec.parse("l:W")))
    assert report.verdict == TYPABLE
    assert report.dlal_type == D.Lolli(D.W_DLAL, D.W_DLAL)
