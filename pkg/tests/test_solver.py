from fractions import Fraction

from dlal.constraints import (
    BoolConst,
    BoolEq,
    BoolImp,
    ConstraintSet,
    LinEq,
    LinEq0,
    LinGeq0,
    LinGeq1,
    MixedEq0,
    MixedGeq1,
)
from dlal.param import LinComb, Param
from dlal.solver import (
    LinearSystem,
    apply_bool,
    external_backend,
    format_lp_solution,
    parse_lp_solution,
    scale_to_integers,
    solve,
    solve_bool,
    solve_bool_detailed,
    solve_detailed,
    solve_linear_detailed,
    write_lp,
)

b1, b2, b3 = (Param("b", i) for i in (1, 2, 3))
n1, n2, n3 = (Param("n", i) for i in (1, 2, 3))
m1, m2 = Param("m", 1), Param("m", 2)


def cs(*cs_):
    return ConstraintSet((c, f"row {i}") for i, c in enumerate(cs_))


def test_bool_minimal_solution():
    S = cs(BoolConst(b1, 1), BoolImp(b1, b2), BoolEq(b2, b3))
    assert solve_bool(S, [b1, b2, b3, Param("b", 4)]) == {b1: 1, b2: 1, b3: 1, Param("b", 4): 0}


def test_bool_implication_does_not_flow_backwards():
    assert solve_bool(cs(BoolConst(b2, 1), BoolImp(b1, b2))) == {b1: 0, b2: 1}


def test_bool_conflict_chain():
    out = solve_bool_detailed(cs(BoolConst(b1, 1), BoolImp(b1, b2), BoolConst(b2, 0)))
    assert out.solution is None
    text = "\n".join(out.conflict)
    assert "row 0" in text and "row 1" in text and "row 2" in text


def test_apply_bool():
    mixed = cs(MixedGeq1(b1, LinComb.of(n1)), MixedEq0(b2, LinComb.of(n2)))
    out = apply_bool({b1: 1, b2: 0}, mixed)
    assert list(out) == [LinGeq1(LinComb.of(n1))]


def test_linear_minimum():
    # n1 + n2 >= 1, n1 = n3, minimize |n1| + |n2| + |n3|
    system = LinearSystem.from_constraints(cs(LinGeq1(LinComb.of(n1, n2)), LinEq(LinComb.of(n1), LinComb.of(n3))))
    out = solve_linear_detailed(system)
    assert out.status == "optimal"
    assert out.rational == {n1: 0, n2: 1, n3: 0}
    assert out.objective == 1


def test_doors_may_be_negative():
    # m1 + m2 = 0 and m1 >= 1 forces m2 = -1
    system = LinearSystem.from_constraints(cs(LinEq0(LinComb.of(m1, m2)), LinGeq1(LinComb.of(m1))))
    out = solve_linear_detailed(system)
    assert out.rational == {m1: 1, m2: -1}


def test_fractional_optimum_is_scaled():
    # 2*n1 = n2 and n2 >= 1: the optimum n1 = 1/2 scales by 2
    system = LinearSystem.from_constraints(cs(LinEq(LinComb({n1: 2}), LinComb.of(n2)), LinGeq1(LinComb.of(n2))))
    out = solve_linear_detailed(system)
    assert out.rational == {n1: Fraction(1, 2), n2: 1}
    assert scale_to_integers(out.rational, system) == {n1: 1, n2: 2}


def test_scale_to_integers_lcm():
    sol = {n1: Fraction(1, 2), n2: Fraction(2, 3), n3: Fraction(0)}
    assert scale_to_integers(sol) == {n1: 3, n2: 4, n3: 0}


def test_linear_infeasible_kernel():
    S = cs(LinGeq1(LinComb.of(n1)), LinEq0(LinComb.of(n1)), LinGeq0(LinComb.of(n2)))
    out = solve_linear_detailed(LinearSystem.from_constraints(S))
    assert out.status == "infeasible"
    assert out.kernel == ["row 0", "row 1"]


def test_full_solve_uses_boolean_then_linear():
    S = cs(BoolConst(b1, 1), MixedGeq1(b1, LinComb.of(n1)), MixedGeq1(b2, LinComb.of(n2)), LinGeq0(LinComb.of(n2)))
    phi = solve(S)
    assert phi.bool_map == {b1: 1, b2: 0}
    assert phi.int_map == {n1: 1, n2: 0}


def test_full_solve_unsat_reports_kernel():
    S = cs(BoolConst(b1, 1), MixedEq0(b1, LinComb.of(n1)), LinGeq1(LinComb.of(n1)))
    out = solve_detailed(S)
    assert not out.sat and out.kernel


def test_lp_text_roundtrip():
    S = cs(LinEq0(LinComb.of(m1, m2)), LinGeq1(LinComb.of(m1)))
    system = LinearSystem.from_constraints(S)
    text = write_lp(system)
    assert text.splitlines()[0] == "min m1 + m2"
    assert "free m1 m2" in text
    sol = {m1: Fraction(1), m2: Fraction(-1)}
    assert parse_lp_solution(format_lp_solution(sol) + "# comment\n") == sol


def test_external_backend():
    S = cs(LinEq0(LinComb.of(m1, m2)), LinGeq1(LinComb.of(m1)))
    good = solve_detailed(S, backend=external_backend({m1: Fraction(3), m2: Fraction(-3)}))
    assert good.sat and good.instantiation.int_map == {m1: 3, m2: -3}
    bad = solve_detailed(S, backend=external_backend({m1: Fraction(1)}))
    assert not bad.sat and bad.kernel


def test_split_door_variables_minimum():
    m3, m4 = Param("m", 3), Param("m", 4)
    S = cs(LinGeq0(LinComb.of(m3)), LinEq0(LinComb.of(m3, m4)))
    out = solve_linear_detailed(LinearSystem.from_constraints(S))
    assert out.rational == {m3: 0, m4: 0}


def test_lower_bound_is_attained():
    S = cs(LinGeq1(LinComb.of(n1)), LinEq(LinComb.of(n1), LinComb.of(n2)))
    out = solve_linear_detailed(LinearSystem.from_constraints(S))
    assert out.rational == {n1: 1, n2: 1}


def test_contradictory_rows():
    S = cs(LinEq0(LinComb.of(n1)), LinGeq1(LinComb.of(n1)))
    assert solve_linear_detailed(LinearSystem.from_constraints(S)).status == "infeasible"


def test_homogeneous_rows_scale():
    system = LinearSystem.from_constraints(cs(LinEq(LinComb.of(n1), LinComb.of(n2)), LinGeq0(LinComb.of(n1))))
    half = {n1: Fraction(1, 2), n2: Fraction(1, 2)}
    assert scale_to_integers(half, system) == {n1: 1, n2: 1}
