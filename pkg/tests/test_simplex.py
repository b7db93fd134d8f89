import random
from fractions import Fraction

import pytest
from scipy.optimize import linprog

from dlal.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp


def _random_lp(rng, n, m):
    rows = []
    for _ in range(m):
        coeffs = {j: rng.randint(-3, 3) for j in range(n) if rng.random() < 0.6}
        rows.append((coeffs, rng.choice(("=", ">=", ">=")), rng.randint(-2, 3)))
    cost = {j: rng.randint(1, 5) for j in range(n)}
    return rows, cost


def _scipy(n, rows, cost):
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for coeffs, op, rhs in rows:
        vec = [float(coeffs.get(j, 0)) for j in range(n)]
        if op == "=":
            A_eq.append(vec)
            b_eq.append(rhs)
        else:
            A_ub.append([-v for v in vec])
            b_ub.append(-rhs)
    return linprog(
        [cost.get(j, 0) for j in range(n)],
        A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
        bounds=[(0, None)] * n, method="highs",
    )


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_scipy(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 6), rng.randint(1, 6)
    rows, cost = _random_lp(rng, n, m)
    ours = solve_lp(n, rows, cost)
    ref = _scipy(n, rows, cost)
    if ref.status == 2:
        assert ours.status == INFEASIBLE
        return
    assert ref.status == 0 and ours.status == OPTIMAL
    assert abs(float(ours.objective) - ref.fun) < 1e-7
    # the exact solution satisfies every row exactly
    for coeffs, op, rhs in rows:
        lhs = sum(Fraction(k) * ours.values.get(j, 0) for j, k in coeffs.items())
        assert lhs == rhs if op == "=" else lhs >= rhs
    assert all(v >= 0 for v in ours.values.values())


def test_exact_fraction():
    # minimize x subject to 3x >= 1
    res = solve_lp(1, [({0: 3}, ">=", 1)], {0: 1})
    assert res.status == OPTIMAL and res.values[0] == Fraction(1, 3)


def test_unbounded():
    res = solve_lp(2, [({0: 1, 1: -1}, "=", 0)], {0: -1})
    assert res.status == UNBOUNDED


def test_infeasible_certificate():
    rows = [({0: 1}, ">=", 1), ({1: 1}, ">=", 0), ({0: -1}, ">=", 0)]
    res = solve_lp(2, rows, {0: 1, 1: 1})
    assert res.status == INFEASIBLE
    # the middle row plays no part in the conflict
    assert set(res.certificate) == {0, 2}


def test_degenerate_problem_terminates():
    # several rows tie in the ratio test at zero
    rows = [({0: 1, 1: -1}, ">=", 0), ({1: 1, 2: -1}, ">=", 0), ({2: 1, 0: -1}, ">=", 0), ({0: 1}, ">=", 1)]
    res = solve_lp(3, rows, {0: 1, 1: 1, 2: 1})
    assert res.status == OPTIMAL and res.objective == 3
