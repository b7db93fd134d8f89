"""Solving constraint sets: booleans first, then an exact linear program.

The pipeline is

1. split the set into boolean, linear and mixed parts;
2. compute the pointwise-minimal boolean solution by saturation;
3. keep the linear body of each mixed constraint whose guard is 1;
4. presolve the linear system, then minimize the sum of the absolute
   values of all integer parameters with the exact simplex;
5. scale the rational optimum to integers.

Every row of the linear system is homogeneous or of the form ``c >= 1``,
so multiplying a rational solution by a positive integer keeps it a
solution.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional

from .constraints import (
    BoolConst,
    BoolEq,
    BoolImp,
    ConstraintSet,
    MixedEq0,
    MixedGeq1,
    constraint_params,
    holds,
    split,
)
from .param import Instantiation, LinComb, Param, param_from_name
from .simplex import INFEASIBLE, OPTIMAL, solve_lp

# ---------------------------------------------------------------- booleans


@dataclass
class BoolOutcome:
    solution: Optional[dict[Param, int]]
    conflict: list[str] = field(default_factory=list)


def solve_bool_detailed(bc: ConstraintSet, params: Iterable[Param] = ()) -> BoolOutcome:
    """Saturate and return the minimal solution, or the chains of origins
    that derive both ``b = 0`` and ``b = 1`` for some ``b``."""
    value: dict[Param, int] = {}
    reason: dict[Param, tuple[Optional[Param], str]] = {}
    eqs: dict[Param, list[tuple[Param, str]]] = {}
    imps: dict[Param, list[tuple[Param, str]]] = {}
    queue: list[tuple[Param, int, Optional[Param], str]] = []
    universe: set[Param] = set(params)
    for c, origin in bc.items():
        universe.update(constraint_params(c))
        if isinstance(c, BoolEq):
            eqs.setdefault(c.left, []).append((c.right, origin))
            eqs.setdefault(c.right, []).append((c.left, origin))
        elif isinstance(c, BoolImp):
            imps.setdefault(c.premise, []).append((c.conclusion, origin))
        elif isinstance(c, BoolConst):
            queue.append((c.param, c.value, None, origin))
        else:
            raise TypeError(f"not a boolean constraint: {c}")

    def chain(p: Param) -> list[str]:
        out = []
        while p is not None:
            parent, origin = reason[p]
            out.append(f"{p} = {value[p]}: {origin}")
            p = parent
        return out

    while queue:
        p, v, parent, origin = queue.pop(0)
        if p in value:
            if value[p] != v:
                clash = [f"{p} = {v}: {origin}"]
                if parent is not None:
                    clash += chain(parent)
                return BoolOutcome(None, clash + ["but"] + chain(p))
            continue
        value[p] = v
        reason[p] = (parent, origin)
        for q, o in eqs.get(p, ()):
            queue.append((q, v, p, o))
        if v == 1:
            for q, o in imps.get(p, ()):
                queue.append((q, 1, p, o))
    return BoolOutcome({p: 1 if value.get(p) == 1 else 0 for p in sorted(universe)})


def solve_bool(bc: ConstraintSet, params: Iterable[Param] = ()) -> Optional[dict[Param, int]]:
    """Pointwise-minimal solution of a boolean set, or ``None``."""
    return solve_bool_detailed(bc, params).solution


def apply_bool(psi: Mapping[Param, int], mixed: ConstraintSet) -> ConstraintSet:
    """Keep the linear body of each mixed constraint whose guard is 1."""
    out = ConstraintSet()
    for c, origin in mixed.items():
        if not isinstance(c, (MixedEq0, MixedGeq1)):
            raise TypeError(f"not a mixed constraint: {c}")
        if psi.get(c.guard, 0) == 1:
            out.add(c.body(), origin)
    return out


# ---------------------------------------------------------------- linear systems


@dataclass
class LinearSystem:
    """Rows over integer parameters and the variables of the objective.

    Door parameters range over the integers; the objective is the sum of
    the absolute values of all ``variables``.
    """

    variables: list[Param]
    rows: ConstraintSet

    @classmethod
    def from_constraints(cls, rows: ConstraintSet, extra: Iterable[Param] = ()) -> "LinearSystem":
        seen = set(extra)
        for c in rows:
            seen.update(constraint_params(c))
        return cls(sorted(p for p in seen if not p.is_bool), rows)

    def objective(self) -> LinComb:
        return LinComb.of(*self.variables)

    def satisfied_by(self, values: Mapping[Param, object]) -> bool:
        return all(c.holds(values) for c in self.rows)


# ---------------------------------------------------------------- presolve

FREE, NONNEG, NONPOS, ZEROED = "free", "nonneg", "nonpos", "zero"


class _Infeasible(Exception):
    def __init__(self, origins: frozenset[int]):
        self.origins = origins


@dataclass
class Presolved:
    """A reduced system plus the map back to the original parameters."""

    rows: list[tuple[dict[Param, int], str, int, frozenset[int]]]
    rep: dict[Param, tuple[int, Optional[Param]]]
    bound: dict[Param, str]
    weight: dict[Param, int]

    def expand(self, values: Mapping[Param, Fraction], variables: Iterable[Param]) -> dict[Param, Fraction]:
        out = {}
        for p in variables:
            sign, r = 1, p
            while r is not None and r in self.rep:
                s, r = self.rep[r]
                sign *= s
            out[p] = Fraction(0) if r is None else sign * values.get(r, Fraction(0))
        return out


def _presolve(system: LinearSystem, weights: Optional[Mapping[Param, int]] = None) -> Presolved:
    rep: dict[Param, tuple[int, Optional[Param]]] = {}
    why: dict[Param, frozenset[int]] = {}
    bound: dict[Param, str] = {p: FREE for p in system.variables}
    weight: dict[Param, int] = {p: (weights or {}).get(p, 1) for p in system.variables}

    def find(p: Param) -> tuple[int, Optional[Param], frozenset[int]]:
        sign, cur, reasons = 1, p, frozenset()
        while cur is not None and cur in rep:
            s, nxt = rep[cur]
            reasons |= why[cur]
            sign *= s
            cur = nxt
        return sign, cur, reasons

    def restrict(p: Param, b: str, reasons: frozenset[int]) -> None:
        old = bound[p]
        if b == old or b == FREE:
            return
        if old == FREE:
            bound[p] = b
            why.setdefault(p, frozenset())
            return
        fix(p, reasons)

    def fix(p: Param, reasons: frozenset[int]) -> None:
        rep[p] = (1, None)
        why[p] = reasons
        bound[p] = ZEROED

    def merge(x: Param, s: int, y: Param, reasons: frozenset[int]) -> None:
        """Record ``x = s * y`` for two representatives."""
        rep[x] = (s, y)
        why[x] = reasons
        weight[y] += weight.pop(x)
        bx = bound.pop(x)
        bound[x] = FREE
        if bx in (NONNEG, NONPOS):
            flipped = bx if s == 1 else (NONPOS if bx == NONNEG else NONNEG)
            restrict(y, flipped, reasons)

    work = []
    for k, c in enumerate(system.rows):
        expr, op, rhs = c.row()
        work.append((dict(expr.terms), op, rhs, frozenset([k])))

    changed = True
    while changed:
        changed = False
        out = []
        seen = set()
        for coeffs, op, rhs, src in work:
            new: dict[Param, int] = {}
            reasons = src
            for p, k in coeffs.items():
                sign, r, rs = find(p)
                reasons |= rs
                if r is None:
                    continue
                new[r] = new.get(r, 0) + sign * k
            new = {p: k for p, k in new.items() if k}
            if not new:
                if (op == "=" and rhs != 0) or (op == ">=" and rhs > 0):
                    raise _Infeasible(reasons)
                changed = changed or bool(coeffs)
                continue
            # signs of terms that are known non-negative / non-positive
            signs = set()
            for p, k in new.items():
                b = bound[p]
                signs.add(0 if b == FREE else (1 if (k > 0) == (b == NONNEG) else -1))
            if op == ">=" and rhs <= 0 and signs == {1}:
                changed = True
                continue
            if op == "=" and rhs == 0 and len(signs) == 1 and 0 not in signs:
                for p in new:
                    fix(p, reasons)
                changed = True
                continue
            if op == "=" and rhs == 0 and len(new) == 1:
                fix(next(iter(new)), reasons)
                changed = True
                continue
            if op == ">=" and rhs == 0 and len(new) == 1:
                (p, k), = new.items()
                restrict(p, NONNEG if k > 0 else NONPOS, reasons)
                changed = True
                continue
            if op == "=" and rhs == 0 and len(new) == 2:
                (x, a), (y, b) = sorted(new.items(), reverse=True)
                if abs(a) == abs(b):
                    merge(x, -1 if a == b else 1, y, reasons)
                    changed = True
                    continue
            key = (tuple(sorted(new.items())), op, rhs)
            if key in seen:
                continue
            seen.add(key)
            out.append((new, op, rhs, reasons))
        work = out
    return Presolved(work, rep, bound, weight)


# ---------------------------------------------------------------- LP


@dataclass
class LinearOutcome:
    status: str
    rational: dict[Param, Fraction] = field(default_factory=dict)
    objective: Optional[Fraction] = None
    kernel: list[str] = field(default_factory=list)
    rows_after_presolve: int = 0
    pivots: int = 0


def solve_linear_detailed(system: LinearSystem, weights: Optional[Mapping[Param, int]] = None) -> LinearOutcome:
    """Minimize the (weighted) sum of absolute values; weights are positive."""
    origins = [o for _, o in system.rows.items()]
    try:
        pre = _presolve(system, weights)
    except _Infeasible as e:
        return LinearOutcome(INFEASIBLE, kernel=sorted({origins[i] for i in e.origins}))

    reps = sorted({p for row in pre.rows for p in row[0]})
    # columns: non-negative part (and negative part for free reps)
    cols: dict[Param, tuple[int, Optional[int]]] = {}
    n = 0
    cost: dict[int, Fraction] = {}
    for p in reps:
        b = pre.bound[p]
        w = Fraction(pre.weight.get(p, 1))
        if b == FREE:
            cols[p] = (n, n + 1)
            cost[n] = cost[n + 1] = w
            n += 2
        else:
            cols[p] = (n, None)
            cost[n] = w
            n += 1
    lp_rows = []
    for coeffs, op, rhs, _ in pre.rows:
        row: dict[int, Fraction] = {}
        for p, k in coeffs.items():
            pos, neg = cols[p]
            sgn = -1 if pre.bound[p] == NONPOS else 1
            row[pos] = Fraction(sgn * k)
            if neg is not None:
                row[neg] = Fraction(-k)
        lp_rows.append((row, op, Fraction(rhs)))
    res = solve_lp(n, lp_rows, cost)
    if res.status == INFEASIBLE:
        kernel = set()
        for i in res.certificate:
            kernel.update(origins[k] for k in pre.rows[i][3])
        return LinearOutcome(INFEASIBLE, kernel=sorted(kernel), rows_after_presolve=len(pre.rows), pivots=res.pivots)
    if res.status != OPTIMAL:
        return LinearOutcome(res.status, rows_after_presolve=len(pre.rows), pivots=res.pivots)
    rep_values: dict[Param, Fraction] = {}
    for p, (pos, neg) in cols.items():
        v = res.values[pos] - (res.values[neg] if neg is not None else 0)
        rep_values[p] = -v if pre.bound[p] == NONPOS else v
    values = pre.expand(rep_values, system.variables)
    objective = sum((abs(v) * (weights or {}).get(p, 1) for p, v in values.items()), Fraction(0))
    return LinearOutcome(
        OPTIMAL, values, objective, rows_after_presolve=len(pre.rows), pivots=res.pivots
    )


def solve_linear_rational(system: LinearSystem) -> Optional[dict[Param, Fraction]]:
    """Optimal rational assignment, or ``None`` when infeasible."""
    out = solve_linear_detailed(system)
    return out.rational if out.status == OPTIMAL else None


def scale_to_integers(sol: Mapping[Param, Fraction], system: Optional[LinearSystem] = None) -> dict[Param, int]:
    """Multiply by the lcm of the denominators."""
    lcm = 1
    for v in sol.values():
        lcm = lcm * Fraction(v).denominator // math.gcd(lcm, Fraction(v).denominator)
    out = {p: int(Fraction(v) * lcm) for p, v in sol.items()}
    if system is not None and not system.satisfied_by(out):
        raise AssertionError("scaled solution violates the system")
    return out


# ---------------------------------------------------------------- LP text format


def write_lp(system: LinearSystem) -> str:
    """``min`` header, ``free`` line (integer-ranged parameters), one row
    per line in the constraint dump syntax."""
    lines = [f"min {system.objective()}"]
    free = [p.name for p in system.variables if p.is_door]
    if free:
        lines.append("free " + " ".join(free))
    for c, origin in system.rows.items():
        lines.append(f"{c}  # origin: {origin}")
    return "\n".join(lines) + "\n"


def parse_lp_solution(text: str) -> dict[Param, Fraction]:
    """Read ``var = p/q`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'var = p/q', found {raw!r}")
        out[param_from_name(name.strip())] = Fraction(value.strip())
    return out


def format_lp_solution(sol: Mapping[Param, Fraction]) -> str:
    return "".join(f"{p} = {Fraction(v)}\n" for p, v in sorted(sol.items()))


# ---------------------------------------------------------------- full solve


@dataclass
class SolveOutcome:
    """Everything the solver learned, for reports and diagnostics."""

    instantiation: Optional[Instantiation]
    bool_solution: Optional[dict[Param, int]] = None
    rational: dict[Param, Fraction] = field(default_factory=dict)
    objective: Optional[Fraction] = None
    scale: int = 1
    system: Optional[LinearSystem] = None
    kernel: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    rows_after_presolve: int = 0
    pivots: int = 0

    @property
    def sat(self) -> bool:
        return self.instantiation is not None


def linear_system(S: ConstraintSet, psi: Mapping[Param, int], params: Iterable[Param] = ()) -> LinearSystem:
    """``Const^i ∪ psi(Const^m)`` as a linear system."""
    _, lin, mixed = split(S)
    rows = ConstraintSet(lin.items())
    rows.update(apply_bool(psi, mixed))
    return LinearSystem.from_constraints(rows, (p for p in params if not p.is_bool))


LinearBackend = Callable[[LinearSystem], LinearOutcome]


def solve_detailed(
    S: ConstraintSet,
    params: Iterable[Param] = (),
    backend: Optional[LinearBackend] = None,
) -> SolveOutcome:
    params = list(params)
    t0 = time.perf_counter()
    bc, _, _ = split(S)
    b = solve_bool_detailed(bc, [p for p in list(params) + S.params() if p.is_bool])
    t1 = time.perf_counter()
    if b.solution is None:
        return SolveOutcome(None, kernel=b.conflict, timings={"boolean": t1 - t0})
    system = linear_system(S, b.solution, params)
    lin = (backend or solve_linear_detailed)(system)
    t2 = time.perf_counter()
    timings = {"boolean": t1 - t0, "linear": t2 - t1}
    if lin.status != OPTIMAL:
        return SolveOutcome(
            None, b.solution, system=system, kernel=lin.kernel, timings=timings,
            rows_after_presolve=lin.rows_after_presolve, pivots=lin.pivots,
        )
    ints = scale_to_integers(lin.rational, system)
    scale = 1
    for v in lin.rational.values():
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    inst = Instantiation(dict(b.solution), ints)
    if not all(holds(c, {**inst.bool_map, **inst.int_map}) for c in S):
        raise AssertionError("solver output violates the constraint set")
    return SolveOutcome(
        inst, b.solution, lin.rational, lin.objective, scale, system, timings=timings,
        rows_after_presolve=lin.rows_after_presolve, pivots=lin.pivots,
    )


def solve(S: ConstraintSet, params: Iterable[Param] = ()) -> Optional[Instantiation]:
    """An integer instantiation solving ``S``, or ``None``."""
    return solve_detailed(S, params).instantiation


def external_backend(solution: Mapping[Param, Fraction]) -> LinearBackend:
    """A backend replaying a solution produced by an external LP tool."""

    def run(system: LinearSystem) -> LinearOutcome:
        values = {p: Fraction(solution.get(p, 0)) for p in system.variables}
        if not system.satisfied_by(values):
            bad = [f"{c}  # origin: {o}" for c, o in system.rows.items() if not c.holds(values)]
            return LinearOutcome(INFEASIBLE, kernel=bad[:10])
        return LinearOutcome(OPTIMAL, values, sum((abs(v) for v in values.values()), Fraction(0)))

    return run
