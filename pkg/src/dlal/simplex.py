"""Two-phase primal simplex over exact rationals with Bland's rule.

Problems are given in the form::

    minimize  sum_j cost[j] * x[j]
    subject to  sum_j a[i][j] * x[j]  (= or >=)  rhs[i]     for each row i
                x >= 0

Rows of the form ``expr >= r`` with ``r <= 0`` start with their slack in
the basis; every other row receives an artificial variable for phase 1.
On infeasibility the phase-1 duals give a Farkas certificate: the rows
with a nonzero multiplier are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

Row = tuple[Mapping[int, Fraction], str, Fraction]

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LPResult:
    status: str
    values: dict[int, Fraction] = field(default_factory=dict)
    objective: Optional[Fraction] = None
    certificate: dict[int, Fraction] = field(default_factory=dict)
    pivots: int = 0


class _Tableau:
    def __init__(self):
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.basis: list[int] = []
        self.obj: dict[int, Fraction] = {}
        self.obj_value = Fraction(0)
        self.pivots = 0
        # column -> rows holding a nonzero entry in that column
        self.col_rows: dict[int, set[int]] = {}

    def add_row(self, coeffs: dict[int, Fraction], rhs: Fraction, basic: int) -> None:
        i = len(self.rows)
        self.rows.append(coeffs)
        self.rhs.append(rhs)
        self.basis.append(basic)
        for j in coeffs:
            self.col_rows.setdefault(j, set()).add(i)

    def pivot(self, r: int, col: int) -> None:
        self.pivots += 1
        row = self.rows[r]
        a = row[col]
        if a != 1:
            inv = 1 / a
            for j in row:
                row[j] *= inv
            self.rhs[r] *= inv
        for i in list(self.col_rows.get(col, ())):
            if i == r:
                continue
            other = self.rows[i]
            f = other[col]
            for j, v in row.items():
                nv = other.get(j, 0) - f * v
                if nv:
                    other[j] = nv
                    self.col_rows.setdefault(j, set()).add(i)
                elif j in other:
                    del other[j]
                    self.col_rows[j].discard(i)
            self.rhs[i] -= f * self.rhs[r]
        f = self.obj.get(col)
        if f:
            for j, v in row.items():
                nv = self.obj.get(j, 0) - f * v
                if nv:
                    self.obj[j] = nv
                else:
                    self.obj.pop(j, None)
            self.obj_value -= f * self.rhs[r]
        self.basis[r] = col

    def iterate(self, allowed) -> str:
        """Run Bland's rule to optimality over columns accepted by ``allowed``."""
        while True:
            entering = None
            for j in sorted(self.obj):
                if self.obj[j] < 0 and allowed(j):
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            best = None
            for i in self.col_rows.get(entering, ()):
                a = self.rows[i][entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def solve_lp(n: int, rows: Sequence[Row], cost: Mapping[int, Fraction]) -> LPResult:
    """Minimize ``cost`` over ``x in Q^n, x >= 0`` subject to ``rows``."""
    tab = _Tableau()
    next_col = n
    artificial: dict[int, int] = {}  # column -> row
    unit: dict[int, tuple[int, int]] = {}  # row -> (column, sign of row scaling)
    for i, (coeffs, op, rhs) in enumerate(rows):
        coeffs = {j: Fraction(v) for j, v in coeffs.items() if v}
        rhs = Fraction(rhs)
        if op == ">=" and rhs <= 0:
            # -expr + s = -rhs >= 0 with the slack s basic
            s = next_col
            next_col += 1
            row = {j: -v for j, v in coeffs.items()}
            row[s] = Fraction(1)
            tab.add_row(row, -rhs, s)
            unit[i] = (s, -1)
            continue
        sign = 1
        if op == ">=":
            s = next_col
            next_col += 1
            coeffs[s] = Fraction(-1)
        elif op != "=":
            raise ValueError(f"unknown row operator {op!r}")
        if rhs < 0:
            sign = -1
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
        a = next_col
        next_col += 1
        coeffs[a] = Fraction(1)
        tab.add_row(coeffs, rhs, a)
        artificial[a] = i
        unit[i] = (a, sign)

    # phase 1: minimize the sum of artificials
    for a in artificial:
        tab.obj[a] = Fraction(1)
    for a, r in artificial.items():
        # rows are added in input order, so the row index is r
        for j, v in tab.rows[r].items():
            nv = tab.obj.get(j, 0) - v
            if nv:
                tab.obj[j] = nv
            else:
                tab.obj.pop(j, None)
        tab.obj_value -= tab.rhs[r]
    status = tab.iterate(lambda j: True)
    assert status == OPTIMAL
    if tab.obj_value != 0:
        # duals: reduced cost d = c - y^T A on each row's unit column
        cert = {}
        for i, (col, sign) in unit.items():
            d = tab.obj.get(col, Fraction(0))
            y = (1 - d) if col in artificial else -d
            y *= sign
            if y:
                cert[i] = y
        return LPResult(INFEASIBLE, certificate=cert, pivots=tab.pivots)

    # drive artificials out of the basis
    for r in range(len(tab.rows)):
        if tab.basis[r] in artificial:
            for j in sorted(tab.rows[r]):
                if j not in artificial and tab.rows[r][j] != 0:
                    tab.pivot(r, j)
                    break
    keep = [r for r in range(len(tab.rows)) if tab.basis[r] not in artificial]
    if len(keep) != len(tab.rows):
        old = tab
        tab = _Tableau()
        tab.pivots = old.pivots
        for r in keep:
            row = {j: v for j, v in old.rows[r].items() if j not in artificial}
            tab.add_row(row, old.rhs[r], old.basis[r])
    else:
        for r in range(len(tab.rows)):
            for a in artificial:
                if a in tab.rows[r]:
                    del tab.rows[r][a]
        for a in artificial:
            tab.col_rows.pop(a, None)

    # phase 2
    tab.obj = {j: Fraction(v) for j, v in cost.items() if v}
    tab.obj_value = Fraction(0)
    for r, b in enumerate(tab.basis):
        cb = tab.obj.get(b)
        if cb:
            for j, v in tab.rows[r].items():
                nv = tab.obj.get(j, 0) - cb * v
                if nv:
                    tab.obj[j] = nv
                else:
                    tab.obj.pop(j, None)
            tab.obj_value -= cb * tab.rhs[r]
    status = tab.iterate(lambda j: j not in artificial)
    values = {j: Fraction(0) for j in range(n)}
    for r, b in enumerate(tab.basis):
        if b < n:
            values[b] = tab.rhs[r]
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, values=values, pivots=tab.pivots)
    return LPResult(OPTIMAL, values=values, objective=-tab.obj_value, pivots=tab.pivots)
