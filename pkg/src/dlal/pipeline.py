"""The inference pipeline: decorate, generate, solve, verify, report."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from . import dlal_types as D
from . import fsyntax as F
from .constraints import ConstraintSet, const_all, local_typing, split
from .datatypes import DomainSpec, domain_constraints, find_sort, sort_constraints
from .param import (
    Instantiation,
    PArrow,
    PLin,
    ParamSource,
    free_decorate_term,
    instantiate_term,
    term_params,
)
from .pterms import Node
from .solver import LinearBackend, SolveOutcome, external_backend, solve_detailed
from .verify import CheckReport, check_well_structured, local_types

TYPABLE, UNTYPABLE, ERROR = "typable", "untypable", "error"
EXIT_CODES = {TYPABLE: 0, UNTYPABLE: 1, ERROR: 2}

# Deep terms recurse in the checker and in tree maps.
RECURSION_LIMIT = 20000


@dataclass
class Options:
    domain: DomainSpec = field(default_factory=DomainSpec)
    result_sort: Optional[str] = None
    strict_nat: bool = False
    lp_solution: Optional[Mapping] = None


@dataclass
class Problem:
    """A decorated term with its constraint set, ready to solve."""

    term: F.FTerm
    pterm: Node
    constraints: ConstraintSet
    families: dict[str, int]
    params: list
    timings: dict[str, float]


@dataclass
class InferenceReport:
    verdict: str
    dlal_type: Optional[D.DType] = None
    depth: Optional[int] = None
    bound: Optional[D.ComplexityBound] = None
    stats: dict = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    witness: Optional[Instantiation] = None
    pterm: Optional[Node] = None
    pseudo: Optional[Node] = None
    check: Optional[CheckReport] = None
    kernel: list[str] = field(default_factory=list)
    error: str = ""
    outcome: Optional[SolveOutcome] = None
    problem: Optional[Problem] = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    @property
    def verified(self) -> bool:
        """The witness went through the independent checker and passed."""
        return self.check is not None and self.check.passed

    def type_of(self, node: Node) -> Optional[D.DType]:
        """DLAL type (with ``=>``) of a node of :attr:`pseudo`."""
        if self.pseudo is None:
            return None
        _, types, _ = local_types(self.pseudo)
        ty = types.get(id(node))
        return None if ty is None else D.unstar(ty)


def _result_layer(E: PLin, sort: str) -> PLin:
    """The root type, or the first codomain along its arrows, of the sort."""
    layer = E
    while True:
        if find_sort(layer) == sort:
            return layer
        if not isinstance(layer.body, PArrow):
            raise ValueError(f"the result type has no {sort} position")
        layer = layer.body.cod


def build_problem(term: F.FTerm, options: Optional[Options] = None) -> Problem:
    """Type check, decorate and generate ``Const`` (plus data-type sets)."""
    options = options or Options()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), RECURSION_LIMIT))
    t0 = time.perf_counter()
    F.typecheck_f(term)
    fresh = ParamSource()
    pterm = free_decorate_term(term, fresh)
    t1 = time.perf_counter()
    typing = local_typing(pterm)
    S = const_all(pterm, typing)
    families = {}
    for c, origin in S.items():
        fam = origin.split(":", 1)[0].split("(", 1)[0]
        families[fam] = families.get(fam, 0) + 1
    if options.domain:
        dom = domain_constraints(pterm, options.domain)
        families["domain"] = sum(1 for c in dom if c not in S)
        S.update(dom)
    sort = options.result_sort or ("N" if options.strict_nat else None)
    if sort:
        res = sort_constraints(_result_layer(typing.root_type, sort), sort, options.strict_nat, f"{sort} for the result")
        families["result"] = sum(1 for c in res if c not in S)
        S.update(res)
    t2 = time.perf_counter()
    return Problem(term, pterm, S, families, term_params(pterm), {"decorate": t1 - t0, "generate": t2 - t1})


def _stats(problem: Problem, outcome: Optional[SolveOutcome]) -> dict:
    kinds = {"b": 0, "n": 0, "m": 0}
    for p in problem.params:
        kinds[p.kind] += 1
    b, lin, mixed = split(problem.constraints)
    stats = {
        "term_size": F.term_size(problem.term),
        "params_bool": kinds["b"],
        "params_type": kinds["n"],
        "params_door": kinds["m"],
        "params_integer": kinds["n"] + kinds["m"],
        "constraints": len(problem.constraints),
        "constraints_boolean": len(b),
        "constraints_linear": len(lin),
        "constraints_mixed": len(mixed),
    }
    for fam in ("ltype", "bracket", "bang", "scope", "domain", "result"):
        stats[f"family_{fam}"] = problem.families.get(fam, 0)
    system = outcome.system if outcome else None
    stats["linear_rows"] = len(system.rows) if system else 0
    stats["linear_variables"] = len(system.variables) if system else 0
    stats["rows_after_presolve"] = outcome.rows_after_presolve if outcome else 0
    stats["pivots"] = outcome.pivots if outcome else 0
    stats["objective"] = str(outcome.objective) if outcome and outcome.objective is not None else ""
    stats["scale"] = outcome.scale if outcome and outcome.sat else 0
    return stats


def infer_problem(
    problem: Problem, options: Optional[Options] = None, backend: Optional[LinearBackend] = None
) -> InferenceReport:
    """Solve, instantiate and check; ``backend`` overrides the LP solver."""
    options = options or Options()
    if backend is None and options.lp_solution is not None:
        backend = external_backend(options.lp_solution)
    outcome = solve_detailed(problem.constraints, problem.params, backend)
    timings = {**problem.timings, **outcome.timings}
    report = InferenceReport(UNTYPABLE, pterm=problem.pterm, outcome=outcome, problem=problem)
    report.stats = _stats(problem, outcome)
    report.timings = timings
    if not outcome.sat:
        report.kernel = outcome.kernel
        return report
    phi = outcome.instantiation
    t0 = time.perf_counter()
    pseudo = instantiate_term(phi, problem.pterm)
    check = check_well_structured(pseudo)
    timings["verify"] = time.perf_counter() - t0
    report.witness, report.pseudo, report.check = phi, pseudo, check
    if not check.passed:
        # the gate: a witness the checker rejects is never reported typable
        report.verdict = ERROR
        report.error = "internal error: the solver's witness fails the checker\n" + str(check)
        return report
    report.verdict = TYPABLE
    report.dlal_type = D.unstar(check.output_type)
    report.depth = D.depth(report.dlal_type)
    report.bound = D.complexity_bound(report.dlal_type, F.term_size(problem.term))
    return report


def infer(term: Union[F.FTerm, str], options: Optional[Options] = None) -> InferenceReport:
    """Decide DLAL typability of a closed F term (or its source text)."""
    options = options or Options()
    try:
        if isinstance(term, str):
            term = F.parse_term(term)
        problem = build_problem(term, options)
    except (F.FSyntaxError, F.FTypeError, ValueError) as e:
        return InferenceReport(ERROR, error=f"{type(e).__name__}: {e}")
    return infer_problem(problem, options)
