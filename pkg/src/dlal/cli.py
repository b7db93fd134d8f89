"""Command-line driver.

Exit codes: 0 typable (or check passed), 1 untypable (or check failed),
2 error.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import corpus
from . import dlal_types as D
from . import fsyntax as F
from .constraints import split
from .datatypes import DomainError, DomainSpec
from .dot import export_dot
from .param import AdmissibilityError, instantiate_term
from .pipeline import ERROR, EXIT_CODES, TYPABLE, InferenceReport, Options, build_problem, infer_problem
from .solver import (
    external_backend,
    linear_system,
    parse_lp_solution,
    solve_bool_detailed,
    solve_linear_detailed,
    write_lp,
)
from .textio import dump_pseudo, dump_pterm, parse_dump, parse_instantiation
from .verify import check_well_structured, print_pseudo


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror}") from None


def _options(args) -> Options:
    try:
        domain = DomainSpec.parse(args.domain) if getattr(args, "domain", None) else DomainSpec()
    except DomainError as e:
        raise CliError(str(e)) from None
    lp = None
    if getattr(args, "lp_in", None):
        try:
            lp = parse_lp_solution(_read(args.lp_in))
        except ValueError as e:
            raise CliError(f"{args.lp_in}: {e}") from None
    return Options(domain, getattr(args, "result", None), getattr(args, "strict_nat", False), lp)


def _parse_file(path: str) -> F.FTerm:
    text = _read(path)
    try:
        return F.parse_term(text)
    except F.FSyntaxError as e:
        raise CliError(f"{path}:{e}") from None


# ---------------------------------------------------------------- reports


def report_record(report: InferenceReport, timings: bool = False, witness: bool = True) -> dict:
    """Flat key/value record of a report."""
    rec: dict = {"verdict": report.verdict}
    if report.dlal_type is not None:
        rec["type"] = D.print_dtype(report.dlal_type)
        rec["type_abbreviated"] = D.print_dtype(report.dlal_type, abbreviate=True)
        rec["depth"] = report.depth
        rec["bound"] = report.bound.expression
        rec["pi1"] = report.bound.pi1
        rec["verified"] = report.verified
    if report.pseudo is not None and report.verdict == TYPABLE:
        rec["pseudo_term"] = print_pseudo(report.pseudo)
    if report.error:
        rec["error"] = report.error
    for i, line in enumerate(report.kernel, 1):
        rec[f"kernel.{i}"] = line
    for k, v in report.stats.items():
        rec[f"stats.{k}"] = v
    if timings:
        for k, v in report.timings.items():
            rec[f"time.{k}"] = round(v, 6)
    if witness and report.witness is not None:
        for k, v in report.witness.as_dict().items():
            rec[f"witness.{k}"] = v
    return rec


def format_report(report: InferenceReport, timings: bool = False, witness: bool = False) -> str:
    lines = [f"verdict: {report.verdict}"]
    if report.error:
        lines.append(f"error: {report.error}")
    if report.dlal_type is not None:
        lines.append(f"type: {D.print_dtype(report.dlal_type)}")
        abbrev = D.print_dtype(report.dlal_type, abbreviate=True)
        if abbrev != D.print_dtype(report.dlal_type):
            lines.append(f"type (abbreviated): {abbrev}")
        lines.append(f"depth: {report.depth}")
        pi1 = "" if report.bound.pi1 else " (type is not Pi1)"
        lines.append(f"bound: O({report.bound.expression}) beta-steps{pi1}")
        lines.append(f"verified: {'yes' if report.verified else 'no'}")
        lines.append(f"pseudo-term: {print_pseudo(report.pseudo)}")
    if report.kernel:
        lines.append("unsat kernel:")
        lines.extend(f"  {k}" for k in report.kernel)
    if report.stats:
        lines.append("stats:")
        lines.extend(f"  {k}: {v}" for k, v in report.stats.items())
    if timings and report.timings:
        lines.append("timings (s):")
        lines.extend(f"  {k}: {v:.4f}" for k, v in report.timings.items())
    if witness and report.witness is not None:
        lines.append("witness:")
        lines.extend(f"  {k} = {v}" for k, v in report.witness.as_dict().items())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands


def cmd_infer(args) -> int:
    options = _options(args)
    code = 0
    for path in args.files:
        try:
            term = _parse_file(path)
            problem = build_problem(term, options)
        except (F.FTypeError, DomainError, ValueError) as e:
            raise CliError(f"{path}: {e}") from None
        backend = _lp_writer(args.lp_out, options) if args.lp_out else None
        report = infer_problem(problem, options, backend)
        if args.lp_out and report.outcome is not None and report.outcome.system is None:
            print(f"{path}: the boolean phase is unsatisfiable; no LP written", file=sys.stderr)
        if len(args.files) > 1:
            print(f"== {path}")
        if args.json:
            print(json.dumps(report_record(report, args.stats), indent=1))
        else:
            sys.stdout.write(format_report(report, args.stats, args.witness))
        if report.verdict == ERROR:
            print(f"{path}: {report.error}", file=sys.stderr)
        code = max(code, report.exit_code)
    return code


def _lp_writer(path: str, options: Options):
    """A backend that writes the LP, then solves it as configured."""
    inner = external_backend(options.lp_solution) if options.lp_solution is not None else solve_linear_detailed

    def run(system):
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(write_lp(system))
        except OSError as e:
            raise CliError(f"{path}: {e.strerror}") from None
        return inner(system)

    return run


def cmd_constraints(args) -> int:
    term = _parse_file(args.file)
    try:
        problem = build_problem(term, _options(args))
    except (F.FTypeError, DomainError, ValueError) as e:
        raise CliError(f"{args.file}: {e}") from None
    S = problem.constraints
    if args.linear:
        bools = solve_bool_detailed(split(S)[0], [p for p in problem.params if p.is_bool])
        if bools.solution is None:
            print("the boolean part is unsatisfiable:")
            print("\n".join(f"  {line}" for line in bools.conflict))
            return 1
        S = linear_system(S, bools.solution, problem.params).rows
        sys.stdout.write(S.dump())
    elif args.split:
        for title, part in zip(("boolean", "linear", "mixed"), split(S)):
            print(f"# {title} ({len(part)})")
            sys.stdout.write(part.dump())
    else:
        sys.stdout.write(S.dump())
    if args.pterm:
        sys.stdout.write(dump_pterm(problem.pterm))
    print(f"# total {len(S)}", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    try:
        kind, t = parse_dump(_read(args.dump))
    except F.FSyntaxError as e:
        raise CliError(f"{args.dump}:{e}") from None
    if kind == "pterm":
        if not args.instantiation:
            raise CliError("a p-term dump needs an instantiation file")
        try:
            phi = parse_instantiation(_read(args.instantiation))
            t = instantiate_term(phi, t)
        except F.FSyntaxError as e:
            raise CliError(f"{args.instantiation}:{e}") from None
        except KeyError as e:
            raise CliError(f"{args.instantiation}: no value for {e.args[0]}") from None
        except AdmissibilityError as e:
            print("verdict: fail")
            print(f"[admissibility] {e}")
            return 1
    report = check_well_structured(t)
    print(report)
    if report.passed:
        print(f"pseudo-term: {print_pseudo(t)}")
    return 0 if report.passed else 1


def cmd_corpus(args) -> int:
    kind, arg = args.kind, args.arg
    try:
        if kind == "nat":
            t = corpus.church_nat(int(arg or 0))
        elif kind == "word":
            t = corpus.church_word(arg or "")
        elif kind == "rev":
            t = corpus.rev_applied(arg) if arg is not None else corpus.rev_term()
        elif kind == "pred":
            t = corpus.pred_applied(int(arg)) if arg is not None else corpus.pred_term()
        elif kind == "exp":
            t = corpus.exp_term()
        elif kind == "id":
            t = corpus.identity()
        elif kind == "poly":
            if arg is None:
                raise CliError("poly needs a polynomial, for example \"3X^2+1\"")
            t = corpus.poly_term(arg, coercions=not args.no_coercions)
        else:
            raise CliError(f"unknown corpus term {kind!r}")
    except ValueError as e:
        raise CliError(str(e)) from None
    print(F.print_term(t))
    return 0


def cmd_dot(args) -> int:
    text = _read(args.file)
    if text.lstrip().startswith("#"):
        try:
            kind, t = parse_dump(text)
        except F.FSyntaxError as e:
            raise CliError(f"{args.file}:{e}") from None
        if kind != "pseudo":
            raise CliError("dot reads F terms or pseudo-term dumps")
    else:
        try:
            term = F.parse_term(text)
            problem = build_problem(term, _options(args))
        except (F.FSyntaxError, F.FTypeError, DomainError, ValueError) as e:
            raise CliError(f"{args.file}: {e}") from None
        report = infer_problem(problem, _options(args))
        if report.verdict != TYPABLE:
            print(f"{args.file}: {report.verdict}; no graph", file=sys.stderr)
            return report.exit_code
        t = report.pseudo
    g = export_dot(t)
    sys.stdout.write(g.text)
    print(f"# {g.constructors} constructors, {g.opening} opening and {g.closing} closing doors", file=sys.stderr)
    return 0


def cmd_dump(args) -> int:
    """Pseudo-term dump of the inferred witness, for ``check``."""
    term = _parse_file(args.file)
    problem = build_problem(term, _options(args))
    report = infer_problem(problem, _options(args))
    if report.verdict != TYPABLE:
        print(f"{args.file}: {report.verdict}", file=sys.stderr)
        return report.exit_code
    sys.stdout.write(dump_pseudo(report.pseudo))
    return 0


# ---------------------------------------------------------------- parser


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--domain", metavar="VAR:N|W[,...]", help="bound variables that must be Church data")
    p.add_argument("--result", choices=("N", "W"), help="constrain the result type to be N or W")
    p.add_argument("--strict-nat", action="store_true", help="pin the result to N rather than N'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlal", description="DLAL type inference for System F terms")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", help="decide DLAL typability")
    p.add_argument("files", nargs="+", help="F term files ('-' for stdin)")
    _add_solver_flags(p)
    p.add_argument("--lp-out", metavar="FILE", help="write the linear program after the boolean phase")
    p.add_argument("--lp-in", metavar="FILE", help="use an external LP solution ('var = p/q' lines)")
    p.add_argument("--stats", action="store_true", help="also report timings")
    p.add_argument("--json", action="store_true", help="flat JSON record")
    p.add_argument("--witness", action="store_true", help="print the instantiation")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("constraints", help="dump the generated constraints")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--split", action="store_true", help="group into boolean, linear and mixed")
    p.add_argument("--linear", action="store_true", help="the linear system left after the boolean phase")
    p.add_argument("--pterm", action="store_true", help="append the decorated p-term dump")
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("check", help="check a pseudo-term, or a p-term plus instantiation")
    p.add_argument("dump")
    p.add_argument("instantiation", nargs="?")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", help="print an example term")
    p.add_argument("kind", choices=("nat", "word", "rev", "pred", "exp", "poly", "id"))
    p.add_argument("arg", nargs="?", help="k, bits, polynomial, or the argument of rev/pred")
    p.add_argument("--no-coercions", action="store_true", help="poly: drop the coercion wrappers")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("dot", help="graph of the inferred pseudo-term")
    p.add_argument("file", help="F term file or pseudo-term dump")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("dump", help="pseudo-term dump of the inferred witness")
    p.add_argument("file")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_dump)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CODES[ERROR] if e.code else 0
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES[ERROR]


if __name__ == "__main__":
    sys.exit(main())
