import json
import re
from fractions import Fraction

import pytest
from scipy.optimize import linprog

from dlal import corpus as C
from dlal import fsyntax as F
from dlal.cli import main


@pytest.fixture
def term_file(tmp_path):
    def write(term, name="t.f"):
        path = tmp_path / name
        path.write_text(term if isinstance(term, str) else F.print_term(term))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_infer_identity(capsys, term_file):
    code, out, _ = run(capsys, "infer", term_file(C.identity()))
    assert code == 0
    assert "verdict: typable" in out and "type: forall a. a -o a" in out
    assert "timings" not in out


def test_exit_codes(capsys, term_file):
    assert run(capsys, "infer", term_file(C.exp_term()), "--domain", "n:N")[0] == 1
    code, _, err = run(capsys, "infer", term_file(r"\x:a. x x"))
    assert code == 2 and "non-arrow" in err
    code, _, err = run(capsys, "infer", term_file(r"\x:a. (x"))
    assert code == 2 and "error" in err
    assert run(capsys, "infer", "missing-file.f")[0] == 2
    assert run(capsys, "infer")[0] == 2
    assert run(capsys, "infer", term_file(C.identity()), "--domain", "x:Q")[0] == 2


def test_json_record(capsys, term_file):
    code, out, _ = run(capsys, "infer", "--json", term_file(C.church_nat(2)), "--result", "N")
    rec = json.loads(out)
    assert code == 0
    assert rec["verdict"] == "typable" and rec["verified"] is True
    assert rec["type_abbreviated"] == "N"
    # flat keys only
    assert all(not isinstance(v, (dict, list)) for v in rec.values())
    assert rec["stats.constraints"] > 0 and "witness.b1" in rec


def test_untypable_json_has_kernel(capsys, term_file):
    code, out, _ = run(capsys, "infer", "--json", "--domain", "n:N", term_file(C.exp_term()))
    rec = json.loads(out)
    assert code == 1 and rec["verdict"] == "untypable" and "kernel.1" in rec


def test_output_is_deterministic(capsys, term_file):
    path = term_file(C.rev_applied("10"))
    first = run(capsys, "infer", "--witness", path)[1]
    assert first == run(capsys, "infer", "--witness", path)[1]


def test_stats_flag_adds_timings(capsys, term_file):
    out = run(capsys, "infer", "--stats", term_file(C.identity()))[1]
    assert "timings (s):" in out


def test_several_files(capsys, term_file):
    code, out, _ = run(capsys, "infer", term_file(C.identity(), "a.f"), term_file(C.exp_term(), "b.f"), "--domain", "n:N")
    # n is not bound in the identity: that file is an error
    assert code == 2
    code, out, _ = run(capsys, "infer", term_file(C.identity(), "a.f"), term_file(C.church_nat(1), "b.f"))
    assert code == 0 and out.count("== ") == 2


def test_constraints_dump(capsys, term_file):
    code, out, err = run(capsys, "constraints", term_file(C.church_nat(2)))
    assert code == 0
    assert "B b1 = 1  # origin: ltype: f occurs 2 times" in out.splitlines()
    assert err.startswith("# total")
    assert all(re.match(r"^[BLM] .*  # origin: ", line) for line in out.splitlines())


def test_constraints_split_and_linear(capsys, term_file):
    path = term_file(C.church_nat(2))
    out = run(capsys, "constraints", "--split", path)[1]
    assert [line.split(" (")[0] for line in out.splitlines() if line.startswith("# ")] == [
        "# boolean", "# linear", "# mixed"]
    out = run(capsys, "constraints", "--linear", path)[1]
    assert out and all(line.startswith("L ") for line in out.splitlines())


def test_constraints_linear_reports_boolean_conflict(capsys, term_file):
    code, out, _ = run(capsys, "constraints", "--linear", "--domain", "n:N", term_file(C.exp_term()))
    assert code == 1 and "unsatisfiable" in out


def test_identity_dump_and_check(capsys, term_file, tmp_path):
    code, out, _ = run(capsys, "dump", term_file(C.identity()))
    assert code == 0 and len(out.splitlines()) <= 12
    dump = tmp_path / "id.pseudo"
    dump.write_text(out)
    code, out, _ = run(capsys, "check", str(dump))
    assert code == 0 and out.startswith("verdict: pass")


def test_check_rejection(capsys, data_dir):
    code, out, _ = run(capsys, "check", str(data_dir / "der.pseudo"))
    assert code == 1 and "(ii.b)" in out


def test_check_pterm_with_instantiation(capsys, term_file, tmp_path):
    out = run(capsys, "constraints", "--pterm", term_file(r"\x:a. x"))[1]
    pterm = tmp_path / "x.pterm"
    pterm.write_text(out[out.index("# pterm"):])
    phi = tmp_path / "phi"
    phi.write_text("b1 = 0\nn1 = 0\nm1 = 0\nm2 = 0\n")
    assert run(capsys, "check", str(pterm), str(phi))[0] == 0
    phi.write_text("b1 = 1\nn1 = 0\nm1 = 0\nm2 = 0\n")
    code, out, _ = run(capsys, "check", str(pterm), str(phi))
    assert code == 1 and "[admissibility]" in out
    assert run(capsys, "check", str(pterm))[0] == 2


def test_dot_counts(capsys, data_dir, term_file):
    code, out, err = run(capsys, "dot", str(data_dir / "worked.pseudo"))
    assert code == 0 and out.startswith("digraph pseudo {")
    assert "11 constructors, 2 opening and 4 closing doors" in err
    code, out, err = run(capsys, "dot", term_file(C.identity()))
    assert code == 0 and "0 opening and 0 closing" in err


def test_corpus_command(capsys):
    code, out, _ = run(capsys, "corpus", "nat", "3")
    assert code == 0 and F.parse_term(out) == C.church_nat(3)
    code, out, _ = run(capsys, "corpus", "poly", "X^2+1")
    assert code == 0 and F.typecheck_f(F.parse_term(out)) == F.parse_type("N -> N")
    assert run(capsys, "corpus", "poly")[0] == 2
    assert run(capsys, "corpus", "word", "12")[0] == 2


_TERM = re.compile(r"([+-]?)\s*(?:(\d+)\*)?([bnm]\d+)")


def _side(text):
    """Coefficients and constant of one side of a row."""
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return {}, int(text)
    return {name: (-1 if s == "-" else 1) * int(k or 1) for s, k, name in _TERM.findall(text)}, 0


def _solve_lp_file(text):
    """Feasible point of a written LP, from an independent solver."""
    rows = []
    for line in text.splitlines():
        if line.startswith("L "):
            lhs, op, rhs = re.match(r"L (.*?)\s*(>=|=)\s*(.*?)\s*#", line).groups()
            (left, _), (right, const) = _side(lhs), _side(rhs)
            coeffs = dict(left)
            for name, k in right.items():
                coeffs[name] = coeffs.get(name, 0) - k
            rows.append((coeffs, op, const))
    order = sorted({name for coeffs, _, _ in rows for name in coeffs})
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for coeffs, op, rhs in rows:
        vec = [coeffs.get(n, 0) for n in order]
        if op == "=":
            A_eq.append(vec)
            b_eq.append(rhs)
        else:
            A_ub.append([-v for v in vec])
            b_ub.append(-rhs)
    res = linprog([0] * len(order), A_ub=A_ub or None, b_ub=b_ub or None,
                  A_eq=A_eq or None, b_eq=b_eq or None, bounds=[(None, None)] * len(order), method="highs")
    assert res.status == 0
    return {n: Fraction(v).limit_denominator(1000) for n, v in zip(order, res.x)}


def test_lp_roundtrip(capsys, term_file, tmp_path):
    path = term_file(C.church_nat(2))
    lp = tmp_path / "two.lp"
    assert run(capsys, "infer", path, "--lp-out", str(lp))[0] == 0
    text = lp.read_text()
    assert text.startswith("min ") and "\nfree " in text
    sol = _solve_lp_file(text)
    sol_file = tmp_path / "two.sol"
    sol_file.write_text("".join(f"{k} = {v}\n" for k, v in sol.items()))
    code, out, _ = run(capsys, "infer", path, "--lp-in", str(sol_file))
    assert code == 0 and "verified: yes" in out
    # a solution violating the rows is rejected
    sol_file.write_text("")
    assert run(capsys, "infer", path, "--lp-in", str(sol_file), "--result", "N")[0] == 1
