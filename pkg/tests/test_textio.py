import pytest

from dlal import fsyntax as F
from dlal.dot import export_dot
from dlal.fsyntax import FSyntaxError
from dlal.param import Instantiation, Param, free_decorate_term, print_ptype
from dlal.pterms import nodes
from dlal.textio import (
    dump_pseudo,
    dump_pterm,
    format_instantiation,
    parse_dump,
    parse_instantiation,
    parse_ptype,
)


def test_pterm_roundtrip():
    t = free_decorate_term(F.parse_term(r"/\a. \f:a->a. \x:a. f (f x)"))
    text = dump_pterm(t)
    kind, back = parse_dump(text)
    assert kind == "pterm" and dump_pterm(back) == text


def test_pseudo_roundtrip(data_dir):
    text = (data_dir / "mon1.pseudo").read_text()
    kind, t = parse_dump(text)
    assert kind == "pseudo" and dump_pseudo(t) == text


def test_parse_ptype():
    E = parse_ptype("$^{b1,n1+n2}($^{b2,n3}a -o $^{n4}a)")
    assert print_ptype(E) == "$^{b1,n1+n2}($^{b2,n3}a -o $^{n4}a)"


def test_bad_dumps():
    with pytest.raises(FSyntaxError):
        parse_dump("^0 x : a\n")
    with pytest.raises(FSyntaxError):
        parse_dump("# pseudo\n^0 @\n  ^0 x : a\n")


def test_instantiation_text():
    phi = Instantiation({Param("b", 1): 1}, {Param("n", 1): 2, Param("m", 3): -1})
    text = format_instantiation(phi)
    assert text == "b1 = 1\nm3 = -1\nn1 = 2\n"
    assert parse_instantiation(text + "# done\n") == phi
    with pytest.raises(FSyntaxError):
        parse_instantiation("b1 1\n")


def test_dot_graph(data_dir):
    _, t = parse_dump((data_dir / "worked.pseudo").read_text())
    g = export_dot(t)
    assert g.constructors == sum(1 for _ in nodes(t))
    assert (g.opening, g.closing) == (2, 4)
    assert g.text.count("->") == g.constructors - 1 + g.opening + g.closing


def test_dot_needs_integer_doors():
    with pytest.raises(TypeError):
        export_dot(free_decorate_term(F.parse_term(r"\x:a. x")))
