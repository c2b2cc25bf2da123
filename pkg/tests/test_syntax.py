import pytest
from hypothesis import given, strategies as st

from pclif import corpus_path, lambda_pc as lp, oracle, pauli as pl, syntax
from pclif.ring import Ring

from conftest import elements

CORPUS = ["hadamard.pc", "s2.pc", "cnot.pc", "cz.pc", "swap.pc", "library.pc", "repx.pc"]


def load(name):
    return syntax.load(corpus_path(name))


def run(prog, text):
    e, q = prog.expr(text)
    lp.typecheck(e, prog.ring)
    return lp.render(lp.run(e, prog.ring), q)


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_checks(name):
    results = load(name).check_all()
    assert results and all(status in ("ok", "parametric") for _, status, _, _ in results)


def test_rejection_fixtures():
    for name in ("ill_typed.pc", "repx_listing.pc"):
        (res,) = load(name).check_all()
        assert res[1] == "error"
        bad = [c for c in res[2] if not c.ok]
        assert (bad[0].got, bad[0].required) == (0, 1)


@pytest.mark.parametrize("text,want", [
    ("hadamard Y", "<1> Y"),
    ("cnot_2 (X ** Y)", "Y ** Z"),
    ("(S_2)^-1 X", "<1> Y"),
    ("S_2^-1 X", "<1> Y"),
    ("swap@(Pauli, Pauli) (X ** Z)", "Z ** X"),
    ("swap (X ** Z)", "Z ** X"),
    ("pauliToClifford Z X", "<1> X"),
    ("compose hadamard S_2 X", "Z"),
    ("compose S_2 hadamard X", "<1> Y"),
    ("parallel cnot_2 hadamard ((X ** Z) ** Y)", "(Y ** Y) ** Y"),
    ("cz_2 (X ** X)", "Y ** Y"),
    ("<1> X *.* Z", "Y"),
    ("X ** [1,1]", "X ** Y"),
    ("[1,0,0,1]", "X ** Z"),
])
def test_library_expressions(text, want):
    assert run(load("library.pc"), text) == want


def test_main():
    prog = load("library.pc")
    e, q = prog.main()
    assert lp.render(lp.run(e, prog.ring), q) == "Y ** Z"


def test_empty_file():
    prog = syntax.parse("")
    assert prog.names() == [] and prog.main() is None


@pytest.mark.parametrize("src", [
    "dim 2;\nx = |^ X",
    "dim 2;\n|^",
    "dim 2;\nh :: |^ Pauli -o Pauli ^|\nh |^ X = Z ^|\nh |^ X = X ^|",
    "dim 2;\nh :: |^ Pauli -o Pauli ^|\nh |^ X = Z ^|",
    "dim 2;\nh :: |^ Pauli -o Pauli ^|\nh |^ X = W ^|\nh |^ Z = X ^|",
    "dim 1;",
])
def test_parse_errors(src):
    with pytest.raises(syntax.ParseError):
        prog = syntax.parse(src)
        prog.check_all()
        prog.clifford("h")


def test_error_position():
    with pytest.raises(syntax.ParseError) as info:
        syntax.parse("dim 2;\n\nfoo :: |^ Pauli ^|\nfoo = |^ X ** ^|")
    assert info.value.line == 4


def test_indexed_patterns_and_power_types():
    prog = load("repx.pc")
    fn = prog.clifford("repX")
    assert fn.dom == lp.Prod(lp.power(3), lp.power(2))
    assert lp.qrank(fn.dom) == 5


@pytest.mark.parametrize("d", (2, 3, 4, 5))
def test_generic_dimension_programs(d):
    src = f"""dim {d};
fourier :: |^ Pauli -o Pauli ^|
fourier |^ X = Z ^|
fourier |^ Z = X^{d - 1} ^|
phase :: |^ Pauli -o Pauli ^|
phase |^ X = Y ^|
phase |^ Z = Z ^|
sum :: |^ Pauli ** Pauli -o Pauli ** Pauli ^|
sum |^ in1 X = X ** X ^|
sum |^ in1 Z = in1 Z ^|
sum |^ in2 X = in2 X ^|
sum |^ in2 Z = Z^{d - 1} ** Z ^|
"""
    prog = syntax.parse(src)
    r = prog.ring
    for name, g in (("fourier", "F"), ("phase", "P"), ("sum", "SUM")):
        assert lp.to_encoding(prog.clifford(name), r) == oracle.gate(r, g)[2]
    assert run(prog, "fourier^-1 (fourier Y)") == "Y"


def test_dimension_override():
    with pytest.raises(syntax.ParseError):
        syntax.load(corpus_path("hadamard.pc"), 3)
    assert syntax.parse("h :: |^ Pauli -o Pauli ^|\nh |^ X = Z ^|\nh |^ Z = X^2 ^|", 3).ring == Ring(3)


@st.composite
def rendered(draw):
    d = draw(st.sampled_from((2, 3, 4, 5)))
    n = draw(st.integers(1, 3))
    return draw(elements(d, n))


@given(rendered())
def test_render_parse_roundtrip(p):
    prog = syntax.parse(f"dim {p.ring.d};")
    q = lp.power(p.rank)
    text = lp.render(p, q)
    e, got_q = prog.expr(text, q)
    assert got_q == q
    assert lp.run(e, p.ring) == p
