import numpy as np
import pytest
from hypothesis import given, strategies as st

from pclif import encoding as en, lambda_c as lc, lambda_pc as lp, oracle, pauli as pl
from pclif.ring import Ring

from conftest import ring_and_elements

P = lp.Pauli
C = lc.Const


def vec(*entries):
    return lp.Embed(lc.unflatten(entries, lc.PAULI_C))


def case_fn(name, ex, ez):
    return lp.CliffordFn(name, "x", P, P, lp.CaseXZ(lp.PVar("x"), vec(*ex), vec(*ez)))


def hadamard():
    return case_fn("hadamard", (0, 1), (1, 0))


def test_hadamard_trace():
    # case <0>[1,1] of X -> [0,1] | Z -> [1,0]  steps to  <0> [1,0]^1 * [0,1]^1
    r = Ring(2)
    h = hadamard()
    e = lp.Apply(h, lp.Config(0, lc.unflatten((1, 1), lc.PAULI_C)))
    e = lp.step(e, r)
    e = lp.step(lp.step(e, r), r)
    assert isinstance(e, lp.Phase) and isinstance(e.body, lp.Phase)
    star = e.body.body
    assert isinstance(star, lp.Star) and star.left == lp.Pow(vec(1, 0), 1) and star.right == lp.Pow(vec(0, 1), 1)
    assert lp.run(e, r) == pl.PauliElement(r, 1, (1, 1))


def test_phase_and_pow_rules():
    r = Ring(4)
    e = lp.Pow(lp.Phase(C(1), vec(1, 1)), 3)
    assert lp.run(e, r) == pl.pow(pl.PauliElement(r, 1, (1, 1)), 3)


def test_hadamard_side_condition_reports_d_minus_1():
    r = Ring(2)
    ck = lp.Checker(r)
    ck.check_fn(hadamard())
    (cond,) = ck.conditions
    assert cond.kind == "case-xz" and cond.basis == ("Z", "X")
    # omega([1,0],[0,1]) = -1 = d - 1, and at d = 2 that is the required 1
    assert cond.got == r.d - 1 == cond.required
    assert cond.ok


def test_hadamard_rejected_at_d3():
    r = Ring(3)
    with pytest.raises(lp.SideConditionError) as info:
        lp.Checker(r).check_fn(hadamard())
    assert info.value.cond.got == 2 and info.value.cond.required == 1


def test_ill_typed_rejected():
    with pytest.raises(lp.SideConditionError) as info:
        lp.Checker(Ring(2)).check_fn(case_fn("ill_typed", (1, 0), (1, 0)))
    assert (info.value.cond.got, info.value.cond.required) == (0, 1)
    assert "omega = 0, required 1" in info.value.cond.describe()


def test_cnot_needs_prod_condition():
    # in1 and in2 branches whose images fail to commute
    r = Ring(2)
    px = lp.CliffordFn("bad", "q", lp.Prod(P, P), lp.Prod(P, P), lp.CaseProd(
        lp.PVar("q"),
        "a", lp.Inj(1, lp.Apply(hadamard(), lp.PVar("a")), P),
        "b", lp.Inj(1, lp.Apply(hadamard(), lp.PVar("b")), P)))
    with pytest.raises(lp.SideConditionError) as info:
        lp.Checker(r).check_fn(px)
    assert info.value.cond.kind == "case-prod"


def test_star_type_mismatch():
    with pytest.raises(lp.PTypeError):
        lp.typecheck(lp.Star(vec(1, 0), lp.Embed(lc.unflatten((1, 0, 0, 0), lp.overline(lp.power(2))))), Ring(2))


def test_variable_must_be_used_once():
    bad = lp.CliffordFn("dup", "x", P, P, lp.Star(lp.PVar("x"), lp.PVar("x")))
    with pytest.raises(lp.PTypeError):
        lp.Checker(Ring(2)).check_fn(bad)


@pytest.mark.parametrize("d", (2, 3, 4, 5))
def test_programs_match_oracle(d):
    r = Ring(d)
    lib = oracle.gate_library(r)
    fourier = case_fn("F", (0, 1), (d - 1, 0))
    phase = case_fn("P", (1, 1), (0, 1))
    for fn, g in ((fourier, "F"), (phase, "P")):
        assert lp.to_encoding(fn, r) == lib[g][2]
    par = lp.parallel_clifford(fourier, phase)
    assert oracle.verify_encoding(lp.to_encoding(par, r), np.kron(lib["F"][1], lib["P"][1])) == []
    comp = lp.compose_clifford(fourier, phase)
    assert lp.to_encoding(comp, r) == en.compose(lib["P"][2], lib["F"][2])
    assert lp.compile_frame(par, r) == en.to_frame(lp.to_encoding(par, r))


@given(ring_and_elements(k=2, max_n=2))
def test_pauli_to_clifford_is_conjugation(args):
    r, p, q = args
    fn = lp.pauli_to_clifford(p)
    got = lp.apply(fn, q)
    want = oracle.conjugate(oracle.dense_pauli(p), q)
    assert got == want


@given(ring_and_elements(k=1, max_n=1))
def test_apply_inverse_roundtrip(args):
    r, p = args
    for fn in (case_fn("F", (0, 1), (r.d - 1, 0)), case_fn("P", (1, 1), (0, 1))):
        assert lp.apply(fn, lp.apply_inverse(fn, p, r)) == p
        assert lp.apply_inverse(fn, lp.apply(fn, p), r) == p


@given(ring_and_elements(k=1, max_n=3))
def test_element_config_roundtrip(args):
    r, p = args
    assert lp.to_element(lp.from_element(p), r) == p


def test_psi_of_is_linear_map():
    t = lp.psi_of(hadamard().body)
    assert lc.typecheck({"x": lc.PAULI_C}, t) == lc.PAULI_C


def test_render_structured():
    r = Ring(2)
    q = lp.Prod(lp.Prod(P, P), P)
    p = pl.PauliElement(r, 1, (1, 0, 0, 1, 1, 1))
    assert lp.render(p, q) == "<1> (X ** Z) ** Y"
    assert lp.render(p) == "<1> X ** Z ** Y"
