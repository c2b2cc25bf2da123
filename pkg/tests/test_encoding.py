import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pclif import encoding as en, oracle, pauli as pl, phase_space as ps
from pclif.ring import Ring

from helpers import random_word

DIMS = (2, 3, 4, 5)

# kappa^CNOT(v) over Q_{2,2} in lexicographic vector order, decoded from the
# dense conjugation; only X(x)Z = [1,0,0,1] and Y(x)Y = [1,1,1,1] pick up -1
CNOT_KAPPA = [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1]


def test_cnot_kappa_frozen():
    r = Ring(2)
    _, _, enc = oracle.gate(r, "CNOT")
    assert [en.kappa(enc, v) for v in pl.all_vectors(r, 2)] == CNOT_KAPPA


def test_sum4_kappa_count_frozen():
    r = Ring(4)
    _, _, enc = oracle.gate(r, "SUM")
    assert sum(en.kappa(enc, v) for v in pl.all_vectors(r, 2)) == 64


def test_cross_site_terms_needed():
    # the per-site sum alone gives 0 here; X(x)Z -> -Y(x)Y under CNOT
    r = Ring(2)
    _, u, enc = oracle.gate(r, "CNOT")
    xz = pl.PauliElement(r, 0, (1, 0, 0, 1))
    assert en.evaluate(enc, xz) == pl.PauliElement(r, 1, (1, 1, 1, 1)) == oracle.conjugate(u, xz)


@pytest.mark.parametrize("d", DIMS)
def test_frozen_single_qudit_encodings(d):
    r = Ring(d)
    _, _, f = oracle.gate(r, "F")
    _, _, p = oracle.gate(r, "P")
    assert f.mu == (0, 0) and f.psi == ((0, 1), (d - 1, 0))
    assert p.mu == (0, 0) and p.psi == ((1, 1), (0, 1))


def test_hadamard_on_y():
    r = Ring(2)
    _, _, h = oracle.gate(r, "H")
    assert en.evaluate(h, pl.named(r, "Y")) == pl.PauliElement(r, 1, (1, 1))


def test_non_symplectic_detected():
    r = Ring(2)
    bad = en.CondensedEncoding(r, (0, 0), ((1, 0), (1, 0)))
    assert not en.is_symplectic(bad)
    assert en.symplectic_violations(bad) == [(0, 1, 0, 1)]


@st.composite
def words(draw, max_n=2):
    d = draw(st.sampled_from(DIMS))
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    r = Ring(d)
    enc, u, word = random_word(r, n, np.random.default_rng(seed), length=draw(st.integers(1, 8)))
    return r, enc, u


@given(words())
def test_word_encoding_matches_dense(args):
    r, enc, u = args
    assert en.is_symplectic(enc)
    els = list(pl.all_elements(r, enc.n))
    assert oracle.verify_encoding(enc, u, els[:: max(1, len(els) // 40)]) == []


@given(words(), st.data())
def test_evaluate_distributes_over_star(args, data):
    r, enc, _ = args
    d, n = r.d, enc.n
    a, b = (pl.PauliElement(r, data.draw(st.integers(0, d - 1)),
            data.draw(st.lists(st.integers(0, d - 1), min_size=2 * n, max_size=2 * n))) for _ in range(2))
    assert en.evaluate(enc, pl.cprod(a, b)) == pl.cprod(en.evaluate(enc, a), en.evaluate(enc, b))


@given(words())
def test_kappa_zero_on_basis(args):
    r, enc, _ = args
    assert all(en.kappa(enc, b) == 0 for b in ps.basis(r, enc.n))


@given(words(), st.integers(0, 2**32 - 1))
def test_compose_matches_product(args, seed):
    r, e1, u1 = args
    e2, u2, _ = random_word(r, e1.n, np.random.default_rng(seed))
    c = en.compose(e2, e1)
    u = u2 @ u1
    for b in ps.basis(r, c.n):
        p = pl.PauliElement(r, 0, b)
        assert en.evaluate(c, p) == en.evaluate(e2, en.evaluate(e1, p)) == oracle.conjugate(u, p)


@given(words())
def test_invert_roundtrip(args):
    r, enc, u = args
    inv = en.invert(enc)
    ident = en.identity(r, enc.n)
    assert en.compose(inv, enc) == ident
    assert en.compose(enc, inv) == ident
    assert oracle.verify_encoding(inv, u.conj().T, [pl.PauliElement(r, 0, b) for b in ps.basis(r, enc.n)]) == []


@given(words())
def test_frame_roundtrip(args):
    r, enc, _ = args
    frame = en.to_frame(enc)
    assert en.check_frame(frame)
    assert en.from_frame(frame) == enc
    assert en.Frame.from_json(r, json.loads(json.dumps(frame.to_json()))) == frame


def test_bad_frame_reports():
    r = Ring(2)
    x, z = pl.named(r, "X"), pl.named(r, "Z")
    assert en.frame_violations(en.Frame(((x, x),))) == ["row 1: omega(Z, X) = 0, need 1"]


@pytest.mark.parametrize("d", (2, 3))
def test_embed_and_tensor_match_kron(d):
    r = Ring(d)
    lib = oracle.gate_library(r)
    _, f, fe = lib["F"]
    _, p, pe = lib["P"]
    t = en.tensor(fe, pe)
    assert oracle.verify_encoding(t, np.kron(f, p)) == []
    e = en.embed(fe, [1], 2)
    assert oracle.verify_encoding(e, np.kron(np.eye(d), f)) == []


def test_scalar_compose_is_pow():
    r = Ring(4)
    y = pl.named(r, "Y")
    assert en.scalar_compose(y, 3) == pl.pow(y, 3)


def test_matrix_view():
    r = Ring(3)
    _, _, f = oracle.gate(r, "F")
    assert f.matrix.tolist() == [[0, 2], [1, 0]]
    with pytest.raises(ValueError):
        f.matrix[0, 0] = 1


def test_rank_mismatch():
    r = Ring(2)
    with pytest.raises(ps.DimensionError):
        en.evaluate(en.identity(r, 1), pl.identity(r, 2))
