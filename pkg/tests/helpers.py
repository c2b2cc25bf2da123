"""Random Clifford words with both their encoding and their dense unitary."""

import functools
import itertools

import numpy as np

from pclif import encoding as en
from pclif import oracle

# F, P and SUM generate the Clifford group at every d; the rest add variety
WORD_GATES = ("F", "P", "SUM", "CZ", "SWAP", "SHIFT", "CLOCK")


def random_word(ring, n, rng, length=8):
    lib = oracle.gate_library(ring)
    names = [g for g in WORD_GATES if lib[g][0] <= n]
    enc = en.identity(ring, n)
    u = np.eye(ring.d**n, dtype=complex)
    word = []
    for _ in range(length):
        g = names[rng.integers(len(names))]
        arity, gu, genc = lib[g]
        wires = tuple(int(w) for w in rng.choice(n, size=arity, replace=False))
        enc = en.compose(en.embed(genc, wires, n), enc)
        u = oracle.embed(ring, gu, wires, n) @ u
        word.append((g, wires))
    return enc, u, word


def random_encoding(ring, n, seed, length=8):
    return random_word(ring, n, np.random.default_rng(seed), length)[0]


@functools.lru_cache(maxsize=None)
def _embedded_gates(ring, n):
    lib = oracle.gate_library(ring)
    out = []
    for g in WORD_GATES:
        arity, _, genc = lib[g]
        for wires in itertools.permutations(range(n), arity):
            out.append(en.embed(genc, wires, n))
    return out


def random_symplectic(ring, n, rng, length=8):
    """Encoding of a random gate word, without building the dense unitary."""
    gates = _embedded_gates(ring, n)
    enc = en.identity(ring, n)
    for _ in range(length):
        enc = en.compose(gates[rng.integers(len(gates))], enc)
    return enc


def all_single_qudit(ring):
    """Every condensed encoding on one qudit: |Sp(2, Z_d)| * d^2 of them."""
    d = ring.d
    for a, b, c, e in itertools.product(range(d), repeat=4):
        if (a * e - b * c) % d == 1:
            for mu in itertools.product(range(d), repeat=2):
                yield en.CondensedEncoding(ring, mu, ((a, b), (c, e)))
