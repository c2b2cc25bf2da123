"""Dense-matrix ground truth for Paulis and Cliffords at small d and n.

Nothing here is fast; it exists to arbitrate phase conventions. Qudit 1 is the
leftmost Kronecker factor, matching the interlaced vector layout.
"""

import cmath
import functools
import itertools

import numpy as np

from .ring import Ring
from .pauli import PauliElement
from . import phase_space as ps

DECODE_TOL = 1e-8
UNITARY_TOL = 1e-9


class DecodeError(ValueError):
    """The matrix is not of the form zeta^t Delta_v."""


class GateError(KeyError):
    pass


@functools.lru_cache(maxsize=None)
def zeta(d: int) -> complex:
    return cmath.exp(2j * cmath.pi / d)


@functools.lru_cache(maxsize=None)
def tau(d: int) -> complex:
    if d % 2 == 0:
        t = cmath.exp(1j * cmath.pi / d)
    else:
        t = cmath.exp(2j * cmath.pi * ((d + 1) // 2) / d)
    assert abs(t * t - zeta(d)) < 1e-12, "tau^2 != zeta"
    return t


def dense_x(ring: Ring) -> np.ndarray:
    d = ring.d
    m = np.zeros((d, d), dtype=complex)
    for r in range(d):
        m[(r + 1) % d, r] = 1
    return m


def dense_z(ring: Ring) -> np.ndarray:
    return np.diag([zeta(ring.d) ** r for r in range(ring.d)])


def dense_delta(ring: Ring, v) -> np.ndarray:
    """tau^{z.x} (x) X^{x_i} Z^{z_i} for v in Z_d'^{2n}. Read-only, cached."""
    return _dense_delta(ring, tuple(e % ring.d_prime for e in v))


@functools.lru_cache(maxsize=1 << 16)
def _dense_delta(ring: Ring, v) -> np.ndarray:
    X, Z = dense_x(ring), dense_z(ring)
    out = np.eye(1, dtype=complex)
    zx = 0
    for i in range(0, len(v), 2):
        x, z = v[i], v[i + 1]
        zx += x * z
        site = np.linalg.matrix_power(X, x % ring.d) @ np.linalg.matrix_power(Z, z % ring.d)
        out = np.kron(out, site)
    out = tau(ring.d) ** (zx % ring.d_prime) * out
    out.setflags(write=False)
    return out


def dense_pauli(p: PauliElement) -> np.ndarray:
    ring = p.ring
    return zeta(ring.d) ** p.phase * dense_delta(ring, ps.lift_vec(ring, p.vec))


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0])) < tol


def decode_pauli(ring: Ring, m: np.ndarray, n: int | None = None) -> PauliElement:
    """Invert dense_pauli on its image."""
    d = ring.d
    dim = m.shape[0]
    if n is None:
        n = round(np.log(dim) / np.log(d))
    if d**n != dim:
        raise DecodeError(f"matrix of size {dim} is not {d}^n")
    col = m[:, 0]
    nz = np.flatnonzero(np.abs(col) > DECODE_TOL)
    if len(nz) != 1:
        raise DecodeError("column |0...0> is not a basis vector up to scale")
    digits = np.unravel_index(nz[0], (d,) * n)
    x = [int(k) for k in digits]
    shift_back = dense_delta(ring, [(-x[i // 2]) % d if i % 2 == 0 else 0 for i in range(2 * n)])
    diag = shift_back @ m
    if np.abs(diag - np.diag(np.diag(diag))).max() > DECODE_TOL:
        raise DecodeError("X^-x M is not diagonal")
    dg = np.diag(diag)
    z = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        ratio = dg[np.ravel_multi_index(e, (d,) * n)] / dg[0]
        k = int(round(cmath.phase(ratio) / (2 * cmath.pi / d))) % d
        z.append(k)
    v = tuple(itertools.chain.from_iterable(zip(x, z)))
    base = dense_delta(ring, ps.lift_vec(ring, v))
    for t in range(d):
        if np.abs(zeta(d) ** t * base - m).max() < DECODE_TOL:
            return PauliElement(ring, t, v)
    raise DecodeError("no zeta power matches; matrix lies outside Q_{d,n}")


def dense_cprod(a: PauliElement, b: PauliElement) -> np.ndarray:
    """zeta^(r+s) tau^(-w) Delta_u Delta_v with w = omega(u, v) taken in [0, d)."""
    ring = a.ring
    w = ps.omega(ring, a.vec, b.vec)
    return (zeta(ring.d) ** (a.phase + b.phase) * tau(ring.d) ** (-w)
            * dense_delta(ring, a.vec) @ dense_delta(ring, b.vec))


def conjugate(u: np.ndarray, p: PauliElement) -> PauliElement:
    m = u @ dense_pauli(p) @ u.conj().T
    return decode_pauli(p.ring, m, p.rank)


# -- gate library -----------------------------------------------------------

def _fourier(d):
    w = zeta(d)
    return np.array([[w ** (j * k) for j in range(d)] for k in range(d)]) / np.sqrt(d)


def _phase_gate(d):
    t = tau(d)
    return np.diag([t ** ((j * j) % (2 * d)) for j in range(d)])


def _sum_gate(d):
    m = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            m[a * d + (a + b) % d, a * d + b] = 1
    return m


def _cz_gate(d):
    w = zeta(d)
    return np.diag([w ** (a * b) for a in range(d) for b in range(d)])


def _swap_gate(d):
    m = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            m[b * d + a, a * d + b] = 1
    return m


# Expected encodings: (mu, images) with images listed as basis columns in
# interlaced order b^x_1, b^z_1, ...
def _gate_table(d):
    m1 = d - 1
    table = {
        "F": (1, _fourier(d), (0, 0), ((0, 1), (m1, 0))),
        "P": (1, _phase_gate(d), (0, 0), ((1, 1), (0, 1))),
        "SHIFT": (1, None, (0, m1), ((1, 0), (0, 1))),
        "CLOCK": (1, None, (1, 0), ((1, 0), (0, 1))),
        "SUM": (2, _sum_gate(d), (0, 0, 0, 0),
                ((1, 0, 1, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, m1, 0, 1))),
        "CZ": (2, _cz_gate(d), (0, 0, 0, 0),
               ((1, 0, 0, 1), (0, 1, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1))),
        "SWAP": (2, _swap_gate(d), (0, 0, 0, 0),
                 ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0))),
    }
    table["SHIFT"] = (1, dense_x(Ring(d)), *table["SHIFT"][2:])
    table["CLOCK"] = (1, dense_z(Ring(d)), *table["CLOCK"][2:])
    table["X"], table["Z"] = table["SHIFT"], table["CLOCK"]
    if d == 2:
        table["H"] = table["F"]
        table["S"] = table["P"]
        table["CNOT"] = table["SUM"]
    return table


def gate_names(ring: Ring) -> list:
    return sorted(_gate_table(ring.d))


def gate_library(ring: Ring) -> dict:
    """name -> (arity, unitary, expected CondensedEncoding)."""
    from .encoding import CondensedEncoding

    out = {}
    for name, (arity, u, mu, cols) in _gate_table(ring.d).items():
        enc = CondensedEncoding.from_columns(ring, mu, cols)
        out[name] = (arity, u, enc)
    return out


def gate(ring: Ring, name: str):
    lib = gate_library(ring)
    try:
        return lib[name.upper()]
    except KeyError:
        raise GateError(f"no gate {name!r} at d={ring.d}; have {', '.join(sorted(lib))}") from None


def embed(ring: Ring, u: np.ndarray, wires, n: int) -> np.ndarray:
    """Lift a k-qudit unitary acting on ``wires`` (0-based) to n qudits."""
    d = ring.d
    wires = list(wires)
    k = len(wires)
    if len(set(wires)) != k or any(not 0 <= w < n for w in wires):
        raise ValueError(f"bad wire indices {wires} for {n} qudits")
    if u.shape != (d**k, d**k):
        raise ValueError(f"gate of size {u.shape[0]} does not act on {k} qudits")
    full = np.eye(d**n, dtype=complex).reshape((d,) * n + (d**n,))
    g = u.reshape((d,) * (2 * k))
    # contract gate input axes with the chosen wire axes
    out = np.tensordot(g, full, axes=(list(range(k, 2 * k)), wires))
    out = np.moveaxis(out, list(range(k)), wires)
    return out.reshape(d**n, d**n)


def build_circuit(ring: Ring, gates, n: int) -> np.ndarray:
    """gates: sequence of (name, wires); the first gate is applied first."""
    u = np.eye(ring.d**n, dtype=complex)
    for name, wires in gates:
        _, g, _ = gate(ring, name)
        u = embed(ring, g, wires, n) @ u
    return u


def parse_circuit(text: str):
    """``"X@0; CNOT@0,3"`` -> [("X", (0,)), ("CNOT", (0, 3))]."""
    out = []
    for item in text.replace("\n", ";").split(";"):
        item = item.strip()
        if not item:
            continue
        name, _, wires = item.partition("@")
        if not wires:
            raise ValueError(f"gate {item!r} has no wires")
        out.append((name.strip(), tuple(int(w) for w in wires.split(","))))
    return out


def verify_encoding(enc, u: np.ndarray, elements=None):
    """Compare evaluate(enc, p) with conjugate(u, p); returns the mismatches."""
    from .encoding import evaluate
    from .pauli import all_elements

    ring = enc.ring
    if elements is None:
        elements = all_elements(ring, enc.n)
    bad = []
    for p in elements:
        want = conjugate(u, p)
        got = evaluate(enc, p)
        if got != want:
            bad.append((p, got, want))
    return bad
