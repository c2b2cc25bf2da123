"""Condensed encodings (mu, psi) of projective Cliffords.

``psi`` is stored column-wise: column j is psi(b_j) in interlaced layout.
``mu`` holds mu(b_j) and is only ever applied by linear extension.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .ring import Ring
from .pauli import PauliElement
from . import phase_space as ps
from . import pauli as pl


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class CondensedEncoding:
    ring: Ring
    mu: tuple
    psi: tuple  # columns

    def __post_init__(self):
        d = self.ring.d
        mu = tuple(int(m) % d for m in self.mu)
        psi = tuple(tuple(int(e) % d for e in col) for col in self.psi)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "psi", psi)
        if len(mu) != len(psi) or len(psi) % 2 or not psi:
            raise EncodingError(f"need 2n columns and 2n mu entries, got {len(psi)}/{len(mu)}")
        rows = {len(c) for c in psi}
        if len(rows) != 1 or rows.pop() % 2:
            raise EncodingError("psi columns must share an even length")

    @classmethod
    def from_columns(cls, ring, mu, cols):
        return cls(ring, tuple(mu), tuple(tuple(c) for c in cols))

    @property
    def n(self) -> int:
        """Domain rank."""
        return len(self.psi) // 2

    @property
    def m(self) -> int:
        """Codomain rank."""
        return len(self.psi[0]) // 2

    @cached_property
    def matrix(self) -> np.ndarray:
        """psi as a (2m, 2n) int64 array."""
        a = np.array(self.psi, dtype=np.int64).T
        a.setflags(write=False)
        return a

    @cached_property
    def mu_array(self) -> np.ndarray:
        a = np.array(self.mu, dtype=np.int64)
        a.setflags(write=False)
        return a

    def apply_psi(self, v) -> tuple:
        """psi(v) for v in Z_d^{2n} (linear; v may be any integer vector)."""
        d = self.ring.d
        out = [0] * (2 * self.m)
        for c, col in zip(v, self.psi):
            if c:
                for i, e in enumerate(col):
                    out[i] += c * e
        return tuple(e % d for e in out)

    def apply_mu(self, v) -> int:
        return sum(a * b for a, b in zip(self.mu, v)) % self.ring.d


def identity(ring: Ring, n: int) -> CondensedEncoding:
    return CondensedEncoding(ring, (0,) * (2 * n), tuple(ps.basis(ring, n)))


def is_symplectic(enc: CondensedEncoding) -> bool:
    """omega(psi b_i, psi b_j) = omega(b_i, b_j) over basis pairs i < j."""
    ring = enc.ring
    if enc.m < enc.n:
        return False
    b = ps.basis(ring, enc.n)
    cols = enc.psi
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            if ps.omega(ring, cols[i], cols[j]) != ps.omega(ring, b[i], b[j]):
                return False
    return True


def symplectic_violations(enc: CondensedEncoding):
    """Basis pairs (i, j, got, want) where psi fails to respect omega."""
    ring = enc.ring
    b = ps.basis(ring, enc.n)
    out = []
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            got = ps.omega(ring, enc.psi[i], enc.psi[j])
            want = ps.omega(ring, b[i], b[j])
            if got != want:
                out.append((i, j, got, want))
    return out


def big_k(enc: CondensedEncoding, v) -> int:
    """The correction K^psi(v) in Z_{d'/d} for v in Z_d'^{2n}.

    Write v = sum_j c_j b_j with c_j in Z_d' and a_j = c_j * lift(psi b_j).
    Expanding U Delta_v U^dag as the ordered product of Delta_{a_j} gives

        d * K = z.x + sum_{j<l} omega'(a_j, a_l) + omega'(W, lift(reduce W))

    with W = sum_j a_j, everything in Z_d'. The same-site pairs of the middle
    sum are the x_i z_i omega'(psi b^x_i, psi b^z_i) terms; the cross-site
    pairs are usually but not always zero (CNOT on X(x)Z needs them).
    """
    ring = enc.ring
    dp = ring.d_prime
    v = [e % dp for e in v]
    if len(v) != 2 * enc.n:
        raise ps.DimensionError(f"vector rank {len(v) // 2} vs encoding rank {enc.n}")
    size = 2 * enc.m
    total = sum(v[i] * v[i + 1] for i in range(0, len(v), 2))
    prefix = [0] * size
    for c, col in zip(v, enc.psi):
        if not c:
            continue
        a = [c * e % dp for e in col]
        total += ps.omega_prime(ring, prefix, a)
        prefix = [(p + q) % dp for p, q in zip(prefix, a)]
    w = tuple(prefix)
    total += ps.omega_prime(ring, w, ps.lift_vec(ring, ps.reduce_vec(ring, w)))
    total %= dp
    assert total % ring.d == 0, f"K numerator {total} not divisible by d={ring.d}"
    return total // ring.d


def kappa(enc: CondensedEncoding, v) -> int:
    return big_k(enc, ps.lift_vec(enc.ring, v))


def evaluate(enc: CondensedEncoding, p: PauliElement) -> PauliElement:
    if p.ring != enc.ring or p.rank != enc.n:
        raise ps.DimensionError(f"cannot apply rank-{enc.n} encoding to rank-{p.rank} Pauli")
    ring = enc.ring
    phase = p.phase + enc.apply_mu(p.vec) + ring.half(kappa(enc, p.vec))
    return PauliElement(ring, phase, enc.apply_psi(p.vec))


def compose(e2: CondensedEncoding, e1: CondensedEncoding) -> CondensedEncoding:
    """The encoding of e2 after e1."""
    if e1.m != e2.n or e1.ring != e2.ring:
        raise ps.DimensionError(f"cannot compose rank {e1.m} output with rank {e2.n} input")
    ring = e1.ring
    mu, cols = [], []
    for j, col in enumerate(e1.psi):
        mu.append(e1.mu[j] + e2.apply_mu(col) + ring.half(kappa(e2, col)))
        cols.append(e2.apply_psi(col))
    return CondensedEncoding(ring, tuple(mu), tuple(cols))


def inverse_psi(enc: CondensedEncoding, v) -> tuple:
    """psi^-1(v) through the omega-adjoint, interlaced.

    x_i = omega(psi(b^z_i), v) and z_i = omega(v, psi(b^x_i)).
    """
    ring = enc.ring
    out = []
    for i in range(enc.n):
        bx, bz = enc.psi[2 * i], enc.psi[2 * i + 1]
        out.append(ps.omega(ring, bz, v))
        out.append(ps.omega(ring, v, bx))
    return tuple(out)


def invert(enc: CondensedEncoding) -> CondensedEncoding:
    if enc.n != enc.m:
        raise EncodingError(f"cannot invert a rank {enc.n} -> {enc.m} encoding")
    ring = enc.ring
    cols = tuple(inverse_psi(enc, b) for b in ps.basis(ring, enc.n))
    inv = CondensedEncoding(ring, (0,) * len(cols), cols)
    for j, b in enumerate(ps.basis(ring, enc.n)):
        assert enc.apply_psi(cols[j]) == b, "psi is not invertible by its omega-adjoint"
    mu = tuple(-enc.apply_mu(c) + ring.half(kappa(enc, c)) for c in cols)
    return CondensedEncoding(ring, mu, cols)


def scalar_compose(p: PauliElement, r: int) -> PauliElement:
    """(t, v) o r, the composition of a Pauli with a scalar."""
    return pl.pow(p, r)


def embed(enc: CondensedEncoding, sites, n: int) -> CondensedEncoding:
    """Place an encoding on the given 0-based qudit sites of an n-qudit register."""
    ring = enc.ring
    sites = list(sites)
    if len(sites) != enc.n or enc.n != enc.m:
        raise EncodingError("embedding needs a square encoding and one site per qudit")
    mu = [0] * (2 * n)
    cols = [list(b) for b in ps.basis(ring, n)]
    for k, s in enumerate(sites):
        for half in (0, 1):
            j = 2 * k + half
            col = [0] * (2 * n)
            for kk, ss in enumerate(sites):
                col[2 * ss] = enc.psi[j][2 * kk]
                col[2 * ss + 1] = enc.psi[j][2 * kk + 1]
            cols[2 * s + half] = col
            mu[2 * s + half] = enc.mu[j]
    return CondensedEncoding(ring, tuple(mu), tuple(tuple(c) for c in cols))


def tensor(e1: CondensedEncoding, e2: CondensedEncoding) -> CondensedEncoding:
    """e1 (x) e2 acting on the concatenated register."""
    ring = e1.ring
    pad1, pad2 = (0,) * (2 * e2.m), (0,) * (2 * e1.m)
    cols = tuple(c + pad1 for c in e1.psi) + tuple(pad2 + c for c in e2.psi)
    return CondensedEncoding(ring, e1.mu + e2.mu, cols)


# -- frames -----------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Row i holds the images of X_i and Z_i."""

    rows: tuple

    @property
    def ring(self):
        return self.rows[0][0].ring

    def to_json(self):
        return [[[px.phase, list(px.vec)], [pz.phase, list(pz.vec)]] for px, pz in self.rows]

    @classmethod
    def from_json(cls, ring, data):
        return cls(tuple(
            (PauliElement(ring, px[0], px[1]), PauliElement(ring, pz[0], pz[1])) for px, pz in data
        ))

    def render(self) -> str:
        lines = []
        for i, (px, pz) in enumerate(self.rows, 1):
            lines.append(f"X{i} -> {_frame_cell(px)} ; Z{i} -> {_frame_cell(pz)}")
        return "\n".join(lines)


def _frame_cell(p):
    return f"<{p.phase}>{ps.render(p.vec)}"


def to_frame(enc: CondensedEncoding) -> Frame:
    ring = enc.ring
    rows = []
    b = ps.basis(ring, enc.n)
    for i in range(enc.n):
        px = evaluate(enc, PauliElement(ring, 0, b[2 * i]))
        pz = evaluate(enc, PauliElement(ring, 0, b[2 * i + 1]))
        rows.append((px, pz))
    return Frame(tuple(rows))


def from_frame(frame: Frame) -> CondensedEncoding:
    mu, cols = [], []
    for px, pz in frame.rows:
        mu += [px.phase, pz.phase]
        cols += [px.vec, pz.vec]
    return CondensedEncoding(frame.ring, tuple(mu), tuple(cols))


def frame_violations(frame: Frame):
    """List of human-readable reasons the frame is malformed."""
    rows = frame.rows
    if not rows:
        return ["empty frame"]
    ring = rows[0][0].ring
    out = []
    for i, (px, pz) in enumerate(rows):
        w = ps.omega(ring, pz.vec, px.vec)
        if w != 1:
            out.append(f"row {i + 1}: omega(Z, X) = {w}, need 1")
    for i in range(len(rows)):
        for j in range(len(rows)):
            if i == j:
                continue
            for a, an in zip(rows[i], "XZ"):
                for b, bn in zip(rows[j], "XZ"):
                    if i > j and an == bn:
                        continue
                    w = ps.omega(ring, a.vec, b.vec)
                    if w:
                        out.append(f"omega({an}{i + 1}, {bn}{j + 1}) = {w}, need 0")
    return out


def check_frame(frame: Frame) -> bool:
    return not frame_violations(frame)
