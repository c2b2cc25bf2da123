"""Condensed Paulis zeta^t Delta_v and the condensed product."""

from dataclasses import dataclass
import itertools

from .ring import Ring
from . import phase_space as ps

NAMES = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BY_VEC = {v: k for k, v in NAMES.items()}


@dataclass(frozen=True)
class PauliElement:
    """The pair (t, v) denoting zeta^t Delta_{lift v}.

    ``phase`` lives in Z_d and ``vec`` in Z_d^{2n} (interlaced).
    """

    ring: Ring
    phase: int
    vec: tuple

    def __post_init__(self):
        d = self.ring.d
        object.__setattr__(self, "phase", int(self.phase) % d)
        object.__setattr__(self, "vec", tuple(int(e) % d for e in self.vec))
        if len(self.vec) % 2 or not self.vec:
            raise ps.DimensionError(f"bad vector length {len(self.vec)}")

    @property
    def rank(self) -> int:
        return len(self.vec) // 2

    def __str__(self):
        return render(self)


def identity(ring: Ring, n: int) -> PauliElement:
    return PauliElement(ring, 0, (0,) * (2 * n))


def named(ring: Ring, name: str) -> PauliElement:
    try:
        return PauliElement(ring, 0, NAMES[name])
    except KeyError:
        raise KeyError(f"unknown Pauli name {name!r}") from None


def _same(a, b):
    if a.ring != b.ring:
        raise ps.DimensionError(f"dimension mismatch: {a.ring} vs {b.ring}")
    if len(a.vec) != len(b.vec):
        raise ps.DimensionError(f"rank mismatch: {a.rank} vs {b.rank}")


def cprod_correction(ring: Ring, va, vb) -> int:
    """k = sgn(omega'(lift va, lift vb)) + sgnVec(lift va + lift vb)."""
    la, lb = ps.lift_vec(ring, va), ps.lift_vec(ring, vb)
    return ring.sgn(ps.omega_prime(ring, la, lb)) + ps.sgn_vec(ring, ps.add_prime(ring, la, lb))


def cprod(a: PauliElement, b: PauliElement) -> PauliElement:
    _same(a, b)
    ring = a.ring
    k = cprod_correction(ring, a.vec, b.vec)
    return PauliElement(ring, a.phase + b.phase + ring.half(k), ps.add(ring, a.vec, b.vec))


def pow_correction(ring: Ring, v, r: int) -> int:
    r = ring.lift(r)
    return ps.sgn_vec(ring, tuple(r * e % ring.d_prime for e in ps.lift_vec(ring, v)))


def pow(a: PauliElement, r: int) -> PauliElement:
    ring = a.ring
    r %= ring.d
    k = pow_correction(ring, a.vec, r)
    return PauliElement(ring, r * a.phase + ring.half(k), ps.scale(ring, r, a.vec))


def add_phase(r: int, a: PauliElement) -> PauliElement:
    return PauliElement(a.ring, a.phase + r, a.vec)


def inject(i: int, a: PauliElement, other_rank: int) -> PauliElement:
    """Embed into a two-fold product: i=1 pads on the right, i=2 on the left."""
    pad = (0,) * (2 * other_rank)
    if i == 1:
        return PauliElement(a.ring, a.phase, a.vec + pad)
    if i == 2:
        return PauliElement(a.ring, a.phase, pad + a.vec)
    raise ValueError(f"injection side must be 1 or 2, got {i}")


def tensor(a: PauliElement, b: PauliElement) -> PauliElement:
    """a (x) b, i.e. inject(1, a) * inject(2, b); no phase correction arises."""
    return cprod(inject(1, a, b.rank), inject(2, b, a.rank))


def all_elements(ring: Ring, n: int):
    """Every element of Q_{d,n}, phase-major."""
    for t in range(ring.d):
        for v in itertools.product(range(ring.d), repeat=2 * n):
            yield PauliElement(ring, t, v)


def all_vectors(ring: Ring, n: int):
    return itertools.product(range(ring.d), repeat=2 * n)


def site_name(pair) -> str:
    pair = tuple(pair)
    return _BY_VEC.get(pair, ps.render(pair))


def render_phase(t: int) -> str:
    return f"<{t}> " if t else ""


def render(a: PauliElement) -> str:
    """``<t> [..]`` with the phase omitted at 0 and sugar names at n=1."""
    if a.rank == 1:
        body = site_name(a.vec)
    else:
        body = ps.render(a.vec)
    return render_phase(a.phase) + body
