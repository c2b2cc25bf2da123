"""Vectors in Z_d^{2n} / Z_d'^{2n}, symplectic forms, and the vector sign.

Layout is interlaced everywhere: ``(x1, z1, x2, z2, ..., xn, zn)``.
Vectors are plain tuples of ints.
"""

from .ring import Ring


class DimensionError(ValueError):
    pass


def _check_pair(u, v):
    if len(u) != len(v):
        raise DimensionError(f"rank mismatch: {len(u)} vs {len(v)} entries")
    if len(u) % 2:
        raise DimensionError(f"odd vector length {len(u)}")


def _form(u, v):
    total = 0
    for i in range(0, len(u), 2):
        total += u[i + 1] * v[i] - v[i + 1] * u[i]
    return total


def omega(ring: Ring, u, v) -> int:
    """Symplectic form sum_i (z_u,i x_v,i - z_v,i x_u,i) mod d."""
    _check_pair(u, v)
    return _form(u, v) % ring.d


def omega_prime(ring: Ring, u, v) -> int:
    """The same form computed mod d'."""
    _check_pair(u, v)
    return _form(u, v) % ring.d_prime


def vec(ring: Ring, entries) -> tuple:
    return tuple(int(e) % ring.d for e in entries)


def lift_vec(ring: Ring, v) -> tuple:
    return tuple(ring.lift(e) for e in v)


def reduce_vec(ring: Ring, v) -> tuple:
    return tuple(ring.reduce(e) for e in v)


def add(ring: Ring, u, v) -> tuple:
    _check_pair(u, v)
    return tuple((a + b) % ring.d for a, b in zip(u, v))


def add_prime(ring: Ring, u, v) -> tuple:
    _check_pair(u, v)
    return tuple((a + b) % ring.d_prime for a, b in zip(u, v))


def scale(ring: Ring, r: int, v) -> tuple:
    return tuple(r * e % ring.d for e in v)


def sgn_vec(ring: Ring, v) -> int:
    """(1/d) * omega'(v, lift(reduce(v))) for v in Z_d'^{2n}.

    The division must be exact; anything else means a formula bug upstream.
    """
    v = tuple(e % ring.d_prime for e in v)
    w = omega_prime(ring, v, lift_vec(ring, reduce_vec(ring, v)))
    assert w % ring.d == 0, f"omega' value {w} not divisible by d={ring.d}"
    return w // ring.d


def basis(ring: Ring, n: int) -> list:
    """Unit vectors b^x_1, b^z_1, ..., b^x_n, b^z_n."""
    if n < 1:
        raise DimensionError("rank must be at least 1")
    out = []
    for j in range(2 * n):
        e = [0] * (2 * n)
        e[j] = 1
        out.append(tuple(e))
    return out


def render(v) -> str:
    return "[" + ",".join(str(e) for e in v) + "]"
