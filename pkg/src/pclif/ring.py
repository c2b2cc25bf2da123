"""Modular arithmetic over Z_d and Z_d' (d' = d for odd d, 2d for even d)."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Ring:
    """Context carrying the qudit dimension ``d``.

    Every phase computation in the package goes through one of these.
    Representatives are always the least non-negative residues.
    """

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.d!r}")

    @property
    def d_prime(self) -> int:
        return self.d if self.d % 2 else 2 * self.d

    @property
    def even(self) -> bool:
        return self.d % 2 == 0

    def mod(self, r: int) -> int:
        return r % self.d

    def mod_prime(self, r: int) -> int:
        return r % self.d_prime

    def lift(self, r: int) -> int:
        """Inclusion Z_d -> Z_d' on representatives (not a homomorphism)."""
        return r % self.d

    def reduce(self, r: int) -> int:
        """Reduction Z_d' -> Z_d."""
        return r % self.d

    def sgn(self, r: int) -> int:
        """1 when the Z_d' representative lies in [d, d'), else 0."""
        r %= self.d_prime
        return 1 if r >= self.d else 0

    def half(self, k: int) -> int:
        """The Z_d element (d/2)*k for k in Z_{d'/d}.

        For odd d the group Z_{d'/d} is trivial, so k must be 0.
        """
        if self.even:
            return (self.d // 2) * (k % 2) % self.d
        assert k == 0, f"nonzero correction {k} at odd d={self.d}"
        return 0

    def __repr__(self):
        return f"Ring({self.d})"
