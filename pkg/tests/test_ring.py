import pytest
from hypothesis import given, strategies as st

from pclif.ring import Ring


def test_d_prime():
    assert [Ring(d).d_prime for d in range(2, 8)] == [4, 3, 8, 5, 12, 7]


@pytest.mark.parametrize("bad", [0, 1, -3, 2.0])
def test_rejects_bad_dimension(bad):
    with pytest.raises(ValueError):
        Ring(bad)


def test_sgn_upper_half():
    r = Ring(2)
    assert [r.sgn(t) for t in range(4)] == [0, 0, 1, 1]
    assert all(Ring(3).sgn(t) == 0 for t in range(3))


def test_half():
    assert [Ring(4).half(k) for k in range(3)] == [0, 2, 0]
    assert Ring(5).half(0) == 0
    with pytest.raises(AssertionError):
        Ring(5).half(1)


@given(st.integers(2, 12), st.integers(-50, 50))
def test_reduce_lift_roundtrip(d, r):
    ring = Ring(d)
    assert ring.reduce(ring.lift(r)) == r % d
    assert 0 <= ring.lift(r) < d


@given(st.integers(2, 12), st.integers(0, 30), st.integers(0, 30))
def test_lift_not_homomorphic_only_by_multiples_of_d(d, a, b):
    ring = Ring(d)
    gap = (ring.lift(a) + ring.lift(b) - ring.lift(a + b)) % ring.d_prime
    assert gap in (0, d % ring.d_prime)
