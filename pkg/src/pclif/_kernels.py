"""Batched Pauli algebra over int64 arrays.

Rows are interlaced vectors, one Pauli per row. Each kernel exists twice: a
numba ``@njit`` loop and a vectorised numpy version. ``PCLIF_DISABLE_NUMBA=1``
(or numba being absent) selects numpy. Both must agree bit for bit with the
scalar code in ``pauli`` and ``encoding``; the tests hold them to that.
"""

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

USE_NUMBA = njit is not None and os.environ.get("PCLIF_DISABLE_NUMBA", "") not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _half(d, k):
    # (d/2) k in Z_d; zero for odd d where k is always 0
    return (d // 2) * (k % 2) if d % 2 == 0 else 0 * k


# -- numpy ------------------------------------------------------------------

def _np_form(u, v):
    return (u[:, 1::2] * v[:, 0::2] - v[:, 1::2] * u[:, 0::2]).sum(axis=1)


def np_omega_rows(u, v, mod):
    return _np_form(u, v) % mod


def _np_sgn_vec(w, d, dp):
    w = w % dp
    num = _np_form(w, w % d) % dp
    return num // d


def np_cprod_rows(d, ta, a, tb, b):
    dp = d if d % 2 else 2 * d
    k = (_np_form(a, b) % dp >= d).astype(np.int64) + _np_sgn_vec(a + b, d, dp)
    return (ta + tb + _half(d, k)) % d, (a + b) % d


def np_pow_rows(d, t, a, r):
    dp = d if d % 2 else 2 * d
    r = np.asarray(r, dtype=np.int64) % d
    rr = r.reshape(-1, 1) if r.ndim else r
    k = _np_sgn_vec(rr * a % dp, d, dp)
    return (r * t + _half(d, k)) % d, rr * a % d


def np_kappa_rows(d, psi, v):
    """K^psi(lift v) per row; psi has shape (2m, 2n)."""
    dp = d if d % 2 else 2 * d
    n2 = psi.shape[1]
    total = (v[:, 0::2] * v[:, 1::2]).sum(axis=1)
    prefix = np.zeros((v.shape[0], psi.shape[0]), dtype=np.int64)
    for j in range(n2):
        a = v[:, j : j + 1] * psi[:, j][None, :] % dp
        total = total + _np_form(prefix, a)
        prefix = (prefix + a) % dp
    total = (total + _np_form(prefix, prefix % d)) % dp
    return total // d


def np_evaluate_rows(d, mu, psi, t, v):
    k = np_kappa_rows(d, psi, v)
    phase = (t + v @ mu + _half(d, k)) % d
    return phase, (v @ psi.T) % d


# -- numba ------------------------------------------------------------------

if njit is not None:

    @njit(cache=True)
    def _nb_form_row(u, v):
        s = 0
        for i in range(0, u.shape[0], 2):
            s += u[i + 1] * v[i] - v[i + 1] * u[i]
        return s

    @njit(cache=True)
    def _nb_sgn_vec_row(w, d, dp):
        s = 0
        for i in range(0, w.shape[0], 2):
            x, z = w[i] % dp, w[i + 1] % dp
            s += z * (x % d) - (z % d) * x
        return (s % dp) // d

    @njit(cache=True)
    def _nb_half(d, k):
        if d % 2 == 0:
            return (d // 2) * (k % 2)
        return 0

    @njit(cache=True)
    def nb_omega_rows(u, v, mod):
        out = np.empty(u.shape[0], dtype=np.int64)
        for r in range(u.shape[0]):
            out[r] = _nb_form_row(u[r], v[r]) % mod
        return out

    @njit(cache=True)
    def nb_cprod_rows(d, ta, a, tb, b):
        dp = d if d % 2 else 2 * d
        rows, cols = a.shape
        t = np.empty(rows, dtype=np.int64)
        out = np.empty((rows, cols), dtype=np.int64)
        w = np.empty(cols, dtype=np.int64)
        for r in range(rows):
            k = 1 if _nb_form_row(a[r], b[r]) % dp >= d else 0
            for i in range(cols):
                w[i] = a[r, i] + b[r, i]
                out[r, i] = w[i] % d
            k += _nb_sgn_vec_row(w, d, dp)
            t[r] = (ta[r] + tb[r] + _nb_half(d, k)) % d
        return t, out

    @njit(cache=True)
    def nb_pow_rows(d, t, a, r):
        dp = d if d % 2 else 2 * d
        rows, cols = a.shape
        tout = np.empty(rows, dtype=np.int64)
        out = np.empty((rows, cols), dtype=np.int64)
        w = np.empty(cols, dtype=np.int64)
        for q in range(rows):
            rr = r[q] % d
            for i in range(cols):
                w[i] = rr * a[q, i] % dp
                out[q, i] = w[i] % d
            tout[q] = (rr * t[q] + _nb_half(d, _nb_sgn_vec_row(w, d, dp))) % d
        return tout, out

    @njit(cache=True)
    def nb_kappa_rows(d, psi, v):
        dp = d if d % 2 else 2 * d
        m2, n2 = psi.shape
        rows = v.shape[0]
        out = np.empty(rows, dtype=np.int64)
        prefix = np.empty(m2, dtype=np.int64)
        for r in range(rows):
            total = 0
            for i in range(0, n2, 2):
                total += v[r, i] * v[r, i + 1]
            prefix[:] = 0
            for j in range(n2):
                c = v[r, j]
                if c == 0:
                    continue
                s = 0
                for i in range(0, m2, 2):
                    ax = c * psi[i, j] % dp
                    az = c * psi[i + 1, j] % dp
                    s += prefix[i + 1] * ax - az * prefix[i]
                    prefix[i] = (prefix[i] + ax) % dp
                    prefix[i + 1] = (prefix[i + 1] + az) % dp
                total += s
            total += _nb_sgn_vec_row(prefix, d, dp) * d
            out[r] = (total % dp) // d
        return out

    @njit(cache=True)
    def nb_evaluate_rows(d, mu, psi, t, v):
        m2, n2 = psi.shape
        rows = v.shape[0]
        k = nb_kappa_rows(d, psi, v)
        tout = np.empty(rows, dtype=np.int64)
        out = np.zeros((rows, m2), dtype=np.int64)
        for r in range(rows):
            s = t[r]
            for j in range(n2):
                s += mu[j] * v[r, j]
                for i in range(m2):
                    out[r, i] += psi[i, j] * v[r, j]
            for i in range(m2):
                out[r, i] %= d
            tout[r] = (s + _nb_half(d, k[r])) % d
        return tout, out


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def omega_rows(u, v, mod):
    u, v = _i64(u), _i64(v)
    return nb_omega_rows(u, v, mod) if USE_NUMBA else np_omega_rows(u, v, mod)


def cprod_rows(d, ta, a, tb, b):
    args = (d, _i64(ta), _i64(a), _i64(tb), _i64(b))
    return nb_cprod_rows(*args) if USE_NUMBA else np_cprod_rows(*args)


def pow_rows(d, t, a, r):
    t, a = _i64(t), _i64(a)
    r = np.broadcast_to(_i64(r), t.shape).copy() if np.ndim(r) == 0 else _i64(r)
    return nb_pow_rows(d, t, a, r) if USE_NUMBA else np_pow_rows(d, t, a, r)


def kappa_rows(d, psi, v):
    psi, v = _i64(psi), _i64(v)
    return nb_kappa_rows(d, psi, v) if USE_NUMBA else np_kappa_rows(d, psi, v)


def evaluate_rows(d, mu, psi, t, v):
    args = (d, _i64(mu), _i64(psi), _i64(t), _i64(v))
    return nb_evaluate_rows(*args) if USE_NUMBA else np_evaluate_rows(*args)


def all_rows(d, n):
    """Every vector of Z_d^{2n} as rows, lexicographic."""
    grids = np.indices((d,) * (2 * n)).reshape(2 * n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)
