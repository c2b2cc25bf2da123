"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --d 4 --n 4 --repeat 5

Both backends are importable side by side, so one process measures both; the
first numba call per signature is reported separately as compile time.
The env flag PCLIF_DISABLE_NUMBA only changes which one the dispatchers pick.
"""

import argparse
import time

import numpy as np

from pclif import _kernels as K
from pclif import oracle, encoding as en
from pclif.ring import Ring


def random_encoding(ring, n, rng, length=3 * 8):
    lib = oracle.gate_library(ring)
    names = ["F", "P", "SUM", "CZ", "SWAP"] if n > 1 else ["F", "P"]
    enc = en.identity(ring, n)
    for _ in range(length):
        g = names[rng.integers(len(names))]
        arity, _, genc = lib[g]
        wires = rng.choice(n, size=arity, replace=False)
        enc = en.compose(en.embed(genc, wires, n), enc)
    return enc


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    d, n = args.d, args.n
    rng = np.random.default_rng(args.seed)
    rows = K.all_rows(d, n)
    other = rng.integers(0, d, size=rows.shape).astype(np.int64)
    t = rng.integers(0, d, size=len(rows)).astype(np.int64)
    enc = random_encoding(Ring(d), n, rng)
    mu, psi = np.ascontiguousarray(enc.mu_array), np.ascontiguousarray(enc.matrix)

    cases = {
        "omega": lambda f: f["omega_rows"](rows, other, d),
        "cprod": lambda f: f["cprod_rows"](d, t, rows, t, other),
        "pow": lambda f: f["pow_rows"](d, t, rows, t),
        "kappa": lambda f: f["kappa_rows"](d, psi, rows),
        "evaluate": lambda f: f["evaluate_rows"](d, mu, psi, t, rows),
    }
    impls = {"numpy": {k: getattr(K, "np_" + k) for k in
                       ("omega_rows", "cprod_rows", "pow_rows", "kappa_rows", "evaluate_rows")}}
    if K.njit is not None:
        impls["numba"] = {k: getattr(K, "nb_" + k) for k in impls["numpy"]}

    print(f"d={d} n={n} rows={len(rows)} dispatch backend={K.BACKEND}")
    print(f"{'kernel':<10}{'numpy s':>12}{'numba s':>12}{'compile s':>12}{'speedup':>10}")
    for name, call in cases.items():
        out = {}
        compile_s = float("nan")
        if "numba" in impls:
            t0 = time.perf_counter()
            call(impls["numba"])
            compile_s = time.perf_counter() - t0
        for backend, f in impls.items():
            out[backend] = best_of(lambda: call(f), args.repeat)
        # the two paths must agree before their timings mean anything
        if "numba" in impls:
            a, b = call(impls["numpy"]), call(impls["numba"])
            a, b = (a if isinstance(a, tuple) else (a,)), (b if isinstance(b, tuple) else (b,))
            assert all(np.array_equal(x, y) for x, y in zip(a, b)), name
        nb = out.get("numba", float("nan"))
        print(f"{name:<10}{out['numpy']:>12.4f}{nb:>12.4f}{compile_s:>12.3f}{out['numpy'] / nb:>10.1f}x")


if __name__ == "__main__":
    main()
