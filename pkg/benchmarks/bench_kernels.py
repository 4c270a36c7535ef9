"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends are run on the same inputs and their outputs compared before
any timing is reported.
"""
import argparse
import time

import numpy as np

from orbilef import _kernels_py

try:
    from orbilef import _kernels
except ImportError:
    _kernels = None


def cases():
    # (name, permutation generators on npoints)
    s5 = [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]]
    n = 256
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    a6 = [[1, 2, 0, 3, 4, 5], [0, 2, 3, 4, 5, 1]]  # 3-cycle and 5-cycle generate A6
    return [("S5", s5, 5), ("A6", a6, 6), ("D512", [rot, ref], n)]


def run(mod, gens, npoints):
    out = {}
    t = time.perf_counter()
    elems, right, parent, pgen = mod.perm_closure(np.array(gens, dtype=np.int32), npoints)
    mul = mod.table_from_right(right, parent, pgen)
    out["closure+table"] = time.perf_counter() - t
    m = mul.shape[0]
    inv = np.argmin(mul, axis=1).astype(np.int32)  # identity is element 0
    # twist by conjugation with the last generator image
    x = int(right[0, -1])
    zeta = mul[mul[x], inv[x]].astype(np.int32)
    t = time.perf_counter()
    assoc = mod.is_associative(mul) if m <= 128 else None
    out["associativity"] = time.perf_counter() - t if m <= 128 else float("nan")
    t = time.perf_counter()
    sizes = mod.twisted_centralizer_sizes(mul, zeta)
    out["twisted centralizers"] = time.perf_counter() - t
    everything = np.arange(m, dtype=np.int32)
    t = time.perf_counter()
    act = mod.twisted_action_table(mul, inv, zeta, everything, everything)
    labels = mod.action_orbits(act)
    out["twisted orbits"] = time.perf_counter() - t
    return out, (mul, assoc, sizes, act, labels)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if _kernels is None:
        print("compiled kernels are not built; nothing to compare")
        return
    print(f"{'group':6} {'kernel':22} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, gens, npoints in cases():
        best = {}
        results = {}
        for label, mod in (("python", _kernels_py), ("cython", _kernels)):
            for _ in range(args.repeat):
                times, res = run(mod, gens, npoints)
                for k, v in times.items():
                    best[label, k] = min(best.get((label, k), np.inf), v)
            results[label] = res
        for a, b in zip(results["python"], results["cython"]):
            if not np.array_equal(np.asarray(a), np.asarray(b)):
                raise SystemExit(f"backends disagree on {name}")
        for k in ("closure+table", "associativity", "twisted centralizers", "twisted orbits"):
            tp, tc = best["python", k], best["cython", k]
            if not np.isfinite(tp):
                continue
            print(f"{name:6} {k:22} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
