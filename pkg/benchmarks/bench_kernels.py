"""Time the numba kernels against their numpy/pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

The first numba call of each kernel includes compilation (or a cache load)
and is reported separately as "warm-up".
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from surfcol import _accel
from surfcol.catalog import bundled_tribrackets, load_catalog
from surfcol.tribracket import dehn_tribracket, small_groups


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def cases():
    tribs = bundled_tribrackets()
    sys = {e.name: e.system for e in load_catalog()}["10_2"]
    tri = np.array(sys.tri_eqs, dtype=np.int64).reshape(-1, 4)
    eqs = np.zeros((0, 2), dtype=np.int64)
    for name in ("X3", "X4", "Dehn(Z5)"):
        t = tribs[name]
        args = (t.tensor, t.size, sys.var_count, tri, eqs)
        yield (
            f"brute force 10_2 / {name} ({t.size ** sys.var_count} assignments)",
            lambda a=args: _accel.brute_force_numba(*a),
            lambda a=args: _accel.brute_force_numpy(*a),
        )
    for g in small_groups(8)[-2:]:
        t = np.ascontiguousarray(dehn_tribracket(g).tensor)
        yield (
            f"axiom 2 check / Dehn({g.name}) (n^4 = {t.shape[0] ** 4})",
            lambda t=t: _accel.axiom2_failures_numba(t),
            lambda t=t: _accel.axiom2_failures_numpy(t),
        )
    for n in (3, 4):
        yield (
            f"enumeration n={n}",
            lambda n=n: _accel.enumerate_tensors(n, 10**8, use_numba=True)[0],
            lambda n=n: _accel.enumerate_tensors(n, 10**8, use_numba=False)[0],
        )


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    print(f"{'kernel':<52}{'warm-up':>10}{'numba':>10}{'fallback':>11}{'speed-up':>10}")
    for label, fast, slow in cases():
        warm, _ = best_of(fast, 1)
        t_fast, a = best_of(fast, args.repeat)
        t_slow, b = best_of(slow, args.repeat)
        same = np.array_equal(np.asarray(a), np.asarray(b))
        flag = "" if same else "  RESULTS DIFFER"
        print(f"{label:<52}{warm:>10.4f}{t_fast:>10.4f}{t_slow:>11.4f}{t_slow / max(t_fast, 1e-9):>9.1f}x{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
