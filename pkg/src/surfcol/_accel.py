"""Hot numeric kernels.

Each kernel exists twice: a numba ``@njit`` loop and a numpy path.  The
numba path is used when numba imports and ``SURFCOL_DISABLE_NUMBA`` is unset
(or ``0``); otherwise the numpy path runs.  Both paths are importable
directly so tests and ``benchmarks/bench_kernels.py`` can compare them.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("SURFCOL_DISABLE_NUMBA", "0").strip().lower()
    return HAVE_NUMBA and flag in ("", "0", "false", "no")


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# brute-force assignment counting
# ---------------------------------------------------------------------------

def _brute_force_py(tensor, n, nvars, tri, eqs):
    assign = np.zeros(max(nvars, 1), dtype=np.int64)
    total = 0
    while True:
        ok = True
        for k in range(tri.shape[0]):
            lhs = tensor[assign[tri[k, 0]], assign[tri[k, 1]], assign[tri[k, 2]]]
            if lhs != assign[tri[k, 3]]:
                ok = False
                break
        if ok:
            for k in range(eqs.shape[0]):
                if assign[eqs[k, 0]] != assign[eqs[k, 1]]:
                    ok = False
                    break
        if ok:
            total += 1
        i = nvars - 1
        while i >= 0:
            assign[i] += 1
            if assign[i] < n:
                break
            assign[i] = 0
            i -= 1
        if i < 0:
            break
    return total


_brute_force_nb = _njit(_brute_force_py)


def brute_force_numpy(tensor, n, nvars, tri, eqs, chunk=1 << 18):
    """Vectorised product enumeration in fixed-size chunks."""
    total_space = n ** nvars
    weights = np.array([n ** (nvars - 1 - i) for i in range(nvars)], dtype=np.int64)
    total = 0
    for start in range(0, total_space, chunk):
        idx = np.arange(start, min(start + chunk, total_space), dtype=np.int64)
        digits = (idx[None, :] // weights[:, None]) % n if nvars else np.zeros((1, idx.size), np.int64)
        ok = np.ones(idx.size, dtype=bool)
        for p, q, r, s in tri:
            ok &= tensor[digits[p], digits[q], digits[r]] == digits[s]
        for i, j in eqs:
            ok &= digits[i] == digits[j]
        total += int(ok.sum())
    return total


def brute_force_numba(tensor, n, nvars, tri, eqs):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return int(_brute_force_nb(tensor, n, nvars, tri, eqs))


def brute_force(tensor, n, nvars, tri, eqs) -> int:
    tensor = np.ascontiguousarray(tensor, dtype=np.int64)
    tri = np.asarray(tri, dtype=np.int64).reshape(-1, 4)
    eqs = np.asarray(eqs, dtype=np.int64).reshape(-1, 2)
    if numba_enabled():
        return brute_force_numba(tensor, n, nvars, tri, eqs)
    return brute_force_numpy(tensor, n, nvars, tri, eqs)


# ---------------------------------------------------------------------------
# axiom (2) check: [b,[a,b,c],[a,b,d]] = [c,[a,b,c],[a,c,d]] = [d,[a,b,d],[a,c,d]]
# ---------------------------------------------------------------------------

def _axiom2_py(t):
    n = t.shape[0]
    out = np.empty((n ** 4, 7), dtype=np.int64)
    m = 0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                abc = t[a, b, c]
                for d in range(n):
                    abd = t[a, b, d]
                    acd = t[a, c, d]
                    v1 = t[b, abc, abd]
                    v2 = t[c, abc, acd]
                    v3 = t[d, abd, acd]
                    if v1 != v2 or v2 != v3:
                        out[m, 0] = a
                        out[m, 1] = b
                        out[m, 2] = c
                        out[m, 3] = d
                        out[m, 4] = v1
                        out[m, 5] = v2
                        out[m, 6] = v3
                        m += 1
    return out[:m]


_axiom2_nb = _njit(_axiom2_py)


def axiom2_failures_numpy(t):
    n = t.shape[0]
    a, b, c, d = (g.ravel() for g in np.indices((n, n, n, n)))
    abc, abd, acd = t[a, b, c], t[a, b, d], t[a, c, d]
    v1, v2, v3 = t[b, abc, abd], t[c, abc, acd], t[d, abd, acd]
    bad = (v1 != v2) | (v2 != v3)
    return np.stack([a, b, c, d, v1, v2, v3], axis=1)[bad].astype(np.int64)


def axiom2_failures_numba(t):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return _axiom2_nb(t)


def axiom2_failures(tensor) -> np.ndarray:
    """Rows ``(a, b, c, d, v1, v2, v3)`` for every quadruple where the three
    axiom-(2) expressions disagree, in lexicographic ``(a, b, c, d)`` order."""
    t = np.ascontiguousarray(tensor, dtype=np.int64)
    if numba_enabled():
        return axiom2_failures_numba(t)
    return axiom2_failures_numpy(t)


# ---------------------------------------------------------------------------
# backtracking enumeration of tribracket tensors
# ---------------------------------------------------------------------------

def _enumerate_py(n, node_budget, cap):
    """Depth-first fill of the n^3 entries in row-major order.

    Returns ``(results, found, nodes, status)``: status 0 finished,
    1 node budget exhausted, 2 result capacity exhausted.
    """
    size = n * n * n
    t = -np.ones((n, n, n), dtype=np.int64)
    # used-value bitmasks for the three line families
    mask_c = np.zeros((n, n), dtype=np.int64)  # fixed (a, b)
    mask_b = np.zeros((n, n), dtype=np.int64)  # fixed (a, c)
    mask_a = np.zeros((n, n), dtype=np.int64)  # fixed (b, c)
    nxt = np.zeros(size + 1, dtype=np.int64)   # next value to try per depth
    results = np.zeros((cap, size), dtype=np.int64)
    found = 0
    nodes = 0
    depth = 0
    while depth >= 0:
        if depth == size:
            if found >= cap:
                return results, found, nodes, 2
            results[found, :] = t.ravel()
            found += 1
            depth -= 1
            continue
        a = depth // (n * n)
        b = (depth // n) % n
        c = depth % n
        # undo the value placed at this depth on a previous visit
        old = t[a, b, c]
        if old >= 0:
            bit = 1 << old
            mask_c[a, b] ^= bit
            mask_b[a, c] ^= bit
            mask_a[b, c] ^= bit
            t[a, b, c] = -1
        placed = False
        v = nxt[depth]
        while v < n:
            bit = 1 << v
            v += 1
            if (mask_c[a, b] & bit) or (mask_b[a, c] & bit) or (mask_a[b, c] & bit):
                continue
            nodes += 1
            if nodes > node_budget:
                return results, found, nodes, 1
            t[a, b, c] = v - 1
            # every fully decided axiom-(2) quadruple must agree
            ok = True
            for qa in range(n):
                if not ok:
                    break
                for qb in range(n):
                    if not ok:
                        break
                    for qc in range(n):
                        abc = t[qa, qb, qc]
                        if abc < 0:
                            continue
                        for qd in range(n):
                            abd = t[qa, qb, qd]
                            acd = t[qa, qc, qd]
                            if abd < 0 or acd < 0:
                                continue
                            v1 = t[qb, abc, abd]
                            v2 = t[qc, abc, acd]
                            v3 = t[qd, abd, acd]
                            if (v1 >= 0 and v2 >= 0 and v1 != v2) or (
                                v2 >= 0 and v3 >= 0 and v2 != v3
                            ) or (v1 >= 0 and v3 >= 0 and v1 != v3):
                                ok = False
                                break
                        if not ok:
                            break
            if ok:
                mask_c[a, b] |= bit
                mask_b[a, c] |= bit
                mask_a[b, c] |= bit
                placed = True
                break
            t[a, b, c] = -1
        nxt[depth] = v
        if placed:
            depth += 1
            nxt[depth] = 0
        else:
            nxt[depth] = 0
            depth -= 1
    return results, found, nodes, 0


_enumerate_nb = _njit(_enumerate_py)


def enumerate_tensors(n: int, node_budget: int, cap: int = 4096, use_numba: bool | None = None):
    """Run the enumeration kernel, growing the result buffer as needed."""
    if use_numba is None:
        use_numba = numba_enabled()
    kernel = _enumerate_nb if (use_numba and HAVE_NUMBA) else _enumerate_py
    while True:
        results, found, nodes, status = kernel(n, node_budget, cap)
        if status != 2:
            return results[:found].reshape(found, n, n, n), int(nodes), status == 1
        cap *= 4
