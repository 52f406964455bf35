"""Hot inner-loop kernels with a numba fast path and a pure-numpy fallback.

Three operations dominate runtime: injective pattern-embedding counting,
the min-max scan over two-colorings of complete-graph edges, and the mask
scan that enumerates all labelled graphs passing a pairwise-degree predicate.
Each has two interchangeable implementations that return identical results:

* a ``@njit`` backtracking/bit-twiddling version (default when numba is
  importable), and
* a vectorized numpy version.

Set ``QUASIRAND_BACKEND=numpy`` to force the fallback or
``QUASIRAND_BACKEND=numba`` to require the JIT (ImportError if missing).
``benchmarks/bench_kernels.py`` times the two paths against each other.

Counts are carried in int64; the injective-map count is bounded by n**h,
which stays below 2**63 for n <= 2000, h <= 5.
"""

from __future__ import annotations

import os

import numpy as np

REQ_EDGE = 1      # image pair must be adjacent
REQ_NONEDGE = 0   # image pair must be non-adjacent
REQ_FREE = -1     # no constraint

_REQUESTED = os.environ.get("QUASIRAND_BACKEND", "auto").strip().lower()
if _REQUESTED not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"QUASIRAND_BACKEND={_REQUESTED!r} not understood (use 'numba' or 'numpy')"
    )

if _REQUESTED in ("auto", "numba"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _REQUESTED == "numba":
            raise
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and _REQUESTED != "numpy"


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# injective embedding counting
#
# Count assignments (v_0, ..., v_{h-1}) with v_i drawn from domains[i], all
# distinct, such that for every slot pair (i, j): req[i, j] == REQ_EDGE
# forces adjacency of the images, REQ_NONEDGE forces non-adjacency, REQ_FREE
# leaves the pair unconstrained.

def _count_embeddings_numpy(adj: np.ndarray, req: np.ndarray, domains) -> int:
    """Backtracking with numpy-filtered candidate sets at every level."""
    h = len(domains)

    def candidates(level: int, chosen: np.ndarray) -> np.ndarray:
        cand = domains[level]
        mask = np.ones(cand.shape[0], dtype=bool)
        for j in range(level):
            c = req[j, level]
            if c == REQ_EDGE:
                mask &= adj[chosen[j]][cand]
            elif c == REQ_NONEDGE:
                mask &= ~adj[chosen[j]][cand]
        sub = cand[mask]
        for j in range(level):
            sub = sub[sub != chosen[j]]
        return sub

    def rec(level: int, chosen: np.ndarray) -> int:
        cand = candidates(level, chosen)
        if level == h - 1:
            return int(cand.shape[0])
        total = 0
        for v in cand:
            chosen[level] = v
            total += rec(level + 1, chosen)
        return total

    return rec(0, np.full(h, -1, dtype=np.int64))


if USE_NUMBA:

    @njit(cache=True)
    def _count_embeddings_jit(adj, req, dom_flat, dom_off, n):  # pragma: no cover
        h = dom_off.shape[0] - 1
        chosen = np.empty(h, np.int64)
        ptr = np.zeros(h, np.int64)
        used = np.zeros(n, np.bool_)
        count = np.int64(0)
        level = 0
        while True:
            start = dom_off[level]
            size = dom_off[level + 1] - start
            if ptr[level] >= size:
                ptr[level] = 0
                level -= 1
                if level < 0:
                    break
                used[chosen[level]] = False
                continue
            v = dom_flat[start + ptr[level]]
            ptr[level] += 1
            if used[v]:
                continue
            ok = True
            for j in range(level):
                c = req[j, level]
                if c == 1:
                    if not adj[chosen[j], v]:
                        ok = False
                        break
                elif c == 0:
                    if adj[chosen[j], v]:
                        ok = False
                        break
            if not ok:
                continue
            if level == h - 1:
                count += 1
                continue
            chosen[level] = v
            used[v] = True
            level += 1
        return count


def count_embeddings(adj: np.ndarray, req: np.ndarray, domains) -> int:
    """Count injective constraint-satisfying assignments of slots to vertices.

    ``adj`` is the host boolean adjacency matrix, ``req`` an h x h int8
    matrix of REQ_* codes (symmetric, diagonal REQ_FREE), ``domains`` a list
    of h int64 index arrays.
    """
    h = len(domains)
    if h == 0:
        return 1
    domains = [np.asarray(d, dtype=np.int64) for d in domains]
    if any(d.shape[0] == 0 for d in domains):
        return 0
    req = np.asarray(req, dtype=np.int8)
    if USE_NUMBA:
        flat = np.concatenate(domains)
        off = np.zeros(h + 1, dtype=np.int64)
        np.cumsum([d.shape[0] for d in domains], out=off[1:])
        return int(_count_embeddings_jit(adj, req, flat, off, adj.shape[0]))
    return _count_embeddings_numpy(adj, req, domains)


# ---------------------------------------------------------------------------
# min-max deviation over edge two-colorings
#
# Colorings of the C(r,2) pairs are bitmasks (bit set = first color).  For
# each injective map f, edge_masks[f] / nonedge_masks[f] mark the pair bits
# hit by pattern edges / non-edges; dev_table[b, a] is the deviation of the
# product value when b pattern edges and a non-edges land on set bits.  The
# scan returns (min over nontrivial colorings of max over f, argmin mask).

def _coloring_scan_numpy(edge_masks, nonedge_masks, dev_table, n_pair_bits):
    total = np.int64(1) << n_pair_bits
    cols = np.arange(1, total - 1, dtype=np.uint32)
    worst = np.zeros(cols.shape[0])
    for f in range(edge_masks.shape[0]):
        b = np.bitwise_count(cols & np.uint32(edge_masks[f]))
        a = np.bitwise_count(cols & np.uint32(nonedge_masks[f]))
        np.maximum(worst, dev_table[b, a], out=worst)
    i = int(np.argmin(worst))
    return float(worst[i]), int(cols[i])


if USE_NUMBA:

    @njit(cache=True)
    def _coloring_scan_jit(edge_masks, nonedge_masks, dev_table, n_pair_bits, pc16):  # pragma: no cover
        total = np.int64(1) << n_pair_bits
        nphi = edge_masks.shape[0]
        best = np.inf
        best_mask = np.int64(-1)
        for c in range(np.int64(1), total - 1):
            worst = 0.0
            for f in range(nphi):
                eb = c & edge_masks[f]
                nb = c & nonedge_masks[f]
                b = pc16[eb & 0xFFFF] + pc16[(eb >> 16) & 0xFFFF]
                a = pc16[nb & 0xFFFF] + pc16[(nb >> 16) & 0xFFFF]
                d = dev_table[b, a]
                if d > worst:
                    worst = d
                    if worst >= best:
                        break
            if worst < best:
                best = worst
                best_mask = c
        return best, best_mask

    _PC16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int64)


def coloring_scan(edge_masks: np.ndarray, nonedge_masks: np.ndarray,
                  dev_table: np.ndarray, n_pair_bits: int) -> tuple[float, int]:
    if n_pair_bits > 31:
        raise ValueError("coloring scan supports at most 31 pair bits")
    edge_masks = np.ascontiguousarray(edge_masks, dtype=np.int64)
    nonedge_masks = np.ascontiguousarray(nonedge_masks, dtype=np.int64)
    dev_table = np.ascontiguousarray(dev_table, dtype=np.float64)
    if USE_NUMBA:
        best, mask = _coloring_scan_jit(edge_masks, nonedge_masks, dev_table,
                                        n_pair_bits, _PC16)
        return float(best), int(mask)
    return _coloring_scan_numpy(edge_masks, nonedge_masks, dev_table, n_pair_bits)


# ---------------------------------------------------------------------------
# pairwise-degree predicate scan over all labelled graphs on n vertices
#
# Graphs are bitmasks over the pair list (pi[e], pj[e]).  A graph passes when
# d(x) + d(y) - coef*d(x,y) is the same number for every pair (x, y), with
# coef 1 or 2.  Returns the passing masks.

def _predicate_scan_numpy(n, pi, pj, coef, chunk=1 << 16):
    E = pi.shape[0]
    total = 1 << E
    incidence = np.zeros((E, n), dtype=np.int64)
    incidence[np.arange(E), pi] = 1
    incidence[np.arange(E), pj] = 1
    out = []
    shifts = np.arange(E, dtype=np.uint64)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        bits = ((masks[:, None] >> shifts[None, :]) & 1).astype(np.int64)
        degs = bits @ incidence
        q = degs[:, pi] + degs[:, pj] - coef * bits
        ok = np.all(q == q[:, :1], axis=1)
        out.append(masks[ok].astype(np.int64))
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


if USE_NUMBA:

    @njit(cache=True)
    def _predicate_scan_jit(n, pi, pj, coef, out):  # pragma: no cover
        E = pi.shape[0]
        total = np.int64(1) << E
        deg = np.zeros(n, np.int64)
        cap = out.shape[0]
        found = 0
        # empty graph: quantity is 0 for every pair
        out[found] = 0
        found += 1
        mask = np.int64(0)
        # gray-code walk: step i flips bit ctz(i), so degrees update in O(1)
        for i in range(np.int64(1), total):
            flip = 0
            while ((i >> flip) & 1) == 0:
                flip += 1
            bit = np.int64(1) << flip
            mask ^= bit
            if mask & bit:
                deg[pi[flip]] += 1
                deg[pj[flip]] += 1
            else:
                deg[pi[flip]] -= 1
                deg[pj[flip]] -= 1
            t0 = deg[pi[0]] + deg[pj[0]] - coef * (mask & 1)
            ok = True
            for e in range(1, E):
                t = deg[pi[e]] + deg[pj[e]] - coef * ((mask >> e) & 1)
                if t != t0:
                    ok = False
                    break
            if ok:
                if found == cap:
                    return -1
                out[found] = mask
                found += 1
        return found


def predicate_scan(n: int, pi: np.ndarray, pj: np.ndarray, coef: int) -> np.ndarray:
    """All adjacency bitmasks on n vertices whose pairwise quantity
    d(x)+d(y)-coef*d(x,y) is constant.  Sorted ascending."""
    E = pi.shape[0]
    if E > 28:
        raise ValueError("predicate scan supports at most 28 pairs (n <= 8)")
    pi = np.ascontiguousarray(pi, dtype=np.int64)
    pj = np.ascontiguousarray(pj, dtype=np.int64)
    if USE_NUMBA:
        out = np.empty(min(1 << E, 1 << 16), dtype=np.int64)
        found = _predicate_scan_jit(n, pi, pj, coef, out)
        if found < 0:
            raise RuntimeError("survivor buffer exhausted in predicate scan")
        return np.sort(out[:found])
    return np.sort(_predicate_scan_numpy(n, pi, pj, coef))
