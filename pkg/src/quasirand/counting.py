"""Exact counting of labeled and labeled-induced pattern copies.

All counters enumerate injective maps from the pattern's vertices into the
host graph.  A *labeled* copy sends pattern edges to edges (non-edges are
unconstrained); a *labeled induced* copy additionally sends non-edges to
non-edges.  The tuple variants restrict each pattern vertex to its own host
vertex set.  Counting is exact; the backtracking order places the most
constrained pattern vertices first.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from ._kernels import REQ_EDGE, REQ_FREE, REQ_NONEDGE
from .graphs import Graph, WeightedCompleteGraph
from .patterns import PatternGraph


def _requirements(H: PatternGraph, induced: bool) -> np.ndarray:
    req = np.full((H.h, H.h), REQ_NONEDGE if induced else REQ_FREE, dtype=np.int8)
    np.fill_diagonal(req, REQ_FREE)
    for u, v in H.edges:
        req[u, v] = req[v, u] = REQ_EDGE
    return req


def _slot_order(req: np.ndarray, domains) -> list[int]:
    # most-constrained slot first; ties broken by smaller domain, then index
    h = req.shape[0]
    constrained = [(int(np.sum(req[s] != REQ_FREE)), -len(domains[s]), -s) for s in range(h)]
    return sorted(range(h), key=lambda s: constrained[s], reverse=True)


def _count(g: Graph, H: PatternGraph, domains, induced: bool) -> int:
    req = _requirements(H, induced)
    order = _slot_order(req, domains)
    req = req[np.ix_(order, order)]
    domains = [domains[s] for s in order]
    return _kernels.count_embeddings(g.adj, req, domains)


def _vertex_array(g: Graph, U) -> np.ndarray:
    if U is None:
        return np.arange(g.n, dtype=np.int64)
    idx = np.asarray(sorted(set(int(u) for u in U)), dtype=np.int64)
    if len(idx) and (idx[0] < 0 or idx[-1] >= g.n):
        raise ValueError("vertex set out of range")
    return idx


def _tuple_arrays(g: Graph, sets, h: int):
    if len(sets) != h:
        raise ValueError(f"expected {h} vertex sets, got {len(sets)}")
    arrays = [_vertex_array(g, s) for s in sets]
    seen: set[int] = set()
    for arr in arrays:
        for v in arr.tolist():
            if v in seen:
                raise ValueError("vertex sets must be pairwise disjoint")
            seen.add(v)
    return arrays


def count_labeled(g: Graph, H: PatternGraph, U=None) -> int:
    """Number of labeled copies of H inside U (default: the whole graph)."""
    dom = _vertex_array(g, U)
    if len(dom) < H.h:
        return 0
    return _count(g, H, [dom] * H.h, induced=False)


def count_induced(g: Graph, H: PatternGraph, U=None) -> int:
    """Number of labeled induced copies of H inside U."""
    dom = _vertex_array(g, U)
    if len(dom) < H.h:
        return 0
    return _count(g, H, [dom] * H.h, induced=True)


def count_labeled_tuple(g: Graph, H: PatternGraph, sets) -> int:
    """Choices v_i in sets[i] placing pattern vertex i at v_i so that the
    images of pattern edges are edges."""
    arrays = _tuple_arrays(g, sets, H.h)
    return _count(g, H, arrays, induced=False)


def count_induced_sigma(g: Graph, H: PatternGraph, sets, sigma) -> int:
    """Choices v_i in sets[sigma[i]] with v_i ~ v_j exactly when (i, j) is a
    pattern edge.  ``sigma`` must be a permutation of 0..h-1."""
    sig = list(int(s) for s in sigma)
    if sorted(sig) != list(range(H.h)):
        raise ValueError("sigma must be a permutation of 0..h-1")
    arrays = _tuple_arrays(g, sets, H.h)
    return _count(g, H, [arrays[s] for s in sig], induced=True)


def count_induced_phi(g: Graph, H: PatternGraph, sets, phi) -> int:
    """Generalization of the permuted induced count to r >= h disjoint sets:
    slot i draws from sets[phi[i]], with full edge/non-edge constraints."""
    ph = list(int(x) for x in phi)
    if len(ph) != H.h or len(set(ph)) != H.h:
        raise ValueError("phi must be injective with one image per pattern vertex")
    if any(x < 0 or x >= len(sets) for x in ph):
        raise ValueError("phi image out of range")
    arrays = _tuple_arrays(g, sets, len(sets))
    return _count(g, H, [arrays[x] for x in ph], induced=True)


def weighted_product(W: WeightedCompleteGraph, H: PatternGraph, phi) -> float:
    """Product over pattern edges of w(phi(i), phi(j)) times the product
    over pattern non-edges of 1 - w(phi(i), phi(j))."""
    ph = list(int(x) for x in phi)
    if len(ph) != H.h or len(set(ph)) != H.h:
        raise ValueError("phi must be injective with one image per pattern vertex")
    if any(x < 0 or x >= W.r for x in ph):
        raise ValueError("phi image out of range")
    value = 1.0
    wm = W.weights
    for i, j in H.sorted_edges():
        value *= wm[ph[i], ph[j]]
    for i, j in H.nonedges():
        value *= 1.0 - wm[ph[i], ph[j]]
    return value
