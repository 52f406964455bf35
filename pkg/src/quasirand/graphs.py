"""Graph containers, generators, and file I/O.

A ``Graph`` is a simple undirected graph stored as a symmetric boolean
adjacency matrix with a zero diagonal; vertices are labelled ``0..n-1`` and
the matrix is frozen after construction.  A ``WeightedCompleteGraph`` stores
one weight in ``[0, 1]`` per unordered vertex pair of a complete graph.

File formats (plain text):

* graph file -- first line ``n``, then one ``u v`` pair per non-empty line
  with ``0 <= u < v < n``; duplicate pairs and self-loops are errors.
* weight file -- first line ``r``, then one ``i j w`` line per pair with
  ``0 <= i < j < r`` and ``w`` a decimal in ``[0, 1]``; all ``C(r, 2)``
  pairs must be present exactly once.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Iterator

import numpy as np

from .rng import substream


class GraphFormatError(ValueError):
    """Malformed graph or weight file; carries the offending line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Simple undirected graph backed by a boolean adjacency matrix."""

    __slots__ = ("adj",)

    def __init__(self, adj: np.ndarray):
        adj = np.array(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        self.adj = _freeze(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def edge_count(self) -> int:
        return int(np.count_nonzero(self.adj)) // 2

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1).astype(np.int64)

    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return self.edge_count() / comb(self.n, 2)

    def complement(self) -> "Graph":
        comp = ~self.adj
        comp = comp.copy()
        np.fill_diagonal(comp, False)
        return Graph(comp)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count()})"


class WeightedCompleteGraph:
    """Complete graph on ``r >= 2`` vertices with one weight per pair."""

    __slots__ = ("weights", "meta")

    def __init__(self, weights: np.ndarray, meta: dict | None = None):
        w = np.array(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weights must be a square matrix")
        if w.shape[0] < 2:
            raise ValueError("need at least 2 vertices")
        np.fill_diagonal(w, 0.0)
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be symmetric")
        off = w[~np.eye(w.shape[0], dtype=bool)]
        if np.any(off < 0.0) or np.any(off > 1.0):
            raise ValueError("weights must lie in [0, 1]")
        self.weights = _freeze(w)
        self.meta = dict(meta) if meta else {}

    @classmethod
    def uniform(cls, r: int, p: float) -> "WeightedCompleteGraph":
        w = np.full((r, r), float(p))
        return cls(w)

    @classmethod
    def from_pairs(cls, r: int, mapping: dict[tuple[int, int], float]) -> "WeightedCompleteGraph":
        """Build from a {(i, j): w} dict over all pairs with i < j."""
        w = np.zeros((r, r))
        seen = set()
        for (i, j), val in mapping.items():
            if not (0 <= i < j < r):
                raise ValueError(f"pair ({i},{j}) out of range (need 0 <= i < j < {r})")
            if (i, j) in seen:
                raise ValueError(f"duplicate pair ({i},{j})")
            seen.add((i, j))
            w[i, j] = w[j, i] = val
        if len(seen) != comb(r, 2):
            raise ValueError(f"expected {comb(r, 2)} pairs, got {len(seen)}")
        return cls(w)

    @property
    def r(self) -> int:
        return self.weights.shape[0]

    def weight(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError("no weight on a vertex with itself")
        return float(self.weights[i, j])

    def pairs(self) -> Iterator[tuple[int, int, float]]:
        r = self.r
        for i in range(r):
            for j in range(i + 1, r):
                yield i, j, float(self.weights[i, j])

    def __repr__(self) -> str:
        return f"WeightedCompleteGraph(r={self.r})"


# ---------------------------------------------------------------------------
# basic constructions

def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool))


def complete_graph(n: int) -> Graph:
    adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    return Graph(adj)


def complete_bipartite(a: int, b: int) -> Graph:
    n = a + b
    adj = np.zeros((n, n), dtype=bool)
    adj[:a, a:] = True
    adj[a:, :a] = True
    return Graph(adj)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


# ---------------------------------------------------------------------------
# random and structured generators

def generate_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p): each pair is an edge independently with prob p.

    Deterministic in (n, p, seed): the same arguments always produce the
    identical edge set.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = substream(seed, "gnp")
    iu = np.triu_indices(n, k=1)
    hits = rng.random(len(iu[0])) < p
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[0][hits], iu[1][hits]] = True
    adj |= adj.T
    return Graph(adj)


def two_block_graph(n: int, alpha: float, p1: float, p2: float, seed: int) -> Graph:
    """Two vertex blocks of sizes ~alpha*n and (1-alpha)*n, edge probability
    p1 inside each block and p2 across."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    for q in (p1, p2):
        if not 0.0 <= q <= 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
    n1 = round(alpha * n)
    if n1 == 0 or n1 == n:
        raise ValueError("alpha leaves one block empty")
    rng = substream(seed, "two-block")
    iu = np.triu_indices(n, k=1)
    same_block = (iu[0] < n1) == (iu[1] < n1)
    prob = np.where(same_block, p1, p2)
    hits = rng.random(len(iu[0])) < prob
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[0][hits], iu[1][hits]] = True
    adj |= adj.T
    return Graph(adj)


def clique_plus_bipartite(n: int, alpha: float) -> Graph:
    """Disjoint union of a clique on round(alpha*n) vertices and a balanced
    complete bipartite graph on the rest."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a = round(alpha * n)
    if a < 1 or n - a < 2:
        raise ValueError("alpha leaves too few vertices for one of the parts")
    rest = n - a
    half = rest // 2
    adj = np.zeros((n, n), dtype=bool)
    adj[:a, :a] = True
    adj[a:a + half, a + half:] = True
    adj[a + half:, a:a + half] = True
    np.fill_diagonal(adj, False)
    return Graph(adj)


def hub_weighted(r: int, pattern, p: float) -> WeightedCompleteGraph:
    """Weighted complete graph with weight p on every pair except the r-1
    pairs at vertex r-1, which carry the conjugate density of p.

    When p equals its own conjugate the construction degenerates to the
    uniform graph; this is permitted and flagged in ``meta``.
    """
    from .quasirandom import conjugate  # deferred: quasirandom imports graphs

    if r < 3:
        raise ValueError("hub construction needs r >= 3")
    dp = conjugate(pattern, p)
    w = np.full((r, r), float(p))
    w[r - 1, :] = dp.p_bar
    w[:, r - 1] = dp.p_bar
    np.fill_diagonal(w, 0.0)
    meta = {
        "kind": "hub_weighted",
        "hub": r - 1,
        "p": p,
        "p_bar": dp.p_bar,
        "degenerate": dp.p_bar == p,
    }
    return WeightedCompleteGraph(w, meta=meta)


_COUNTEREXAMPLE_KINDS = (
    "balanced_bipartite",
    "clique_plus_bipartite",
    "two_block",
    "hub_weighted",
)


def generate_counterexample(kind: str, params: dict, seed: int = 0):
    """Dispatch to the named counterexample construction.

    Kinds: ``balanced_bipartite`` (n), ``clique_plus_bipartite`` (n, alpha),
    ``two_block`` (n, alpha, p1, p2), ``hub_weighted`` (r, pattern, p).
    Returns a Graph, except ``hub_weighted`` which returns a
    WeightedCompleteGraph.
    """
    if kind == "balanced_bipartite":
        n = int(params["n"])
        return complete_bipartite(n - n // 2, n // 2)
    if kind == "clique_plus_bipartite":
        return clique_plus_bipartite(int(params["n"]), float(params["alpha"]))
    if kind == "two_block":
        return two_block_graph(
            int(params["n"]), float(params["alpha"]),
            float(params["p1"]), float(params["p2"]), seed,
        )
    if kind == "hub_weighted":
        return hub_weighted(int(params["r"]), params["pattern"], float(params["p"]))
    raise ValueError(f"unknown counterexample kind {kind!r}; known: {_COUNTEREXAMPLE_KINDS}")


# ---------------------------------------------------------------------------
# subset edge counts

def _as_index(U) -> np.ndarray:
    idx = np.asarray(sorted(set(int(u) for u in U)), dtype=np.int64)
    return idx


def edge_count_within(g: Graph, U) -> int:
    """Number of edges of g with both endpoints in U."""
    idx = _as_index(U)
    if len(idx) and (idx[0] < 0 or idx[-1] >= g.n):
        raise ValueError("vertex set out of range")
    sub = g.adj[np.ix_(idx, idx)]
    return int(np.count_nonzero(sub)) // 2


def edge_count_between(g: Graph, U, V) -> int:
    """Number of edges of g with one endpoint in U and the other in V.

    U and V must be disjoint.
    """
    iu, iv = _as_index(U), _as_index(V)
    for idx in (iu, iv):
        if len(idx) and (idx[0] < 0 or idx[-1] >= g.n):
            raise ValueError("vertex set out of range")
    if np.intersect1d(iu, iv).size:
        raise ValueError("U and V must be disjoint")
    return int(np.count_nonzero(g.adj[np.ix_(iu, iv)]))


def pair_density(g: Graph, U, V) -> float:
    """Edge density between disjoint nonempty sets U and V."""
    iu, iv = _as_index(U), _as_index(V)
    if not len(iu) or not len(iv):
        raise ValueError("density needs nonempty sets")
    return edge_count_between(g, iu, iv) / (len(iu) * len(iv))


# ---------------------------------------------------------------------------
# file I/O

def read_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    n = None
    adj = None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise GraphFormatError(path, line_no, "first line must be the vertex count")
            try:
                n = int(parts[0])
            except ValueError:
                raise GraphFormatError(path, line_no, f"bad vertex count {parts[0]!r}") from None
            if n < 0:
                raise GraphFormatError(path, line_no, "vertex count must be nonnegative")
            adj = np.zeros((n, n), dtype=bool)
            continue
        if len(parts) != 2:
            raise GraphFormatError(path, line_no, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(path, line_no, f"non-integer endpoint in {line!r}") from None
        if u == v:
            raise GraphFormatError(path, line_no, f"self-loop ({u},{v})")
        if not (0 <= u < v < n):
            raise GraphFormatError(path, line_no, f"need 0 <= u < v < {n}, got ({u},{v})")
        if adj[u, v]:
            raise GraphFormatError(path, line_no, f"duplicate edge ({u},{v})")
        adj[u, v] = adj[v, u] = True
    if n is None:
        raise GraphFormatError(path, 1, "empty file")
    return Graph(adj)


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_weighted(path) -> WeightedCompleteGraph:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    r = None
    w = None
    seen: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if r is None:
            if len(parts) != 1:
                raise GraphFormatError(path, line_no, "first line must be the vertex count")
            try:
                r = int(parts[0])
            except ValueError:
                raise GraphFormatError(path, line_no, f"bad vertex count {parts[0]!r}") from None
            if r < 2:
                raise GraphFormatError(path, line_no, "need at least 2 vertices")
            w = np.zeros((r, r))
            continue
        if len(parts) != 3:
            raise GraphFormatError(path, line_no, f"expected 'i j w', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            val = float(parts[2])
        except ValueError:
            raise GraphFormatError(path, line_no, f"bad entry {line!r}") from None
        if not (0 <= i < j < r):
            raise GraphFormatError(path, line_no, f"need 0 <= i < j < {r}, got ({i},{j})")
        if (i, j) in seen:
            raise GraphFormatError(path, line_no, f"duplicate pair ({i},{j})")
        if not (0.0 <= val <= 1.0):
            raise GraphFormatError(path, line_no, f"weight {val} outside [0, 1]")
        seen.add((i, j))
        w[i, j] = w[j, i] = val
    if r is None:
        raise GraphFormatError(path, 1, "empty file")
    if len(seen) != comb(r, 2):
        raise GraphFormatError(path, len(lines), f"expected {comb(r, 2)} pairs, found {len(seen)}")
    return WeightedCompleteGraph(w)


def write_weighted(w: WeightedCompleteGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{w.r}\n")
        for i, j, val in w.pairs():
            fh.write(f"{i} {j} {val:.17g}\n")
