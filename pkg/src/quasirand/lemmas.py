"""Desk-scale verification of the supporting combinatorial facts.

Contents: the pairwise-degree regularity predicates and their exhaustive
classification over all small graphs; exact per-edge clique coverage with a
greedy edge-disjoint packing; randomized search for a clique carrying many
edges of both colors; the r-partite counting experiment matching placement
counts against weight products; and the partition-level edge-distribution
check built from sampled pair-regularity tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import ceil, comb

import numpy as np

from . import _kernels
from .counting import count_induced_phi, weighted_product
from .graphs import Graph, WeightedCompleteGraph, pair_density
from .inclusion import colex_subsets
from .patterns import PatternGraph
from .quasirandom import PropertyDeviation, SampleBudget, check_p1
from .reconstruct import all_injective_maps
from .rng import substream


# ---------------------------------------------------------------------------
# pairwise regularity predicates

def _pair_quantities(g: Graph, coef: int) -> np.ndarray:
    deg = g.degrees()
    iu = np.triu_indices(g.n, k=1)
    return deg[iu[0]] + deg[iu[1]] - coef * g.adj[iu].astype(np.int64)


def is_pairwise_regular(g: Graph) -> tuple[bool, int | None]:
    """Whether d(x) + d(y) - d(x,y) is one constant over all vertex pairs."""
    if g.n < 2:
        raise ValueError("need at least 2 vertices")
    q = _pair_quantities(g, 1)
    if np.all(q == q[0]):
        return True, int(q[0])
    return False, None


def is_pairwise_outer_regular(g: Graph) -> tuple[bool, int | None]:
    """Whether d(x) + d(y) - 2 d(x,y) is one constant over all vertex pairs."""
    if g.n < 2:
        raise ValueError("need at least 2 vertices")
    q = _pair_quantities(g, 2)
    if np.all(q == q[0]):
        return True, int(q[0])
    return False, None


def _graph_from_mask(n: int, mask: int, pairs) -> Graph:
    edges = [pairs[k] for k in range(len(pairs)) if (mask >> k) & 1]
    return Graph.from_edges(n, edges)


def _canonical_mask(n: int, mask: int, pairs, pair_bit) -> int:
    best = None
    for perm in permutations(range(n)):
        remapped = 0
        for k in range(len(pairs)):
            if (mask >> k) & 1:
                u, v = pairs[k]
                a, b = perm[u], perm[v]
                remapped |= 1 << pair_bit[(a, b) if a < b else (b, a)]
        if best is None or remapped < best:
            best = remapped
    return best


def classify_pairwise_regular_up_to(n_max: int, outer: bool = False) -> dict[int, list[Graph]]:
    """All graphs on 2..n_max vertices (up to isomorphism) whose pairwise
    quantity is constant; ``outer`` switches to the -2d(x,y) variant.

    Every labelled graph is scanned by adjacency bitmask and survivors are
    deduplicated by canonical (minimum) mask over vertex permutations.
    """
    if n_max > 8:
        raise ValueError("exhaustive classification capped at n_max <= 8")
    if n_max < 2:
        raise ValueError("need n_max >= 2")
    coef = 2 if outer else 1
    out: dict[int, list[Graph]] = {}
    for n in range(2, n_max + 1):
        pairs = colex_subsets(n, 2)
        pair_bit = {pair: k for k, pair in enumerate(pairs)}
        pi = np.array([a for a, _ in pairs], dtype=np.int64)
        pj = np.array([b for _, b in pairs], dtype=np.int64)
        masks = _kernels.predicate_scan(n, pi, pj, coef)
        canonical = sorted({_canonical_mask(n, int(m), pairs, pair_bit) for m in masks.tolist()})
        out[n] = [_graph_from_mask(n, m, pairs) for m in canonical]
    return out


# ---------------------------------------------------------------------------
# clique coverage and packing

def _has_clique(adj: np.ndarray, cand: list[int], k: int) -> bool:
    if k == 0:
        return True
    if len(cand) < k:
        return False
    for idx in range(len(cand) - k + 1):
        v = cand[idx]
        nxt = [u for u in cand[idx + 1:] if adj[v, u]]
        if _has_clique(adj, nxt, k - 1):
            return True
    return False


@dataclass
class CoverageReport:
    r: int
    covered: int                      # edges lying in at least one K_r
    total_edges: int
    packing: list                     # vertex sets of a greedy edge-disjoint packing


def kr_edge_coverage(g: Graph, r: int) -> CoverageReport:
    """Exact count of edges contained in some K_r, plus a greedy
    edge-disjoint K_r packing (reported separately)."""
    if r < 3:
        raise ValueError("need r >= 3")
    adj = g.adj
    covered = 0
    for u, v in g.edges():
        common = [int(x) for x in np.nonzero(adj[u] & adj[v])[0]]
        if _has_clique(adj, common, r - 2):
            covered += 1

    used = np.zeros((g.n, g.n), dtype=bool)
    packing: list[tuple[int, ...]] = []

    def claim(clique: tuple[int, ...]) -> bool:
        for a, b in combinations(clique, 2):
            if used[a, b]:
                return False
        for a, b in combinations(clique, 2):
            used[a, b] = used[b, a] = True
        packing.append(clique)
        return True

    def extend(clique: list[int], cand: list[int]) -> None:
        if len(clique) == r:
            claim(tuple(clique))
            return
        need = r - len(clique)
        for idx in range(len(cand) - need + 1):
            v = cand[idx]
            if any(used[v, u] for u in clique):
                continue
            nxt = [u for u in cand[idx + 1:] if adj[v, u]]
            extend(clique + [v], nxt)

    extend([], list(range(g.n)))
    return CoverageReport(r, covered, g.edge_count(), packing)


# ---------------------------------------------------------------------------
# bichromatic clique search

@dataclass
class EdgeColoring:
    """Red/blue coloring of the edges of a base graph."""

    base: Graph
    blue: np.ndarray                  # boolean matrix; meaningful on edges only

    def __post_init__(self):
        blue = np.array(self.blue, dtype=bool)
        if blue.shape != self.base.adj.shape:
            raise ValueError("color matrix shape must match the base graph")
        blue &= self.base.adj          # colors live on edges only
        if not np.array_equal(blue, blue.T):
            raise ValueError("color matrix must be symmetric")
        self.blue = blue

    @classmethod
    def from_map(cls, base: Graph, colors: dict) -> "EdgeColoring":
        """Build from {(u, v): 'RED'|'BLUE'}; every edge needs exactly one entry."""
        blue = np.zeros_like(base.adj)
        seen = set()
        for (u, v), col in colors.items():
            key = (u, v) if u < v else (v, u)
            if not base.has_edge(*key):
                raise ValueError(f"{key} is not an edge of the base graph")
            if key in seen:
                raise ValueError(f"duplicate color for edge {key}")
            seen.add(key)
            if col.upper() == "BLUE":
                blue[key[0], key[1]] = blue[key[1], key[0]] = True
            elif col.upper() != "RED":
                raise ValueError(f"unknown color {col!r}")
        if len(seen) != base.edge_count():
            raise ValueError("every edge must be colored exactly once")
        return cls(base, blue)

    def blue_count(self) -> int:
        return int(np.count_nonzero(self.blue)) // 2

    def red_count(self) -> int:
        return self.base.edge_count() - self.blue_count()


@dataclass
class BichromaticSearch:
    found: bool
    vertices: tuple | None
    blue_edges: int
    red_edges: int
    trials_used: int
    reason: str = ""


def find_bichromatic_kr(coloring: EdgeColoring, r: int, trials: int,
                        seed: int) -> BichromaticSearch:
    """Randomized hunt for an r-clique with at least r blue and r red edges.

    Vertices are sampled with repetition and samples with collisions are
    discarded, so failure after ``trials`` draws carries no guarantee that
    no witness exists.
    """
    g = coloring.base
    if coloring.blue_count() == 0 or coloring.red_count() == 0:
        return BichromaticSearch(False, None, coloring.blue_count(),
                                 coloring.red_count(), 0,
                                 reason="monochromatic coloring (precondition violated)")
    rng = substream(seed, "bichromatic")
    adj = g.adj
    blue = coloring.blue
    for t in range(1, trials + 1):
        sample = rng.integers(0, g.n, size=r)
        if len(set(sample.tolist())) != r:
            continue
        verts = np.sort(sample)
        sub = adj[np.ix_(verts, verts)]
        if not np.all(sub[np.triu_indices(r, k=1)]):
            continue
        bsub = blue[np.ix_(verts, verts)]
        n_blue = int(np.count_nonzero(bsub)) // 2
        n_red = comb(r, 2) - n_blue
        if n_blue >= r and n_red >= r:
            return BichromaticSearch(True, tuple(int(x) for x in verts),
                                     n_blue, n_red, t)
    return BichromaticSearch(False, None, 0, 0, trials,
                             reason="trials exhausted without a witness")


# ---------------------------------------------------------------------------
# counting experiment on a sampled multipartite graph

@dataclass
class CountingExperiment:
    m_size: int
    per_phi: list                     # (phi, count, fraction, reference, abs_dev)
    max_abs_deviation: float


def counting_lemma_experiment(W: WeightedCompleteGraph, H: PatternGraph,
                              m_size: int, seed: int,
                              max_phi: int | None = None) -> CountingExperiment:
    """Sample an r-partite graph with parts of size m_size and cross
    densities w(i, j), then compare each exact placement count against
    W(phi) * m_size**h."""
    if m_size < H.h:
        raise ValueError("parts must be at least as large as the pattern")
    r = W.r
    n = r * m_size
    rng = substream(seed, "counting-lemma")
    adj = np.zeros((n, n), dtype=bool)
    sets = [np.arange(i * m_size, (i + 1) * m_size, dtype=np.int64) for i in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            block = rng.random((m_size, m_size)) < W.weights[i, j]
            adj[np.ix_(sets[i], sets[j])] = block
            adj[np.ix_(sets[j], sets[i])] = block.T
    g = Graph(adj)

    phis = all_injective_maps(r, H.h)
    if max_phi is not None and phis.shape[0] > max_phi:
        keep = rng.choice(phis.shape[0], size=max_phi, replace=False)
        phis = phis[np.sort(keep)]

    scale = float(m_size) ** H.h
    per_phi = []
    worst = 0.0
    for row in phis:
        phi = tuple(int(x) for x in row)
        cnt = count_induced_phi(g, H, sets, phi)
        frac = cnt / scale
        ref = weighted_product(W, H, phi)
        dev = abs(frac - ref)
        per_phi.append((phi, cnt, frac, ref, dev))
        worst = max(worst, dev)
    return CountingExperiment(m_size, per_phi, worst)


# ---------------------------------------------------------------------------
# partitions and pair regularity

@dataclass(frozen=True)
class Partition:
    """Equipartition into parts whose sizes differ by at most one."""

    parts: tuple

    def __post_init__(self):
        arrays = tuple(np.asarray(part, dtype=np.int64) for part in self.parts)
        seen: set[int] = set()
        for arr in arrays:
            for v in arr.tolist():
                if v in seen:
                    raise ValueError("partition parts must be disjoint")
                seen.add(v)
        sizes = [len(a) for a in arrays]
        if sizes and max(sizes) - min(sizes) > 1:
            raise ValueError("an equipartition's part sizes may differ by at most 1")
        object.__setattr__(self, "parts", arrays)

    @property
    def k(self) -> int:
        return len(self.parts)

    def covers(self, n: int) -> bool:
        return sorted(v for part in self.parts for v in part.tolist()) == list(range(n))


def random_equipartition(n: int, k: int, seed: int) -> Partition:
    """Seeded uniformly random equipartition of 0..n-1 into k parts."""
    if k < 1 or k > n:
        raise ValueError("need 1 <= k <= n")
    perm = substream(seed, "equipartition").permutation(n)
    base = n // k
    extra = n % k
    parts = []
    pos = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        parts.append(np.sort(perm[pos:pos + size]))
        pos += size
    return Partition(tuple(parts))


@dataclass
class PairStat:
    density: float
    regular: bool
    mode: str                         # "exhaustive" or "sampled" (refutation-only)
    worst_gap: float


_EXHAUSTIVE_PART_LIMIT = 12


def _exhaustive_pair_regularity(g: Graph, A: np.ndarray, B: np.ndarray,
                                gamma: float) -> PairStat:
    M = g.adj[np.ix_(A, B)].astype(np.float64)
    a, b = len(A), len(B)
    d0 = float(M.sum()) / (a * b)
    ta, tb = max(1, ceil(gamma * a)), max(1, ceil(gamma * b))
    SA = ((np.arange(1 << a)[:, None] >> np.arange(a)[None, :]) & 1).astype(np.float64)
    SB = ((np.arange(1 << b)[:, None] >> np.arange(b)[None, :]) & 1).astype(np.float64)
    ka = SA.sum(axis=1)
    kb = SB.sum(axis=1)
    rows = SA @ M                                      # 2^a x b subset row sums
    worst = 0.0
    ok_a = ka >= ta
    for start in range(0, 1 << b, 1024):
        block = SB[start:start + 1024]
        sizes_b = kb[start:start + 1024]
        counts = rows @ block.T                        # 2^a x block
        with np.errstate(invalid="ignore", divide="ignore"):
            dens = counts / np.outer(ka, sizes_b)
        valid = np.outer(ok_a, sizes_b >= tb)
        gaps = np.where(valid, np.abs(dens - d0), 0.0)
        worst = max(worst, float(np.max(gaps)))
    return PairStat(d0, worst <= gamma, "exhaustive", worst)


def _sampled_pair_regularity(g: Graph, A: np.ndarray, B: np.ndarray,
                             gamma: float, rng, samples: int) -> PairStat:
    """Refute regularity from sampled sub-pairs.

    A sub-pair refutes only when its density gap exceeds gamma by more than
    three standard deviations of the gap under a homogeneous pair; without
    that allowance the finite-sample noise of small sub-pairs would flag
    every pair at desk scale.  Certification is out of reach either way.
    """
    a, b = len(A), len(B)
    d0 = pair_density(g, A, B)
    ta, tb = max(1, ceil(gamma * a)), max(1, ceil(gamma * b))
    worst_gap = 0.0
    refuted = False

    def probe(sub_a, sub_b):
        nonlocal worst_gap, refuted
        if len(sub_a) < ta or len(sub_b) < tb:
            return
        gap = abs(pair_density(g, sub_a, sub_b) - d0)
        noise = 3.0 * (d0 * (1.0 - d0) / (len(sub_a) * len(sub_b))) ** 0.5
        worst_gap = max(worst_gap, gap)
        if gap > gamma + noise:
            refuted = True

    half = samples // 2
    for _ in range(half):
        sa = rng.integers(max(ta, (a + 1) // 2), a + 1)
        sb = rng.integers(max(tb, (b + 1) // 2), b + 1)
        probe(rng.choice(A, size=sa, replace=False), rng.choice(B, size=sb, replace=False))
    # neighborhood-seeded splits surface block structure that uniform
    # sampling almost never hits
    for _ in range(samples - half):
        u = int(rng.integers(0, g.n))
        row = g.adj[u]
        for sub_a in (A[row[A]], A[~row[A]]):
            for sub_b in (B[row[B]], B[~row[B]]):
                probe(sub_a, sub_b)
    return PairStat(d0, not refuted, "sampled", worst_gap)


def pair_regularity(g: Graph, A, B, gamma: float, rng=None,
                    samples: int = 100) -> PairStat:
    """Regularity test for one pair: exhaustive over all admissible
    sub-pairs when both parts have at most 12 vertices, sampled above
    (sampling can refute regularity but never certify it)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if not (0.0 < gamma < 1.0):
        raise ValueError("gamma must lie in (0, 1)")
    if len(A) <= _EXHAUSTIVE_PART_LIMIT and len(B) <= _EXHAUSTIVE_PART_LIMIT:
        return _exhaustive_pair_regularity(g, A, B, gamma)
    if rng is None:
        rng = substream(0, "pair-regularity")
    return _sampled_pair_regularity(g, A, B, gamma, rng, samples)


@dataclass
class PartitionP1Report:
    k: int
    pair_stats: dict
    passing: int
    failing: int
    super_regular: bool
    p1: PropertyDeviation | None = None
    notes: list = field(default_factory=list)


def check_partition_p1(g: Graph, partition: Partition, p: float, eps: float,
                       budget: SampleBudget) -> PartitionP1Report:
    """Flag each part pair as eps-regular-with-density-p(+-eps); when all but
    eps*C(k,2) pairs pass, confirm the global subset-edge statistic."""
    if partition.k < 2:
        raise ValueError("need a partition into at least 2 parts")
    if not partition.covers(g.n):
        raise ValueError("partition must cover the vertex set exactly")
    rng = substream(budget.seed, "partition-pairs")
    stats: dict = {}
    passing = failing = 0
    for i in range(partition.k):
        for j in range(i + 1, partition.k):
            stat = pair_regularity(g, partition.parts[i], partition.parts[j],
                                   eps, rng=rng, samples=budget.samples)
            stats[(i, j)] = stat
            if stat.regular and abs(stat.density - p) <= eps:
                passing += 1
            else:
                failing += 1
    super_regular = failing <= eps * comb(partition.k, 2)
    report = PartitionP1Report(partition.k, stats, passing, failing, super_regular)
    if super_regular:
        report.p1 = check_p1(g, p, budget)
    else:
        report.notes.append(
            f"{failing} of {comb(partition.k, 2)} pairs fail the "
            f"regular-with-density-p test at eps={eps}"
        )
    return report
