"""Edge-distribution property checkers and the conjugate-density solver.

Each checker measures how far a graph sits from the behaviour of a random
graph with density p and reports the worst deviation it saw, normalized the
way the property's defining formula normalizes it (by n**2 for edge
statistics, n**h for pattern statistics).  No thresholds are applied here;
verdicts belong to the caller.

The induced-placement density of a pattern H with m edges on h vertices is
``delta(p) = p**m * (1-p)**(C(h,2)-m)``.  For interior p this value is shared
by exactly one other density, the *conjugate* ``p_bar``, located on the other
side of the peak m/C(h,2) of the unimodal map x -> x**m (1-x)**(C-m); a graph
with density p_bar is indistinguishable from one with density p as far as
induced copies of H are concerned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations

import numpy as np

from .counting import count_labeled, count_labeled_tuple, count_induced_sigma
from .graphs import Graph, edge_count_between, edge_count_within
from .patterns import PatternGraph, cycle
from .rng import substream


class PropertyKind(str, Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    P5 = "P5"
    PH = "PH"
    PSTAR_H = "PstarH"


@dataclass(frozen=True)
class DensityPair:
    """A density and its conjugate, sharing the induced-placement value."""

    p: float
    p_bar: float
    delta: float
    pattern: PatternGraph


@dataclass
class PropertyDeviation:
    property: PropertyKind
    deviation: float
    witness: object = None
    samples: int = 0
    exhaustive: bool = False
    components: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SampleBudget:
    """Sampling plan for subset/tuple checkers.

    ``exhaustive`` enumerates every admissible witness (only allowed for
    n <= 20); otherwise ``samples`` witnesses are drawn from the substream
    of ``seed``.  Sampled subset sizes rotate through n/4, n/2, 3n/4 and the
    full set.
    """

    samples: int = 200
    seed: int = 0
    exhaustive: bool = False


class EigensolverError(RuntimeError):
    """Symmetric eigensolver failed to converge."""


# ---------------------------------------------------------------------------
# densities

def delta_H(H: PatternGraph, p: float) -> float:
    """Induced-placement density p**m (1-p)**(C(h,2)-m); requires 0 < p < 1."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    return p ** H.m * (1.0 - p) ** (H.total_pairs - H.m)


def _log_delta(H: PatternGraph, x: float) -> float:
    return H.m * math.log(x) + (H.total_pairs - H.m) * math.log1p(-x)


_PEAK_RESOLUTION = 1e-12


def conjugate(H: PatternGraph, p: float, tol: float = 1e-12) -> DensityPair:
    """Solve x**m (1-x)**(C-m) = delta(p) for the second root in (0, 1).

    The map peaks at x* = m/C and is strictly monotone on each side, so the
    conjugate is bracketed on the side of x* opposite p and found by
    bisection (at most 200 halvings, stopping once the value matches delta
    within tol*delta).  Degenerate cases -- complete or empty patterns, or p
    at the peak -- return p_bar = p exactly.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    m, total = H.m, H.total_pairs
    delta = delta_H(H, p)
    if m == 0 or m == total:
        return DensityPair(p, p, delta, H)
    peak = m / total
    if abs(p - peak) <= _PEAK_RESOLUTION:
        return DensityPair(p, p, delta, H)

    target = math.log(delta)
    if p < peak:
        lo, hi = peak, 1.0 - 1e-12
        # log-density decreases on [peak, 1)
        increasing = False
    else:
        lo, hi = 1e-12, peak
        increasing = True

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = _log_delta(H, mid)
        if abs(math.exp(val) - delta) <= tol * delta and hi - lo <= 1e-13:
            lo = hi = mid
            break
        if (val < target) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17:
            break
    p_bar = 0.5 * (lo + hi)
    # Newton polish on f(x) - delta drives the residual to rounding level
    for _ in range(3):
        fx = p_bar ** m * (1.0 - p_bar) ** (total - m)
        slope = fx * (m / p_bar - (total - m) / (1.0 - p_bar))
        if slope == 0.0 or not math.isfinite(slope):
            break
        step = (fx - delta) / slope
        candidate = p_bar - step
        if not (0.0 < candidate < 1.0):
            break
        p_bar = candidate
    return DensityPair(p, p_bar, delta, H)


# ---------------------------------------------------------------------------
# subset machinery

def subset_deviation(g: Graph, p: float, U) -> float:
    """|e(U) - p|U|^2/2| / n^2 for one subset; the P1 statistic."""
    u = len(set(int(x) for x in U))
    return abs(edge_count_within(g, U) - 0.5 * p * u * u) / g.n ** 2


def _all_subset_edge_counts(g: Graph) -> list[int]:
    """e(U) for every subset bitmask of the vertex set (n <= 20)."""
    n = g.n
    masks = [0] * n
    for u in range(n):
        row = 0
        for v in np.nonzero(g.adj[u])[0]:
            row |= 1 << int(v)
        masks[u] = row
    e = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = (s & -s).bit_length() - 1
        rest = s ^ (1 << low)
        e[s] = e[rest] + (masks[low] & rest).bit_count()
    return e


def _mask_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _sampled_subsets(g: Graph, budget: SampleBudget, tag: str):
    """Full vertex set first, then random subsets at the rotating sizes."""
    n = g.n
    rng = substream(budget.seed, tag)
    yield np.arange(n, dtype=np.int64)
    sizes = [max(1, n // 4), max(1, n // 2), max(1, (3 * n) // 4)]
    for k in range(budget.samples):
        s = sizes[k % len(sizes)]
        yield np.sort(rng.choice(n, size=s, replace=False)).astype(np.int64)


def check_p1(g: Graph, p: float, budget: SampleBudget) -> PropertyDeviation:
    """Worst |e(U) - p|U|^2/2| / n^2 over examined subsets U."""
    n = g.n
    if budget.exhaustive:
        if n > 20:
            raise ValueError("exhaustive subset scan allowed only for n <= 20")
        e = _all_subset_edge_counts(g)
        best, best_mask = -1.0, 0
        for s in range(1 << n):
            u = s.bit_count()
            dev = abs(e[s] - 0.5 * p * u * u) / n ** 2
            if dev > best:
                best, best_mask = dev, s
        return PropertyDeviation(PropertyKind.P1, best, witness=_mask_vertices(best_mask),
                                 samples=1 << n, exhaustive=True)
    best, witness, count = -1.0, None, 0
    for U in _sampled_subsets(g, budget, "p1"):
        count += 1
        dev = subset_deviation(g, p, U)
        if dev > best:
            best, witness = dev, tuple(U.tolist())
    return PropertyDeviation(PropertyKind.P1, best, witness=witness,
                             samples=count, exhaustive=False)


def check_p2(g: Graph, p: float, budget: SampleBudget) -> PropertyDeviation:
    """P1 restricted to subsets of size floor(n/2)."""
    n = g.n
    half = n // 2
    if budget.exhaustive:
        if n > 20:
            raise ValueError("exhaustive subset scan allowed only for n <= 20")
        e = _all_subset_edge_counts(g)
        best, best_mask, count = -1.0, 0, 0
        for s in range(1 << n):
            if s.bit_count() != half:
                continue
            count += 1
            dev = abs(e[s] - 0.5 * p * half * half) / n ** 2
            if dev > best:
                best, best_mask = dev, s
        return PropertyDeviation(PropertyKind.P2, best, witness=_mask_vertices(best_mask),
                                 samples=count, exhaustive=True)
    rng = substream(budget.seed, "p2")
    best, witness = -1.0, None
    for _ in range(budget.samples):
        U = np.sort(rng.choice(n, size=half, replace=False)).astype(np.int64)
        dev = subset_deviation(g, p, U)
        if dev > best:
            best, witness = dev, tuple(U.tolist())
    return PropertyDeviation(PropertyKind.P2, best, witness=witness,
                             samples=budget.samples, exhaustive=False)


def check_p3(g: Graph, p: float, tol: float = 1e-10) -> PropertyDeviation:
    """Edge count and the two largest-in-absolute-value adjacency eigenvalues.

    Components: (e(G) - p n^2/2)/n^2, (lambda1 - p n)/n and lambda2/n, with
    eigenvalues from a full symmetric diagonalization (intended for
    n <= 2000).  Ties in |lambda| rank the more positive eigenvalue first.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    try:
        eigs = np.linalg.eigvalsh(g.adj.astype(np.float64))
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed to converge: {exc}") from exc
    order = sorted(range(n), key=lambda i: (-abs(eigs[i]), -eigs[i]))
    lam1, lam2 = float(eigs[order[0]]), float(eigs[order[1]])
    edge_dev = (g.edge_count() - 0.5 * p * n * n) / n ** 2
    lam1_dev = (lam1 - p * n) / n
    lam2_norm = lam2 / n
    deviation = max(abs(edge_dev), abs(lam1_dev), abs(lam2_norm))
    return PropertyDeviation(
        PropertyKind.P3, deviation, samples=1, exhaustive=True,
        components={
            "edge_dev": edge_dev,
            "lambda1": lam1,
            "lambda2": lam2,
            "lambda1_dev": lam1_dev,
            "lambda2_norm": lam2_norm,
        },
    )


def check_p4(g: Graph, p: float, t: int) -> PropertyDeviation:
    """Labeled t-cycle count against p**t n**t, for even t >= 4."""
    if t < 4 or t % 2:
        raise ValueError("t must be an even integer >= 4")
    n = g.n
    count = count_labeled(g, cycle(t))
    expected = p ** t * float(n) ** t
    cycle_dev = abs(count - expected) / float(n) ** t
    edge_dev = abs(g.edge_count() - 0.5 * p * n * n) / n ** 2
    return PropertyDeviation(
        PropertyKind.P4, cycle_dev, samples=1, exhaustive=True,
        components={"edge_dev": edge_dev, "cycle_count": count, "expected": expected},
    )


def check_p5(g: Graph, p: float, alpha: float, budget: SampleBudget) -> PropertyDeviation:
    """Worst |e(U, V\\U) - p a(1-a) n^2| / n^2 over sets of size round(alpha*n).

    alpha must stay below 1/2: the half-split cut statistic on its own does
    not force random-like edge distribution, so it is rejected here.
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(
            "alpha must lie in (0, 1/2); the half-split cut count does not "
            "pin down the edge distribution"
        )
    n = g.n
    size = round(alpha * n)
    if size < 1 or size >= n:
        raise ValueError("alpha*n rounds to an empty or full set")
    expected = p * alpha * (1.0 - alpha) * n * n
    everyone = np.arange(n, dtype=np.int64)

    def cut_dev(U: np.ndarray) -> float:
        rest = np.setdiff1d(everyone, U, assume_unique=True)
        return abs(edge_count_between(g, U, rest) - expected) / n ** 2

    if budget.exhaustive:
        if n > 20:
            raise ValueError("exhaustive subset scan allowed only for n <= 20")
        e = _all_subset_edge_counts(g)
        full = (1 << n) - 1
        total = e[full]
        best, best_mask, count = -1.0, 0, 0
        for s in range(1 << n):
            if s.bit_count() != size:
                continue
            count += 1
            cut = total - e[s] - e[full ^ s]
            dev = abs(cut - expected) / n ** 2
            if dev > best:
                best, best_mask = dev, s
        return PropertyDeviation(PropertyKind.P5, best, witness=_mask_vertices(best_mask),
                                 samples=count, exhaustive=True)
    rng = substream(budget.seed, "p5")
    best, witness = -1.0, None
    for _ in range(budget.samples):
        U = np.sort(rng.choice(n, size=size, replace=False)).astype(np.int64)
        dev = cut_dev(U)
        if dev > best:
            best, witness = dev, tuple(U.tolist())
    return PropertyDeviation(PropertyKind.P5, best, witness=witness,
                             samples=budget.samples, exhaustive=False)


# ---------------------------------------------------------------------------
# pattern-distribution checkers

def _sampled_tuples(n: int, h: int, budget: SampleBudget, tag: str):
    """Disjoint h-tuples of equal-size sets, sizes rotating up to n//h."""
    rng = substream(budget.seed, tag)
    cap = n // h
    if cap < 1:
        return
    sizes = sorted({max(1, cap // 4), max(1, cap // 2), max(1, (3 * cap) // 4), cap})
    for k in range(budget.samples):
        s = sizes[k % len(sizes)]
        perm = rng.permutation(n)
        yield [np.sort(perm[i * s:(i + 1) * s]).astype(np.int64) for i in range(h)], rng


def check_pstar_H(g: Graph, H: PatternGraph, p: float, budget: SampleBudget) -> PropertyDeviation:
    """Permuted induced-copy counts against delta(p) * s**h.

    For each sampled tuple of h disjoint equal-size sets and each permutation
    sigma (all of them for h <= 4, a sampled batch above), the deviation is
    |count - delta(p) s**h| / n**h.  The s**h-normalized maximum is reported
    alongside in ``components`` since small tuples are vacuous under the
    n**h convention.
    """
    n, h = g.n, H.h
    delta = delta_H(H, p)
    all_sigmas = list(permutations(range(h)))
    best, best_sh = -1.0, -1.0
    witness = None
    examined = 0
    for sets, rng in _sampled_tuples(n, h, budget, "pstar"):
        s = len(sets[0])
        if len(all_sigmas) <= 24:
            sigmas = all_sigmas
        else:
            sigmas = [tuple(rng.permutation(h)) for _ in range(24)]
        for sigma in sigmas:
            examined += 1
            cnt = count_induced_sigma(g, H, sets, sigma)
            gap = abs(cnt - delta * float(s) ** h)
            dev = gap / float(n) ** h
            dev_sh = gap / float(s) ** h
            if dev > best:
                best = dev
                witness = (tuple(tuple(x.tolist()) for x in sets), tuple(sigma))
            best_sh = max(best_sh, dev_sh)
    if examined == 0:   # graph smaller than the pattern: vacuously satisfied
        best = best_sh = 0.0
    return PropertyDeviation(
        PropertyKind.PSTAR_H, best, witness=witness, samples=examined,
        exhaustive=False, components={"deviation_sh": best_sh},
    )


def check_p_H(g: Graph, H: PatternGraph, p: float, budget: SampleBudget) -> PropertyDeviation:
    """Tuple-restricted labeled-copy counts against p**m h! s**h.

    The statistic sums the single-placement count over all h! orderings of
    the sets, which is where the h! in the reference value comes from.
    """
    n, h = g.n, H.h
    factor = p ** H.m * math.factorial(h)
    orderings = list(permutations(range(h)))
    best, best_sh = -1.0, -1.0
    witness = None
    examined = 0
    for sets, _rng in _sampled_tuples(n, h, budget, "ph"):
        s = len(sets[0])
        examined += 1
        total = 0
        for tau in orderings:
            total += count_labeled_tuple(g, H, [sets[t] for t in tau])
        gap = abs(total - factor * float(s) ** h)
        dev = gap / float(n) ** h
        dev_sh = gap / float(s) ** h
        if dev > best:
            best = dev
            witness = tuple(tuple(x.tolist()) for x in sets)
        best_sh = max(best_sh, dev_sh)
    if examined == 0:   # graph smaller than the pattern: vacuously satisfied
        best = best_sh = 0.0
    return PropertyDeviation(
        PropertyKind.PH, best, witness=witness, samples=examined,
        exhaustive=False, components={"deviation_sh": best_sh},
    )
