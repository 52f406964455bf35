"""Recovery of per-pair densities from induced-placement products.

Given a weighted complete graph W and a pattern H, every injective placement
phi of the pattern's vertices into W has a product value W(phi).  When all
these values sit at the reference value delta(p), the per-pair weights are
forced into the two-point set {p, p_bar}: taking logs turns the per-h-subset
products into a linear system on the pair quantities

    y_ij = m*log(x_ij) + (C(h,2)-m)*log(1 - x_ij),

whose coefficient matrix is exactly the h-subsets-versus-pairs inclusion
matrix, full column rank for r >= h+2.  Solving it and inverting the scalar
map y -> x (two-to-one around its peak) recovers each weight up to the
conjugate pair; the actual weight selects the branch.  The classification
then either is uniform, or -- only when gcd(C(h,2), m) > 1 -- may deviate on
the pairs at one single vertex; anything else is a violation, witnessed by a
placement whose blue/red counts break the integer balance
a(phi)*m = b(phi)*(C(h,2)-m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from math import factorial

import numpy as np

from . import _kernels
from .graphs import WeightedCompleteGraph
from .inclusion import colex_subsets, solve_log_system
from .patterns import PatternGraph
from .quasirandom import DensityPair, conjugate

# enumeration caps
PHI_MAX_R = 10
PHI_MAX_H = 5
DICHOTOMY_MAX_R = 7
DICHOTOMY_MAX_H = 4


class EdgeLabel(str, Enum):
    AT_P = "AT_P"
    AT_PBAR = "AT_PBAR"
    UNRESOLVED = "UNRESOLVED"


class Verdict(str, Enum):
    UNIFORM_P = "UNIFORM_P"
    UNIFORM_PBAR = "UNIFORM_PBAR"
    HUB_P = "HUB_P"
    HUB_PBAR = "HUB_PBAR"
    MIXED_VIOLATION = "MIXED_VIOLATION"


def all_injective_maps(r: int, h: int) -> np.ndarray:
    """All injective maps [h] -> [r] as an array of shape (r!/(r-h)!, h).

    Refuses beyond the enumeration cap r <= 10, h <= 5.
    """
    if h > r:
        raise ValueError("need r >= h")
    if r > PHI_MAX_R or h > PHI_MAX_H:
        raise ValueError(f"enumeration cap exceeded (r <= {PHI_MAX_R}, h <= {PHI_MAX_H})")
    return np.array(list(permutations(range(r), h)), dtype=np.int64)


@dataclass
class PhiEvaluation:
    phis: np.ndarray
    values: np.ndarray
    max_deviation: float | None = None
    worst_phi: tuple | None = None

    def as_dict(self) -> dict:
        return {tuple(int(x) for x in row): float(v)
                for row, v in zip(self.phis, self.values)}


def _phi_values(W: WeightedCompleteGraph, H: PatternGraph, phis: np.ndarray) -> np.ndarray:
    values = np.ones(phis.shape[0])
    wm = W.weights
    for i, j in H.sorted_edges():
        values *= wm[phis[:, i], phis[:, j]]
    for i, j in H.nonedges():
        values *= 1.0 - wm[phis[:, i], phis[:, j]]
    return values


def evaluate_all_phi(W: WeightedCompleteGraph, H: PatternGraph,
                     p: float | None = None) -> PhiEvaluation:
    """W(phi) for every injective phi; with p given, also the worst
    |W(phi) - delta(p)|."""
    phis = all_injective_maps(W.r, H.h)
    values = _phi_values(W, H, phis)
    if p is None:
        return PhiEvaluation(phis, values)
    delta = conjugate(H, p).delta
    devs = np.abs(values - delta)
    worst = int(np.argmax(devs))
    return PhiEvaluation(phis, values, float(devs[worst]),
                         tuple(int(x) for x in phis[worst]))


# ---------------------------------------------------------------------------
# scalar inversion of y = m log x + (C - m) log(1 - x)

def _log_density(m: int, total: int, x: float) -> float:
    return m * math.log(x) + (total - m) * math.log1p(-x)


def _root_on_bracket(m: int, total: int, y: float, lo: float, hi: float,
                     increasing: bool, x0: float) -> float:
    """Safeguarded Newton on a monotone bracket, bisection fallback."""
    x = min(max(x0, lo), hi)
    for _ in range(120):
        gx = _log_density(m, total, x) - y
        if gx == 0.0:
            return x
        below = (gx < 0.0) == increasing   # x sits left of the root
        if below:
            lo = x
        else:
            hi = x
        gp = m / x - (total - m) / (1.0 - x)
        step = gx / gp if gp != 0.0 else 0.0
        xn = x - step
        if not (lo < xn < hi) or not math.isfinite(xn):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-16 * max(1.0, abs(x)):
            return xn
        x = xn
    return x


def invert_log_density(m: int, total: int, y: float,
                       seed_low: float, seed_high: float) -> tuple[float, float]:
    """The (low, high) roots of m log x + (C-m) log(1-x) = y.

    Monotone patterns (m equal to 0 or C) have a single root, returned
    twice.  A y value at or above the peak collapses both roots to the peak.
    """
    if m == 0:
        x = -math.expm1(y / total)
        return x, x
    if m == total:
        x = math.exp(y / m)
        return x, x
    peak = m / total
    y_peak = _log_density(m, total, peak)
    if y >= y_peak:
        return peak, peak
    lo = peak
    while _log_density(m, total, lo) > y:
        lo *= 0.5
        if lo < 1e-300:
            break
    left = _root_on_bracket(m, total, y, lo, peak, True,
                            seed_low if lo < seed_low < peak else 0.5 * (lo + peak))
    gap = 1.0 - peak
    hi = 1.0 - gap
    while _log_density(m, total, hi) > y:
        gap *= 0.5
        hi = 1.0 - gap
        if gap < 1e-300:
            break
    right = _root_on_bracket(m, total, y, peak, hi, False,
                             seed_high if peak < seed_high < hi else 0.5 * (peak + hi))
    return left, right


# ---------------------------------------------------------------------------
# classification

@dataclass
class EdgeClassification:
    labels: dict                      # (i, j) -> EdgeLabel
    recovered_x: dict                 # (i, j) -> float
    hypothesis_ok: bool
    max_phi_deviation: float
    verdict: Verdict
    density_pair: DensityPair
    witness_phi: tuple | None = None
    hub_vertex: int | None = None
    notes: list = field(default_factory=list)

    def count(self, label: EdgeLabel) -> int:
        return sum(1 for v in self.labels.values() if v is label)


@dataclass
class ColorBalance:
    phi: tuple
    b_phi: int                        # pattern edges mapped to blue (at-p) pairs
    a_phi: int                        # pattern non-edges mapped to blue pairs


def color_balance(classification: EdgeClassification, H: PatternGraph,
                  phi) -> tuple[ColorBalance, bool]:
    """Blue-edge counts of one placement and whether the integer balance
    a*m = b*(C(h,2)-m) holds exactly.  Every image pair must be resolved."""
    ph = tuple(int(x) for x in phi)
    labels = classification.labels
    b = a = 0
    for i in range(H.h):
        for j in range(i + 1, H.h):
            u, v = ph[i], ph[j]
            key = (u, v) if u < v else (v, u)
            lab = labels[key]
            if lab is EdgeLabel.UNRESOLVED:
                raise ValueError(f"pair {key} is unresolved; balance undefined")
            if lab is EdgeLabel.AT_P:
                if (i, j) in H.edges:
                    b += 1
                else:
                    a += 1
    holds = a * H.m == b * (H.total_pairs - H.m)
    return ColorBalance(ph, b, a), holds


def _eq19_witness(classification: EdgeClassification, H: PatternGraph, r: int):
    for row in all_injective_maps(r, H.h):
        phi = tuple(int(x) for x in row)
        try:
            _, holds = color_balance(classification, H, phi)
        except ValueError:
            continue
        if not holds:
            return phi
    return None


def reconstruct(W: WeightedCompleteGraph, H: PatternGraph, p: float, eps: float,
                delta_tol: float | None = None, min_r: int | None = None) -> EdgeClassification:
    """Classify every pair of W as sitting at p, at its conjugate, or neither.

    Pipeline: (1) check all placement products against delta(p) within
    delta_tol (default 1e-6 * delta); (2) average the log-products over the
    placements inside each h-subset and solve the inclusion-matrix system for
    the per-pair log quantities; (3) invert each to the conjugate root pair
    and classify the actual weight to whichever target it matches within eps;
    (4) apply the gcd dichotomy: with gcd(C(h,2), m) = 1 any non-uniform
    classification is a violation, otherwise a single-vertex hub is accepted.
    """
    h, r = H.h, W.r
    required = h + 2 if min_r is None else max(h + 2, int(min_r))
    if r < required:
        raise ValueError(f"need r >= {required}")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    dp = conjugate(H, p)
    p_bar, delta = dp.p_bar, dp.delta
    degenerate = p_bar == p
    if not degenerate and eps >= abs(p - p_bar) / 2.0:
        raise ValueError(
            f"eps={eps} too coarse: the bands around p and p_bar overlap "
            f"(|p - p_bar|/2 = {abs(p - p_bar) / 2:.6g})"
        )
    dtol = (1e-6 * delta) if delta_tol is None else float(delta_tol)

    ev = evaluate_all_phi(W, H, p)
    hypothesis_ok = ev.max_deviation <= dtol

    pair_list = colex_subsets(r, 2)
    boundary = [(i, j) for i, j in pair_list if W.weights[i, j] in (0.0, 1.0)]
    if boundary:
        labels = {pair: EdgeLabel.UNRESOLVED for pair in pair_list}
        return EdgeClassification(
            labels, {}, hypothesis_ok, ev.max_deviation, Verdict.MIXED_VIOLATION,
            dp, witness_phi=ev.worst_phi,
            notes=[f"weights at the boundary of [0,1] on pairs {boundary}; "
                   "log recovery impossible"],
        )

    # mean log-product per h-subset; scale matches one pair-sum per subset
    logs = np.log(ev.values)
    subsets = colex_subsets(r, h)
    subset_index = {s: i for i, s in enumerate(subsets)}
    rhs = np.zeros(len(subsets))
    for row, lg in zip(ev.phis, logs):
        rhs[subset_index[tuple(sorted(int(x) for x in row))]] += lg
    rhs /= 2.0 * factorial(h - 2)
    system = solve_log_system(H, r, rhs)

    labels: dict = {}
    recovered: dict = {}
    m, total = H.m, H.total_pairs
    for idx, (i, j) in enumerate(system.matrix.col_pairs):
        y = float(system.solution[idx])
        low, high = invert_log_density(m, total, y, min(p, p_bar), max(p, p_bar))
        w = W.weights[i, j]
        root_p, root_pbar = (low, high) if p <= p_bar else (high, low)
        if abs(w - p) <= eps and abs(root_p - p) <= eps:
            labels[(i, j)] = EdgeLabel.AT_P
            recovered[(i, j)] = root_p
        elif not degenerate and abs(w - p_bar) <= eps and abs(root_pbar - p_bar) <= eps:
            labels[(i, j)] = EdgeLabel.AT_PBAR
            recovered[(i, j)] = root_pbar
        else:
            labels[(i, j)] = EdgeLabel.UNRESOLVED
            recovered[(i, j)] = low if abs(low - w) <= abs(high - w) else high

    n_p = sum(1 for v in labels.values() if v is EdgeLabel.AT_P)
    n_pbar = sum(1 for v in labels.values() if v is EdgeLabel.AT_PBAR)
    n_unresolved = len(labels) - n_p - n_pbar

    result = EdgeClassification(labels, recovered, hypothesis_ok,
                                ev.max_deviation, Verdict.MIXED_VIOLATION, dp)

    if n_unresolved or not hypothesis_ok:
        if not hypothesis_ok:
            result.witness_phi = ev.worst_phi
            result.notes.append(
                f"placement products deviate up to {ev.max_deviation:.3g} "
                f"from {delta:.3g} (tolerance {dtol:.3g})"
            )
        if n_unresolved:
            result.notes.append(f"{n_unresolved} pair(s) match neither density band")
        return result

    if n_pbar == 0:
        result.verdict = Verdict.UNIFORM_P
        return result
    if n_p == 0:
        result.verdict = Verdict.UNIFORM_PBAR
        return result

    if H.pair_edge_gcd == 1:
        result.witness_phi = _eq19_witness(result, H, r)
        result.notes.append("gcd(C(h,2), m) = 1 forbids any non-uniform classification")
        return result

    minority_label = EdgeLabel.AT_P if n_p < n_pbar else EdgeLabel.AT_PBAR
    minority = [pair for pair, lab in labels.items() if lab is minority_label]
    if n_p == n_pbar:
        minority = []  # a tie cannot be a hub
    common = set(range(r))
    for i, j in minority:
        common &= {i, j}
    if minority and common and len(minority) <= r - 1:
        result.hub_vertex = min(common)
        result.verdict = (Verdict.HUB_P if minority_label is EdgeLabel.AT_P
                          else Verdict.HUB_PBAR)
        return result

    result.witness_phi = _eq19_witness(result, H, r)
    result.notes.append("off-density pairs are not concentrated at one vertex")
    return result


# ---------------------------------------------------------------------------
# exhaustive dichotomy search over two-colorings

@dataclass
class DichotomyReport:
    pattern: PatternGraph
    r: int
    p: float
    p_bar: float
    delta: float
    gcd: int
    colorings: int
    min_max_deviation: float
    witness_blue_pairs: tuple
    achieves_zero: bool
    hub_deviation: float


def _phi_pair_masks(H: PatternGraph, r: int, pair_bit: dict) -> tuple[np.ndarray, np.ndarray]:
    phis = all_injective_maps(r, H.h)
    F = phis.shape[0]
    edge_masks = np.zeros(F, dtype=np.int64)
    nonedge_masks = np.zeros(F, dtype=np.int64)
    for f in range(F):
        row = phis[f]
        em = nm = 0
        for i, j in H.sorted_edges():
            u, v = int(row[i]), int(row[j])
            em |= 1 << pair_bit[(u, v) if u < v else (v, u)]
        for i, j in H.nonedges():
            u, v = int(row[i]), int(row[j])
            nm |= 1 << pair_bit[(u, v) if u < v else (v, u)]
        edge_masks[f] = em
        nonedge_masks[f] = nm
    return edge_masks, nonedge_masks


def _deviation_table(H: PatternGraph, p: float, p_bar: float, delta: float) -> np.ndarray:
    m, total = H.m, H.total_pairs
    b = np.arange(m + 1)[:, None]
    a = np.arange(total - m + 1)[None, :]
    vals = (p ** b) * (p_bar ** (m - b)) * ((1 - p) ** a) * ((1 - p_bar) ** (total - m - a))
    return np.abs(vals - delta)


def _coloring_max_deviation(blue_mask: int, edge_masks, nonedge_masks, dev_table) -> float:
    worst = 0.0
    for em, nm in zip(edge_masks.tolist(), nonedge_masks.tolist()):
        b = (blue_mask & em).bit_count()
        a = (blue_mask & nm).bit_count()
        worst = max(worst, float(dev_table[b, a]))
    return worst


def gcd_dichotomy_search(H: PatternGraph, r: int, p: float,
                         tol: float = 1e-9) -> DichotomyReport:
    """Scan every two-coloring of the pairs of K_r by {p, p_bar} with both
    colors present, and report the smallest achievable worst placement
    deviation |W(phi) - delta(p)|.

    For gcd(C(h,2), m) = 1 the minimum stays away from zero; for gcd > 1
    the single-vertex hub coloring reaches (numerically) zero.
    """
    if r > DICHOTOMY_MAX_R or H.h > DICHOTOMY_MAX_H:
        raise ValueError(
            f"exhaustive regime capped at r <= {DICHOTOMY_MAX_R}, h <= {DICHOTOMY_MAX_H}"
        )
    if r < H.h:
        raise ValueError("need r >= h")
    if H.m in (0, H.total_pairs):
        raise ValueError(
            "complete and empty patterns have a degenerate conjugate; "
            "a two-density coloring is meaningless for them"
        )
    dp = conjugate(H, p)
    pairs = colex_subsets(r, 2)
    pair_bit = {pair: k for k, pair in enumerate(pairs)}
    edge_masks, nonedge_masks = _phi_pair_masks(H, r, pair_bit)
    dev_table = _deviation_table(H, p, dp.p_bar, dp.delta)
    n_bits = len(pairs)
    best, best_mask = _kernels.coloring_scan(edge_masks, nonedge_masks, dev_table, n_bits)

    hub_blue = 0
    for pair, k in pair_bit.items():
        if r - 1 not in pair:
            hub_blue |= 1 << k
    hub_dev = _coloring_max_deviation(hub_blue, edge_masks, nonedge_masks, dev_table)

    witness = tuple(pair for pair, k in pair_bit.items() if best_mask >> k & 1)
    return DichotomyReport(
        pattern=H, r=r, p=p, p_bar=dp.p_bar, delta=dp.delta,
        gcd=H.pair_edge_gcd, colorings=(1 << n_bits) - 2,
        min_max_deviation=best, witness_blue_pairs=witness,
        achieves_zero=best <= tol, hub_deviation=hub_dev,
    )
