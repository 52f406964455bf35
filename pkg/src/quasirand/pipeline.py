"""End-to-end verdict pipeline: density-or-conjugate quasi-randomness.

From a graph whose induced-pattern distribution is claimed to match density
p, the pipeline (1) draws a seeded random equipartition (standing in for a
true regularity partition -- every report carries that caveat), (2) measures
pair densities and sampled regularity flags, (3) builds the reduced weighted
graph on the parts, (4) runs the per-clique density reconstruction and
colors each part pair by which of the two conjugate densities it matched,
(5) applies the minority rule to the colors, and (6) confirms the winner
with the subset-edge-count check.  Any reconstruction violation, split
tally, or failed confirmation yields INCONCLUSIVE rather than a wrong
verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import comb

import numpy as np

from .graphs import Graph, WeightedCompleteGraph
from .lemmas import pair_regularity, random_equipartition
from .patterns import PatternGraph
from .quasirandom import DensityPair, PropertyDeviation, SampleBudget, check_p1, conjugate
from .reconstruct import EdgeLabel, Verdict, reconstruct
from .rng import substream


class AnalyzeVerdict(str, Enum):
    P_QUASI = "P_QUASI"
    PBAR_QUASI = "PBAR_QUASI"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class AnalyzeConfig:
    k: int                               # partition order
    r: int                               # clique size for reconstruction
    eps: float = 0.12                    # density band half-width / regularity gamma
    delta_tol: float = 0.5               # product tolerance as a fraction of delta(p)
    p1_threshold: float = 0.02           # final confirmation bound
    seed: int = 0
    budget: SampleBudget = field(default_factory=SampleBudget)
    kr_enumerate_cap: int = 10_000       # enumerate all K_r's up to this many
    kr_sample: int = 1_000               # sampled K_r count above the cap


@dataclass
class QuasiRandomReport:
    n: int
    edge_density: float
    pattern: PatternGraph
    p: float
    density_pair: DensityPair
    k: int
    r: int
    regular_fraction: float
    pair_densities: np.ndarray           # k x k
    kr_examined: int
    kr_verdicts: list                    # (vertex tuple, Verdict)
    blue_pairs: int                      # colored near p
    red_pairs: int                       # colored near the conjugate
    uncolored_pairs: int
    verdict: AnalyzeVerdict
    final_p1: PropertyDeviation | None
    diagnostics: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def analyze(g: Graph, H: PatternGraph, p: float, config: AnalyzeConfig) -> QuasiRandomReport:
    """Classify g as p-quasi-random, conjugate-quasi-random, or inconclusive."""
    h = H.h
    k, r = config.k, config.r
    if r < h + 2:
        raise ValueError("need r >= h + 2 for the reconstruction step")
    if k < r:
        raise ValueError("need k >= r")
    if g.n < k * h:
        raise ValueError("graph too small for the requested partition order")

    dp = conjugate(H, p)
    partition = random_equipartition(g.n, k, config.seed)
    notes = [
        "partition: seeded random equipartition (regularity-lemma substitute); "
        "regularity flags below are sampled and can only refute",
    ]

    # pair densities and sampled regularity flags
    rng = substream(config.seed, "analyze-pairs")
    density = np.zeros((k, k))
    regular = np.zeros((k, k), dtype=bool)
    n_regular = 0
    for i in range(k):
        for j in range(i + 1, k):
            stat = pair_regularity(g, partition.parts[i], partition.parts[j],
                                   config.eps, rng=rng, samples=config.budget.samples)
            density[i, j] = density[j, i] = stat.density
            regular[i, j] = regular[j, i] = stat.regular
            n_regular += int(stat.regular)
    total_pairs = comb(k, 2)
    regular_fraction = n_regular / total_pairs

    # K_r selection inside the reduced weighted graph
    if comb(k, r) <= config.kr_enumerate_cap:
        subsets = list(combinations(range(k), r))
    else:
        pick = substream(config.seed, "analyze-kr")
        chosen = set()
        while len(chosen) < config.kr_sample:
            chosen.add(tuple(np.sort(pick.choice(k, size=r, replace=False)).tolist()))
        subsets = sorted(chosen)

    kr_verdicts = []
    pair_color: dict = {}
    conflicts = []
    mixed = []
    examined = 0
    for S in subsets:
        if not all(regular[a, b] for a, b in combinations(S, 2)):
            continue
        examined += 1
        sub = WeightedCompleteGraph(density[np.ix_(S, S)])
        cls = reconstruct(sub, H, p, config.eps, delta_tol=config.delta_tol * dp.delta)
        kr_verdicts.append((S, cls.verdict))
        if cls.verdict is Verdict.MIXED_VIOLATION:
            mixed.append((S, cls.witness_phi, cls.max_phi_deviation))
            continue
        for (a, b), lab in cls.labels.items():
            key = (S[a], S[b])
            prev = pair_color.get(key)
            if prev is None:
                pair_color[key] = lab
            elif prev is not lab:
                conflicts.append(key)

    blue = sum(1 for lab in pair_color.values() if lab is EdgeLabel.AT_P)
    red = sum(1 for lab in pair_color.values() if lab is EdgeLabel.AT_PBAR)
    uncolored = total_pairs - len(pair_color)

    report = QuasiRandomReport(
        n=g.n, edge_density=g.density(), pattern=H, p=p, density_pair=dp,
        k=k, r=r, regular_fraction=regular_fraction, pair_densities=density,
        kr_examined=examined, kr_verdicts=kr_verdicts,
        blue_pairs=blue, red_pairs=red, uncolored_pairs=uncolored,
        verdict=AnalyzeVerdict.INCONCLUSIVE, final_p1=None, notes=notes,
    )

    if examined == 0:
        report.diagnostics.append("no all-regular r-subset available for reconstruction")
        # diagnostic-only reconstruction on flag-ignoring cliques, so the
        # per-pair classification still surfaces what went wrong
        probe_mixed = []
        for S in subsets[:20]:
            sub = WeightedCompleteGraph(density[np.ix_(S, S)])
            cls = reconstruct(sub, H, p, config.eps, delta_tol=config.delta_tol * dp.delta)
            report.kr_verdicts.append((S, cls.verdict))
            if cls.verdict is Verdict.MIXED_VIOLATION:
                probe_mixed.append((S, cls.witness_phi, cls.max_phi_deviation))
        if probe_mixed:
            report.diagnostics.append(
                f"MIXED_VIOLATION in {len(probe_mixed)} of "
                f"{min(len(subsets), 20)} diagnostic cliques (reconstructed "
                "despite failed regularity flags)"
            )
            report.diagnostics.extend(
                f"clique {S}: worst placement {phi}, deviation {dev:.4g}"
                for S, phi, dev in probe_mixed[:5]
            )
        return report
    if mixed:
        report.diagnostics.append(
            f"MIXED_VIOLATION in {len(mixed)} of {examined} reconstructed cliques"
        )
        report.diagnostics.extend(
            f"clique {S}: worst placement {phi}, deviation {dev:.4g}"
            for S, phi, dev in mixed[:5]
        )
        return report
    if conflicts:
        report.diagnostics.append(
            f"{len(conflicts)} pair(s) received both colors across cliques"
        )
        return report

    # minority rule on the colored pairs
    limit = 0.5 * config.eps * total_pairs
    if uncolored > limit:
        report.diagnostics.append(
            f"{uncolored} of {total_pairs} pairs left uncolored (limit {limit:.1f})"
        )
        return report
    if red <= limit and blue > limit:
        winner, winning_density = AnalyzeVerdict.P_QUASI, p
    elif blue <= limit and red > limit:
        winner, winning_density = AnalyzeVerdict.PBAR_QUASI, dp.p_bar
    else:
        report.diagnostics.append(
            f"split color tally: {blue} near p vs {red} near the conjugate "
            f"(minority limit {limit:.1f})"
        )
        return report

    confirm_budget = SampleBudget(samples=config.budget.samples,
                                  seed=config.seed, exhaustive=False)
    final = check_p1(g, winning_density, confirm_budget)
    report.final_p1 = final
    if final.deviation < config.p1_threshold:
        report.verdict = winner
    else:
        report.diagnostics.append(
            f"confirmation failed: subset-edge deviation {final.deviation:.4g} "
            f">= threshold {config.p1_threshold}"
        )
    return report
