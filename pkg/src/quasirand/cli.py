"""Command-line front end and the JSON report schema.

Reports are ``{"meta": ..., "input": ..., "results": ...}``; every float in
``input``/``results`` is rendered as a decimal string with 12 significant
digits so repeated runs with the same configuration produce byte-identical
numeric fields (wall-clock and timestamp live in ``meta`` and are exempt).
Exit codes: 0 success, 1 verdict-level failure (``--expect`` mismatch or a
failing lemma suite under ``--expect``), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__
from ._kernels import USE_NUMBA, backend
from .graphs import (
    GraphFormatError,
    WeightedCompleteGraph,
    complete_bipartite,
    complete_graph,
    generate_counterexample,
    generate_gnp,
    read_graph,
    read_weighted,
    write_graph,
    write_weighted,
)
from .lemmas import (
    EdgeColoring,
    classify_pairwise_regular_up_to,
    counting_lemma_experiment,
    find_bichromatic_kr,
    kr_edge_coverage,
)
from .patterns import parse_pattern, path3
from .pipeline import AnalyzeConfig, analyze
from .rng import substream
from .quasirandom import (
    SampleBudget,
    check_p1,
    check_p2,
    check_p3,
    check_p4,
    check_p5,
    check_p_H,
    check_pstar_H,
    conjugate,
)
from .reconstruct import reconstruct
from .counting import (
    count_induced,
    count_induced_phi,
    count_induced_sigma,
    count_labeled,
    count_labeled_tuple,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2


# ---------------------------------------------------------------------------
# report plumbing

def _fmt(value):
    """Floats become 12-significant-digit decimal strings; containers recurse."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [_fmt(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_fmt(v) for v in value.tolist()]
    return value


def _report(command: str, config: dict, seed: int, input_desc: dict,
            results: dict, started: float) -> dict:
    return {
        "meta": {
            "tool": "quasirand",
            "version": __version__,
            "command": command,
            "backend": backend(),
            "config": _fmt(config),
            "seed": seed,
            "wallclock_s": round(time.time() - started, 3),
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
        "input": _fmt(input_desc),
        "results": _fmt(results),
    }


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _deviation_dict(dev) -> dict:
    return {
        "property": dev.property.value,
        "deviation": dev.deviation,
        "witness": dev.witness,
        "samples": dev.samples,
        "exhaustive": dev.exhaustive,
        "components": dev.components,
    }


# ---------------------------------------------------------------------------
# argument helpers

def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x != ""]


def _set_list(text: str) -> list[list[int]]:
    return [_int_list(chunk) for chunk in text.split(";") if chunk.strip() != ""]


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("QUASIRAND_SEED", "0"))


def _apply_threads(threads: int | None) -> None:
    if threads is None or not USE_NUMBA:
        return
    import numba

    numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))


# ---------------------------------------------------------------------------
# subcommands

def _cmd_count(args) -> int:
    H = parse_pattern(args.pattern)
    g = read_graph(args.graph)
    if args.sets:
        sets = _set_list(args.sets)
        if args.sigma:
            value = count_induced_sigma(g, H, sets, _int_list(args.sigma))
            print(f"induced_sigma {value}")
        elif args.phi:
            value = count_induced_phi(g, H, sets, _int_list(args.phi))
            print(f"induced_phi {value}")
        else:
            value = count_labeled_tuple(g, H, sets)
            print(f"labeled_tuple {value}")
        return EXIT_OK
    U = _int_list(args.vertices) if args.vertices else None
    print(f"labeled {count_labeled(g, H, U)}")
    print(f"induced {count_induced(g, H, U)}")
    return EXIT_OK


def _cmd_conjugate(args) -> int:
    H = parse_pattern(args.pattern)
    dp = conjugate(H, args.p)
    print(f"p {dp.p:.12g}")
    print(f"p_bar {dp.p_bar:.12g}")
    print(f"delta {dp.delta:.12g}")
    return EXIT_OK


def _cmd_props(args) -> int:
    started = time.time()
    seed = _resolve_seed(args)
    H = parse_pattern(args.pattern)
    g = read_graph(args.graph)
    budget = SampleBudget(samples=args.samples, seed=seed)
    results = {
        "P1": _deviation_dict(check_p1(g, args.p, budget)),
        "P2": _deviation_dict(check_p2(g, args.p, budget)),
        "P3": _deviation_dict(check_p3(g, args.p)),
        "P4": _deviation_dict(check_p4(g, args.p, args.t)),
        "P5": _deviation_dict(check_p5(g, args.p, args.alpha, budget)),
        "PH": _deviation_dict(check_p_H(g, H, args.p, budget)),
        "PstarH": _deviation_dict(check_pstar_H(g, H, args.p, budget)),
    }
    config = {"pattern": args.pattern, "p": args.p, "t": args.t,
              "alpha": args.alpha, "samples": args.samples}
    inp = {"graph": str(args.graph), "n": g.n, "edges": g.edge_count(),
           "density": g.density()}
    _emit(_report("props", config, seed, inp, results, started), args.out)
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    started = time.time()
    seed = _resolve_seed(args)
    H = parse_pattern(args.pattern)
    W = read_weighted(args.weights)
    cls = reconstruct(W, H, args.p, args.eps, delta_tol=args.delta_tol)
    results = {
        "verdict": cls.verdict.value,
        "hypothesis_ok": cls.hypothesis_ok,
        "max_phi_deviation": cls.max_phi_deviation,
        "p": cls.density_pair.p,
        "p_bar": cls.density_pair.p_bar,
        "delta": cls.density_pair.delta,
        "labels": {f"{i}-{j}": lab.value for (i, j), lab in cls.labels.items()},
        "recovered_x": {f"{i}-{j}": x for (i, j), x in cls.recovered_x.items()},
        "hub_vertex": cls.hub_vertex,
        "witness_phi": list(cls.witness_phi) if cls.witness_phi else None,
        "notes": cls.notes,
    }
    config = {"pattern": args.pattern, "p": args.p, "eps": args.eps,
              "delta_tol": args.delta_tol}
    inp = {"weights": str(args.weights), "r": W.r}
    _emit(_report("reconstruct", config, seed, inp, results, started), args.out)
    if args.expect and args.expect != cls.verdict.value:
        print(f"expected verdict {args.expect}, got {cls.verdict.value}",
              file=sys.stderr)
        return EXIT_VERDICT
    return EXIT_OK


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    if args.kind == "gnp":
        if args.n is None or args.p is None:
            raise ValueError("gnp needs --n and --p")
        obj = generate_gnp(args.n, args.p, seed)
    else:
        params: dict = {}
        if args.n is not None:
            params["n"] = args.n
        if args.alpha is not None:
            params["alpha"] = args.alpha
        if args.p1 is not None:
            params["p1"] = args.p1
        if args.p2 is not None:
            params["p2"] = args.p2
        if args.r is not None:
            params["r"] = args.r
        if args.p is not None:
            params["p"] = args.p
        if args.pattern is not None:
            params["pattern"] = parse_pattern(args.pattern)
        obj = generate_counterexample(args.kind, params, seed)
    if isinstance(obj, WeightedCompleteGraph):
        write_weighted(obj, args.out)
        extra = " (degenerate: p equals its conjugate)" if obj.meta.get("degenerate") else ""
        print(f"wrote weighted graph r={obj.r} to {args.out}{extra}")
    else:
        write_graph(obj, args.out)
        print(f"wrote graph n={obj.n} edges={obj.edge_count()} to {args.out}")
    return EXIT_OK


def _expected_nontrivial(graphs, outer: bool) -> bool:
    """Nontrivial survivors must be exactly the known pair of graphs."""
    nontrivial = []
    for g in graphs:
        e = g.edge_count()
        if e == 0 or e == g.n * (g.n - 1) // 2:
            continue
        nontrivial.append(tuple(sorted(g.degrees().tolist())))
    if outer:
        expected = {(1, 1, 1, 3), (0, 2, 2, 2)}
    else:
        expected = {(1, 1, 2), (0, 1, 1)}
    return set(nontrivial) == expected and len(nontrivial) == 2


def _cmd_lemmas(args) -> int:
    seed = _resolve_seed(args)
    rows = []

    reg = classify_pairwise_regular_up_to(args.n_max, outer=False)
    nontrivial = [g for n in reg for g in reg[n]]
    ok1 = _expected_nontrivial(nontrivial, outer=False)
    rows.append(("pairwise-regular classification", ok1,
                 f"n <= {args.n_max}, {sum(len(v) for v in reg.values())} classes"))

    outer = classify_pairwise_regular_up_to(args.n_max, outer=True)
    nontrivial = [g for n in outer for g in outer[n]]
    ok2 = _expected_nontrivial(nontrivial, outer=True)
    rows.append(("pairwise-outer-regular classification", ok2,
                 f"n <= {args.n_max}, {sum(len(v) for v in outer.values())} classes"))

    cov = kr_edge_coverage(complete_graph(5), 3)
    ok3 = cov.covered == 10
    star = kr_edge_coverage(complete_bipartite(1, 3), 3)
    ok3 = ok3 and star.covered == 0
    rows.append(("triangle edge coverage", ok3,
                 f"K5: {cov.covered}/10, star: {star.covered}/0"))

    base = complete_graph(20)
    blue = np.zeros((20, 20), dtype=bool)
    edges = base.edges()
    order = substream(seed, "lemmas-coloring").permutation(len(edges))
    for idx in order[: len(edges) // 2]:      # balanced split of the pairs
        u, v = edges[idx]
        blue[u, v] = blue[v, u] = True
    search = find_bichromatic_kr(EdgeColoring(base, blue), 5, args.trials, seed)
    rows.append(("bichromatic clique search", search.found,
                 f"trials used: {search.trials_used}"))

    W = WeightedCompleteGraph.uniform(3, 0.5)
    exp = counting_lemma_experiment(W, path3(), 40, seed)
    ok5 = exp.max_abs_deviation <= 0.05
    rows.append(("counting experiment", ok5,
                 f"max deviation {exp.max_abs_deviation:.4f}"))

    width = max(len(name) for name, _, _ in rows)
    for name, ok, detail in rows:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    all_ok = all(ok for _, ok, _ in rows)
    if args.expect and not all_ok:
        return EXIT_VERDICT
    return EXIT_OK


def _cmd_analyze(args) -> int:
    started = time.time()
    seed = _resolve_seed(args)
    H = parse_pattern(args.pattern)
    g = read_graph(args.graph)
    config = AnalyzeConfig(
        k=args.k, r=args.r, eps=args.eps, delta_tol=args.delta_tol,
        p1_threshold=args.p1_threshold, seed=seed,
        budget=SampleBudget(samples=args.samples, seed=seed),
    )
    rep = analyze(g, H, args.p, config)
    results = {
        "verdict": rep.verdict.value,
        "p": rep.p,
        "p_bar": rep.density_pair.p_bar,
        "delta": rep.density_pair.delta,
        "k": rep.k,
        "r": rep.r,
        "regular_fraction": rep.regular_fraction,
        "pair_densities": rep.pair_densities,
        "kr_examined": rep.kr_examined,
        "kr_verdicts": [[list(S), v.value] for S, v in rep.kr_verdicts],
        "blue_pairs": rep.blue_pairs,
        "red_pairs": rep.red_pairs,
        "uncolored_pairs": rep.uncolored_pairs,
        "final_p1": _deviation_dict(rep.final_p1) if rep.final_p1 else None,
        "diagnostics": rep.diagnostics,
        "notes": rep.notes,
    }
    inp = {"graph": str(args.graph), "n": g.n, "edges": g.edge_count(),
           "density": g.density()}
    _emit(_report("analyze", asdict(config), seed, inp, results, started), args.out)
    if args.expect and args.expect != rep.verdict.value:
        print(f"expected verdict {args.expect}, got {rep.verdict.value}",
              file=sys.stderr)
        return EXIT_VERDICT
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasirand",
        description="Quasi-randomness testing via induced-pattern statistics",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="cap the JIT worker count")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: $QUASIRAND_SEED or 0)")
        p.add_argument("--out", type=str, default=None, help="write JSON report here")

    p = sub.add_parser("count", help="pattern copy counts in a graph")
    p.add_argument("--pattern", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--vertices", type=str, default=None, help="restrict to these vertices, e.g. 0,1,2")
    p.add_argument("--sets", type=str, default=None, help="disjoint sets, e.g. '0,1;2,3;4,5'")
    p.add_argument("--sigma", type=str, default=None, help="permutation for the induced tuple count")
    p.add_argument("--phi", type=str, default=None, help="injective map for the induced multi-set count")
    common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("conjugate", help="conjugate density and placement value")
    p.add_argument("--pattern", required=True)
    p.add_argument("--p", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_conjugate)

    p = sub.add_parser("props", help="edge/spectral/pattern property deviations")
    p.add_argument("--pattern", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--t", type=int, default=4, help="cycle length for the cycle-count check")
    p.add_argument("--alpha", type=float, default=0.25, help="cut fraction for the cut check")
    p.add_argument("--samples", type=int, default=200)
    common(p)
    p.set_defaults(func=_cmd_props)

    p = sub.add_parser("reconstruct", help="classify weighted-graph pairs at p or its conjugate")
    p.add_argument("--pattern", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--delta-tol", dest="delta_tol", type=float, default=None)
    p.add_argument("--expect", type=str, default=None)
    common(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("gen", help="write a generated graph or weighted graph")
    p.add_argument("--kind", required=True,
                   choices=["gnp", "balanced_bipartite", "clique_plus_bipartite",
                            "two_block", "hub_weighted"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--p1", type=float, default=None)
    p.add_argument("--p2", type=float, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--pattern", type=str, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("lemmas", help="run the lemma verification suites")
    p.add_argument("--n-max", dest="n_max", type=int, default=6)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--expect", action="store_true",
                   help="exit 1 unless every suite passes")
    common(p)
    p.set_defaults(func=_cmd_lemmas)

    p = sub.add_parser("analyze", help="end-to-end quasi-randomness verdict")
    p.add_argument("--pattern", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.12)
    p.add_argument("--delta-tol", dest="delta_tol", type=float, default=0.5)
    p.add_argument("--p1-threshold", dest="p1_threshold", type=float, default=0.02)
    p.add_argument("--samples", type=int, default=60)
    p.add_argument("--expect", type=str, default=None)
    common(p)
    p.set_defaults(func=_cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_threads(args.threads)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
