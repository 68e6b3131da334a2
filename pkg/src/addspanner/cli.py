"""Command-line entry point: generate graphs, build and verify spanners, run sweeps."""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .graph import (
    Graph,
    GraphError,
    default_params,
    random_graph,
    read_edge_list,
    serialize_edge_list,
    write_edge_list,
)
from .spanner import SpannerBuild, chechik_baseline, fast_plus4, weighted_plus4
from .verify import size_report, verify_additive_stretch, verify_weighted_stretch

ALGORITHMS = ("baseline", "fast", "weighted")
BENCH_COLUMNS = (
    "n", "m", "mu", "g", "seed", "algo", "build_ms", "spanner_edges", "ratio_n_mu", "violations",
)


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    algorithm: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    seed: int = 0
    epsilon: Optional[float] = None
    mu_override: Optional[int] = None
    weights: Optional[tuple[float, float]] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    verify: bool = False
    pair_sample: Optional[int] = None

    def validate(self) -> None:
        if self.algorithm == "weighted" and self.epsilon is None:
            raise UsageError("--algo weighted requires --epsilon")
        if self.algorithm in ("baseline", "fast") and self.epsilon is not None:
            raise UsageError(f"--epsilon is only valid with --algo weighted, not {self.algorithm}")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise UsageError("--epsilon must lie in (0,1)")
        if self.mu_override is not None and self.mu_override < 1:
            raise UsageError("--mu must be >= 1")


def _weights(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return lo, hi


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def construct(G: Graph, cfg: ExperimentConfig) -> SpannerBuild:
    params = default_params(G.n or 1, mu=cfg.mu_override, epsilon=cfg.epsilon, seed=cfg.seed)
    if cfg.algorithm == "weighted":
        return weighted_plus4(G, params)
    if not G.is_unit_weight:
        raise UsageError(f"--algo {cfg.algorithm} needs an unweighted graph; input has weights")
    if cfg.algorithm == "baseline":
        return chechik_baseline(G, params)
    return fast_plus4(G, params)


def check_stretch(G: Graph, build: SpannerBuild, cfg: ExperimentConfig):
    if cfg.algorithm == "weighted":
        return verify_weighted_stretch(G, build, cfg.epsilon, pair_sample=cfg.pair_sample, seed=cfg.seed)
    return verify_additive_stretch(G, build, 4, pair_sample=cfg.pair_sample, seed=cfg.seed)


def cmd_generate(cfg: ExperimentConfig) -> int:
    G = random_graph(cfg.n, cfg.m, seed=cfg.seed, weights=cfg.weights)
    if cfg.output is None:
        sys.stdout.write(serialize_edge_list(G))
        summary = sys.stderr
    else:
        write_edge_list(G, cfg.output)
        summary = sys.stdout
    print(f"n={G.n} m={G.m} seed={cfg.seed}", file=summary)
    return 0


def cmd_build(cfg: ExperimentConfig) -> int:
    G = read_edge_list(cfg.input)
    t0 = time.perf_counter()
    build = construct(G, cfg)
    build_ms = (time.perf_counter() - t0) * 1000.0
    stats = build.stats(G)
    stats["build_ms"] = round(build_ms, 3)
    stats["ratio_n_mu"] = size_report(build, G)["ratio_to_n_mu"]
    if cfg.output is not None:
        write_edge_list(build.subgraph(G), cfg.output)
        stats_path = cfg.output.with_name(cfg.output.name + ".json")
    else:
        stats_path = None
    status = 0
    if cfg.verify:
        report = check_stretch(G, build, cfg)
        stats["verify"] = report.to_dict()
        status = 0 if report.ok else 1
    text = json.dumps(stats, indent=2)
    if stats_path is not None:
        stats_path.write_text(text + "\n", encoding="utf-8")
    print(text)
    return status


def cmd_verify(args) -> int:
    G = read_edge_list(args.input)
    H = read_edge_list(args.spanner)
    if args.epsilon is not None:
        report = verify_weighted_stretch(
            G, H, args.epsilon, strict=not args.relaxed,
            pair_sample=args.pair_sample, seed=args.seed,
        )
    else:
        report = verify_additive_stretch(G, H, args.k, pair_sample=args.pair_sample, seed=args.seed)
    print(report.to_json())
    return 0 if report.ok else 1


def _warm_up() -> None:
    # load the compiled kernels so the first timed row does not include it
    G = random_graph(16, 60, seed=0)
    fast_plus4(G, default_params(16, mu=2))
    weighted_plus4(random_graph(16, 60, seed=0, weights=(1.0, 2.0)), default_params(16, mu=2, epsilon=0.5))


def bench_rows(
    algo: str,
    ns: Sequence[int],
    seeds: Sequence[int],
    *,
    ms: Optional[Sequence[int]] = None,
    density_coef: float = 10.0,
    density_exp: float = 1.4,
    epsilon: Optional[float] = None,
    weights: Optional[tuple[float, float]] = None,
    mu: Optional[int] = None,
    verify: bool = False,
    pair_sample: Optional[int] = None,
):
    """Yield one CSV row dict per (n, seed).

    Edge counts come from ``ms`` (paired with ``ns``) when given, otherwise
    m = min(coef * n^exp, n(n-1)/2).
    """
    if algo == "weighted" and weights is None:
        weights = (1.0, 10.0)
    _warm_up()
    if ms is not None and len(ms) != len(ns):
        raise UsageError("--ms must list one edge count per --ns entry")
    for i, n in enumerate(ns):
        if ms is not None:
            m = ms[i]
        else:
            m = min(int(density_coef * n ** density_exp), n * (n - 1) // 2)
        for seed in seeds:
            cfg = ExperimentConfig(
                "bench", algorithm=algo, n=n, m=m, seed=seed, epsilon=epsilon,
                mu_override=mu, weights=weights, verify=verify, pair_sample=pair_sample,
            )
            cfg.validate()
            G = random_graph(n, m, seed=seed, weights=weights if algo == "weighted" else None)
            t0 = time.perf_counter()
            build = construct(G, cfg)
            build_ms = (time.perf_counter() - t0) * 1000.0
            row = {
                "n": n,
                "m": m,
                "mu": build.params.mu,
                "g": build.params.g,
                "seed": seed,
                "algo": algo,
                "build_ms": f"{build_ms:.3f}",
                "spanner_edges": build.num_edges,
                "ratio_n_mu": f"{size_report(build, G)['ratio_to_n_mu']:.6f}",
                "violations": "",
            }
            if verify:
                row["violations"] = check_stretch(G, build, cfg).violations
            yield row


def cmd_bench(args) -> int:
    seeds = args.seed_list if args.seed_list else list(range(args.seed, args.seed + args.seeds))
    rows = bench_rows(
        args.algo, args.ns, seeds, ms=args.ms,
        density_coef=args.density_coef, density_exp=args.density_exp,
        epsilon=args.epsilon, weights=args.weights, mu=args.mu,
        verify=args.verify, pair_sample=args.pair_sample,
    )
    fh = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="addspanner", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random G(n, m) edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", type=_weights, help="draw weights uniformly from lo:hi")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("build", help="construct a spanner of an edge-list graph")
    p.add_argument("--algo", choices=ALGORITHMS, default="fast")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("-o", "--output", type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--mu", type=int, help="override the heaviness threshold")
    p.add_argument("--verify", action="store_true", help="check stretch; exit 1 on violations")
    p.add_argument("--pair-sample", type=int)

    p = sub.add_parser("verify", help="check the stretch of a spanner file against its graph")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("--spanner", type=Path, required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--epsilon", type=float, help="weighted check +4W(s,t)+eps*W")
    p.add_argument("--relaxed", action="store_true",
                   help="W(s,t) from the verifier's canonical path instead of the minimax")
    p.add_argument("--pair-sample", type=int)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="timing and size sweep, one CSV row per (n, seed)")
    p.add_argument("--algo", choices=ALGORITHMS, default="fast")
    p.add_argument("--ns", type=_int_list, default=[256, 512, 1024])
    p.add_argument("--ms", type=_int_list, help="explicit edge count per n (overrides density)")
    p.add_argument("--seeds", type=int, default=5, help="number of seeds, starting at --seed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seed-list", type=_int_list)
    p.add_argument("--density-coef", type=float, default=10.0)
    p.add_argument("--density-exp", type=float, default=1.4)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--weights", type=_weights)
    p.add_argument("--mu", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--pair-sample", type=int)
    p.add_argument("--csv", type=Path)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            cfg = ExperimentConfig("generate", n=args.n, m=args.m, seed=args.seed,
                                   weights=args.weights, output=args.output)
            return cmd_generate(cfg)
        if args.command == "build":
            cfg = ExperimentConfig("build", algorithm=args.algo, seed=args.seed,
                                   epsilon=args.epsilon, mu_override=args.mu, input=args.input,
                                   output=args.output, verify=args.verify,
                                   pair_sample=args.pair_sample)
            cfg.validate()
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(args)
        ExperimentConfig("bench", algorithm=args.algo, epsilon=args.epsilon,
                         mu_override=args.mu).validate()
        return cmd_bench(args)
    except (UsageError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
