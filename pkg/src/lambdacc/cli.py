"""Command-line front end.

    lambdacc cluster GRAPH -a louvain --lam 0.1 -o report.json
    lambdacc sweep GRAPH -a louvain --grid 0.01:0.1:10:log --seeds 0,1 -o sweep.csv
    lambdacc bound GRAPH --lam 0.6            (or --mode cd)
    lambdacc oracle GRAPH --lam 0.5
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import heuristics, rounding
from .graph import Clustering, Graph, GraphParseError, cluster_statistics, max_scaled_cut, read_edge_list
from .lp import DEFAULT_MAX_N, FractionalSolution, LpNonConvergence, LpProblem, LpTooLarge, solve_cc_lp
from .objective import LambdaConfig, SignedInstance, WeightMode, cluster_deletion_cost, lambda_cc_cost
from .oracle import OracleRefusal, brute_force_cluster_deletion, brute_force_lambda_cc

log = logging.getLogger("lambdacc")

ALGORITHMS = ("pivot", "threelp", "twocd", "fivelp", "fourcd", "growcluster", "growclique", "louvain")
LAMBDA_FREE = {"pivot", "twocd", "fourcd", "growclique"}
CD_ALGORITHMS = {"twocd", "fourcd", "growclique"}
LP_BASED = {"threelp", "fivelp", "twocd", "fourcd"}
SWEEP_HEADER = ["lambda", "seed", "objective", "lp_bound", "ratio", "num_clusters", "max_scaled_cut", "wall_ms"]

EXIT_GUARD = 2
EXIT_GUARANTEE = 3
EXIT_INPUT = 4
EXIT_LP = 5


@dataclass
class RunReport:
    algorithm: str
    guarantee: str
    config: dict
    n: int
    m: int
    num_clusters: int
    assignment: list[int]
    objective: dict | None
    cluster_deletion_cost: int | None
    lp_bound: float | None = None
    bound_kind: str | None = None
    bound_certified: bool | None = None
    ratio: float | None = None
    clusters: list[dict] = field(default_factory=list)
    wall_ms: float | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def guarantee_label(algorithm: str, lam: float | None, forced: bool) -> str:
    if algorithm in ("threelp", "fivelp"):
        if lam is not None and lam > 0.5:
            return "3-approx" if algorithm == "threelp" else "5-approx"
        return "no guarantee (forced)"
    if algorithm == "twocd":
        return "2-approx CD"
    if algorithm == "fourcd":
        return "4-approx CD"
    return "heuristic"


def run_algorithm(g: Graph, algorithm: str, cfg: LambdaConfig | None, seed: int | None = None,
                  force: bool = False, solution: FractionalSolution | None = None,
                  pivot: str = "vzw") -> Clustering:
    params = heuristics.HeuristicParams(seed=seed)
    if algorithm == "pivot":
        return rounding.pivot(g, seed=seed)
    if algorithm in ("threelp", "fivelp"):
        if cfg.degree_weighted:
            raise ValueError(f"{algorithm} is defined for standard weights only")
        if algorithm == "threelp":
            return rounding.three_lp(g, cfg.lam, solution=solution, pivot=pivot, seed=seed, force=force)
        return rounding.five_lp(g, cfg.lam, solution=solution, force=force)
    if algorithm == "twocd":
        return rounding.two_cd(g, solution=solution, pivot=pivot, seed=seed)
    if algorithm == "fourcd":
        return rounding.four_cd(g, solution=solution)
    if algorithm == "growcluster":
        return heuristics.grow_cluster(g, cfg, params)
    if algorithm == "growclique":
        return heuristics.grow_clique(g, params)
    if algorithm == "louvain":
        return heuristics.lambda_louvain(g, cfg, params)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _solve_bound(g: Graph, cfg: LambdaConfig | None, max_n: int) -> FractionalSolution | None:
    if g.n < 2 or g.n > max_n:
        return None
    prob = LpProblem.cluster_deletion(g) if cfg is None else LpProblem.lambda_cc(SignedInstance(g, cfg))
    return solve_cc_lp(prob, max_n=max_n)


def _ratio(value: float | None, sol: FractionalSolution | None) -> float | None:
    if value is None or sol is None or not sol.certified or sol.objective <= 0:
        return None
    return value / sol.objective


def cluster_report(g: Graph, algorithm: str, cfg: LambdaConfig | None, seed: int | None = None,
                   force: bool = False, with_bound: bool = False, max_n: int = DEFAULT_MAX_N,
                   pivot: str = "vzw", timing: bool = True) -> RunReport:
    if algorithm not in LAMBDA_FREE and cfg is None:
        raise ValueError(f"{algorithm} needs --lam")
    t0 = time.perf_counter()
    if algorithm in ("threelp", "fivelp"):
        rounding._check_lambda(cfg.lam, force, algorithm)
    cd_bound = algorithm in CD_ALGORITHMS or cfg is None
    sol = None
    if algorithm in LP_BASED or with_bound:
        sol = _solve_bound(g, None if cd_bound else cfg, max_n)
    C = run_algorithm(g, algorithm, cfg, seed, force, sol, pivot)
    wall = (time.perf_counter() - t0) * 1000.0

    obj = None
    if cfg is not None:
        v = lambda_cc_cost(SignedInstance(g, cfg), C)
        obj = {"total": v.total, "positive_mistakes": v.positive_mistakes,
               "negative_mistakes": v.negative_mistakes}
    cd = cluster_deletion_cost(g, C)
    native = cd if cd_bound else (obj["total"] if obj else None)
    return RunReport(
        algorithm=algorithm,
        guarantee=guarantee_label(algorithm, cfg.lam if cfg else None, force),
        config={"lambda": cfg.lam if cfg else None,
                "weight_mode": cfg.weight_mode.value if cfg else None,
                "seed": seed},
        n=g.n, m=g.m, num_clusters=C.k,
        assignment=C.labels.tolist(),
        objective=obj,
        cluster_deletion_cost=cd,
        lp_bound=sol.objective if sol else None,
        bound_kind=("cluster_deletion" if cd_bound else "lambdacc") if sol else None,
        bound_certified=sol.certified if sol else None,
        ratio=_ratio(native, sol),
        clusters=[asdict(s) for s in cluster_statistics(g, C)],
        wall_ms=round(wall, 3) if timing else None,
    )


# --------------------------------------------------------------------------
# sweeps


def parse_grid(spec: str) -> np.ndarray:
    """``start:stop:count[:log|linear]`` (``log`` is geometric spacing)."""
    parts = spec.replace(" ", ":").split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"bad grid spec {spec!r}; expected start:stop:count[:log|linear]")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    spacing = parts[3] if len(parts) == 4 else "linear"
    if count < 1 or not (0 < start < 1) or not (0 < stop < 1):
        raise ValueError("grid needs count >= 1 and endpoints in (0, 1)")
    if spacing == "log":
        return np.geomspace(start, stop, count)
    if spacing == "linear":
        return np.linspace(start, stop, count)
    raise ValueError(f"unknown spacing {spacing!r}")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def _sweep_row(args) -> list[str]:
    g, algorithm, lam, mode, seed, with_bound, max_n, force, timing = args
    cfg = LambdaConfig(lam, mode)
    t0 = time.perf_counter()
    sol = None
    if algorithm in LP_BASED:
        sol = _solve_bound(g, None if algorithm in ("twocd", "fourcd") else cfg, max_n)
    C = run_algorithm(g, algorithm, cfg, seed, force, sol)
    wall = (time.perf_counter() - t0) * 1000.0
    obj = lambda_cc_cost(SignedInstance(g, cfg), C).total
    bound = None
    if with_bound:
        bsol = sol if (sol is not None and algorithm in ("threelp", "fivelp")) else _solve_bound(g, cfg, max_n)
        bound = bsol if bsol is not None and bsol.certified else None
    ratio = _ratio(obj, bound)
    return [_fmt(lam), str(seed), _fmt(obj), _fmt(bound.objective if bound else None), _fmt(ratio),
            str(C.k), _fmt(max_scaled_cut(g, C, cfg.degree_weighted)), _fmt(wall) if timing else ""]


def sweep_rows(g: Graph, algorithm: str, grid, mode="standard", seeds=(0,), with_bound=False,
               max_n=DEFAULT_MAX_N, force=False, timing=True, jobs: int = 1) -> list[list[str]]:
    tasks = [(g, algorithm, float(lam), mode, int(s), with_bound, max_n, force, timing)
             for lam in grid for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(_sweep_row, tasks))
    return [_sweep_row(t) for t in tasks]


def write_sweep_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)


# --------------------------------------------------------------------------
# argument parsing


def _load(path: str, indexing: int | None) -> Graph:
    return read_edge_list(path, indexing=indexing)


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_seeds(spec: str) -> list[int]:
    if ".." in spec:
        a, b = spec.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(s) for s in spec.split(",") if s]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambdacc", description="LambdaCC graph clustering")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("graph", help="edge-list file")
        sp.add_argument("--indexing", type=int, choices=(0, 1), default=None)
        sp.add_argument("--weights", choices=[m.value for m in WeightMode], default="standard")
        sp.add_argument("-o", "--output", default=None)

    c = sub.add_parser("cluster", help="cluster a graph with one algorithm")
    common(c)
    c.add_argument("-a", "--algorithm", choices=ALGORITHMS, required=True)
    c.add_argument("--lam", type=float, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--pivot", choices=("vzw", "uniform"), default="vzw")
    c.add_argument("--force", action="store_true", help="run LP roundings for lambda <= 1/2")
    c.add_argument("--with-bound", action="store_true")
    c.add_argument("--max-lp-n", type=int, default=DEFAULT_MAX_N)
    c.add_argument("--no-timing", action="store_true", help="omit wall time for reproducible output")

    s = sub.add_parser("sweep", help="run an algorithm over a grid of lambda values")
    common(s)
    s.add_argument("-a", "--algorithm", choices=ALGORITHMS, required=True)
    s.add_argument("--grid", required=True, help="start:stop:count[:log|linear]")
    s.add_argument("--seeds", default="0", help="comma list or a..b")
    s.add_argument("--with-bound", action="store_true")
    s.add_argument("--max-lp-n", type=int, default=DEFAULT_MAX_N)
    s.add_argument("--force", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-timing", action="store_true")

    b = sub.add_parser("bound", help="LP lower bound")
    common(b)
    b.add_argument("--lam", type=float, default=None)
    b.add_argument("--mode", choices=("lambdacc", "cd"), default="lambdacc")
    b.add_argument("--max-lp-n", type=int, default=DEFAULT_MAX_N)
    b.add_argument("--dump-x", action="store_true", help="include the distance matrix")

    o = sub.add_parser("oracle", help="exact optimum by exhaustive search (small graphs)")
    common(o)
    o.add_argument("--lam", type=float, default=None)
    o.add_argument("--mode", choices=("lambdacc", "cd"), default="lambdacc")
    o.add_argument("--override", action="store_true", help="ignore the size guard")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        g = _load(args.graph, args.indexing)
        if args.command == "cluster":
            cfg = LambdaConfig(args.lam, args.weights) if args.lam is not None else None
            rep = cluster_report(g, args.algorithm, cfg, seed=args.seed, force=args.force,
                                 with_bound=args.with_bound, max_n=args.max_lp_n,
                                 pivot=args.pivot, timing=not args.no_timing)
            _emit(rep.to_json() + "\n", args.output)
        elif args.command == "sweep":
            rows = sweep_rows(g, args.algorithm, parse_grid(args.grid), args.weights,
                              _parse_seeds(args.seeds), args.with_bound, args.max_lp_n,
                              args.force, not args.no_timing, args.jobs)
            buf = io.StringIO()
            write_sweep_csv(rows, buf)
            _emit(buf.getvalue(), args.output)
        elif args.command == "bound":
            if args.mode == "cd":
                prob = LpProblem.cluster_deletion(g)
            else:
                if args.lam is None:
                    raise ValueError("bound --mode lambdacc needs --lam")
                prob = LpProblem.lambda_cc(SignedInstance(g, LambdaConfig(args.lam, args.weights)))
            sol = solve_cc_lp(prob, max_n=args.max_lp_n)
            out = {"mode": args.mode, "lambda": args.lam, "weight_mode": args.weights,
                   "n": g.n, "m": g.m, "objective": sol.objective,
                   "max_violation": sol.max_violation, "certified": sol.certified,
                   "rounds": sol.rounds, "n_constraints": sol.n_constraints}
            if args.dump_x:
                out["x"] = sol.x.tolist()
            _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.output)
        elif args.command == "oracle":
            if args.mode == "cd":
                res = brute_force_cluster_deletion(g, override=args.override)
            else:
                if args.lam is None:
                    raise ValueError("oracle --mode lambdacc needs --lam")
                res = brute_force_lambda_cc(g, LambdaConfig(args.lam, args.weights), override=args.override)
            out = {"mode": args.mode, "lambda": args.lam, "weight_mode": args.weights,
                   "best_cost": res.best_cost, "num_clusters": res.best_clustering.k,
                   "assignment": res.best_clustering.labels.tolist(),
                   "enumerated": res.enumerated}
            _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.output)
    except (OracleRefusal, LpTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except rounding.GuaranteeOutOfRange as exc:
        print(f"error: {exc} (use --force to run anyway)", file=sys.stderr)
        return EXIT_GUARANTEE
    except LpNonConvergence as exc:
        print(f"error: {exc}; best uncertified bound {exc.solution.objective:.6g}", file=sys.stderr)
        return EXIT_LP
    except (GraphParseError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
