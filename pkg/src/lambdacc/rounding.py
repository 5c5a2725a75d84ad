"""Pivot and ball-growing roundings of the metric LP.

``three_lp`` and ``two_cd`` threshold the LP distances into an unweighted
signed graph and run CC-Pivot on it. ``five_lp`` and ``four_cd`` grow a ball
around a node and keep it only if the node is close to the ball on average.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import Clustering, Graph
from .lp import FractionalSolution, LpProblem, solve_cc_lp
from .objective import LambdaConfig, SignedInstance

log = logging.getLogger(__name__)


class GuaranteeOutOfRange(ValueError):
    """The approximation guarantee does not cover this lambda (needs lambda > 1/2)."""


@dataclass(frozen=True)
class RoundedGraph:
    """Unweighted signed graph on all pairs: ``fplus[i, j]`` marks F+, the rest is F-."""

    fplus: np.ndarray

    @property
    def n(self) -> int:
        return len(self.fplus)

    @property
    def fminus(self) -> np.ndarray:
        fm = ~self.fplus
        np.fill_diagonal(fm, False)
        return fm

    @classmethod
    def threshold(cls, x: np.ndarray | FractionalSolution, cut: float) -> "RoundedGraph":
        """F+ = ``{(i, j) : x_ij < cut}`` (strict), F- = everything else."""
        X = x.x if isinstance(x, FractionalSolution) else np.asarray(x, float)
        fp = X < cut
        np.fill_diagonal(fp, False)
        return cls(fp)

    @classmethod
    def from_graph(cls, g: Graph) -> "RoundedGraph":
        return cls(g.adjacency_matrix())


@dataclass
class PivotStrategy:
    """How CC-Pivot chooses its next pivot.

    ``uniform``: uniformly random unclustered node (seeded).
    ``vzw``: the deterministic rule minimising mistakes per unit of LP budget
    over the bad triangles the pivot would settle; needs ``w_plus``,
    ``w_minus`` and ``budgets`` from the LP that produced the rounded graph.
    ``lowest``: smallest unclustered id. ``replay``: follow ``sequence``.
    """

    mode: str = "uniform"
    seed: int | None = None
    w_plus: np.ndarray | None = None
    w_minus: np.ndarray | None = None
    budgets: np.ndarray | None = None
    sequence: Sequence[int] = ()
    _rng: np.random.Generator | None = field(default=None, repr=False)

    @classmethod
    def uniform(cls, seed: int | None = None) -> "PivotStrategy":
        return cls("uniform", seed=seed)

    @classmethod
    def deterministic(cls, prob: LpProblem, sol: FractionalSolution) -> "PivotStrategy":
        return cls("vzw", w_plus=prob.w_plus, w_minus=prob.w_minus, budgets=sol.budgets)

    @classmethod
    def replay(cls, sequence: Sequence[int]) -> "PivotStrategy":
        return cls("replay", sequence=list(sequence))

    def __post_init__(self):
        if self.mode not in ("uniform", "vzw", "lowest", "replay"):
            raise ValueError(f"unknown pivot mode {self.mode!r}")
        if self.mode == "vzw" and any(a is None for a in (self.w_plus, self.w_minus, self.budgets)):
            raise ValueError("deterministic pivoting needs LP weights and budgets")
        self._rng = np.random.default_rng(self.seed)


def vzw_ratios(rg: RoundedGraph, alive: np.ndarray, w_plus, w_minus, budgets) -> np.ndarray:
    """Pivot scores over the surviving nodes ``alive`` (indices into the full graph).

    For pivot k the numerator weighs the pairs that become mistakes: F+ pairs
    (i, j) with k~i in F+ and k~j in F-, and F- pairs (i, j) with both k~i and
    k~j in F+. The denominator is the LP budget of the same pairs.
    """
    P = rg.fplus[np.ix_(alive, alive)].astype(float)
    N = 1.0 - P
    np.fill_diagonal(N, 0.0)
    sub = np.ix_(alive, alive)
    Wp, Wm, Cb = w_plus[sub], w_minus[sub], budgets[sub]
    num = ((P @ (P * Wp)) * N).sum(axis=1) + 0.5 * ((P @ (N * Wm)) * P).sum(axis=1)
    den = ((P @ (P * Cb)) * N).sum(axis=1) + 0.5 * ((P @ (N * Cb)) * P).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))
    return ratio


def cc_pivot(rg: RoundedGraph, strategy: PivotStrategy | None = None,
             pivots_out: list[int] | None = None) -> Clustering:
    """CC-Pivot: cluster a pivot with its unclustered F+ neighbours, repeat on the rest."""
    strategy = strategy or PivotStrategy.uniform()
    n = rg.n
    labels = np.full(n, -1, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    replay = iter(strategy.sequence)
    c = 0
    while alive.any():
        idx = np.flatnonzero(alive)
        if strategy.mode == "uniform":
            k = int(strategy._rng.choice(idx))
        elif strategy.mode == "lowest":
            k = int(idx[0])
        elif strategy.mode == "replay":
            k = int(next(replay))
            if not alive[k]:
                raise ValueError(f"replayed pivot {k} is already clustered")
        else:
            r = vzw_ratios(rg, idx, strategy.w_plus, strategy.w_minus, strategy.budgets)
            k = int(idx[int(np.argmin(r))])  # ties: lowest id
        S = alive & rg.fplus[k]
        S[k] = True
        labels[S] = c
        alive &= ~S
        c += 1
        if pivots_out is not None:
            pivots_out.append(k)
    return Clustering(labels)


def _check_lambda(lam: float, force: bool, name: str) -> None:
    if lam <= 0.5:
        if not force:
            raise GuaranteeOutOfRange(f"{name} carries a guarantee only for lambda > 1/2 (got {lam})")
        log.warning("%s run at lambda=%g without an approximation guarantee", name, lam)


def _solve(g: Graph, cfg: LambdaConfig | None, solution: FractionalSolution | None):
    prob = LpProblem.cluster_deletion(g) if cfg is None else LpProblem.lambda_cc(SignedInstance(g, cfg))
    if g.n < 2:
        return prob, None
    return prob, solution if solution is not None else solve_cc_lp(prob)


def _pivot_round(prob, sol, cut, pivot, seed, n):
    if sol is None:
        return Clustering.singletons(n)
    rg = RoundedGraph.threshold(sol, cut)
    if pivot in ("vzw", "deterministic"):
        strat = PivotStrategy.deterministic(prob, sol)
    else:
        strat = PivotStrategy(pivot, seed=seed)
    return cc_pivot(rg, strat)


def three_lp(g: Graph, lam: float, *, solution: FractionalSolution | None = None,
             pivot: str = "vzw", seed: int | None = None, force: bool = False) -> Clustering:
    """Threshold the LambdaCC LP at 1/3 and pivot; a 3-approximation for lambda > 1/2."""
    _check_lambda(lam, force, "threeLP")
    prob, sol = _solve(g, LambdaConfig(lam), solution)
    return _pivot_round(prob, sol, 1.0 / 3.0, pivot, seed, g.n)


def two_cd(g: Graph, *, solution: FractionalSolution | None = None,
           pivot: str = "vzw", seed: int | None = None) -> Clustering:
    """Threshold the cluster-deletion LP at 1/2 and pivot; every output cluster is a clique."""
    prob, sol = _solve(g, None, solution)
    return _pivot_round(prob, sol, 0.5, pivot, seed, g.n)


def _ball_growing(X: np.ndarray, radius: float, strict: bool, keep, order: str,
                  seed: int | None) -> Clustering:
    n = len(X)
    labels = np.full(n, -1, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    rng = np.random.default_rng(seed)
    c = 0
    while alive.any():
        idx = np.flatnonzero(alive)
        u = int(idx[0]) if order == "lowest" else int(rng.choice(idx))
        d = X[u]
        T = alive & ((d < radius) if strict else (d <= radius))
        T[u] = False
        avg = float(d[T].mean()) if T.any() else 0.0
        labels[u] = c
        alive[u] = False
        if T.any() and keep(avg):
            labels[T] = c
            alive &= ~T
        c += 1
    return Clustering(labels)


def five_lp(g: Graph, lam: float, *, solution: FractionalSolution | None = None,
            order: str = "lowest", seed: int | None = None, force: bool = False) -> Clustering:
    """Ball of radius 2/5 around u, kept when its mean distance to u is below 1/5."""
    _check_lambda(lam, force, "fiveLP")
    _, sol = _solve(g, LambdaConfig(lam), solution)
    if sol is None:
        return Clustering.singletons(g.n)
    return _ball_growing(sol.x, 0.4, False, lambda avg: avg < 0.2, order, seed)


def four_cd(g: Graph, *, solution: FractionalSolution | None = None,
            order: str = "lowest", seed: int | None = None) -> Clustering:
    """Cluster-deletion ball rounding: T = {x_ui < 1/2}, kept when the mean distance is at most 1/4."""
    _, sol = _solve(g, None, solution)
    if sol is None:
        return Clustering.singletons(g.n)
    return _ball_growing(sol.x, 0.5, True, lambda avg: avg <= 0.25, order, seed)


def pivot(g: Graph, seed: int | None = None) -> Clustering:
    """Randomised CC-Pivot directly on the signs of the LambdaCC graph (edges = F+)."""
    return cc_pivot(RoundedGraph.from_graph(g), PivotStrategy.uniform(seed))
