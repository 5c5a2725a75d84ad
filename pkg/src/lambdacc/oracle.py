"""Exhaustive ground truth for small graphs.

Set partitions are enumerated as restricted-growth strings (each node's label
is at most one more than the largest label before it), generated in
lexicographic order and evaluated in vectorised chunks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import Clustering, Graph
from .objective import LambdaConfig, SignedInstance, lambda_cc_cost

log = logging.getLogger(__name__)

PARTITION_GUARD = 12
SUBSET_GUARD = 24
_CHUNK = 1 << 18


class OracleRefusal(ValueError):
    """Raised when an exhaustive search would exceed its size guard."""


@dataclass(frozen=True)
class OracleResult:
    best_cost: float
    best_clustering: Clustering
    enumerated: int


@lru_cache(maxsize=16)
def restricted_growth_strings(n: int) -> np.ndarray:
    """All set partitions of ``n`` nodes, one per row, in lexicographic order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rows = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        reps = top.astype(np.int64) + 2
        parent = np.repeat(np.arange(len(rows)), reps)
        offs = np.arange(len(parent)) - np.repeat(np.cumsum(reps) - reps, reps)
        rows = np.concatenate([rows[parent], offs[:, None].astype(np.int8)], axis=1)
        top = np.maximum(top[parent], offs.astype(np.int8))
    rows.setflags(write=False)
    return rows


def _guard(n: int, limit: int, override: bool) -> None:
    if n > limit:
        if not override:
            raise OracleRefusal(f"n={n} exceeds exhaustive-search guard {limit}")
        log.warning("exhaustive search on n=%d beyond guard %d", n, limit)


def _best_row(costs: np.ndarray, rgs: np.ndarray, rel_tol: float = 1e-9) -> int:
    """Index of a minimiser; near-ties go to fewer clusters, then the lexicographically first row."""
    best = costs.min()
    tied = np.flatnonzero(costs <= best + rel_tol * max(1.0, abs(best)))
    k = rgs[tied].max(axis=1) if rgs.shape[1] else np.zeros(len(tied))
    return int(tied[np.argmin(k)])  # argmin keeps the first, i.e. lexicographic, row


def _pair_index(n: int):
    iu, ju = np.triu_indices(n, k=1)
    return iu, ju


def brute_force_lambda_cc(g: Graph, cfg: LambdaConfig, override: bool = False) -> OracleResult:
    """Global minimiser of the LambdaCC objective over all set partitions."""
    n = g.n
    _guard(n, PARTITION_GUARD, override)
    inst = SignedInstance(g, cfg)
    rgs = restricted_growth_strings(n)
    A = g.adjacency_matrix()
    w = cfg.node_weights(g)
    iu, ju = _pair_index(n)
    # cost = sum_E (1 - lam w w) - sum_{i<j same} (A_ij - lam w_i w_j)
    coef = -(A[iu, ju].astype(float) - cfg.lam * w[iu] * w[ju])
    const = float(np.sum(1.0 - cfg.lam * w[g.edges[:, 0]] * w[g.edges[:, 1]])) if g.m else 0.0
    costs = np.empty(len(rgs))
    for s in range(0, len(rgs), _CHUNK):
        block = rgs[s:s + _CHUNK]
        same = block[:, iu] == block[:, ju]
        costs[s:s + _CHUNK] = const + same @ coef
    row = _best_row(costs, rgs)
    C = Clustering(rgs[row])
    return OracleResult(lambda_cc_cost(inst, C).total, C, len(rgs))


def brute_force_cluster_deletion(g: Graph, override: bool = False) -> OracleResult:
    """Minimum number of cut edges over all partitions into cliques."""
    n = g.n
    _guard(n, PARTITION_GUARD, override)
    rgs = restricted_growth_strings(n)
    A = g.adjacency_matrix()
    iu, ju = _pair_index(n)
    is_edge = A[iu, ju]
    edge_cols, non_cols = np.flatnonzero(is_edge), np.flatnonzero(~is_edge)
    costs = np.empty(len(rgs))
    for s in range(0, len(rgs), _CHUNK):
        block = rgs[s:s + _CHUNK]
        same = block[:, iu] == block[:, ju]
        feasible = ~same[:, non_cols].any(axis=1)
        c = g.m - same[:, edge_cols].sum(axis=1).astype(float)
        costs[s:s + _CHUNK] = np.where(feasible, c, np.inf)
    row = _best_row(costs, rgs, rel_tol=0.0)
    return OracleResult(float(costs[row]), Clustering(rgs[row]), len(rgs))


def scaled_cut_values(g: Graph, override: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """``psi(S)`` for every nonempty proper subset containing node 0.

    Returns ``(masks, psi)`` where bit ``i`` of ``masks`` marks node ``i + 1``
    in S (node 0 is always in S), so complements are never scanned twice.
    """
    n = g.n
    if n < 2:
        raise OracleRefusal("scaled sparsest cut needs at least two nodes")
    _guard(n, SUBSET_GUARD, override)
    total = 1 << (n - 1)
    masks = np.arange(total - 1, dtype=np.int64)  # excludes S = V
    psi = np.empty(len(masks))
    u, v = g.edges[:, 0], g.edges[:, 1]
    for s in range(0, len(masks), _CHUNK):
        mk = masks[s:s + _CHUNK]
        # member(x) = 1 for node 0, else bit x-1 of the mask
        bits = np.ones((len(mk), n), dtype=bool)
        for x in range(1, n):
            bits[:, x] = (mk >> (x - 1)) & 1
        size = bits.sum(axis=1)
        cut = (bits[:, u] != bits[:, v]).sum(axis=1) if g.m else np.zeros(len(mk))
        psi[s:s + _CHUNK] = cut / (size * (n - size))
    return masks, psi


def min_scaled_sparsest_cut(g: Graph, override: bool = False) -> tuple[float, frozenset[int]]:
    """Exact ``lambda* = min_S cut(S) / (|S| |V \\ S|)`` with a minimising set."""
    masks, psi = scaled_cut_values(g, override)
    i = int(np.argmin(psi))
    S = frozenset([0] + [x for x in range(1, g.n) if (int(masks[i]) >> (x - 1)) & 1])
    return float(psi[i]), S
