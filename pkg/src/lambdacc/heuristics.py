"""Greedy heuristics that never form the dense signed graph.

Only positive (edge) relationships are stored; the penalty for placing
non-adjacent nodes together is recovered from node-weight sums, since the
negative weight between two groups is ``lam * W_A * W_B`` minus the weighted
edges between them.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .graph import Clustering, Graph
from .objective import LambdaConfig, SignedInstance, edge_constant, lambda_cc_cost

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeuristicParams:
    seed: int | None = None
    clique_candidates: int = 500
    max_passes: int = 100
    gain_tol: float = 1e-12

    def __post_init__(self):
        if self.clique_candidates < 1:
            raise ValueError("clique_candidates must be at least 1")


class _Pool:
    """Unclustered nodes with O(1) removal and uniform sampling."""

    def __init__(self, n: int):
        self.items = list(range(n))
        self.pos = list(range(n))

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return self.pos[v] >= 0

    def remove(self, v: int) -> None:
        i = self.pos[v]
        last = self.items.pop()
        if last != v:
            self.items[i] = last
            self.pos[last] = i
        self.pos[v] = -1

    def sample(self, rng: np.random.Generator) -> int:
        return self.items[int(rng.integers(len(self.items)))]


def grow_cluster(g: Graph, cfg: LambdaConfig, params: HeuristicParams = HeuristicParams(),
                 trace: list[float] | None = None) -> Clustering:
    """Grow clusters greedily around uniformly random seeds.

    The benefit of adding ``v`` to ``S`` is ``cut(S, {v}) - lam |S|``
    (standard) or ``cut(S, {v}) - lam d_v vol(S)`` (degree-weighted); the
    best candidate is added while its benefit is positive, ties going to the
    lowest id. Only nodes adjacent to ``S`` can have positive benefit.
    """
    rng = np.random.default_rng(params.seed)
    lam = cfg.lam
    w = cfg.node_weights(g).tolist()
    adj = g.adj
    pool = _Pool(g.n)
    labels = np.full(g.n, -1, dtype=np.int64)
    obj = lambda_cc_cost(SignedInstance(g, cfg), Clustering.singletons(g.n)).total if trace is not None else 0.0
    if trace is not None:
        trace.append(obj)
    c = 0
    while len(pool):
        u = pool.sample(rng)
        pool.remove(u)
        labels[u] = c
        WS = w[u]
        conn: dict[int, int] = defaultdict(int)
        for v in adj[u]:
            if v in pool:
                conn[v] += 1
        while conn:
            best, best_gain = -1, 0.0
            for v, cv in conn.items():
                gain = cv - lam * w[v] * WS
                if gain > best_gain or (gain == best_gain and gain > 0 and v < best):
                    best, best_gain = v, gain
            if best < 0:
                break
            del conn[best]
            pool.remove(best)
            labels[best] = c
            WS += w[best]
            for v in adj[best]:
                if v in pool:
                    conn[v] += 1
            if trace is not None:
                obj -= best_gain
                trace.append(obj)
        c += 1
    return Clustering(labels)


def _grow_one_clique(u: int, adj_sets, pool: _Pool) -> list[int]:
    S = [u]
    N = {v for v in adj_sets[u] if v in pool}
    while N:
        v = min(N)
        S.append(v)
        N &= adj_sets[v]
    return S


def grow_clique(g: Graph, params: HeuristicParams = HeuristicParams(),
                trace: list[int] | None = None) -> Clustering:
    """Repeatedly grow ``k`` greedy cliques from random seeds and keep the largest.

    A candidate grows by adding the lowest-id unclustered node adjacent to all
    of it. Because that growth depends only on the seed's unclustered
    neighbourhood, candidates are cached per seed and invalidated when a
    neighbour gets clustered. ``trace`` receives the cut-edge count after each
    extracted clique.
    """
    rng = np.random.default_rng(params.seed)
    adj, adj_sets = g.adj, g.adj_sets
    pool = _Pool(g.n)
    labels = np.full(g.n, -1, dtype=np.int64)
    cache: dict[int, list[int]] = {}
    cut = g.m
    if trace is not None:
        trace.append(cut)
    c = 0
    while len(pool):
        items = pool.items
        draws = rng.integers(len(items), size=params.clique_candidates)
        best: list[int] | None = None
        for d in draws.tolist():
            u = items[d]
            S = cache.get(u)
            if S is None:
                S = cache[u] = _grow_one_clique(u, adj_sets, pool)
            if best is None or len(S) > len(best):
                best = S
        for v in best:
            pool.remove(v)
            labels[v] = c
            cache.pop(v, None)
            for y in adj[v]:
                cache.pop(y, None)
        cut -= len(best) * (len(best) - 1) // 2
        if trace is not None:
            trace.append(cut)
        c += 1
    return Clustering(labels)


# --------------------------------------------------------------------------
# Lambda-Louvain


class SuperGraph:
    """Aggregated graph used by Lambda-Louvain.

    ``node_w[s]`` is the node-weight sum of the original nodes inside
    super-node ``s``, ``sq[s]`` the sum of their squared weights, ``inner[s]``
    the number of original edges inside it, and ``adj[s]`` maps neighbouring
    super-nodes to the number of edges between them.
    """

    def __init__(self, adj: list[dict[int, float]], node_w: list[float], sq: list[float],
                 inner: list[float]):
        self.adj = adj
        self.node_w = node_w
        self.sq = sq
        self.inner = inner

    @property
    def n(self) -> int:
        return len(self.adj)

    @classmethod
    def from_graph(cls, g: Graph, w: np.ndarray) -> "SuperGraph":
        adj = [{v: 1.0 for v in nb} for nb in g.adj]
        wl = w.tolist()
        return cls(adj, wl, [x * x for x in wl], [0.0] * g.n)

    def aggregate(self, comm: list[int]) -> "SuperGraph":
        """Collapse nodes sharing a ``comm`` label (labels must be 0..K-1)."""
        K = max(comm) + 1 if comm else 0
        adj: list[dict[int, float]] = [defaultdict(float) for _ in range(K)]
        node_w, sq, inner = [0.0] * K, [0.0] * K, [0.0] * K
        for v in range(self.n):
            cv = comm[v]
            node_w[cv] += self.node_w[v]
            sq[cv] += self.sq[v]
            inner[cv] += self.inner[v]
            for u, wt in self.adj[v].items():
                cu = comm[u]
                if cu != cv:
                    adj[cv][cu] += wt
                elif u > v:
                    inner[cv] += wt
        return SuperGraph([dict(a) for a in adj], node_w, sq, inner)

    def cost(self, lam: float, const: float, labels) -> float:
        """LambdaCC value of the flat clustering that ``labels`` induces.

        ``cost = const - sum_S [E_in(S) - lam (W_S^2 - sum_{v in S} w_v^2) / 2]``
        where ``const = sum_E (1 - lam w_i w_j)``.
        """
        E_in: dict[int, float] = defaultdict(float)
        W: dict[int, float] = defaultdict(float)
        Q: dict[int, float] = defaultdict(float)
        for v in range(self.n):
            c = labels[v]
            E_in[c] += self.inner[v]
            W[c] += self.node_w[v]
            Q[c] += self.sq[v]
            for u, wt in self.adj[v].items():
                if u > v and labels[u] == c:
                    E_in[c] += wt
        return const - sum(E_in[c] - lam * (W[c] ** 2 - Q[c]) / 2 for c in W)


def _local_moves(sg: SuperGraph, lam: float, rng: np.random.Generator, params: HeuristicParams,
                 obj: list[float], trace: list[float] | None, budget: list[int]) -> tuple[list[int], bool]:
    """Phase one: sweep nodes in random order, moving each to its best option."""
    N = sg.n
    comm = list(range(N))
    Wc = list(sg.node_w)
    size = [1] * N
    free: list[int] = []
    tol = params.gain_tol
    moved_any = False
    while budget[0] > 0:
        budget[0] -= 1
        moved = False
        for v in rng.permutation(N).tolist():
            A = comm[v]
            wv = sg.node_w[v]
            links: dict[int, float] = defaultdict(float)
            for u, wt in sg.adj[v].items():
                links[comm[u]] += wt
            Wc[A] -= wv
            size[A] -= 1
            stay = links.get(A, 0.0) - lam * wv * Wc[A]
            best, best_gain = A, stay
            for C, kc in links.items():
                if C == A:
                    continue
                gain = kc - lam * wv * Wc[C]
                if gain > best_gain:
                    best, best_gain = C, gain
            if size[A] > 0 and 0.0 > best_gain:
                best, best_gain = -1, 0.0
            if best != A and best_gain > stay + tol:
                if best == -1:
                    best = free.pop() if free else A
                    if best == A:  # no free label; A cannot be empty here
                        raise AssertionError("no free community label")
                comm[v] = best
                Wc[best] += wv
                size[best] += 1
                if size[A] == 0:
                    free.append(A)
                obj[0] -= best_gain - stay
                if trace is not None:
                    trace.append(obj[0])
                moved = moved_any = True
            else:
                Wc[A] += wv
                size[A] += 1
        if not moved:
            break
    else:
        log.warning("Lambda-Louvain hit the pass limit (%d)", params.max_passes)
    remap: dict[int, int] = {}
    return [remap.setdefault(c, len(remap)) for c in comm], moved_any


def _merge_pass(sg: SuperGraph, lam: float, obj: list[float], trace: list[float] | None) -> list[int]:
    """Merge adjacent super-nodes while some merge strictly lowers the objective.

    Merging A and B changes the objective by ``lam W_A W_B - cut(A, B)``.
    """
    parent = list(range(sg.n))
    W = {v: sg.node_w[v] for v in range(sg.n)}
    links = {v: dict(sg.adj[v]) for v in range(sg.n)}
    while True:
        best, pair = 0.0, None
        for a in sorted(links):
            for b, cut in links[a].items():
                if a < b:
                    gain = cut - lam * W[a] * W[b]
                    if gain > best:
                        best, pair = gain, (a, b)
        if pair is None:
            break
        a, b = pair
        for c, wt in links.pop(b).items():
            del links[c][b]
            if c != a:
                links[a][c] = links[a].get(c, 0.0) + wt
                links[c][a] = links[c].get(a, 0.0) + wt
        W[a] += W.pop(b)
        parent[b] = a
        obj[0] -= best
        if trace is not None:
            trace.append(obj[0])

    def root(v):
        while parent[v] != v:
            v = parent[v]
        return v

    remap: dict[int, int] = {}
    return [remap.setdefault(root(v), len(remap)) for v in range(sg.n)]


def lambda_louvain(g: Graph, cfg: LambdaConfig, params: HeuristicParams = HeuristicParams(),
                   trace: list[float] | None = None) -> Clustering:
    """Louvain-style local moves and aggregation on the LambdaCC objective.

    Moving super-node ``v`` (weight ``w_v``) out of ``A`` into ``B`` changes the
    objective by ``[cut(v, A-v) - lam w_v W_{A-v}] - [cut(v, B) - lam w_v W_B]``;
    the empty cluster (singleton) is always a candidate. At the end, adjacent
    clusters are merged while that strictly helps, so no two output clusters
    can be merged profitably.
    """
    rng = np.random.default_rng(params.seed)
    lam = cfg.lam
    inst = SignedInstance(g, cfg)
    obj = [lambda_cc_cost(inst, Clustering.singletons(g.n)).total]
    if trace is not None:
        trace.append(obj[0])
    sg = SuperGraph.from_graph(g, cfg.node_weights(g))
    membership = list(range(g.n))
    budget = [params.max_passes]
    while True:
        comm, moved = _local_moves(sg, lam, rng, params, obj, trace, budget)
        if not moved:
            break
        membership = [comm[c] for c in membership]
        sg = sg.aggregate(comm)
        if budget[0] <= 0:
            break
    comm = _merge_pass(sg, lam, obj, trace)
    return Clustering([comm[c] for c in membership])


def supergraph_for(g: Graph, cfg: LambdaConfig, labels) -> tuple[SuperGraph, float]:
    """Aggregate ``g`` by ``labels``; returns the super-graph and the additive constant."""
    w = cfg.node_weights(g)
    sg = SuperGraph.from_graph(g, w)
    C = Clustering(labels)
    return sg.aggregate(C.labels.tolist()), edge_constant(SignedInstance(g, cfg))
