"""The LambdaCC objective and its equivalent forms.

Every evaluation here works from cluster-level aggregates (sizes, node-weight
sums, interior edges), so no function iterates over the non-edges of a graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import Clustering, DomainError, Graph


class WeightMode(str, Enum):
    STANDARD = "standard"
    DEGREE = "degree_weighted"


class UnsupportedModeError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaConfig:
    lam: float
    weight_mode: WeightMode = WeightMode.STANDARD

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0):
            raise ValueError(f"lambda must lie strictly between 0 and 1, got {self.lam}")
        object.__setattr__(self, "weight_mode", WeightMode(self.weight_mode))

    @property
    def degree_weighted(self) -> bool:
        return self.weight_mode is WeightMode.DEGREE

    def node_weights(self, g: Graph) -> np.ndarray:
        if self.degree_weighted:
            return g.degrees.astype(float)
        return np.ones(g.n)


@dataclass(frozen=True)
class SignedInstance:
    """The signed graph induced by ``(graph, config)``; pair weights are computed on demand."""

    graph: Graph
    config: LambdaConfig

    @property
    def lam(self) -> float:
        return self.config.lam

    @property
    def node_weights(self) -> np.ndarray:
        return self.config.node_weights(self.graph)

    def pair_weights(self, i: int, j: int) -> tuple[float, float]:
        """``(w_plus, w_minus)`` for the pair ``{i, j}``."""
        w = self.node_weights
        p = self.lam * w[i] * w[j]
        if self.graph.has_edge(i, j):
            return 1.0 - p, 0.0
        return 0.0, p

    def dense_weights(self) -> tuple[np.ndarray, np.ndarray]:
        """Full ``n x n`` positive and negative weight matrices (zero diagonal)."""
        A = self.graph.adjacency_matrix()
        w = self.node_weights
        P = self.lam * np.outer(w, w)
        wp = np.where(A, 1.0 - P, 0.0)
        wm = np.where(A, 0.0, P)
        np.fill_diagonal(wm, 0.0)
        return wp, wm


@dataclass(frozen=True)
class ObjectiveValue:
    total: float
    positive_mistakes: float
    negative_mistakes: float

    def __float__(self) -> float:
        return self.total


def _check_cover(g: Graph, C: Clustering) -> None:
    if C.n != g.n:
        raise DomainError(f"clustering covers {C.n} nodes, graph has {g.n}")


def lambda_cc_cost(inst: SignedInstance, C: Clustering) -> ObjectiveValue:
    """Weight of disagreements of ``C`` in the signed instance.

    Negative mistakes inside a cluster S are ``lam * (W_S**2 - sum w_v**2) / 2``
    minus ``lam`` times the weighted interior edges, with ``W_S`` the node-weight
    sum of S.
    """
    g, lam = inst.graph, inst.lam
    _check_cover(g, C)
    w = inst.node_weights
    lab = C.labels
    W = np.bincount(lab, weights=w, minlength=C.k)
    W2 = np.bincount(lab, weights=w * w, minlength=C.k)
    pairs_in = 0.5 * float(np.sum(W * W - W2))
    if g.m:
        u, v = g.edges[:, 0], g.edges[:, 1]
        ww = w[u] * w[v]
        same = lab[u] == lab[v]
        pos = float(np.sum(1.0 - lam * ww[~same]))
        edges_in = float(np.sum(ww[same]))
    else:
        pos = edges_in = 0.0
    neg = lam * (pairs_in - edges_in)
    return ObjectiveValue(pos + neg, pos, neg)


def lambda_cc_cost_cutform(g: Graph, lam: float, C: Clustering,
                           mode: WeightMode | str = WeightMode.STANDARD) -> float:
    """Standard-weight objective written as cut and size terms only."""
    if WeightMode(mode) is not WeightMode.STANDARD:
        raise UnsupportedModeError("cut form is defined for standard node weights only")
    _check_cover(g, C)
    sizes = C.sizes.astype(float)
    cuts = C.cuts(g).astype(float)
    n = g.n
    return (0.5 * cuts.sum() - 0.5 * lam * float(np.sum(sizes * (n - sizes)))
            + lam * n * (n - 1) / 2 - lam * g.m)


def _null_model_weights(g: Graph, null_mode: str) -> np.ndarray:
    if null_mode == "degree":
        return g.degrees.astype(float)
    if null_mode == "uniform":
        return np.ones(g.n)
    raise ValueError(f"unknown null model {null_mode!r}")


def hamiltonian(g: Graph, gamma: float, C: Clustering, null_mode: str = "degree",
                node_weights: np.ndarray | None = None) -> float:
    """``-sum_{i != j} (A_ij - gamma * P_ij) [i ~ j]`` over ordered pairs.

    ``P_ij = w_i w_j / 2m`` with ``w`` the degrees (``null_mode="degree"``),
    all ones (``"uniform"``), or an explicit ``node_weights`` vector.
    """
    if g.m == 0:
        raise DomainError("null model undefined for a graph without edges")
    _check_cover(g, C)
    w = _null_model_weights(g, null_mode) if node_weights is None else np.asarray(node_weights, float)
    lab = C.labels
    W = np.bincount(lab, weights=w, minlength=C.k)
    W2 = np.bincount(lab, weights=w * w, minlength=C.k)
    p_in = float(np.sum(W * W - W2)) / (2 * g.m)
    a_in = 2.0 * float(C.interior_edges(g).sum())
    return -(a_in - gamma * p_in)


def modularity(g: Graph, C: Clustering) -> float:
    """Newman modularity with the configuration null model and no self-pairs."""
    return -hamiltonian(g, 1.0, C, "degree") / (2 * g.m)


def edge_constant(inst: SignedInstance) -> float:
    """``sum_{(i,j) in E} (1 - lam w_i w_j)``, the additive gap to ``H/2``."""
    g = inst.graph
    if not g.m:
        return 0.0
    w = inst.node_weights
    return float(np.sum(1.0 - inst.lam * w[g.edges[:, 0]] * w[g.edges[:, 1]]))


def cluster_deletion_cost(g: Graph, C: Clustering) -> int | None:
    """Cut-edge count if every cluster is a clique, else ``None`` (infeasible)."""
    _check_cover(g, C)
    inner = C.interior_edges(g)
    s = C.sizes
    if np.any(inner != s * (s - 1) // 2):
        return None
    return int(g.m - inner.sum())


def alpha_cost(g: Graph, alpha: float, C: Clustering) -> float:
    """Cut edges at weight 1 plus intra-cluster non-edges at weight ``alpha``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    _check_cover(g, C)
    inner = int(C.interior_edges(g).sum())
    s = C.sizes
    pairs = int(np.sum(s * (s - 1) // 2))
    return (g.m - inner) + alpha * (pairs - inner)


def adjusted_rand_index(C1: Clustering, C2: Clustering) -> float:
    """Adjusted Rand index from the pair-counting contingency table."""
    if C1.n != C2.n:
        raise DomainError("clusterings cover different node counts")
    n = C1.n
    if n == 0:
        return 1.0
    table = np.zeros((C1.k, C2.k), dtype=np.int64)
    np.add.at(table, (C1.labels, C2.labels), 1)

    def comb2(x):
        x = np.asarray(x, dtype=np.int64)
        return int(np.sum(x * (x - 1) // 2))

    index = comb2(table)
    a, b = comb2(table.sum(axis=1)), comb2(table.sum(axis=0))
    total = n * (n - 1) // 2
    expected = a * b / total if total else 0.0
    max_index = 0.5 * (a + b)
    if math.isclose(max_index, expected, rel_tol=0.0, abs_tol=1e-12):
        return 1.0 if C1 == C2 else 0.0
    return (index - expected) / (max_index - expected)
