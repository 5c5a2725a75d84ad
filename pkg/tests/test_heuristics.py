import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, lambdas
from lambdacc import datasets
from lambdacc.graph import Clustering, Graph, cluster_statistics, max_scaled_cut
from lambdacc.heuristics import (
    HeuristicParams,
    SuperGraph,
    grow_clique,
    grow_cluster,
    lambda_louvain,
    supergraph_for,
)
from lambdacc.objective import LambdaConfig, SignedInstance, cluster_deletion_cost, lambda_cc_cost
from lambdacc.oracle import brute_force_cluster_deletion
from reference import bowtie, complete, naive_cost, path, random_graph

P3, K3 = path(3), complete(3)
MODES = st.sampled_from(["standard", "degree_weighted"])


def cost(g, cfg, C):
    return lambda_cc_cost(SignedInstance(g, cfg), C).total


def test_params_validation():
    with pytest.raises(ValueError):
        HeuristicParams(clique_candidates=0)


def test_grow_cluster_examples():
    for seed in range(5):
        assert grow_cluster(K3, LambdaConfig(0.5), HeuristicParams(seed)) == Clustering.single(3)
        C = grow_cluster(P3, LambdaConfig(0.6), HeuristicParams(seed))
        assert sorted(C.sizes.tolist()) == [1, 2]


def test_grow_clique_examples():
    assert grow_clique(complete(4)) == Clustering.single(4)
    cd_opt = brute_force_cluster_deletion(bowtie()).best_cost
    for seed in range(10):
        C = grow_clique(bowtie(), HeuristicParams(seed))
        assert cluster_deletion_cost(bowtie(), C) == cd_opt == 2
        assert cluster_deletion_cost(P3, grow_clique(P3, HeuristicParams(seed))) == 1


def test_louvain_triangle():
    C = lambda_louvain(K3, LambdaConfig(0.5))
    assert C == Clustering.single(3) and cost(K3, LambdaConfig(0.5), C) == 0


def _monotone(trace, slack=1e-9):
    return all(b <= a + slack for a, b in zip(trace, trace[1:]))


@given(graphs(min_n=1, max_n=14), lambdas, MODES, st.integers(0, 1000))
def test_traces_monotone_and_consistent(g, lam, mode, seed):
    cfg = LambdaConfig(lam, mode)
    for algo in (grow_cluster, lambda_louvain):
        trace: list[float] = []
        C = algo(g, cfg, HeuristicParams(seed), trace)
        assert _monotone(trace)
        assert trace[0] == pytest.approx(cost(g, cfg, Clustering.singletons(g.n)))
        assert trace[-1] == pytest.approx(cost(g, cfg, C), abs=1e-9)
        assert trace[-1] == pytest.approx(naive_cost(g, lam, C.labels, mode == "degree_weighted"), abs=1e-9)


@given(graphs(min_n=1, max_n=14), st.integers(0, 1000))
def test_grow_clique_cliques_and_trace(g, seed):
    trace: list[int] = []
    C = grow_clique(g, HeuristicParams(seed, clique_candidates=5), trace)
    assert all(s.density == 1.0 for s in cluster_statistics(g, C))
    assert _monotone(trace, 0)
    assert trace[-1] == cluster_deletion_cost(g, C)


def _cut_bound_holds(g, cfg, C):
    if C.k < 2:
        return True
    return max_scaled_cut(g, C, cfg.degree_weighted) <= cfg.lam + 1e-12


@given(graphs(min_n=2, max_n=16), lambdas, MODES, st.integers(0, 1000))
def test_cut_bound_on_random_graphs(g, lam, mode, seed):
    cfg = LambdaConfig(lam, mode)
    for algo in (grow_cluster, lambda_louvain):
        assert _cut_bound_holds(g, cfg, algo(g, cfg, HeuristicParams(seed)))


@pytest.mark.parametrize("lam", [0.01, 0.03, 0.1, 0.4])
@pytest.mark.parametrize("mode", ["standard", "degree_weighted"])
def test_cut_bound_karate(lam, mode):
    g = datasets.load("karate")
    cfg = LambdaConfig(lam if mode == "standard" else lam / 100, mode)
    for seed in range(3):
        assert _cut_bound_holds(g, cfg, lambda_louvain(g, cfg, HeuristicParams(seed)))
        assert _cut_bound_holds(g, cfg, grow_cluster(g, cfg, HeuristicParams(seed)))


def test_determinism():
    g = random_graph(np.random.default_rng(0), 40, 0.15)
    cfg = LambdaConfig(0.2)
    for algo in (grow_cluster, lambda_louvain):
        assert algo(g, cfg, HeuristicParams(7)) == algo(g, cfg, HeuristicParams(7))
    assert grow_clique(g, HeuristicParams(7)) == grow_clique(g, HeuristicParams(7))


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=50), lambdas, MODES, st.data())
def test_aggregation_correctness(g, lam, mode, data):
    cfg = LambdaConfig(lam, mode)
    first = data.draw(st.lists(st.integers(0, max(g.n // 3, 0)), min_size=g.n, max_size=g.n))
    sg, const = supergraph_for(g, cfg, first)
    second = data.draw(st.lists(st.integers(0, 3), min_size=sg.n, max_size=sg.n))
    flat_first = Clustering(first).labels
    flat = Clustering(np.array([second[c] for c in flat_first], dtype=np.int64)) if g.n else Clustering([])
    expected = cost(g, cfg, flat)
    assert sg.cost(lam, const, second) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    identity = SuperGraph.from_graph(g, cfg.node_weights(g))
    assert identity.cost(lam, const, flat.labels.tolist()) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_isolated_nodes_stay_singletons():
    g = Graph(5, [(0, 1)])
    cfg = LambdaConfig(0.3)
    for C in (grow_cluster(g, cfg), lambda_louvain(g, cfg), grow_clique(g)):
        assert C.labels[2] != C.labels[3] != C.labels[4] and C.labels[2] != C.labels[4]


def test_louvain_pass_limit_still_returns():
    g = random_graph(np.random.default_rng(2), 30, 0.2)
    C = lambda_louvain(g, LambdaConfig(0.1), HeuristicParams(0, max_passes=1))
    assert C.n == 30
