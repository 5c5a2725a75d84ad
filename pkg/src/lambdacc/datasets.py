"""Small benchmark networks and random graph generators.

Karate and Les Miserables ship with the package. Football and Polbooks are
not redistributed here; put ``football.txt`` / ``polbooks.txt`` edge lists in
the directory named by ``LAMBDACC_DATA`` to make them loadable.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

import numpy as np

from .graph import Graph, parse_edge_list

BENCHMARKS = ("karate", "lesmis", "polbooks", "football")

# minimum scaled sparsest cut values reported for the four benchmarks
PUBLISHED_LAMBDA_STAR = {
    "karate": 0.0267,
    "lesmis": 0.0045,
    "polbooks": 0.0069,
    "football": 0.0184,
}


def _locate(name: str) -> Path | None:
    env = os.environ.get("LAMBDACC_DATA")
    if env:
        p = Path(env) / f"{name}.txt"
        if p.is_file():
            return p
    p = resources.files("lambdacc").joinpath("data", f"{name}.txt")
    return Path(str(p)) if p.is_file() else None


def available(name: str) -> bool:
    return _locate(name) is not None


def load(name: str) -> Graph:
    path = _locate(name)
    if path is None:
        raise FileNotFoundError(
            f"dataset {name!r} not found; place {name}.txt in $LAMBDACC_DATA")
    return parse_edge_list(path.read_text(encoding="utf-8"))


def gnp(n: int, p: float, seed=None) -> Graph:
    rng = np.random.default_rng(seed)
    A = np.triu(rng.random((n, n)) < p, 1)
    return Graph(n, np.argwhere(A))


def planted_partition(n: int, groups: int, deg_in: float, deg_out: float, seed=None) -> Graph:
    """Sparse planted-partition graph with expected within/between degrees.

    Edges are sampled per node without building an ``n x n`` matrix.
    """
    rng = np.random.default_rng(seed)
    label = np.arange(n) % groups
    size = n // groups
    m_in = int(round(n * deg_in / 2))
    m_out = int(round(n * deg_out / 2))
    u = rng.integers(n, size=m_in)
    v = label[u] + groups * rng.integers(size, size=m_in)
    v = np.minimum(v, n - 1)
    a = rng.integers(n, size=m_out)
    b = rng.integers(n, size=m_out)
    edges = np.concatenate([np.column_stack([u, v]), np.column_stack([a, b])])
    return Graph(n, edges)
