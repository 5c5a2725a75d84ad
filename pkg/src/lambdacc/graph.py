"""Undirected simple graphs, clusterings, and the set statistics used throughout.

Graphs are immutable once built. Node ids are contiguous ``0..n-1``.
"""

from __future__ import annotations

import io
import json
import logging
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class GraphParseError(ValueError):
    """Raised for malformed edge-list input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(ValueError):
    """Raised when a set statistic is requested outside its domain."""


class Graph:
    """Immutable undirected simple graph stored in CSR form.

    ``edges`` is an ``(m, 2)`` array with ``u < v`` in each row, sorted
    lexicographically. ``indptr``/``indices`` give the sorted neighbor lists.
    """

    __slots__ = ("n", "edges", "indptr", "indices", "degrees", "dropped", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] | np.ndarray = ()):
        n = int(n)
        if n < 0:
            raise ValueError("node count must be non-negative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        loops = arr[:, 0] == arr[:, 1]
        arr = np.sort(arr[~loops], axis=1)
        raw = len(arr)
        arr = np.unique(arr, axis=0) if raw else arr
        self.dropped = {"self_loops": int(loops.sum()), "duplicates": raw - len(arr)}
        self.n = n
        self.edges = arr
        self.edges.setflags(write=False)

        both = np.concatenate([arr, arr[:, ::-1]]) if len(arr) else np.zeros((0, 2), np.int64)
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self.degrees = np.bincount(both[:, 0], minlength=n).astype(np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(self.degrees)]).astype(np.int64)
        self.indices = both[:, 1].copy()
        for a in (self.degrees, self.indptr, self.indices):
            a.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adj(self) -> list[list[int]]:
        """Neighbor lists as plain Python lists, for the pure-Python inner loops."""
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[v]:ptr[v + 1]] for v in range(self.n)]

    @cached_property
    def adj_sets(self) -> list[frozenset[int]]:
        return [frozenset(nb) for nb in self.adj]

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=bool)
        if self.m:
            A[self.edges[:, 0], self.edges[:, 1]] = True
            A[self.edges[:, 1], self.edges[:, 0]] = True
        return A

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))


def parse_edge_list(text: str | io.TextIOBase, indexing: int | None = None) -> Graph:
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` are comments. The first non-comment
    line may be a JSON header ``{"n": int, "indexing": 0|1}``; an explicit
    ``indexing`` argument overrides the header. Without either, ids are
    0-based. Self-loops and duplicate edges are dropped and counted in
    ``Graph.dropped``.
    """
    if not isinstance(text, str):
        text = text.read()
    header: dict = {}
    pairs: list[tuple[int, int]] = []
    base = indexing
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        if first and line.startswith("{"):
            try:
                header = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GraphParseError(f"bad JSON header: {exc.msg}", lineno) from None
            if base is None:
                base = int(header.get("indexing", 0))
            first = False
            continue
        first = False
        if base is None:
            base = 0
        tokens = line.split()
        if len(tokens) < 2:
            raise GraphParseError(f"expected two node ids, got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphParseError(f"non-integer node id in {line!r}", lineno) from None
        if u < base or v < base:
            raise GraphParseError(f"node id below indexing base {base}", lineno)
        pairs.append((u - base, v - base))
    if base is None:
        base = 0
    if base not in (0, 1):
        raise GraphParseError(f"indexing must be 0 or 1, got {base}")
    n = max((max(p) for p in pairs), default=-1) + 1
    if "n" in header:
        hn = int(header["n"])
        if hn < n:
            raise GraphParseError(f"header n={hn} smaller than largest node id {n - 1 + base}")
        n = hn
    g = Graph(n, pairs)
    if g.dropped["self_loops"] or g.dropped["duplicates"]:
        log.info("dropped %d self-loops and %d duplicate edges",
                 g.dropped["self_loops"], g.dropped["duplicates"])
    return g


def read_edge_list(path: str | os.PathLike, indexing: int | None = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), indexing=indexing)


def write_edge_list(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"n": g.n, "indexing": 0}) + "\n")
        for u, v in g.edges.tolist():
            fh.write(f"{u} {v}\n")


# --------------------------------------------------------------------------
# clusterings


class Clustering:
    """Assignment of every node to exactly one cluster.

    Labels are canonicalised to ``0..k-1`` in order of first appearance, so two
    clusterings describing the same partition compare equal.
    """

    __slots__ = ("labels", "__dict__")

    def __init__(self, labels: Sequence[int] | np.ndarray):
        lab = np.asarray(labels, dtype=np.int64).ravel()
        if len(lab):
            _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
            rank = np.empty(len(first), dtype=np.int64)
            rank[np.argsort(first, kind="stable")] = np.arange(len(first))
            lab = rank[inv]
        self.labels = lab
        self.labels.setflags(write=False)

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]], n: int) -> "Clustering":
        lab = np.full(n, -1, dtype=np.int64)
        for c, members in enumerate(clusters):
            for v in members:
                if lab[v] != -1:
                    raise ValueError(f"node {v} assigned twice")
                lab[v] = c
        if (lab < 0).any():
            raise ValueError("clustering does not cover every node")
        return cls(lab)

    @classmethod
    def singletons(cls, n: int) -> "Clustering":
        return cls(np.arange(n))

    @classmethod
    def single(cls, n: int) -> "Clustering":
        return cls(np.zeros(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def clusters(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        return np.split(order, np.cumsum(self.sizes)[:-1])

    def volumes(self, g: Graph) -> np.ndarray:
        return np.bincount(self.labels, weights=g.degrees, minlength=self.k).astype(np.int64)

    def interior_edges(self, g: Graph) -> np.ndarray:
        if not g.m:
            return np.zeros(self.k, dtype=np.int64)
        lu, lv = self.labels[g.edges[:, 0]], self.labels[g.edges[:, 1]]
        same = lu == lv
        return np.bincount(lu[same], minlength=self.k)

    def cuts(self, g: Graph) -> np.ndarray:
        """``cut(S_i)`` for every cluster."""
        return self.volumes(g) - 2 * self.interior_edges(g)

    def same_cluster(self, u: int, v: int) -> bool:
        return bool(self.labels[u] == self.labels[v])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Clustering) and np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    def __repr__(self) -> str:
        return f"Clustering(k={self.k}, n={self.n})"


# --------------------------------------------------------------------------
# set statistics


@dataclass(frozen=True)
class SetStatistics:
    size: int
    cut: int
    vol: int
    interior_edges: int
    density: float
    scaled_sparsest_cut: float | None = None
    scaled_normalized_cut: float | None = None


def _as_mask(g: Graph, S: Iterable[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(S)
    if arr.dtype == bool:
        if arr.shape != (g.n,):
            raise DomainError("boolean node mask has wrong length")
        return arr
    mask = np.zeros(g.n, dtype=bool)
    idx = np.asarray(list(arr) if arr.ndim == 0 else arr, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise DomainError("node id outside graph")
    mask[idx] = True
    return mask


def density(size: int, interior: int) -> float:
    """Edge density of a node set; a single node has density 1 by convention."""
    if size <= 1:
        return 1.0
    return interior / (size * (size - 1) / 2)


def scaled_normalized_cut(cut: float, vol_s: float, vol_rest: float) -> float:
    # A set with no crossing edges scores 0 even when a side has zero volume.
    if cut == 0:
        return 0.0
    return cut / (vol_s * vol_rest)


def set_statistics(g: Graph, S, cut_ratios: bool = True) -> SetStatistics:
    """Cut, volume, density and the two scaled cut ratios of ``S``.

    With ``cut_ratios`` the set must be a nonempty proper subset of ``V``.
    """
    mask = _as_mask(g, S)
    size = int(mask.sum())
    if size == 0:
        raise DomainError("statistics of an empty set")
    if g.m:
        iu, iv = mask[g.edges[:, 0]], mask[g.edges[:, 1]]
        cut = int((iu != iv).sum())
        interior = int((iu & iv).sum())
    else:
        cut = interior = 0
    vol = int(g.degrees[mask].sum())
    stats = dict(size=size, cut=cut, vol=vol, interior_edges=interior,
                 density=density(size, interior))
    if cut_ratios:
        if size == g.n:
            raise DomainError("cut ratio of the whole node set is undefined")
        stats["scaled_sparsest_cut"] = cut / (size * (g.n - size))
        stats["scaled_normalized_cut"] = scaled_normalized_cut(cut, vol, 2 * g.m - vol)
    return SetStatistics(**stats)


def pair_cut(g: Graph, S, T) -> int:
    """Number of edges with one endpoint in ``S`` and the other in ``T``."""
    ms, mt = _as_mask(g, S), _as_mask(g, T)
    if (ms & mt).any():
        raise DomainError("pair_cut needs disjoint sets")
    if not g.m:
        return 0
    u, v = g.edges[:, 0], g.edges[:, 1]
    return int(((ms[u] & mt[v]) | (mt[u] & ms[v])).sum())


@dataclass(frozen=True)
class ClusterStats:
    cluster: int
    size: int
    interior_edges: int
    cut: int
    vol: int
    density: float
    scaled_sparsest_cut: float | None
    scaled_normalized_cut: float | None


def cluster_statistics(g: Graph, C: Clustering) -> list[ClusterStats]:
    """Per-cluster statistics; cut ratios are ``None`` when the cluster is all of V."""
    sizes = C.sizes
    inner = C.interior_edges(g)
    vols = C.volumes(g)
    cuts = vols - 2 * inner
    out = []
    for c in range(C.k):
        s, e, vol, cut = int(sizes[c]), int(inner[c]), int(vols[c]), int(cuts[c])
        if s < g.n:
            psi = cut / (s * (g.n - s))
            ncut = scaled_normalized_cut(cut, vol, 2 * g.m - vol)
        else:
            psi = ncut = None
        out.append(ClusterStats(c, s, e, cut, vol, density(s, e), psi, ncut))
    return out


def max_scaled_cut(g: Graph, C: Clustering, degree_weighted: bool = False) -> float | None:
    """Largest per-cluster scaled sparsest (or normalized) cut; ``None`` for one cluster."""
    if C.k < 2:
        return None
    stats = cluster_statistics(g, C)
    key = "scaled_normalized_cut" if degree_weighted else "scaled_sparsest_cut"
    return max(getattr(s, key) for s in stats)
