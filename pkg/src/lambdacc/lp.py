"""Metric LP relaxation of correlation clustering, solved by lazy triangle generation.

The relaxation minimises ``sum_{i<j} w+_ij x_ij + w-_ij (1 - x_ij)`` over
``0 <= x <= 1`` subject to ``x_ij <= x_ik + x_jk`` for every triple. Only the
triangle rows that the current optimum violates are added, in batches of the
most violated ones, and the LP is re-solved until no triangle is violated
beyond the feasibility tolerance.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .graph import Graph
from .objective import LambdaConfig, SignedInstance

log = logging.getLogger(__name__)

FEAS_TOL = 1e-8
OPT_TOL = 1e-7
DEFAULT_MAX_N = 2000


class LpNonConvergence(RuntimeError):
    """Constraint generation stopped before the solution was triangle-feasible.

    ``solution`` holds the last iterate; its objective is flagged uncertified.
    """

    def __init__(self, message: str, solution: "FractionalSolution"):
        super().__init__(message)
        self.solution = solution


class LpTooLarge(ValueError):
    pass


@dataclass
class LpProblem:
    """Pair weights plus the pairs pinned to ``x = 1``.

    ``w_plus``/``w_minus`` are dense symmetric ``n x n`` arrays. For the
    cluster-deletion relaxation every non-edge is pinned.
    """

    w_plus: np.ndarray
    w_minus: np.ndarray
    fixed_one: np.ndarray
    instance: SignedInstance | None = None
    kind: str = "lambdacc"
    feas_tol: float = FEAS_TOL
    opt_tol: float = OPT_TOL

    @property
    def n(self) -> int:
        return len(self.w_plus)

    @classmethod
    def lambda_cc(cls, inst: SignedInstance | Graph, cfg: LambdaConfig | None = None) -> "LpProblem":
        if isinstance(inst, Graph):
            inst = SignedInstance(inst, cfg)
        wp, wm = inst.dense_weights()
        return cls(wp, wm, np.zeros_like(wp, dtype=bool), instance=inst, kind="lambdacc")

    @classmethod
    def cluster_deletion(cls, g: Graph) -> "LpProblem":
        A = g.adjacency_matrix()
        wp = A.astype(float)
        wm = (~A).astype(float)
        np.fill_diagonal(wm, 0.0)
        fixed = ~A
        np.fill_diagonal(fixed, False)
        return cls(wp, wm, fixed, kind="cluster_deletion")

    def budgets(self, x: np.ndarray) -> np.ndarray:
        """Per-pair LP cost ``c_ij = w+ x + w- (1 - x)`` with a zero diagonal."""
        c = self.w_plus * x + self.w_minus * (1.0 - x)
        np.fill_diagonal(c, 0.0)
        return c


@dataclass
class FractionalSolution:
    x: np.ndarray
    objective: float
    max_violation: float
    budgets: np.ndarray
    certified: bool = True
    rounds: int = 0
    n_constraints: int = 0
    history: list[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.x)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "objective": self.objective,
            "max_violation": self.max_violation,
            "certified": self.certified,
            "rounds": self.rounds,
            "n_constraints": self.n_constraints,
            "x": [[float(v) for v in row] for row in self.x],
        }

    def dump(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)


# --------------------------------------------------------------------------
# separation


def _triangle_residuals(x: np.ndarray, k: int) -> np.ndarray:
    """``x_ij - x_ik - x_jk`` for fixed third node ``k``."""
    col = x[:, k]
    return x - col[:, None] - col[None, :]


def violated_triangles(x, tol: float = FEAS_TOL, cap: int | None = None) -> list[tuple[int, int, int, float]]:
    """All triangle constraints ``x_ij <= x_ik + x_jk`` violated by more than ``tol``.

    Returned as ``(i, j, k, residual)`` with ``i < j``, sorted by residual
    (largest first, then by ``(i, j, k)``) and truncated to ``cap`` entries.
    """
    X = np.asarray(x.x if isinstance(x, FractionalSolution) else x, dtype=float)
    n = len(X)
    iu, ju = np.triu_indices(n, k=1)
    found = []
    for k in range(n):
        r = _triangle_residuals(X, k)[iu, ju]
        hit = (r > tol) & (iu != k) & (ju != k)
        if hit.any():
            idx = np.flatnonzero(hit)
            found.append(np.column_stack([iu[idx], ju[idx], np.full(len(idx), k), r[idx]]))
    if not found:
        return []
    arr = np.concatenate(found)
    order = np.lexsort((arr[:, 2], arr[:, 1], arr[:, 0], -arr[:, 3]))
    if cap is not None:
        order = order[:cap]
    return [(int(a[0]), int(a[1]), int(a[2]), float(a[3])) for a in arr[order]]


def max_triangle_violation(x: np.ndarray) -> float:
    X = np.asarray(x, dtype=float)
    n = len(X)
    worst = 0.0
    for k in range(n):
        r = _triangle_residuals(X, k)
        r[k, :] = 0.0
        r[:, k] = 0.0
        np.fill_diagonal(r, 0.0)
        worst = max(worst, float(r.max()))
    return worst


def all_triangles(n: int) -> list[tuple[int, int, int]]:
    """Every triangle row ``(i, j, k)`` with ``i < j`` and ``k`` distinct."""
    return [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(n) if k != i and k != j]


# --------------------------------------------------------------------------
# dense simplex (Bland's rule)


class LpInfeasible(RuntimeError):
    pass


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _bland_loop(T: np.ndarray, basis: list[int], ncols: int, eps: float, max_iter: int) -> None:
    """Minimise the objective in the last row of ``T`` over columns ``< ncols``."""
    for _ in range(max_iter):
        red = T[-1, :ncols]
        cand = np.flatnonzero(red < -eps)
        if not len(cand):
            return
        c = int(cand[0])
        colv = T[:-1, c]
        pos = np.flatnonzero(colv > eps)
        if not len(pos):
            raise RuntimeError("LP unbounded")
        ratios = T[pos, -1] / colv[pos]
        best = ratios.min()
        ties = pos[ratios <= best + eps * max(1.0, abs(best))]
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c
    raise RuntimeError("simplex iteration limit reached")


def simplex_bland(c: np.ndarray, A_ub: np.ndarray, b_ub: np.ndarray,
                  eps: float = 1e-11, max_iter: int = 100_000) -> np.ndarray:
    """Two-phase dense tableau simplex for ``min c x, A x <= b, x >= 0``.

    Bland's rule (lowest-index entering column, lowest basic index among
    ratio ties) rules out cycling.
    """
    c = np.asarray(c, float)
    A = np.asarray(A_ub, float).reshape(-1, len(c))
    b = np.asarray(b_ub, float)
    m, nv = A.shape
    neg = b < 0
    art_rows = np.flatnonzero(neg)
    na = len(art_rows)
    width = nv + m + na
    T = np.zeros((m + 1, width + 1))
    sign = np.where(neg, -1.0, 1.0)
    T[:m, :nv] = A * sign[:, None]
    T[:m, nv:nv + m] = np.diag(sign)
    T[:m, -1] = b * sign
    basis = list(range(nv, nv + m))
    for a, r in enumerate(art_rows):
        T[r, nv + m + a] = 1.0
        basis[r] = nv + m + a
    if na:
        T[-1, nv + m:width] = 1.0
        for r in art_rows:
            T[-1] -= T[r]
        _bland_loop(T, basis, width, eps, max_iter)
        if -T[-1, -1] > 1e-9:
            raise LpInfeasible("LP infeasible")
        for r in range(m):
            if basis[r] >= nv + m:
                nz = np.flatnonzero(np.abs(T[r, :nv + m]) > eps)
                if len(nz):
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
        T = np.delete(T, np.s_[nv + m:width], axis=1)
    T[-1] = 0.0
    T[-1, :nv] = c
    for r in range(m):
        if basis[r] < nv + m:
            T[-1] -= T[-1, basis[r]] * T[r]
    _bland_loop(T, basis, nv + m, eps, max_iter)
    x = np.zeros(nv + m)
    for r in range(m):
        if basis[r] < nv + m:
            x[basis[r]] = T[r, -1]
    return x[:nv]


# --------------------------------------------------------------------------
# constraint generation


class _Layout:
    """Maps free pairs to LP columns; pinned pairs become constants."""

    def __init__(self, prob: LpProblem):
        n = prob.n
        self.n = n
        iu, ju = np.triu_indices(n, k=1)
        free = ~prob.fixed_one[iu, ju]
        self.iu, self.ju = iu[free], ju[free]
        self.col = -np.ones((n, n), dtype=np.int64)
        self.col[self.iu, self.ju] = np.arange(len(self.iu))
        self.col[self.ju, self.iu] = np.arange(len(self.iu))
        self.fixed = prob.fixed_one
        wp, wm = prob.w_plus, prob.w_minus
        self.c = wp[self.iu, self.ju] - wm[self.iu, self.ju]
        fi, fj = iu[~free], ju[~free]
        self.const = float(wm[self.iu, self.ju].sum() + wp[fi, fj].sum())

    def row(self, i: int, j: int, k: int):
        """Sparse row and rhs of ``x_ij - x_ik - x_jk <= 0``; ``None`` when no column is free."""
        cols, vals, rhs = [], [], 0.0
        for (a, b), s in (((i, j), 1.0), ((i, k), -1.0), ((j, k), -1.0)):
            cidx = self.col[a, b]
            if cidx < 0:
                rhs -= s  # pinned at 1
            else:
                cols.append(int(cidx))
                vals.append(s)
        if not cols:
            return None
        return cols, vals, rhs

    def to_matrix(self, v: np.ndarray) -> np.ndarray:
        X = np.where(self.fixed, 1.0, 0.0)
        X[self.iu, self.ju] = v
        X[self.ju, self.iu] = v
        np.fill_diagonal(X, 0.0)
        return X


def _solve_restricted(layout: _Layout, rows: list, backend: str) -> np.ndarray:
    nv = len(layout.c)
    if nv == 0:
        return np.zeros(0)
    if rows:
        data, ri, ci, rhs = [], [], [], []
        for r, (cols, vals, b) in enumerate(rows):
            ci.extend(cols)
            data.extend(vals)
            ri.extend([r] * len(cols))
            rhs.append(b)
        A = sp.csr_matrix((data, (ri, ci)), shape=(len(rows), nv))
        b_ub = np.array(rhs)
    else:
        A, b_ub = None, None
    if backend == "highs":
        res = linprog(layout.c, A_ub=A, b_ub=b_ub, bounds=(0.0, 1.0), method="highs-ds",
                      options={"primal_feasibility_tolerance": 1e-10,
                               "dual_feasibility_tolerance": 1e-10})
        if res.status != 0:
            raise RuntimeError(f"inner LP failed: {res.message}")
        v = res.x
    elif backend == "simplex":
        box = np.eye(nv)
        A_dense = np.vstack([A.toarray(), box]) if A is not None else box
        b_dense = np.concatenate([b_ub, np.ones(nv)]) if b_ub is not None else np.ones(nv)
        v = simplex_bland(layout.c, A_dense, b_dense)
    else:
        raise ValueError(f"unknown LP backend {backend!r}")
    return np.clip(v, 0.0, 1.0)


def solve_cc_lp(prob: LpProblem, backend: str = "highs", batch_factor: int = 50,
                max_rounds: int = 500, max_n: int = DEFAULT_MAX_N,
                full: bool = False) -> FractionalSolution:
    """Solve the metric relaxation of ``prob``.

    Each round re-solves the LP with the accumulated triangle rows and adds
    up to ``batch_factor * n`` of the most violated ones. ``full=True`` adds
    every triangle row up front instead (small ``n`` only).
    """
    n = prob.n
    if n < 2:
        raise ValueError("LP needs at least two nodes")
    if n > max_n:
        raise LpTooLarge(f"n={n} exceeds dense LP cap {max_n}")
    layout = _Layout(prob)
    cap = batch_factor * n
    seen: set[tuple[int, int, int]] = set()
    rows: list = []
    history: list[float] = []

    def add(tri):
        if tri in seen:
            return False
        seen.add(tri)
        r = layout.row(*tri)
        if r is not None:
            rows.append(r)
        return True

    if full:
        for tri in all_triangles(n):
            add(tri)

    X = None
    for rnd in range(1, max_rounds + 1):
        v = _solve_restricted(layout, rows, backend)
        obj = float(layout.c @ v) + layout.const
        history.append(obj)
        X = layout.to_matrix(v)
        viol = violated_triangles(X, prob.feas_tol, cap)
        if not viol:
            return _finish(prob, X, rnd, len(rows), history, certified=True)
        if not any([add((i, j, k)) for i, j, k, _ in viol]):
            sol = _finish(prob, X, rnd, len(rows), history, certified=False)
            raise LpNonConvergence("violated triangles already present; inner solver inaccurate", sol)
        log.debug("round %d: objective %.10g, added up to %d rows (%d total)", rnd, obj, len(viol), len(rows))
    sol = _finish(prob, X, max_rounds, len(rows), history, certified=False)
    raise LpNonConvergence(f"no triangle-feasible solution after {max_rounds} rounds", sol)


def _finish(prob, X, rounds, ncons, history, certified) -> FractionalSolution:
    budgets = prob.budgets(X)
    obj = float(np.triu(budgets, 1).sum())
    return FractionalSolution(X, obj, max_triangle_violation(X), budgets, certified,
                              rounds, ncons, history)


def lp_bound(g: Graph, cfg: LambdaConfig | None = None, **kw) -> FractionalSolution:
    """LambdaCC relaxation of ``g`` (cluster-deletion relaxation when ``cfg`` is None)."""
    prob = LpProblem.cluster_deletion(g) if cfg is None else LpProblem.lambda_cc(g, cfg)
    return solve_cc_lp(prob, **kw)
