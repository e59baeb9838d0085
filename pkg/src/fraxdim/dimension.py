"""Incidence matrices, Perron roots, and the dimension solve.

The matrix structure is exact (multisets of ratio exponents per cell);
only the alpha-evaluation and the root find run in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .algebra import PisotField
from .errors import DegenerateSystem, NoConvergence
from .graph import Gifs

MAX_POWER_ITERATIONS = 200_000


@dataclass
class RatioMatrix:
    size: int
    cells: Dict[Tuple[int, int], Tuple[int, ...]]  # (i, j) -> sorted ratio exponents
    field: PisotField

    def beta_float(self) -> float:
        return self.field.beta().to_float(1e-15)

    def evaluate(self, alpha: float) -> np.ndarray:
        beta = self.beta_float()
        out = np.zeros((self.size, self.size))
        for (i, j), exps in self.cells.items():
            out[i, j] = sum(beta ** (-k * alpha) for k in exps)
        return out

    def is_empty(self) -> bool:
        return not self.cells

    def pattern(self) -> List[List[int]]:
        """Cell counts; equals the 0/1 pattern when no cell has multiplicity."""
        out = [[0] * self.size for _ in range(self.size)]
        for (i, j), exps in self.cells.items():
            out[i][j] = len(exps)
        return out

    def to_json_cells(self):
        rows = []
        for i in range(self.size):
            row = []
            for j in range(self.size):
                exps = self.cells.get((i, j), ())
                counts: Dict[int, int] = {}
                for k in exps:
                    counts[k] = counts.get(k, 0) + 1
                row.append([{"exp": k, "count": c} for k, c in sorted(counts.items())])
            rows.append(row)
        return rows


def build_incidence(g: Gifs) -> RatioMatrix:
    cells: Dict[Tuple[int, int], List[int]] = {}
    for e in g.edges:
        cells.setdefault((e.src, e.dst), []).append(e.map.ratio_exp)
    fixed = {k: tuple(sorted(v)) for k, v in cells.items()}
    field = g.edges[0].map.field if g.edges else None
    return RatioMatrix(g.vertex_count, fixed, field)


def _tarjan_sccs(adj: List[List[int]]) -> List[List[int]]:
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    out: List[List[int]] = []
    counter = [0]

    def strongconnect(v0):
        work = [(v0, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter[0]
                counter[0] += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    for v in range(n):
        if index[v] == -1:
            strongconnect(v)
    return out


def _power_iteration(mat: np.ndarray, tol: float) -> float:
    """Perron root of a nonnegative matrix via power iteration on A + I.

    The +I shift keeps the Perron eigenvalue simple under periodicity and
    shifts it by exactly one.
    """
    n = mat.shape[0]
    if n == 0:
        return 0.0
    shifted = mat + np.eye(n)
    x = np.ones(n)
    lam = None
    for _ in range(MAX_POWER_ITERATIONS):
        y = shifted @ x
        norm = y.sum()
        if norm == 0:
            return 0.0
        y /= norm
        new_lam = float(y @ (shifted @ y) / (y @ y))
        if lam is not None and abs(new_lam - lam) < tol * max(1.0, abs(new_lam)):
            return new_lam - 1.0
        lam = new_lam
        x = y
    raise NoConvergence(MAX_POWER_ITERATIONS, (lam, new_lam))


def spectral_radius(mat: RatioMatrix, alpha: float, tol: float = 1e-13) -> float:
    if tol <= 0:
        raise ValueError("tol must be positive")
    dense = mat.evaluate(alpha)
    n = mat.size
    adj = [[j for j in range(n) if dense[i, j] > 0] for i in range(n)]
    comps = _tarjan_sccs(adj)
    if len(comps) <= 1:
        return _power_iteration(dense, tol)
    best = 0.0
    for comp in comps:
        sub = dense[np.ix_(comp, comp)]
        best = max(best, _power_iteration(sub, tol))
    return best


@dataclass
class DimensionResult:
    alpha: float
    lambda_at_alpha: float
    bracket: Tuple[float, float]
    iterations: int

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "lambda_at_alpha": self.lambda_at_alpha,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
        }


def solve_dimension(mat: RatioMatrix, tol: float = 1e-9) -> DimensionResult:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mat.is_empty():
        raise DegenerateSystem("matrix has no nonempty cell")
    lam0 = spectral_radius(mat, 0.0)
    if lam0 < 1.0:
        raise DegenerateSystem(
            f"spectral radius at alpha=0 is {lam0} < 1; no nonnegative solution"
        )
    lo, hi = 0.0, 1.0
    iterations = 0
    while spectral_radius(mat, hi) >= 1.0:
        lo, hi = hi, hi * 2
        iterations += 1
        if hi > 1024:
            raise DegenerateSystem("lambda_alpha stays >= 1 out to alpha = 1024")
    lam_mid = lam0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        lam_mid = spectral_radius(mat, mid)
        if lam_mid >= 1.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
        if iterations > 400:
            break
    alpha = (lo + hi) / 2
    return DimensionResult(alpha, spectral_radius(mat, alpha), (lo, hi), iterations)


def moran_dimension(ratio_exps: Sequence[int], field: PisotField, tol: float = 1e-9) -> float:
    if not ratio_exps:
        raise ValueError("need at least one contraction ratio")
    if any(k < 1 for k in ratio_exps):
        raise ValueError("ratio exponents must be >= 1")
    beta = field.beta().to_float(1e-15)

    def total(alpha: float) -> float:
        return sum(beta ** (-k * alpha) for k in ratio_exps)

    if total(0.0) < 1.0:
        raise DegenerateSystem("sum of ratios^0 < 1")
    lo, hi = 0.0, 1.0
    while total(hi) >= 1.0:
        lo, hi = hi, hi * 2
    for _ in range(200):
        if hi - lo <= tol * 0.5:
            break
        mid = (lo + hi) / 2
        if total(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def log_ratio_dimension(count: float, base: float = 2.0) -> float:
    """Closed form log(count)/log(base) used by oracle checks."""
    return math.log(count) / math.log(base)
