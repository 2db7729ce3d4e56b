"""Adaptive refinement of the time grid driven by local indicators.

One iteration solves on the current grid, evaluates the localized
estimator, marks a minimal bulk of slabs whose indicators reach a fraction
theta of the total, and bisects the marked slabs (children inherit the
parent's degree).  The loop stops on the iteration budget, on a tolerance
for the total estimator, or when nothing is marked.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ErrorBundle, compute_errors
from .estimator import EstimatorReport, estimate
from .slabsolver import ProblemData, SlabSolution, TimeGrid, march
from .spacefem import TensorSpace


def doerfler_mark(indicators, theta: float) -> list[int]:
    """Minimal set of largest indicators whose sum reaches theta * total.

    Sorting is descending with ties resolved toward smaller indices.  An
    all-zero indicator vector marks nothing.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"marking fraction must be in (0, 1], got {theta}")
    indicators = np.asarray(indicators, dtype=float)
    if np.any(indicators < 0.0):
        raise ValueError("indicators must be nonnegative")
    total = float(indicators.sum())
    if total == 0.0:
        return []
    order = np.argsort(-indicators, kind="stable")
    accrued = np.cumsum(indicators[order])
    cut = int(np.searchsorted(accrued, theta * total - 1e-14 * total))
    return sorted(int(i) for i in order[: cut + 1])


def bisect(grid: TimeGrid, marked) -> TimeGrid:
    """Split each marked interval at its midpoint, degrees inherited."""
    marked = set(int(n) for n in marked)
    if any(n < 0 or n >= grid.n_intervals for n in marked):
        raise ValueError("marked interval index out of range")
    nodes = [float(grid.nodes[0])]
    degrees = []
    for n in range(grid.n_intervals):
        a, b = grid.interval(n)
        p = int(grid.degrees[n])
        if n in marked:
            nodes.extend([0.5 * (a + b), b])
            degrees.extend([p, p])
        else:
            nodes.append(b)
            degrees.append(p)
    return TimeGrid(np.array(nodes), np.array(degrees, dtype=int))


@dataclass(frozen=True)
class AdaptiveRecord:
    """State after one solve on one grid."""

    grid: TimeGrid
    dofs: int
    report: EstimatorReport
    errors: ErrorBundle | None
    kappa: float | None
    wall_time: float


@dataclass
class AdaptiveResult:
    history: list = field(default_factory=list)
    final_solution: SlabSolution | None = None

    @property
    def final(self) -> AdaptiveRecord:
        return self.history[-1]


def total_dofs(grid: TimeGrid, space: TensorSpace) -> int:
    return int(np.sum(grid.degrees)) * space.n_dofs


def run_adaptive(
    data: ProblemData,
    space: TensorSpace,
    initial_grid: TimeGrid,
    theta: float = 0.5,
    max_iters: int = 25,
    eta_tol: float = 0.0,
    include_osc: bool = False,
) -> AdaptiveResult:
    """Run the solve-estimate-mark-refine loop from an initial grid.

    Error norms and effectivity are recorded whenever the data carries a
    manufactured solution.  Refined grids keep all previous nodes, so the
    sequence is nested.
    """
    if max_iters < 1:
        raise ValueError(f"need at least one iteration, got {max_iters}")
    result = AdaptiveResult()
    grid = initial_grid
    for _ in range(max_iters):
        started = time.perf_counter()
        sol = march(data, space, grid)
        report = estimate(sol, data, include_osc=include_osc, localized=True)
        errs = compute_errors(sol, data.exact) if data.exact is not None else None
        kappa = report.eta / errs.Linf_L2 if errs is not None and errs.Linf_L2 > 0 else None
        result.history.append(AdaptiveRecord(
            grid=grid,
            dofs=total_dofs(grid, space),
            report=report,
            errors=errs,
            kappa=kappa,
            wall_time=time.perf_counter() - started,
        ))
        result.final_solution = sol
        if report.total <= eta_tol:
            break
        marked = doerfler_mark(report.local_n, theta)
        if not marked:
            break
        grid = bisect(grid, marked)
    return result
