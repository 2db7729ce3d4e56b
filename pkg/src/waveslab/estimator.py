"""Explicit-constant a posteriori estimator for the max-in-time L2 error.

The estimator has two ingredients.  A jump part eta1 takes the worst slab
value of tau_n * sqrt(c1 c2) times the derivative-jump norm.  A consistency
part eta2 accumulates, per slab, the broken Laplacian of the top temporal
mode of the solution (equivalently of the defect against the temporal L2
projection one degree down) and the broken Laplacian of the derivative
jump.  Slabs before the target index m carry weights involving c3 and c4
and a factor 2/pi; the target slab itself carries plain weights.

For uniform studies the target index is the final slab.  The localized
variant instead targets the slab carrying eta1, which yields per-slab
indicators whose sum is the global estimator; those drive marking.

Data oscillation is measured the same way from the defect of the forcing
against its temporal projection and is reported separately.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .slabsolver import ProblemData, SlabSolution
from .timebasis import c3_constant, c4_constant, gauss_legendre, reconstruction_constants


def eta1(sol: SlabSolution) -> tuple[float, int]:
    """Jump estimator: worst slab value and the first slab attaining it."""
    best, arg = -1.0, 0
    for n in range(sol.grid.n_intervals):
        p = int(sol.grid.degrees[n])
        c1_sq, c2_sq, _ = reconstruction_constants(p)
        jump = sol.jump(n)
        val = sol.grid.tau(n) * (c1_sq * c2_sq) ** 0.25 * sol.space.m_norm(jump)
        if val > best * (1.0 + 1e-14):
            best, arg = val, n
    return best, arg


def _top_mode_l1(sol: SlabSolution, n: int, order: int) -> float:
    """Time L1 norm of the broken-Laplacian L2 norm of the top temporal mode.

    The defect of the slab polynomial against its temporal L2 projection one
    degree down is exactly the top Legendre mode, so the norm integrand is
    the absolute mapped Legendre value times a fixed spatial norm.
    """
    p = int(sol.grid.degrees[n])
    top = sol.poly(n).modes[p]
    lap_norm = sol.space.l2_norm(sol.space.eval_laplacian_gauss(top))
    xq, wq = gauss_legendre(order)
    coeff = np.zeros(p + 1)
    coeff[p] = 1.0
    leg_l1 = 0.5 * sol.grid.tau(n) * float(wq @ np.abs(npleg.legval(xq, coeff)))
    return leg_l1 * lap_norm


def eta2_terms(sol: SlabSolution, m: int, order_fn=None) -> np.ndarray:
    """Per-slab consistency terms for target slab index m (zero past m)."""
    if order_fn is None:
        order_fn = lambda p: 2 * p + 3
    grid, space = sol.grid, sol.space
    t_m = float(grid.nodes[m + 1])
    out = np.zeros(grid.n_intervals)
    for n in range(m + 1):
        p = int(grid.degrees[n])
        tau = grid.tau(n)
        _, c2_sq, _ = reconstruction_constants(p)
        lap_l1 = _top_mode_l1(sol, n, order_fn(p))
        jump_lap = space.l2_norm(space.eval_laplacian_gauss(sol.jump(n)))
        if n == m:
            out[n] = 2.0 * (tau * lap_l1 + np.sqrt(c2_sq) * tau**3 * jump_lap)
        else:
            c4 = c4_constant(p, t_m, float(grid.nodes[n]), tau)
            out[n] = (2.0 / np.pi) * (
                tau * c3_constant(p - 1) * lap_l1
                + tau**3 * np.sqrt(c2_sq) * c4 * jump_lap
            )
    return out


def osc_terms(data: ProblemData, sol: SlabSolution, m: int, order_fn=None) -> np.ndarray:
    """Per-slab data oscillation: defect of f against its temporal projection.

    The projection onto degree p - 1 is taken per spatial quadrature point
    from time-quadrature samples; norms follow the same conventions as the
    estimator terms.
    """
    if order_fn is None:
        order_fn = lambda p: 2 * p + 3
    grid, space = sol.grid, sol.space
    X = space.gauss_x[:, None]
    Y = space.gauss_y[None, :]
    out = np.zeros(grid.n_intervals)
    for n in range(m + 1):
        p = int(grid.degrees[n])
        tau = grid.tau(n)
        a, _ = grid.interval(n)
        xq, wq = gauss_legendre(order_fn(p))
        times = a + 0.5 * tau * (xq + 1.0)
        samples = np.stack([np.broadcast_to(
            np.asarray(data.f(t, X, Y), dtype=float),
            (len(space.gauss_x), len(space.gauss_y)),
        ) for t in times])
        vander = npleg.legvander(xq, p - 1)  # (nq, p)
        scale = 0.5 * (2.0 * np.arange(p) + 1.0)
        modes = np.einsum("q,qk,qij->kij", wq, vander, samples) * scale[:, None, None]
        defect = samples - np.einsum("qk,kij->qij", vander, modes)
        norms = np.array([space.l2_norm(defect[q]) for q in range(len(xq))])
        l1 = 0.5 * tau * float(wq @ norms)
        if n == m:
            out[n] = 2.0 * tau * l1
        else:
            out[n] = (2.0 * tau / np.pi) * c3_constant(p - 1) * l1
    return out


@dataclass(frozen=True)
class EstimatorReport:
    """Estimator evaluation on one solution.

    `eta` is eta1 plus the sum of the eta2 terms; `total` additionally
    carries the oscillation when `include_osc` is set.  `local_n` places
    eta1 on its carrying slab on top of that slab's eta2 term, so the
    indicators sum to `eta`.
    """

    m: int
    eta1: float
    eta1_argmax: int
    eta2_n: np.ndarray
    osc_n: np.ndarray
    include_osc: bool
    localized: bool

    @property
    def eta(self) -> float:
        return self.eta1 + float(np.sum(self.eta2_n))

    @property
    def osc(self) -> float:
        return float(np.sum(self.osc_n))

    @property
    def total(self) -> float:
        return self.eta + self.osc if self.include_osc else self.eta

    @property
    def local_n(self) -> np.ndarray:
        out = self.eta2_n.copy()
        out[self.eta1_argmax] += self.eta1
        return out


def estimate(
    sol: SlabSolution,
    data: ProblemData,
    include_osc: bool = False,
    localized: bool = False,
) -> EstimatorReport:
    """Evaluate the estimator on a computed solution.

    With `localized` the target slab is the one carrying eta1; otherwise it
    is the final slab.  Oscillation terms are always computed so that
    reliability checks can add them regardless of `include_osc`.
    """
    e1, arg = eta1(sol)
    m = arg if localized else sol.grid.n_intervals - 1
    return EstimatorReport(
        m=m,
        eta1=e1,
        eta1_argmax=arg,
        eta2_n=eta2_terms(sol, m),
        osc_n=osc_terms(data, sol, m),
        include_osc=include_osc,
        localized=localized,
    )


def effectivity(report: EstimatorReport, linf_l2_error: float) -> float:
    """Ratio of the estimator to the max-in-time L2 error."""
    return report.eta / linf_l2_error


def quadrature_check(sol: SlabSolution, data: ProblemData, report: EstimatorReport,
                     tol: float = 1e-6) -> float:
    """Recompute the quadrature-dependent terms at doubled order.

    Returns the worst relative difference and warns when it exceeds `tol`.
    The integrands contain absolute values, so some sensitivity to the rule
    is expected and worth surfacing.
    """
    doubled = lambda p: 4 * p + 6
    ref = np.concatenate([report.eta2_n, report.osc_n])
    new = np.concatenate([
        eta2_terms(sol, report.m, order_fn=doubled),
        osc_terms(data, sol, report.m, order_fn=doubled),
    ])
    denom = np.maximum(np.maximum(np.abs(ref), np.abs(new)), 1e-300)
    worst = float(np.max(np.abs(new - ref) / denom)) if len(ref) else 0.0
    if worst > tol:
        warnings.warn(
            f"estimator quadrature sensitivity {worst:.3e} above {tol:.1e}; "
            "the reported values keep the standard rule",
            stacklevel=2,
        )
    return worst
