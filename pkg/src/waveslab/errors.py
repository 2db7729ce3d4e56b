"""Manufactured solutions and discrete error norms.

Three families of exact solutions on (-1, 1)^2 drive the studies:

- ``case1``: a fixed-frequency smooth oscillation with polynomial spatial
  profile, so the spatial discretization is exact at degree two and the
  temporal error is isolated.
- ``case2``: the same profile times t^alpha with alpha > 1.5, whose limited
  temporal smoothness at t = 0 exercises graded refinement.
- ``case3``: a Laplace eigenmode with resonant frequency, which makes the
  forcing vanish identically and is useful over long times.

Error norms follow fixed sampling conventions: squared-integral norms in
time use Gauss rules exact to order 2p + 3 per interval, max-in-time norms
sample 2p + 3 equispaced times per interval including both endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .slabsolver import ProblemData, SlabSolution
from .timebasis import gauss_legendre


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution with the derived data the solver and norms need."""

    name: str
    params: dict
    u: Callable  # u(t, x, y)
    du: Callable  # time derivative
    ux: Callable  # spatial gradient components
    uy: Callable
    f: Callable  # forcing u'' - Laplace(u)
    u0: Callable  # u(0, x, y)
    u0x: Callable
    u0y: Callable
    u1: Callable  # du(0, x, y)


def make_case(name: str, **params) -> ManufacturedCase:
    """Build one of the named manufactured cases.

    case1 takes no parameters, case2 takes alpha > 1.5, case3 takes integer
    mode numbers m, n and a frequency omega.
    """
    if name == "case1":
        bump = lambda x, y: (1.0 - x**2) * (1.0 - y**2)
        curv = lambda x, y: 2.0 * (1.0 - y**2) + 2.0 * (1.0 - x**2)
        return ManufacturedCase(
            name=name, params={},
            u=lambda t, x, y: bump(x, y) * np.cos(4.0 * t),
            du=lambda t, x, y: -4.0 * bump(x, y) * np.sin(4.0 * t),
            ux=lambda t, x, y: -2.0 * x * (1.0 - y**2) * np.cos(4.0 * t),
            uy=lambda t, x, y: -2.0 * y * (1.0 - x**2) * np.cos(4.0 * t),
            f=lambda t, x, y: (-16.0 * bump(x, y) + curv(x, y)) * np.cos(4.0 * t),
            u0=bump,
            u0x=lambda x, y: -2.0 * x * (1.0 - y**2),
            u0y=lambda x, y: -2.0 * y * (1.0 - x**2),
            u1=lambda x, y: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(y))),
        )
    if name == "case2":
        alpha = float(params.get("alpha", 1.75))
        if alpha <= 1.5:
            raise ValueError(f"case2 needs alpha > 1.5, got {alpha}")
        bump = lambda x, y: (1.0 - x**2) * (1.0 - y**2)
        curv = lambda x, y: 2.0 * (1.0 - y**2) + 2.0 * (1.0 - x**2)
        zero = lambda x, y: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(y)))
        return ManufacturedCase(
            name=name, params={"alpha": alpha},
            u=lambda t, x, y: bump(x, y) * t**alpha,
            du=lambda t, x, y: alpha * bump(x, y) * t ** (alpha - 1.0),
            ux=lambda t, x, y: -2.0 * x * (1.0 - y**2) * t**alpha,
            uy=lambda t, x, y: -2.0 * y * (1.0 - x**2) * t**alpha,
            f=lambda t, x, y: alpha * (alpha - 1.0) * bump(x, y) * t ** (alpha - 2.0)
            + curv(x, y) * t**alpha,
            u0=zero, u0x=zero, u0y=zero, u1=zero,
        )
    if name == "case3":
        mode_n = int(params.get("n", 1))
        mode_m = int(params.get("m", 1))
        omega = float(params.get("omega", np.sqrt(2.0)))
        if mode_n < 1 or mode_m < 1:
            raise ValueError(f"case3 mode numbers must be >= 1, got {mode_m}, {mode_n}")
        pi = np.pi
        shape = lambda x, y: np.sin(pi * mode_n * x) * np.sin(pi * mode_m * y)
        gain = pi**2 * (mode_n**2 + mode_m**2 - omega**2)
        return ManufacturedCase(
            name=name, params={"m": mode_m, "n": mode_n, "omega": omega},
            u=lambda t, x, y: shape(x, y) * np.cos(omega * pi * t),
            du=lambda t, x, y: -omega * pi * shape(x, y) * np.sin(omega * pi * t),
            ux=lambda t, x, y: pi * mode_n * np.cos(pi * mode_n * x)
            * np.sin(pi * mode_m * y) * np.cos(omega * pi * t),
            uy=lambda t, x, y: pi * mode_m * np.sin(pi * mode_n * x)
            * np.cos(pi * mode_m * y) * np.cos(omega * pi * t),
            f=lambda t, x, y: gain * shape(x, y) * np.cos(omega * pi * t),
            u0=shape,
            u0x=lambda x, y: pi * mode_n * np.cos(pi * mode_n * x) * np.sin(pi * mode_m * y),
            u0y=lambda x, y: pi * mode_m * np.sin(pi * mode_n * x) * np.cos(pi * mode_m * y),
            u1=lambda x, y: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(y))),
        )
    raise ValueError(f"unknown case {name!r}")


def problem_data(case: ManufacturedCase) -> ProblemData:
    # t^alpha sources with fractional alpha are not smooth at t = 0.
    return ProblemData(
        u0=case.u0, grad_u0=(case.u0x, case.u0y), u1=case.u1, f=case.f, exact=case,
        singular_load=case.name == "case2",
    )


@dataclass(frozen=True)
class ErrorBundle:
    """Discrete error norms of a computed solution against the exact one.

    `max_W1inf_L2` and `max_Linf_H1` are maxima over intervals of
    max-in-time norms; `Linf_L2` is the global max-in-time L2 norm;
    `L2_H1` and `H1deriv_L2L2` are squared-integral-in-time norms; `jump`
    collects the derivative jumps across all time nodes in one square sum.
    """

    max_W1inf_L2: float
    max_Linf_H1: float
    L2_H1: float
    H1deriv_L2L2: float
    Linf_L2: float
    jump: float

    def as_dict(self) -> dict:
        return {
            "max_W1inf_L2": self.max_W1inf_L2,
            "max_Linf_H1": self.max_Linf_H1,
            "L2_H1": self.L2_H1,
            "H1deriv_L2L2": self.H1deriv_L2L2,
            "Linf_L2": self.Linf_L2,
            "jump": self.jump,
        }


def compute_errors(sol: SlabSolution, case: ManufacturedCase) -> ErrorBundle:
    """Evaluate all error norms of a slab solution for a manufactured case."""
    space, grid = sol.space, sol.grid
    X = space.gauss_x[:, None]
    Y = space.gauss_y[None, :]

    sq_h1 = 0.0
    sq_dl2 = 0.0
    max_w1inf = 0.0
    max_h1 = 0.0
    max_l2 = 0.0
    for n in range(grid.n_intervals):
        p = int(grid.degrees[n])
        a, b = grid.interval(n)
        tau = grid.tau(n)
        poly = sol.poly(n)
        dpoly = poly.derivative()

        xq, wq = gauss_legendre(2 * p + 3)
        for x, w in zip(xq, wq):
            t = a + 0.5 * tau * (x + 1.0)
            coeff = poly.eval(t)
            dcoeff = dpoly.eval(t)
            gx, gy = space.eval_grad_gauss(coeff)
            ex = np.asarray(case.ux(t, X, Y)) - gx
            ey = np.asarray(case.uy(t, X, Y)) - gy
            sq_h1 += 0.5 * tau * w * space.integrate(ex * ex + ey * ey)
            ed = np.asarray(case.du(t, X, Y)) - space.eval_gauss(dcoeff)
            sq_dl2 += 0.5 * tau * w * space.integrate(ed * ed)

        for t in np.linspace(a, b, 2 * p + 3):
            coeff = poly.eval(t)
            dcoeff = dpoly.eval(t)
            ev = np.asarray(case.u(t, X, Y)) - space.eval_gauss(coeff)
            max_l2 = max(max_l2, space.l2_norm(ev))
            ed = np.asarray(case.du(t, X, Y)) - space.eval_gauss(dcoeff)
            max_w1inf = max(max_w1inf, space.l2_norm(ed))
            gx, gy = space.eval_grad_gauss(coeff)
            ex = np.asarray(case.ux(t, X, Y)) - gx
            ey = np.asarray(case.uy(t, X, Y)) - gy
            max_h1 = max(max_h1, space.h1_semi_norm(ex, ey))

    jump_sq = sum(
        float(sol.jump(n) @ (space.M @ sol.jump(n))) for n in range(grid.n_intervals)
    )
    return ErrorBundle(
        max_W1inf_L2=max_w1inf,
        max_Linf_H1=max_h1,
        L2_H1=float(np.sqrt(sq_h1)),
        H1deriv_L2L2=float(np.sqrt(sq_dl2)),
        Linf_L2=max_l2,
        jump=float(np.sqrt(jump_sq)),
    )


def rate(values, steps) -> np.ndarray:
    """Observed convergence orders between consecutive refinement levels."""
    values = np.asarray(values, dtype=float)
    steps = np.asarray(steps, dtype=float)
    if len(values) < 2 or len(values) != len(steps):
        raise ValueError(
            f"need matching lists of length >= 2, got {len(values)} and {len(steps)}"
        )
    if np.any(values <= 0.0) or np.any(steps <= 0.0):
        raise ValueError("values and steps must be strictly positive")
    return np.log(values[:-1] / values[1:]) / np.log(steps[:-1] / steps[1:])
