"""Lifting of a slab solution to one degree higher with matched derivatives.

A slab polynomial V of degree p is lifted to a polynomial of degree p + 1
whose second derivative carries, against every test polynomial of degree
p - 1, the extra point mass given by the derivative jump at the slab's left
endpoint.  Anchoring the left value to V and the left derivative to the
incoming derivative makes the lifted function glue to a globally C1 object:
its right value and right derivative agree with V's one-sided traces.

The gap between V and the lifted polynomial is controlled exactly by the
jump: the derivative gap obeys equalities in both the L2 and max norms, and
the value gap obeys a degree-dependent bound.  Those three relations are
exposed here for direct verification.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg

from .timebasis import IntervalPoly, reconstruction_constants


@lru_cache(maxsize=None)
def _moment_system(p: int):
    """Matrix of the defining conditions in reference modal coordinates.

    Rows 0..p-1 test the second derivative against Legendre polynomials,
    row p pins the left value, row p + 1 the left derivative.  Unknowns are
    the p + 2 modal coefficients of the lifted polynomial.
    """
    k = np.arange(p + 2)
    der2 = npleg.legder(np.eye(p + 2), m=2, axis=0)  # (p, p+2)
    moments = der2 * (2.0 / (2.0 * np.arange(p) + 1.0))[:, None]
    left_val = (-1.0) ** k
    left_der = ((-1.0) ** (k + 1)) * k * (k + 1) / 2.0
    mat = np.vstack([moments, left_val, left_der])
    inv = np.linalg.inv(mat)
    inv.flags.writeable = False
    moments.flags.writeable = False
    return moments, inv


def reconstruct_slab(v: IntervalPoly, prev_deriv: np.ndarray) -> IntervalPoly:
    """Lift a slab polynomial using the incoming derivative from the left.

    Args:
        v: slab polynomial of degree p >= 2, scalar or vector valued.
        prev_deriv: one-sided derivative arriving from the previous slab
            (or the projected initial velocity on the first slab), matching
            v's value shape.

    Returns:
        IntervalPoly of degree p + 1 on the same interval.
    """
    p = v.degree
    if p < 2:
        raise ValueError(f"slab degree must be >= 2, got {p}")
    a, _ = v.interval
    tau = v.length
    prev_deriv = np.asarray(prev_deriv, dtype=float)
    jump = v.deriv(a) - prev_deriv

    moments, inv = _moment_system(p)
    vpad = np.zeros((p + 2,) + v.modes.shape[1:])
    vpad[: p + 1] = v.modes
    rhs = np.empty_like(vpad)
    rhs[:p] = moments @ vpad + 0.5 * tau * np.multiply.outer((-1.0) ** np.arange(p), jump)
    rhs[p] = v.eval(a)
    rhs[p + 1] = 0.5 * tau * prev_deriv
    return IntervalPoly(v.interval, inv @ rhs)


def gap(v: IntervalPoly, lifted: IntervalPoly) -> IntervalPoly:
    """The defect v minus its lifting, as a polynomial of degree p + 1."""
    modes = np.zeros_like(lifted.modes)
    modes[: v.degree + 1] = v.modes
    return IntervalPoly(v.interval, modes - lifted.modes)


def wihler_identities(v: IntervalPoly, lifted: IntervalPoly, jump: np.ndarray,
                      norm_sq=None) -> dict:
    """Both sides of the three jump identities for a slab and its lifting.

    `norm_sq` maps a coefficient vector to its squared spatial norm
    (Euclidean by default).  Returns a dict with keys `deriv_l2`,
    `deriv_linf`, `value_l2`, each a (left, right) pair; the first two are
    equalities and the third an upper bound.
    """
    p = v.degree
    tau = v.length
    c1_sq, c2_sq, _ = reconstruction_constants(p)
    if norm_sq is None:
        norm_sq = lambda w: float(np.dot(w, w))
    jump_sq = norm_sq(np.asarray(jump, dtype=float))

    defect = gap(v, lifted)
    ddefect = defect.derivative()
    deriv_l2 = (ddefect.l2_norm_sq(norm_sq), tau * c1_sq * jump_sq)

    a, b = v.interval
    samples = np.linspace(a, b, 2 * p + 3)
    dvals = np.atleast_2d(ddefect.eval(samples))
    if ddefect.modes.ndim == 1:
        dvals = dvals.reshape(-1, 1)
    deriv_linf = (max(norm_sq(row) for row in dvals), jump_sq)

    value_l2 = (defect.l2_norm_sq(norm_sq), tau**3 * c2_sq * jump_sq)
    return {"deriv_l2": deriv_l2, "deriv_linf": deriv_linf, "value_l2": value_l2}
