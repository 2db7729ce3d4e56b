"""Degree-raising lift of slab polynomials and its exact jump identities."""

import numpy as np
import pytest

from waveslab import IntervalPoly, gauss_legendre, legendre_eval, reconstruct_slab
from waveslab.reconstruct import gap, wihler_identities

rng = np.random.default_rng(20240813)


def random_slab(p, d=None, interval=(0.4, 1.1)):
    shape = (p + 1,) if d is None else (p + 1, d)
    return IntervalPoly.from_nodal(interval, rng.standard_normal(shape))


def test_lift_raises_degree_and_anchors_left():
    v = random_slab(3)
    prev = 0.7
    lifted = reconstruct_slab(v, prev)
    assert lifted.degree == 4
    a, b = v.interval
    assert abs(lifted.eval(a) - v.eval(a)) < 1e-11
    assert abs(lifted.deriv(a) - prev) < 1e-11


def test_lift_glues_to_the_right_trace():
    # right value and right derivative agree with the slab polynomial, which
    # is what makes consecutive lifted slabs a global C1 function
    for p in (2, 3, 4, 5):
        v = random_slab(p)
        lifted = reconstruct_slab(v, rng.standard_normal())
        _, b = v.interval
        scale = max(1.0, abs(v.eval(b)), abs(v.deriv(b)))
        assert abs(lifted.eval(b) - v.eval(b)) < 1e-11 * scale
        assert abs(lifted.deriv(b) - v.deriv(b)) < 1e-10 * scale


def test_lift_weak_point_mass_condition():
    # against every test polynomial of degree p-1 the second derivative of
    # the lift exceeds the slab's by the jump times the test value at the
    # left endpoint
    for p in (2, 3, 5):
        v = random_slab(p)
        prev = rng.standard_normal()
        lifted = reconstruct_slab(v, prev)
        a, b = v.interval
        jump = v.deriv(a) - prev
        x, w = gauss_legendre(2 * p + 6)
        t = 0.5 * (a + b) + 0.5 * (b - a) * x
        for k in range(p):
            q = legendre_eval(k, x)
            lhs = 0.5 * (b - a) * w @ ((lifted.deriv(t, m=2) - v.deriv(t, m=2)) * q)
            rhs = jump * legendre_eval(k, -1.0)
            assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs)), (p, k)


def test_zero_jump_lift_is_the_identity():
    v = random_slab(4)
    a, _ = v.interval
    lifted = reconstruct_slab(v, v.deriv(a))
    assert np.max(np.abs(gap(v, lifted).modes)) < 1e-11


def test_scalar_example_unit_interval():
    # V = t^2 on (0, 1] with incoming derivative -1: jump 1, so the gap
    # derivative has squared L2 norm c1^2 = 2/15 and max norm 1
    v = IntervalPoly.from_nodal((0.0, 1.0), np.array([0.0, 0.25, 1.0]))
    lifted = reconstruct_slab(v, -1.0)
    g = gap(v, lifted)
    assert abs(g.eval(0.0)) < 1e-12
    assert abs(g.deriv(0.0) - 1.0) < 1e-11
    assert abs(g.eval(1.0)) < 1e-12
    assert abs(g.deriv(1.0)) < 1e-11
    ids = wihler_identities(v, lifted, np.array(1.0))
    assert abs(ids["deriv_l2"][0] - 2.0 / 15.0) < 1e-12
    assert abs(ids["deriv_l2"][1] - 2.0 / 15.0) < 1e-15
    assert abs(ids["deriv_linf"][0] - 1.0) < 1e-10
    assert ids["value_l2"][0] <= 2.0 / (15.0 * np.pi**2) * (1.0 + 1e-9)


@pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
def test_jump_identities_random_scalar_slabs(p):
    for _ in range(25):
        a = rng.uniform(-1.0, 1.0)
        v = random_slab(p, interval=(a, a + rng.uniform(0.05, 2.0)))
        prev = rng.standard_normal()
        lifted = reconstruct_slab(v, prev)
        jump = v.deriv(a) - prev
        ids = wihler_identities(v, lifted, jump)
        lhs, rhs = ids["deriv_l2"]
        assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1e-30)
        lhs, rhs = ids["deriv_linf"]
        assert abs(lhs - rhs) <= 1e-6 * max(abs(lhs), abs(rhs), 1e-30)
        lhs, rhs = ids["value_l2"]
        assert lhs <= rhs * (1.0 + 1e-9)


def test_jump_identities_weighted_vector_slabs():
    # spatial norm given by a random SPD matrix, as in the discrete setting
    d = 5
    root = rng.standard_normal((d, d))
    W = root @ root.T + d * np.eye(d)
    norm_sq = lambda w: float(w @ (W @ w))
    for p in (2, 4):
        v = random_slab(p, d=d)
        prev = rng.standard_normal(d)
        lifted = reconstruct_slab(v, prev)
        jump = v.deriv(v.interval[0]) - prev
        ids = wihler_identities(v, lifted, jump, norm_sq=norm_sq)
        lhs, rhs = ids["deriv_l2"]
        assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs))
        lhs, rhs = ids["deriv_linf"]
        assert abs(lhs - rhs) <= 1e-6 * max(abs(lhs), abs(rhs))
        lhs, rhs = ids["value_l2"]
        assert lhs <= rhs * (1.0 + 1e-9)


def test_lift_rejects_low_degree():
    v = IntervalPoly.from_nodal((0.0, 1.0), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        reconstruct_slab(v, 0.0)
