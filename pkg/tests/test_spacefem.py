"""Tensor-product Lagrange spaces: assembly, projections, broken Laplacian."""

import numpy as np
import pytest

from waveslab import TensorSpace

rng = np.random.default_rng(20240812)

bump = lambda x, y: (1.0 - x**2) * (1.0 - y**2)
bump_x = lambda x, y: -2.0 * x * (1.0 - y**2)
bump_y = lambda x, y: -2.0 * y * (1.0 - x**2)


def test_degenerate_space_is_empty():
    # a single bilinear element has no interior nodes
    space = TensorSpace(1, 1, 1)
    assert space.n_dofs == 0
    assert space.zero().shape == (0,)
    assert space.l2_project(lambda x, y: x * y).shape == (0,)


def test_smallest_interior_space():
    space = TensorSpace(2, 2, 1)
    assert space.n_dofs == 1
    # hat x hat: mass (2/3)^2, stiffness 2*(2*(2/3))
    assert abs(space.M.toarray()[0, 0] - 4.0 / 9.0) < 1e-14
    assert abs(space.K.toarray()[0, 0] - 8.0 / 3.0) < 1e-14


def test_constructor_rejections():
    with pytest.raises(ValueError):
        TensorSpace(2, 2, 0)
    with pytest.raises(ValueError):
        TensorSpace(2, 2, 6)
    with pytest.raises(ValueError):
        TensorSpace(0, 2, 1)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_assembled_operators_structure(degree):
    space = TensorSpace(3, 2, degree)
    M = space.M.toarray()
    K = space.K.toarray()
    assert np.allclose(M, M.T, atol=1e-13)
    assert np.allclose(K, K.T, atol=1e-13)
    assert np.all(np.linalg.eigvalsh(M) > 0.0)
    assert np.all(np.linalg.eigvalsh(K) > 0.0)
    # before boundary elimination constants lie in the stiffness kernel
    row_sums = np.asarray(space.K_full.sum(axis=1)).ravel()
    assert np.max(np.abs(row_sums)) < 1e-12
    # full mass totals the domain area
    assert abs(space.M_full.sum() - 4.0) < 1e-12


def test_member_function_is_reproduced():
    # the bump is a member of every Q2 space on (-1,1)^2
    space = TensorSpace(3, 4, 2)
    coeffs = space.interpolate(bump)
    assert np.allclose(space.l2_project(bump), coeffs, atol=1e-11)
    assert np.allclose(space.elliptic_project(bump_x, bump_y), coeffs, atol=1e-10)
    assert np.allclose(space.eval_gauss(coeffs), space.grid_eval(bump), atol=1e-12)
    gx, gy = space.eval_grad_gauss(coeffs)
    assert np.allclose(gx, space.grid_eval(bump_x), atol=1e-11)
    assert np.allclose(gy, space.grid_eval(bump_y), atol=1e-11)


def test_mass_solve_round_trip():
    space = TensorSpace(3, 3, 2)
    v = rng.standard_normal(space.n_dofs)
    assert np.allclose(space.M @ space.solve_mass(v), v, atol=1e-11)
    assert np.allclose(space.K @ space.solve_stiffness(v), v, atol=1e-10)


def test_broken_laplacian_of_member():
    space = TensorSpace(4, 3, 2)
    coeffs = space.interpolate(bump)
    lap = space.eval_laplacian_gauss(coeffs)
    exact = space.grid_eval(lambda x, y: -2.0 * (1.0 - y**2) - 2.0 * (1.0 - x**2))
    assert np.allclose(lap, exact, atol=1e-10)
    assert abs(space.l2_norm(lap) ** 2 - 1408.0 / 45.0) < 1e-9


def test_quadrature_norms_of_trig_function():
    space = TensorSpace(4, 4, 2)
    f = lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y)
    fx = lambda x, y: np.pi * np.cos(np.pi * x) * np.sin(np.pi * y)
    fy = lambda x, y: np.pi * np.sin(np.pi * x) * np.cos(np.pi * y)
    assert abs(space.l2_norm(space.grid_eval(f)) - 1.0) < 1e-8
    got = space.h1_semi_norm(space.grid_eval(fx), space.grid_eval(fy))
    assert abs(got - np.pi * np.sqrt(2.0)) < 1e-8


def test_embed_layout():
    space = TensorSpace(2, 3, 1)
    v = np.arange(1.0, 1.0 + space.n_dofs)
    full = space.embed(v)
    assert full.shape == (len(space.nodes_x), len(space.nodes_y))
    assert np.all(full[0, :] == 0.0) and np.all(full[-1, :] == 0.0)
    assert np.all(full[:, 0] == 0.0) and np.all(full[:, -1] == 0.0)
    assert np.allclose(full[1:-1, 1:-1].ravel(), v)


def test_load_vector_matches_mass_action():
    # for a member function the load vector is exactly M times the coefficients
    space = TensorSpace(3, 3, 3)
    v = rng.standard_normal(space.n_dofs)
    load = space.load_vector(space.eval_gauss(v))
    assert np.allclose(load, space.M @ v, atol=1e-12)
    gx, gy = space.eval_grad_gauss(v)
    assert np.allclose(space.load_vector_grad(gx, gy), space.K @ v, atol=1e-11)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_interpolation_h1_rate(degree):
    f = lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y)
    fx = lambda x, y: np.pi * np.cos(np.pi * x) * np.sin(np.pi * y)
    fy = lambda x, y: np.pi * np.sin(np.pi * x) * np.cos(np.pi * y)
    sizes = [4, 8, 16]
    errs = []
    for n in sizes:
        space = TensorSpace(n, n, degree)
        coeffs = space.interpolate(f)
        gx, gy = space.eval_grad_gauss(coeffs)
        dx = gx - space.grid_eval(fx)
        dy = gy - space.grid_eval(fy)
        errs.append(space.h1_semi_norm(dx, dy))
    slope = np.polyfit(np.log(1.0 / np.asarray(sizes)), np.log(errs), 1)[0]
    assert abs(slope - degree) < 0.2, slope


def test_anisotropic_domain_and_mesh():
    space = TensorSpace(3, 2, 2, domain=((0.0, 2.0), (0.0, 1.0)))
    assert abs(space.hx - 2.0 / 3.0) < 1e-15
    assert abs(space.hy - 0.5) < 1e-15
    f = lambda x, y: x * (2.0 - x) * y * (1.0 - y)
    coeffs = space.interpolate(f)
    assert np.allclose(space.eval_gauss(coeffs), space.grid_eval(f), atol=1e-12)
    assert abs(space.M_full.sum() - 2.0) < 1e-12
