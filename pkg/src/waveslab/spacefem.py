"""Tensor-product finite elements on a rectangle.

Continuous Lagrange elements of equal degree in x and y on a uniform
rectangular mesh, with homogeneous Dirichlet conditions eliminated from the
algebraic system.  The element degree is kept small (at most 5) and nodes are
equispaced within each element, so no special point distributions are needed.

Because both the mesh and the boundary are tensor products, the interior
degrees of freedom form a product set and every 2D operator is assembled as a
Kronecker combination of 1D factors.  All quadrature uses tensor Gauss rules
exact to order 2 * degree + 3 per direction.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from numpy.polynomial import legendre as npleg

from .timebasis import equispaced_nodes, gauss_legendre, nodal_to_modal

MAX_DEGREE = 5


def _reference_basis(degree: int, points: np.ndarray):
    """Values and first two derivatives of the nodal basis at given points.

    Returns three arrays of shape (degree + 1, len(points)); row i belongs to
    the basis polynomial of node i on [-1, 1].
    """
    to_modal = nodal_to_modal(degree)
    vals = npleg.legval(points, to_modal)
    der = npleg.legval(points, npleg.legder(to_modal, axis=0))
    if degree >= 2:
        der2 = npleg.legval(points, npleg.legder(to_modal, m=2, axis=0))
    else:
        der2 = np.zeros_like(vals)
    return vals, der, der2


class TensorSpace:
    """Q_p Lagrange space on a uniform nx-by-ny mesh of a rectangle.

    Parameters
    ----------
    nx, ny : int
        Number of elements per direction.
    degree : int
        Polynomial degree per direction, between 1 and 5.
    domain : ((x0, x1), (y0, y1))
        Bounding box, default (-1, 1) squared.
    """

    def __init__(self, nx: int, ny: int, degree: int, domain=((-1.0, 1.0), (-1.0, 1.0))):
        if not (1 <= degree <= MAX_DEGREE):
            raise ValueError(f"spatial degree must be in [1, {MAX_DEGREE}], got {degree}")
        if nx < 1 or ny < 1:
            raise ValueError(f"need at least one element per direction, got {nx}x{ny}")
        self.nx, self.ny, self.degree = nx, ny, degree
        self.domain = domain
        (x0, x1), (y0, y1) = domain
        self.hx = (x1 - x0) / nx
        self.hy = (y1 - y0) / ny

        p = degree
        self.nodes_x = x0 + 0.5 * self.hx * (
            np.repeat(np.arange(nx), p)[: nx * p] * 2
            + np.tile(equispaced_nodes(p)[:-1] + 1.0, nx)
        )
        self.nodes_x = np.append(self.nodes_x, x1)
        self.nodes_y = y0 + 0.5 * self.hy * (
            np.repeat(np.arange(ny), p)[: ny * p] * 2
            + np.tile(equispaced_nodes(p)[:-1] + 1.0, ny)
        )
        self.nodes_y = np.append(self.nodes_y, y1)

        xg, wg = gauss_legendre(2 * p + 3)
        self.ref_gauss, self.ref_weights = xg, wg
        self.basis_val, self.basis_der, self.basis_der2 = _reference_basis(p, xg)
        # global 1D Gauss points and weights, x index runs over (element, node)
        self.gauss_x = (
            x0 + 0.5 * self.hx * (2.0 * np.repeat(np.arange(nx), len(xg)) + np.tile(xg + 1.0, nx))
        )
        self.gauss_y = (
            y0 + 0.5 * self.hy * (2.0 * np.repeat(np.arange(ny), len(xg)) + np.tile(xg + 1.0, ny))
        )
        self.gauss_wx = np.tile(0.5 * self.hx * wg, nx)
        self.gauss_wy = np.tile(0.5 * self.hy * wg, ny)

        # node index of local dof i in element e is e * p + i
        self.elem_ix = (np.arange(nx)[:, None] * p + np.arange(p + 1)[None, :])
        self.elem_iy = (np.arange(ny)[:, None] * p + np.arange(p + 1)[None, :])

        self.M1x, self.K1x = self._assemble_1d(nx, self.hx)
        self.M1y, self.K1y = self._assemble_1d(ny, self.hy)
        self.M_full = sp.kron(sp.csr_matrix(self.M1x), sp.csr_matrix(self.M1y), format="csr")
        self.K_full = (
            sp.kron(sp.csr_matrix(self.K1x), sp.csr_matrix(self.M1y), format="csr")
            + sp.kron(sp.csr_matrix(self.M1x), sp.csr_matrix(self.K1y), format="csr")
        )

        # interior dofs are a product of the per-direction interior ranges
        self.n_int_x = len(self.nodes_x) - 2
        self.n_int_y = len(self.nodes_y) - 2
        Mix = self.M1x[1:-1, 1:-1]
        Miy = self.M1y[1:-1, 1:-1]
        Kix = self.K1x[1:-1, 1:-1]
        Kiy = self.K1y[1:-1, 1:-1]
        self.M = sp.kron(sp.csr_matrix(Mix), sp.csr_matrix(Miy), format="csr")
        self.K = (
            sp.kron(sp.csr_matrix(Kix), sp.csr_matrix(Miy), format="csr")
            + sp.kron(sp.csr_matrix(Mix), sp.csr_matrix(Kiy), format="csr")
        )
        self._solve_M = None
        self._solve_K = None

    def _assemble_1d(self, n_elem: int, h: float):
        p = self.degree
        wg = self.ref_weights
        Me = 0.5 * h * (self.basis_val * wg) @ self.basis_val.T
        Ke = (2.0 / h) * (self.basis_der * wg) @ self.basis_der.T
        n = n_elem * p + 1
        M = np.zeros((n, n))
        K = np.zeros((n, n))
        for e in range(n_elem):
            idx = slice(e * p, e * p + p + 1)
            M[idx, idx] += Me
            K[idx, idx] += Ke
        return M, K

    @property
    def n_dofs(self) -> int:
        return self.n_int_x * self.n_int_y

    def zero(self) -> np.ndarray:
        return np.zeros(self.n_dofs)

    def embed(self, vec: np.ndarray) -> np.ndarray:
        """Interior coefficients to the full node grid, zero on the boundary."""
        full = np.zeros((len(self.nodes_x), len(self.nodes_y)))
        if self.n_dofs:
            full[1:-1, 1:-1] = np.asarray(vec).reshape(self.n_int_x, self.n_int_y)
        return full

    def grid_eval(self, f) -> np.ndarray:
        """Evaluate a callable f(x, y) on the global Gauss grid."""
        vals = np.asarray(f(self.gauss_x[:, None], self.gauss_y[None, :]), dtype=float)
        shape = (len(self.gauss_x), len(self.gauss_y))
        if vals.shape != shape:
            vals = np.broadcast_to(vals, shape).copy()
        return vals

    def _contract(self, vec, bx, by, scale):
        full = self.embed(vec)
        local = full[self.elem_ix[:, :, None, None], self.elem_iy[None, None, :, :]]
        vals = np.einsum("aibj,iq,jr->aqbr", local, bx, by)
        ng = len(self.ref_gauss)
        return scale * vals.reshape(self.nx * ng, self.ny * ng)

    def eval_gauss(self, vec: np.ndarray) -> np.ndarray:
        """Finite element function values on the global Gauss grid."""
        return self._contract(vec, self.basis_val, self.basis_val, 1.0)

    def eval_grad_gauss(self, vec: np.ndarray):
        ux = self._contract(vec, self.basis_der, self.basis_val, 2.0 / self.hx)
        uy = self._contract(vec, self.basis_val, self.basis_der, 2.0 / self.hy)
        return ux, uy

    def eval_laplacian_gauss(self, vec: np.ndarray) -> np.ndarray:
        """Elementwise second derivatives summed, on the global Gauss grid.

        This is the broken Laplacian: no continuity across element faces is
        implied or required.
        """
        uxx = self._contract(vec, self.basis_der2, self.basis_val, (2.0 / self.hx) ** 2)
        uyy = self._contract(vec, self.basis_val, self.basis_der2, (2.0 / self.hy) ** 2)
        return uxx + uyy

    def integrate(self, values: np.ndarray) -> float:
        """Integrate Gauss-grid values over the domain."""
        return float(self.gauss_wx @ values @ self.gauss_wy)

    def l2_norm(self, values: np.ndarray) -> float:
        return float(np.sqrt(max(self.integrate(values * values), 0.0)))

    def h1_semi_norm(self, vx: np.ndarray, vy: np.ndarray) -> float:
        return float(np.sqrt(max(self.integrate(vx * vx + vy * vy), 0.0)))

    def load_vector(self, values: np.ndarray) -> np.ndarray:
        """Assemble (f, phi_a) for interior basis functions from Gauss values."""
        ng = len(self.ref_gauss)
        F = values.reshape(self.nx, ng, self.ny, ng)
        local = np.einsum(
            "aqbr,iq,jr,q,r->aibj",
            F, self.basis_val, self.basis_val, self.ref_weights, self.ref_weights,
        ) * (0.25 * self.hx * self.hy)
        return self._scatter(local)

    def load_vector_grad(self, vx: np.ndarray, vy: np.ndarray) -> np.ndarray:
        """Assemble (v, grad phi_a) for interior basis functions."""
        ng = len(self.ref_gauss)
        FX = vx.reshape(self.nx, ng, self.ny, ng)
        FY = vy.reshape(self.nx, ng, self.ny, ng)
        local = np.einsum(
            "aqbr,iq,jr,q,r->aibj",
            FX, self.basis_der, self.basis_val, self.ref_weights, self.ref_weights,
        ) * (0.5 * self.hy)
        local += np.einsum(
            "aqbr,iq,jr,q,r->aibj",
            FY, self.basis_val, self.basis_der, self.ref_weights, self.ref_weights,
        ) * (0.5 * self.hx)
        return self._scatter(local)

    def _scatter(self, local: np.ndarray) -> np.ndarray:
        full = np.zeros((len(self.nodes_x), len(self.nodes_y)))
        np.add.at(
            full,
            (self.elem_ix[:, :, None, None], self.elem_iy[None, None, :, :]),
            local,
        )
        return full[1:-1, 1:-1].ravel()

    def solve_mass(self, rhs: np.ndarray) -> np.ndarray:
        if self.n_dofs == 0:
            return self.zero()
        if self._solve_M is None:
            self._solve_M = spla.factorized(self.M.tocsc())
        return self._solve_M(rhs)

    def solve_stiffness(self, rhs: np.ndarray) -> np.ndarray:
        if self.n_dofs == 0:
            return self.zero()
        if self._solve_K is None:
            self._solve_K = spla.factorized(self.K.tocsc())
        return self._solve_K(rhs)

    def l2_project(self, f) -> np.ndarray:
        """Coefficients of the L2-orthogonal projection of f(x, y)."""
        return self.solve_mass(self.load_vector(self.grid_eval(f)))

    def elliptic_project(self, fx, fy) -> np.ndarray:
        """Projection in the Dirichlet inner product, gradient given analytically."""
        vx = self.grid_eval(fx)
        vy = self.grid_eval(fy)
        return self.solve_stiffness(self.load_vector_grad(vx, vy))

    def interpolate(self, f) -> np.ndarray:
        """Values of f at the interior nodes, as a coefficient vector."""
        return np.asarray(
            f(self.nodes_x[1:-1, None], self.nodes_y[None, 1:-1]), dtype=float
        ).ravel()

    def m_inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ (self.M @ v))

    def m_norm(self, v: np.ndarray) -> float:
        return float(np.sqrt(max(self.m_inner(v, v), 0.0)))

    def k_norm(self, v: np.ndarray) -> float:
        return float(np.sqrt(max(v @ (self.K @ v), 0.0)))
