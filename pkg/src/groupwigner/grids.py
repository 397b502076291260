"""Quadrature grids: Haar sampling of the group and the squaring-map
hemisphere used by the geodesic mid-point integrals.

Both constructors validate their claimed exactness empirically at build time
and raise :class:`~groupwigner.errors.InvalidGrid` loudly on failure, so a
grid object in hand is a certificate that its advertised band is integrated
exactly (to ~1e-10).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from . import irreps, su2
from .errors import AntipodalNode, InvalidGrid

__all__ = [
    "QuadratureGrid",
    "HemisphereGrid",
    "haar_grid",
    "haar_grid_for_degree",
    "hemisphere_grid",
    "hemisphere_grid_for",
]


@dataclass(frozen=True)
class QuadratureGrid:
    """Product quadrature for normalized Haar measure in Euler angles.

    ``exactness_degree`` is the band limit ``B`` (in units of ``j``, always an
    integer here) such that every product ``D^J_{MN} * conj(D^{J'}_{M'N'})``
    with ``J, J' <= B`` is integrated exactly.  In doubled-index terms the
    guarantee covers all Gram products with ``two_j <= 2 * exactness_degree``.
    """

    shape: tuple[int, int, int]
    euler: np.ndarray      # (n, 3) columns alpha, beta, gamma
    nodes: np.ndarray      # (n, 4)
    weights: np.ndarray    # (n,), sums to 1
    exactness_degree: int

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]


@dataclass(frozen=True)
class HemisphereGrid:
    """Quadrature for the open hemisphere ``a0 > 0`` (range of the principal
    group square root), with the squaring-map jacobian precomputed.

    ``weights`` are plain normalized-Haar weights (sum 1/2); the pushforward
    weights ``weights * jacobian`` sum to 1 and turn integrals of
    ``f(k^2)``-type integrands into Haar integrals over the whole group.
    ``exactness_twice`` is the largest value of ``2*j_max + 2*J``
    (doubled-index sum) for which the mid-point Wigner integrand — jacobian
    x state-pair kernel x two ``D^J`` factors — is a polynomial in the node
    components that the grid integrates exactly.  The node set is closed
    under group inversion, which makes Hermiticity of computed blocks exact.
    """

    shape: tuple[int, int, int]
    nodes: np.ndarray      # (K, 4), all a0 > 0
    weights: np.ndarray    # (K,), sums to 1/2
    jacobian: np.ndarray   # (K,) = 8 * a0**2
    squared: np.ndarray    # (K, 4) the nodes squared in the group
    exactness_twice: int

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def pushforward_weights(self) -> np.ndarray:
        return self.weights * self.jacobian


def _haar_exactness_degree(n_alpha: int, n_beta: int, n_gamma: int) -> int:
    # floor(min(n_alpha, n_gamma / 2, 2 * n_beta) / 2 - 1), in integer math
    quartered = min(2 * n_alpha, n_gamma, 4 * n_beta)
    return max((quartered - 4) // 4, 0)


def _verify_haar(grid: QuadratureGrid, tol: float = 1e-10) -> None:
    """Check the full Gram matrix of sqrt(N_J) D^J_{MN} columns for all
    two_j <= 2 * exactness_degree against the identity."""
    two_b = 2 * grid.exactness_degree
    n_alpha, n_beta, n_gamma = grid.shape
    alphas = grid.euler[: n_beta * n_gamma * n_alpha : n_beta * n_gamma, 0]
    betas = grid.euler[: n_beta * n_gamma : n_gamma, 1]
    gammas = grid.euler[:n_gamma, 2]
    cols = []
    for two_j in range(0, two_b + 1):
        d = irreps.little_d_matrix(two_j, betas)          # (nb, N, N)
        half_m = irreps.two_m_values(two_j) / 2.0
        pa = np.exp(-1j * np.outer(alphas, half_m))        # (na, N)
        pg = np.exp(-1j * np.outer(gammas, half_m))        # (ng, N)
        block = np.einsum("am,bmp,gp->abgmp", pa, d, pg)
        cols.append(
            np.sqrt(two_j + 1.0)
            * block.reshape(grid.n_nodes, (two_j + 1) ** 2)
        )
    f = np.concatenate(cols, axis=1)
    gram = (f.conj().T * grid.weights) @ f
    defect = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
    if defect > tol:
        raise InvalidGrid(
            f"haar grid {grid.shape} failed its exactness validation at "
            f"degree {grid.exactness_degree}: Gram defect {defect:.3e}"
        )


@lru_cache(maxsize=None)
def haar_grid(
    n_alpha: int, n_beta: int, n_gamma: int, verify: bool = True
) -> QuadratureGrid:
    """Build the ``n_alpha x n_beta x n_gamma`` Euler-angle product grid:
    uniform in alpha over [0, 2 pi), Gauss-Legendre in cos(beta), uniform in
    gamma over [0, 4 pi); weights sum to 1 (normalized Haar).
    """
    if n_alpha < 1 or n_beta < 1 or n_gamma < 1:
        raise InvalidGrid(
            f"grid shape must be positive, got {(n_alpha, n_beta, n_gamma)}"
        )
    alphas = 2 * np.pi * np.arange(n_alpha) / n_alpha
    x, wb = leggauss(n_beta)
    betas = np.arccos(x)
    gammas = 4 * np.pi * np.arange(n_gamma) / n_gamma
    euler = np.stack(
        np.meshgrid(alphas, betas, gammas, indexing="ij"), axis=-1
    ).reshape(-1, 3)
    w3 = (
        np.ones(n_alpha)[:, None, None]
        * (wb / 2.0)[None, :, None]
        * np.ones(n_gamma)[None, None, :]
    ) / (n_alpha * n_gamma)
    grid = QuadratureGrid(
        shape=(n_alpha, n_beta, n_gamma),
        euler=euler,
        nodes=su2.from_euler(euler[:, 0], euler[:, 1], euler[:, 2]),
        weights=w3.reshape(-1),
        exactness_degree=_haar_exactness_degree(n_alpha, n_beta, n_gamma),
    )
    if verify:
        _verify_haar(grid)
    return grid


def haar_grid_for_degree(degree: int, verify: bool = True) -> QuadratureGrid:
    """Smallest product grid of the standard shape with exactness >= degree."""
    degree = max(int(degree), 0)
    return haar_grid(2 * degree + 2, degree + 1, 4 * degree + 4, verify)


@lru_cache(maxsize=None)
def _axial_rule(n_axial: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on t in (0, 1) with ``sum w_r q(t_r) =
    int_0^1 q(t) sqrt(1 - t^2) dt`` exact for all polynomials of degree
    < n_axial.

    The weights solve the square moment system in the shifted-Chebyshev
    basis T_n(2t - 1) at the nodes ``2t_r - 1 = cos((r + 1/2) pi / n)``,
    where the system matrix is the perfectly conditioned DCT matrix
    ``cos(n * v_r)``; the exact Chebyshev moments are computed by adaptive
    quadrature of a smooth integrand.
    """
    v = (np.arange(n_axial) + 0.5) * np.pi / n_axial
    t = (1.0 + np.cos(v)) / 2.0
    a = np.cos(np.outer(np.arange(n_axial), v))
    b = np.empty(n_axial)
    for n in range(n_axial):
        b[n] = quad(
            lambda u, n=n: 0.25
            * np.cos(n * u)
            * np.sin(u)
            * np.sqrt((1.0 - np.cos(u)) * (3.0 + np.cos(u))),
            0.0,
            np.pi,
            epsabs=1e-14,
            epsrel=1e-13,
            limit=200,
        )[0]
    w = np.linalg.solve(a, b)
    return t, w


def _verify_hemisphere(grid: HemisphereGrid, tol: float = 1e-10) -> None:
    w = grid.pushforward_weights
    mass = float(np.sum(grid.weights))
    push = float(np.sum(w))
    if abs(mass - 0.5) > 1e-12 or abs(push - 1.0) > 1e-12:
        raise InvalidGrid(
            f"hemisphere grid {grid.shape}: weight sums off "
            f"(haar {mass:.15f}, pushforward {push:.15f})"
        )
    # The pushforward of the grid must reproduce Haar integrals over the
    # whole group: sqrt(N_j) D^j_{mn}(k^2) integrates to delta_{j0}.
    for two_j in range(1, grid.exactness_twice + 1):
        d = irreps.dmatrix(two_j, grid.squared)
        defect = float(np.max(np.abs(np.einsum("k,kmn->mn", w, d))))
        if defect > tol:
            raise InvalidGrid(
                f"hemisphere grid {grid.shape} failed its exactness "
                f"validation at two_j={two_j}: defect {defect:.3e}"
            )


@lru_cache(maxsize=None)
def hemisphere_grid(
    n_axial: int, n_theta: int, n_phi: int, verify: bool = True
) -> HemisphereGrid:
    """Quadrature on the hemisphere ``a0 > 0`` exact for polynomial integrands.

    Product of an exact half-range rule in ``t = a0`` (see ``_axial_rule``;
    ``n_axial`` nodes, polynomial degree ``n_axial - 1``), Gauss-Legendre in
    ``cos(theta)`` and uniform ``phi`` for the spatial direction.  The
    angular rule integrates every spherical monomial it meets exactly — in
    particular it annihilates all odd-degree monomials, so the composite rule
    is exact for arbitrary 4-component polynomials up to degree
    ``min(n_axial - 1, 2*n_theta - 1, n_phi - 1)``, with no symmetrization of
    the integrand.  ``n_phi`` must be even so the node set is closed under
    group inversion (``phi -> phi + pi`` stays on the grid).
    """
    if n_axial < 1 or n_theta < 1 or n_phi < 2:
        raise InvalidGrid(
            f"hemisphere shape must be >= (1,1,2), got {(n_axial, n_theta, n_phi)}"
        )
    if n_phi % 2:
        raise InvalidGrid(f"n_phi must be even, got {n_phi}")
    t, wt = _axial_rule(n_axial)
    ct, wth = leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    tt, cth, ph = np.meshgrid(t, ct, phi, indexing="ij")
    sth = np.sqrt(1.0 - cth**2)
    r = np.sqrt(1.0 - tt**2)
    nodes = np.stack(
        [tt, r * sth * np.cos(ph), r * sth * np.sin(ph), r * cth], axis=-1
    ).reshape(-1, 4)
    w = (
        wt[:, None, None] * wth[None, :, None] * np.ones(n_phi)[None, None, :]
    ).reshape(-1) / (np.pi * n_phi)
    if np.min(nodes[:, 0]) <= 0.0:
        raise AntipodalNode(
            "hemisphere grid placed a node on the singular equator a0 = 0"
        )
    p_exact = min(n_axial - 1, 2 * n_theta - 1, n_phi - 1)
    grid = HemisphereGrid(
        shape=(n_axial, n_theta, n_phi),
        nodes=nodes,
        weights=w,
        jacobian=su2.squaring_jacobian(nodes),
        squared=su2.mul(nodes, nodes),
        exactness_twice=max((p_exact - 2) // 2, 0),
    )
    if verify:
        _verify_hemisphere(grid)
    return grid


def hemisphere_grid_for(two_band: int, verify: bool = True) -> HemisphereGrid:
    """Smallest standard hemisphere grid with ``exactness_twice >= two_band``,
    where ``two_band`` is the required ``2*j_max + 2*J`` of the integrands."""
    p = 2 * max(int(two_band), 0) + 2
    n_theta = (p + 2) // 2
    n_phi = p + 1 + (p + 1) % 2
    return hemisphere_grid(p + 1, n_theta, n_phi, verify)
