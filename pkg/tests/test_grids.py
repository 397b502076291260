"""
Tests for the Haar and hemisphere quadrature grids.  Expected values come
from closed-form moments of the measures involved (Beta-function integrals
for the axial rule, representation-orthogonality integrals for the group
rules) and from structural invariants such as inversion closure.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from groupwigner import grids, irreps, su2
from groupwigner.errors import InvalidGrid
from groupwigner.grids import _axial_rule


@pytest.mark.parametrize(
    "shape,degree",
    [((14, 7, 28), 6), ((10, 5, 20), 4), ((4, 2, 8), 1), ((2, 1, 4), 0)],
)
def test_haar_grid_exactness_degree(shape, degree):
    grid = grids.haar_grid(*shape)
    assert grid.exactness_degree == degree
    assert grid.n_nodes == shape[0] * shape[1] * shape[2]
    assert_allclose(grid.weights.sum(), 1.0, atol=1e-13)
    assert_allclose(
        np.linalg.norm(grid.nodes, axis=-1), np.ones(grid.n_nodes), atol=1e-13
    )


def test_haar_grid_rejects_bad_shapes():
    with pytest.raises(InvalidGrid):
        grids.haar_grid(0, 5, 20)
    with pytest.raises(InvalidGrid):
        grids.haar_grid(10, -1, 20)


def test_haar_grid_integrates_single_matrix_elements():
    # int D^j_{mn} dg = 0 for j >= 1/2, and int |D^j_{mn}|^2 dg = 1/(2j+1)
    grid = grids.haar_grid(10, 5, 20)
    for two_j in (1, 2, 3, 4):
        d = irreps.dmatrix(two_j, grid.nodes)
        mean = np.einsum("x,xmn->mn", grid.weights, d)
        assert_allclose(mean, np.zeros_like(mean), atol=1e-12)
        sq = np.einsum("x,xmn->mn", grid.weights, np.abs(d) ** 2)
        assert_allclose(sq, np.full_like(sq, 1.0 / (two_j + 1.0)), atol=1e-12)


def test_haar_grid_gram_identity():
    grid = grids.haar_grid(10, 5, 20)
    cols = []
    for two_j in range(2 * grid.exactness_degree + 1):
        d = irreps.dmatrix(two_j, grid.nodes)
        cols.append(
            np.sqrt(two_j + 1.0) * d.reshape(grid.n_nodes, (two_j + 1) ** 2)
        )
    f = np.concatenate(cols, axis=1)
    gram = (f.conj().T * grid.weights) @ f
    assert np.max(np.abs(gram - np.eye(gram.shape[0]))) < 1e-11


@pytest.mark.parametrize("degree", [0, 1, 2, 3, 4])
def test_haar_grid_for_degree(degree):
    grid = grids.haar_grid_for_degree(degree)
    assert grid.exactness_degree >= degree


AXIAL_MOMENTS = [
    # int_0^1 t^k sqrt(1 - t^2) dt, closed Beta-function values
    (0, np.pi / 4.0),
    (1, 1.0 / 3.0),
    (2, np.pi / 16.0),
    (3, 2.0 / 15.0),
    (4, np.pi / 32.0),
    (5, 8.0 / 105.0),
    (6, 5.0 * np.pi / 256.0),
]


@pytest.mark.parametrize("k,moment", AXIAL_MOMENTS)
def test_axial_rule_moments(k, moment):
    t, w = _axial_rule(8)
    assert_allclose(np.sum(w * t**k), moment, atol=1e-13)


def test_hemisphere_grid_structure():
    grid = grids.hemisphere_grid(7, 4, 8)
    assert np.all(grid.nodes[:, 0] > 0)
    assert_allclose(grid.weights.sum(), 0.5, atol=1e-13)
    assert_allclose(grid.pushforward_weights.sum(), 1.0, atol=1e-13)
    assert_allclose(grid.jacobian, 8.0 * grid.nodes[:, 0] ** 2, atol=1e-14)
    assert_allclose(grid.squared, su2.mul(grid.nodes, grid.nodes), atol=1e-14)


def test_hemisphere_grid_inversion_closed():
    # every inverted node coincides with some node carrying the same weight
    grid = grids.hemisphere_grid(7, 4, 8)
    inv = su2.inverse(grid.nodes)
    dots = inv @ grid.nodes.T
    partner = np.argmax(dots, axis=1)
    assert_allclose(
        inv, grid.nodes[partner], atol=1e-12
    )
    assert_allclose(grid.weights, grid.weights[partner], atol=1e-15)
    assert np.array_equal(np.sort(partner), np.arange(grid.n_nodes))


def test_hemisphere_grid_pushforward_annihilates_irreps():
    # sum_k w_k jac_k D^t(k^2) must equal the Haar integral of D^t over the
    # whole group: the identity for t = 0 and zero for every t >= 1
    grid = grids.hemisphere_grid_for(6)
    w = grid.pushforward_weights
    assert_allclose(np.sum(w), 1.0, atol=1e-12)
    for two_t in range(1, grid.exactness_twice + 1):
        d = irreps.dmatrix(two_t, grid.squared)
        defect = np.einsum("k,kmn->mn", w, d)
        assert np.max(np.abs(defect)) < 1e-10


def test_hemisphere_grid_pushforward_squared_moments():
    # int |sqrt(2t+1) D^t_{mn}(g)|^2 dg = 1 carried through the squaring map
    grid = grids.hemisphere_grid_for(4)
    w = grid.pushforward_weights
    for two_t in (1, 2):
        d = irreps.dmatrix(two_t, grid.squared)
        sq = (two_t + 1.0) * np.einsum("k,kmn->mn", w, np.abs(d) ** 2)
        assert_allclose(sq, np.ones_like(sq.real), atol=1e-11)


@pytest.mark.parametrize("two_band", [0, 1, 2, 4, 8])
def test_hemisphere_grid_for_band(two_band):
    grid = grids.hemisphere_grid_for(two_band)
    assert grid.exactness_twice >= two_band


def test_hemisphere_grid_rejects_bad_shapes():
    with pytest.raises(InvalidGrid):
        grids.hemisphere_grid(0, 4, 8)
    with pytest.raises(InvalidGrid):
        grids.hemisphere_grid(7, 4, 7)  # odd n_phi breaks inversion closure


def test_grids_are_cached():
    assert grids.haar_grid(10, 5, 20) is grids.haar_grid(10, 5, 20)
    assert grids.hemisphere_grid(7, 4, 8) is grids.hemisphere_grid(7, 4, 8)
