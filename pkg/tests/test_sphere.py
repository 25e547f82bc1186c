"""Rotation conventions on S^2 checked against pointwise evaluation of harmonics."""

import math

import numpy as np
import pytest
from scipy.special import sph_harm_y

from jacksonlab.core import ResourceBudgetError
from jacksonlab.models import build_sphere, sphere_rotate
from jacksonlab.models.sphere import COMMUTATOR_SIGN, PLANES

from conftest import random_unit

L = 5
sphere = build_sphere(L)


def evaluate(c, X):
    theta = np.arccos(np.clip(X[:, 2], -1, 1))
    phi = np.mod(np.arctan2(X[:, 1], X[:, 0]), 2 * np.pi)
    return sum(
        c[sphere.index_of(l, m)] * sph_harm_y(l, m, theta, phi) for l in range(L + 1) for m in range(-l, l + 1)
    )


def rotation(pair, tau):
    a, b = pair[0] - 1, pair[1] - 1
    R = np.eye(3)
    R[a, a] = R[b, b] = math.cos(tau)
    R[b, a] = math.sin(tau)
    R[a, b] = -math.sin(tau)
    return R


@pytest.mark.parametrize("pair", PLANES)
@pytest.mark.parametrize("tau", [0.3, -1.2, 2.9])
def test_rotation_matches_pointwise_composition(pair, tau, rng):
    """``(T f)(x) = f(R x)`` with ``R`` turning ``x_i`` toward ``x_j``."""
    X = rng.standard_normal((25, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    f = random_unit(sphere, rng)
    g = sphere_rotate(sphere, f, pair, tau)
    R = rotation(pair, tau)
    np.testing.assert_allclose(evaluate(g.values, X), evaluate(f.values, X @ R.T), atol=1e-12)


def test_l1_block_by_quadrature():
    """Independent oracle: project rotated degree-1 harmonics by Lebedev-free product quadrature."""
    x, w = np.polynomial.legendre.leggauss(20)
    theta = np.arccos(x)
    phi = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(w, np.full(phi.size, 2 * np.pi / phi.size))
    X = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
    tau = 0.9
    for j, pair in enumerate(PLANES, start=1):
        R = rotation(pair, tau)
        Y = X @ R.T
        th = np.arccos(np.clip(Y[:, 2], -1, 1))
        ph = np.mod(np.arctan2(Y[:, 1], Y[:, 0]), 2 * np.pi)
        for m in (-1, 0, 1):
            rotated = sph_harm_y(1, m, th, ph).reshape(T.shape)
            proj = [np.sum(W * np.conj(sph_harm_y(1, mm, T, P)) * rotated) for mm in (-1, 0, 1)]
            got = sphere.act(j, tau, sphere.harmonic(1, m).values)[1:4]
            np.testing.assert_allclose(got, proj, atol=1e-12)


def test_commutator_relation():
    f = random_unit(sphere, np.random.default_rng(3)).values
    D1, D2, D3 = (lambda v, j=j: sphere.generator_act(j, v) for j in (1, 2, 3))
    comm = D1(D3(f)) - D3(D1(f))
    np.testing.assert_allclose(comm, COMMUTATOR_SIGN * D2(f), atol=1e-12)
    # the three relations of so(3) in this realization
    np.testing.assert_allclose(D2(D3(f)) - D3(D2(f)), -COMMUTATOR_SIGN * D1(f), atol=1e-12)
    np.testing.assert_allclose(D1(D2(f)) - D2(D1(f)), -COMMUTATOR_SIGN * D3(f), atol=1e-12)


def test_commutator_from_group_differences():
    f = random_unit(sphere, np.random.default_rng(4)).values
    eps = 1e-4

    def D(j, v):
        return (sphere.act(j, eps, v) - sphere.act(j, -eps, v)) / (2 * eps)

    comm = D(1, D(3, f)) - D(3, D(1, f))
    assert np.max(np.abs(comm - COMMUTATOR_SIGN * sphere.generator_act(2, f))) < 1e-5


@pytest.mark.parametrize("l", [0, 1, 4, 16])
def test_laplacian_eigenvalue_by_second_differences(l):
    big = build_sphere(16)
    y = big.harmonic(l, min(l, 2)).values
    eps = 1e-3
    lap = -sum((big.act(j, eps, y) - 2 * y + big.act(j, -eps, y)) / eps**2 for j in (1, 2, 3))
    np.testing.assert_allclose(lap, l * (l + 1) * y, atol=1e-4 * max(1, l * (l + 1)) ** 2)


def test_degree_preserved(rng):
    f = random_unit(sphere, rng)
    for j in (1, 2, 3):
        g = sphere.act(j, 0.77, f.values)
        for l in range(L + 1):
            sl = slice(l * l, (l + 1) ** 2)
            assert np.linalg.norm(g[sl]) == pytest.approx(np.linalg.norm(f.values[sl]), abs=1e-13)


def test_bad_plane_and_budget():
    with pytest.raises(ValueError):
        sphere_rotate(sphere, sphere.unit(0), (2, 1), 0.1)
    with pytest.raises(ResourceBudgetError):
        build_sphere(65)
