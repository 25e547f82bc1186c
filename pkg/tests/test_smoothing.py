import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from jacksonlab.core import k2_functional
from jacksonlab.experiments import TestVectorSpec, make_test_vector
from jacksonlab.models import build_circle, build_sphere, build_torus
from jacksonlab.smoothing import (
    SteklovSpec,
    double_inequality_report,
    irwin_hall_density,
    steklov,
    steklov_dir,
    steklov_dir_tensor,
    steklov_k_upper,
    telescoping_residuals,
)

from conftest import random_unit


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("s", [0.1, 0.5, 1.0])
def test_irwin_hall_density_moments(r, s):
    mass = quad(lambda u: irwin_hall_density(u, r, s), 0, s, points=[s * k / r for k in range(r + 1)])[0]
    mean = quad(lambda u: u * irwin_hall_density(u, r, s), 0, s, points=[s * k / r for k in range(r + 1)])[0]
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert mean == pytest.approx(s / 2, abs=1e-10)
    assert irwin_hall_density(-0.01, r, s) == 0
    assert irwin_hall_density(s * 1.01, r, s) == 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_rule_is_exact_for_polynomials(r):
    spec = SteklovSpec(r, 0.4)
    u, w = spec.rule()
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    h = 0.4 / r
    # E[U^2] for a sum of r independent uniforms on [0, h]
    assert np.sum(w * u**2) == pytest.approx(r * h * h / 3 + r * (r - 1) * h * h / 4, abs=1e-14)


def _circle_oracle(k, r, s):
    """Closed-form eigenvalue of H_{j,r}(s) on exp(i k x)."""
    h = s / r

    def phi(x):
        return 1.0 if x == 0 else (np.exp(1j * x * h) - 1) / (1j * x * h)

    A = sum(math.comb(r, l) * (-1) ** (r - l) * phi(l * k) ** r for l in range(r + 1))
    return (-1) ** r * A - 1


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("s", [0.05, 0.3, 1.0])
def test_steklov_circle_closed_form(r, s):
    circle = build_circle(6)
    f = random_unit(circle, np.random.default_rng(r))
    got = steklov_dir(circle, f, 1, SteklovSpec(r, s)).values
    mult = np.array([_circle_oracle(int(k), r, s) for k in circle.wavenumbers[:, 0]])
    np.testing.assert_allclose(got, mult * f.values, atol=1e-13)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_collapsed_vs_tensor_quadrature(r):
    for model in (build_torus(6, 2), build_sphere(8)):
        for kind in ("gauss_decay", "random_unit"):
            f = make_test_vector(model, TestVectorSpec(kind))
            spec = SteklovSpec(r, 0.25)
            for j in range(1, model.d + 1):
                a = steklov_dir(model, f, j, spec).values
                b = steklov_dir_tensor(model, f, j, spec).values
                assert np.max(np.abs(a - b)) <= 1e-8


def test_smoother_tends_to_identity(rng):
    for model in (build_circle(16), build_sphere(6)):
        f = random_unit(model, rng)
        res = steklov(model, f, SteklovSpec(2, 1e-4))
        assert (res.smoothed - f).norm() <= 1e-2
        assert (res.raw - (-1) ** model.d * f).norm() <= 1e-2


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=6), st.integers(0, 2**31))
def test_telescoping_identities(taus, seed):
    sphere = build_sphere(4)
    f = random_unit(sphere, np.random.default_rng(seed))
    r1, r2 = telescoping_residuals(sphere, f, taus)
    assert r1 <= 1e-12 and r2 <= 1e-12


def test_telescoping_explicit_groups(rng):
    torus = build_torus(3, 3)
    f = random_unit(torus, rng)
    assert max(telescoping_residuals(torus, f, [0.1, 0.2, 0.3], groups=[3, 1, 3])) <= 1e-12


@pytest.mark.parametrize("r", [1, 2])
def test_witness_dominates_k2(r, rng):
    for model in (build_circle(12), build_torus(4, 2), build_sphere(6)):
        f = random_unit(model, rng)
        for s in (0.5, 0.1, 0.02):
            assert steklov_k_upper(model, f, SteklovSpec(r, s)) >= k2_functional(model, f, s, r)


def test_double_inequality_report_shapes(rng):
    circle = build_circle(8)
    rows = double_inequality_report(circle, random_unit(circle, rng), 2, [0.5, 0.25, 0.125])
    assert [row.s for row in rows] == [0.5, 0.25, 0.125]
    assert all(0 < row.lower_ratio < math.inf and not row.flagged for row in rows)
    assert all(row.upper_ratio <= row.lower_ratio for row in rows)
    zero = double_inequality_report(circle, circle.zeros(), 1, [0.5])
    assert math.isnan(zero[0].lower_ratio) and math.isnan(zero[0].upper_ratio)


def test_spec_validation():
    for bad in [dict(r=0, s=0.1), dict(r=2, s=0.0), dict(r=2, s=1.5), dict(r=1, s=0.1, quad_nodes=0)]:
        with pytest.raises(ValueError):
            SteklovSpec(**bad)
