"""Hardy-Steklov smoothing and the modulus / K-functional comparison.

For one group ``T_j`` the operator averages
``sum_{k=1}^r (-1)^k C(r,k) T_j(k (tau_1 + ... + tau_r))`` over the cube
``[0, s/r]^r``.  Because ``sum_{k=0}^r (-1)^k C(r,k) T(k u) = (-1)^r (T(u) - I)^r``
and the integrand depends on the cube only through ``u = tau_1 + ... + tau_r``,

    H_{j,r}(s) = (-1)^r A_j - I,   A_j = int (T_j(u) - I)^r rho(u) du,

with ``rho`` the density of a sum of ``r`` independent uniforms on
``[0, s/r]``.  Each factor tends to ``-I`` as ``s -> 0``, so the product over
``j = 1..d`` is multiplied by ``(-1)^d`` to get a smoother that tends to the
identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    Coeffs,
    GridLike,
    SpectralModel,
    k2_functional,
    omega_modulus,
    sobolev_graph_norm,
)

__all__ = [
    "KRow",
    "SteklovResult",
    "SteklovSpec",
    "double_inequality_report",
    "irwin_hall_density",
    "steklov",
    "steklov_dir",
    "steklov_dir_tensor",
    "steklov_k_upper",
    "telescoping_residuals",
]


@dataclass(frozen=True)
class SteklovSpec:
    r: int
    s: float
    quad_nodes: int = 12

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValueError("r must be a positive integer")
        if not 0 < self.s <= 1:
            raise ValueError(f"s must lie in (0, 1], got {self.s}")
        if self.quad_nodes < 1:
            raise ValueError("quad_nodes must be >= 1")

    def rule(self):
        """Nodes ``u`` and weights ``w`` with ``sum w g(u) ~ int g(u) rho(u) du``.

        ``rho`` is a polynomial on each ``[i s/r, (i+1) s/r]``, so Gauss-Legendre
        per piece integrates it without loss.
        """
        r, s = int(self.r), float(self.s)
        x, w = np.polynomial.legendre.leggauss(self.quad_nodes)
        h = s / r
        nodes, weights = [], []
        for i in range(r):
            u = h * (i + 0.5 * (x + 1.0))
            nodes.append(u)
            weights.append(0.5 * h * w * irwin_hall_density(u, r, s))
        return np.concatenate(nodes), np.concatenate(weights)


def irwin_hall_density(u, r: int, s: float) -> np.ndarray:
    """Density of ``tau_1 + ... + tau_r`` with ``tau_i`` uniform on ``[0, s/r]``."""
    y = np.asarray(u, dtype=float) * r / s
    acc = np.zeros_like(y)
    for k in range(r + 1):
        z = y - k
        # truncated power (z)_+^{r-1}, with a unit step when r == 1
        acc += (-1) ** k * math.comb(r, k) * np.where(z > 0, np.abs(z) ** (r - 1), 0.0)
    acc = np.where((y < 0) | (y > r), 0.0, acc)
    return acc / math.factorial(r - 1) * (r / s)


def _steklov_dir_values(model: SpectralModel, values: np.ndarray, j: int, spec: SteklovSpec):
    r = spec.r
    # (T(u) - I)^r = sum_k C(r,k) (-1)^(r-k) T(k u)
    binom = [math.comb(r, k) * (-1) ** (r - k) for k in range(r + 1)]
    nodes, weights = spec.rule()
    avg = np.zeros(values.shape, dtype=complex)
    for u, w in zip(nodes, weights):
        diff = binom[0] * values
        for k in range(1, r + 1):
            diff = diff + binom[k] * model.act(j, k * u, values)
        avg += w * diff
    return (-1) ** r * avg - values


def steklov_dir(model: SpectralModel, f: Coeffs, j: int, spec: SteklovSpec) -> Coeffs:
    """``H_{j,r}(s) f`` for the ``j``-th group (1-based)."""
    model._check_group(j)
    return model.coeffs(_steklov_dir_values(model, model.check(f), j, spec))


def steklov_dir_tensor(
    model: SpectralModel, f: Coeffs, j: int, spec: SteklovSpec, nodes_per_axis: int = 8
) -> Coeffs:
    """Reference ``H_{j,r}(s) f`` by tensor Gauss-Legendre over the full cube.

    Costs ``nodes_per_axis**r * r`` group applications; used to check the
    one-dimensional reduction in :func:`steklov_dir`.
    """
    model._check_group(j)
    r, h = spec.r, spec.s / spec.r
    c = model.check(f)
    x, w = np.polynomial.legendre.leggauss(nodes_per_axis)
    x = h * 0.5 * (x + 1.0)
    w = w / 2.0  # weights of the normalized average over [0, h]
    out = np.zeros(c.shape, dtype=complex)
    for idx in np.ndindex(*(nodes_per_axis,) * r):
        u = float(sum(x[i] for i in idx))
        weight = float(np.prod([w[i] for i in idx]))
        for k in range(1, r + 1):
            out += weight * (-1) ** k * math.comb(r, k) * model.act(j, k * u, c)
    return model.coeffs(out)


class SteklovResult(NamedTuple):
    raw: Coeffs
    smoothed: Coeffs


def _steklov_values(model, values, spec):
    out = values
    for j in range(model.d, 0, -1):
        out = _steklov_dir_values(model, out, j, spec)
    return out


def steklov(model: SpectralModel, f: Coeffs, spec: SteklovSpec) -> SteklovResult:
    """``H_r(s) f = H_{1,r} ... H_{d,r} f`` and the smoother ``(-1)^d H_r(s) f``."""
    raw = _steklov_values(model, model.check(f), spec)
    return SteklovResult(model.coeffs(raw), model.coeffs((-1) ** model.d * raw))


def steklov_k_upper(model: SpectralModel, f: Coeffs, spec: SteklovSpec) -> float:
    """``||g - f|| + s^r (||g|| + ||L^{r/2} g||)`` for the witness ``g = (-1)^d H_r(s) f``."""
    g = steklov(model, f, spec).smoothed
    return (g - f).norm() + spec.s**spec.r * sobolev_graph_norm(model, g, spec.r)


def telescoping_residuals(model: SpectralModel, f: Coeffs, taus, groups=None):
    """Largest residuals of the two telescoping identities with ``B_i = T_{j_i}(tau_i)``.

    (1) ``B_1...B_n - I = (B_1 - I) + B_1 (B_2 - I) + ... + B_1...B_{n-1} (B_n - I)``
    (2) ``(B_1 - I) B_2...B_n = (B_1 - I) + sum_{k>=2} (B_1 - I) B_2...B_{k-1} (B_k - I)``

    Group ``j_i`` defaults to cycling through ``1..d``.  Returns ``(res1, res2)``.
    """
    c = model.check(f)
    taus = list(taus)
    n = len(taus)
    if groups is None:
        groups = [(i % model.d) + 1 for i in range(n)]

    def B(i, v):
        return model.act(groups[i], taus[i], v)

    def prod(lo, hi, v):
        # B_lo ... B_{hi-1} v, rightmost factor applied first
        for i in range(hi - 1, lo - 1, -1):
            v = B(i, v)
        return v

    def term(lo, k, v):
        # B_lo ... B_{k-1} (B_k - I) v
        return prod(lo, k, B(k, v) - v)

    lhs1 = prod(0, n, c) - c
    rhs1 = sum(term(0, k, c) for k in range(n))
    res1 = float(np.max(np.abs(lhs1 - rhs1)))

    tail = prod(1, n, c)
    lhs2 = B(0, tail) - tail
    rhs2 = B(0, c) - c
    for k in range(1, n):
        v = term(1, k, c)
        rhs2 = rhs2 + B(0, v) - v
    res2 = float(np.max(np.abs(lhs2 - rhs2)))
    return res1, res2


@dataclass(frozen=True)
class KRow:
    s: float
    Omega: float
    K2: float
    steklov_bound: float
    lower_ratio: float
    upper_ratio: float
    flagged: bool = False


def double_inequality_report(
    model: SpectralModel,
    f: Coeffs,
    r: int,
    s_ladder,
    grid: GridLike = None,
    quad_nodes: int = 12,
) -> list:
    """Modulus, K-functional and Steklov witness along a ladder of scales.

    ``lower_ratio = K2 / Omega^r(s, f)`` and
    ``upper_ratio = K2 / (Omega^r(s, f) + s^r ||f||)``.  For ``f = 0`` both
    ratios are NaN.  A row with ``Omega = 0 < K2`` is flagged; on the
    implemented models it cannot occur for non-invariant ``f``.
    """
    rows = []
    fnorm = f.norm()
    for s in s_ladder:
        s = float(s)
        spec = SteklovSpec(r, s, quad_nodes)
        om = omega_modulus(model, f, s, r, grid)
        k2 = k2_functional(model, f, s, r)
        bound = steklov_k_upper(model, f, spec)
        if fnorm == 0:
            rows.append(KRow(s, om, k2, bound, math.nan, math.nan))
            continue
        flagged = om == 0 and k2 > 0
        lower = k2 / om if om > 0 else math.inf
        upper = k2 / (om + s**r * fnorm)
        rows.append(KRow(s, om, k2, bound, lower, upper, flagged))
    return rows
