"""Jackson kernel, its Fourier transform and the smoothing multiplier.

The kernel ``h(t) = a (sin(t/n) / t)^n`` with ``n = 2(m + 3)`` is even,
non-negative, integrates to one and has Fourier transform supported in
``[-1, 1]``: ``sin(t/n)/t`` is (half) the transform of the indicator of
``[-1/n, 1/n]``, so ``h_hat`` is the ``n``-fold self-convolution of that
indicator, an Irwin-Hall density, rescaled to ``h_hat(0) = 1``.

Integrating ``(-1)^{m+1} (exp(i t L / sigma) - I)^m + I`` against ``h``
turns into the multiplier

    q(lambda) = sum_{k=1}^{m} (-1)^{k+1} C(m, k) h_hat(k lambda / sigma),

which vanishes for ``lambda >= sigma`` and equals 1 at ``lambda = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import Coeffs, SpectralModel

__all__ = [
    "JacksonConstants",
    "KernelSpec",
    "MultiplierTable",
    "hhat",
    "jackson_apply",
    "jackson_constants",
    "kernel_h",
    "multiplier_table",
    "q_multiplier",
    "q_quadrature",
]


def _sinc_power(t, n: int) -> np.ndarray:
    # (sin(t/n) / t)^n without the removable singularity at 0
    return (np.sinc(np.asarray(t, dtype=float) / (n * np.pi)) / n) ** n


@dataclass(frozen=True)
class KernelSpec:
    """Jackson kernel of order ``m``; ``a`` is fixed at construction.

    All ``h``-weighted integrals use composite Gauss-Legendre on panels of
    width ``panel`` over ``[-t_max, t_max]`` with ``nodes`` points each; the
    neglected tails are bounded analytically via ``h(t) <= a |t|^{-n}``.
    """

    m: int
    t_max: float = 1000.0
    nodes: int = 16
    panel: float = 1.0
    n: int = field(init=False)
    a: float = field(init=False)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if self.t_max <= 1 or self.nodes < 2 or self.panel <= 0:
            raise ValueError("invalid quadrature settings")
        object.__setattr__(self, "n", 2 * (int(self.m) + 3))
        t, w = self.quadrature()
        object.__setattr__(self, "a", 1.0 / float(np.sum(w * _sinc_power(t, self.n))))

    def quadrature(self):
        """Nodes and weights on ``[-t_max, t_max]``."""
        x, w = np.polynomial.legendre.leggauss(self.nodes)
        npan = int(math.ceil(self.t_max / self.panel))
        edges = np.linspace(0.0, self.t_max, npan + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wt = (half[:, None] * w[None, :]).ravel()
        return np.concatenate([-t[::-1], t]), np.concatenate([wt[::-1], wt])

    def tail_bound(self, power: int = 0) -> float:
        """Bound on ``int_{|t| > t_max} h(t) (1 + |t|)^power dt``."""
        T, n = self.t_max, self.n
        if power >= n - 1:
            return math.inf
        return 2.0 * self.a * (1 + 1 / T) ** power * T ** (power + 1 - n) / (n - power - 1)


def kernel_h(spec: KernelSpec, t):
    """``h(t) = a (sin(t/n)/t)^n``; ``h(0) = a n^{-n}``."""
    out = spec.a * _sinc_power(t, spec.n)
    return float(out) if np.ndim(out) == 0 else out


def _irwin_hall_ratio(x: np.ndarray, n: int) -> np.ndarray:
    """Irwin-Hall density of order ``n`` at ``x`` divided by its value at ``n/2``."""
    x = np.minimum(x, n - x)  # symmetric; keeps the alternating sum short
    out = np.zeros_like(x)
    inside = x > 0
    xi = x[inside]
    acc = np.zeros_like(xi)
    for k in range(n // 2 + 1):
        term = math.comb(n, k) * np.clip(xi - k, 0.0, None) ** (n - 1)
        acc += term if k % 2 == 0 else -term
    centre = sum((-1) ** k * math.comb(n, k) * (n / 2 - k) ** (n - 1) for k in range(n // 2 + 1))
    out[inside] = acc / centre
    return out


def hhat(spec: KernelSpec, xi):
    """Fourier transform ``int h(t) exp(i t xi) dt``; zero for ``|xi| >= 1``."""
    xi = np.abs(np.asarray(xi, dtype=float))
    flat = np.atleast_1d(xi).ravel()
    out = np.zeros_like(flat)
    inside = flat < 1.0
    out[inside] = _irwin_hall_ratio(0.5 * spec.n * (flat[inside] + 1.0), spec.n)
    out = out.reshape(np.shape(xi))
    return float(out) if out.ndim == 0 else out


def q_multiplier(spec: KernelSpec, lam, sigma: float):
    """Symbol of the Jackson operator at eigenvalue(s) ``lam`` for bandwidth ``sigma``."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0):
        raise ValueError("eigenvalues must be >= 0")
    out = np.zeros(np.shape(lam))
    for k in range(1, spec.m + 1):
        out = out + (-1) ** (k + 1) * math.comb(spec.m, k) * np.asarray(hhat(spec, k * lam / sigma))
    return float(out) if out.ndim == 0 else out


def q_quadrature(spec: KernelSpec, lam, sigma: float):
    """Direct quadrature of ``int h(t) [(-1)^{m+1}(exp(i t lam/sigma) - 1)^m + 1] dt``.

    Independent of :func:`hhat`; the real part is returned (the imaginary
    part vanishes because ``h`` is even).
    """
    t, w = spec.quadrature()
    hw = w * kernel_h(spec, t)
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty(lam.shape)
    for i, x in enumerate(lam / sigma):
        integrand = (-1) ** (spec.m + 1) * (np.exp(1j * t * x) - 1.0) ** spec.m + 1.0
        out[i] = float(np.real(np.sum(hw * integrand)))
    return out


def jackson_apply(
    model: SpectralModel, f: Coeffs, sigma: float, m: int, spec: KernelSpec | None = None
) -> Coeffs:
    """``Q_h^{sigma,m} f``: the multiplier ``q(lambda_k)`` applied coefficientwise."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    spec = spec or KernelSpec(m)
    if spec.m != m:
        raise ValueError(f"kernel built for m={spec.m}, asked for m={m}")
    c = model.check(f)
    return model.coeffs(q_multiplier(spec, model.eigenvalues, sigma) * c)


class JacksonConstants(NamedTuple):
    c: float
    C: float
    tail_bound: float


def jackson_constants(spec: KernelSpec, k: int) -> JacksonConstants:
    """``c = int h (1+|t|)^m`` and ``C_k = int h |t|^k (1+|t|)^{m-k}``."""
    if not 0 <= k <= spec.m:
        raise ValueError(f"k must be in 0..{spec.m}")
    t, w = spec.quadrature()
    hw = w * kernel_h(spec, t)
    at = np.abs(t)
    c = float(np.sum(hw * (1 + at) ** spec.m))
    C = float(np.sum(hw * at**k * (1 + at) ** (spec.m - k)))
    return JacksonConstants(c, C, spec.tail_bound(spec.m))


@dataclass(frozen=True, eq=False)
class MultiplierTable:
    lambdas: np.ndarray
    values: np.ndarray
    sigma: float
    m: int
    oracle: np.ndarray | None = None

    def rows(self):
        for i, lam in enumerate(self.lambdas):
            q = float(self.values[i])
            if self.oracle is None:
                yield float(lam), q
            else:
                o = float(self.oracle[i])
                yield float(lam), q, o, abs(q - o)


def multiplier_table(
    spec: KernelSpec, sigma: float, lambdas=None, points: int = 50, with_oracle: bool = True
) -> MultiplierTable:
    """Sample ``q`` on ``lambdas`` (default: ``points`` values spanning ``[0, 2 sigma]``)."""
    if lambdas is None:
        lambdas = np.linspace(0.0, 2.0 * sigma, points)
    lambdas = np.asarray(lambdas, dtype=float)
    values = np.asarray(q_multiplier(spec, lambdas, sigma), dtype=float).reshape(lambdas.shape)
    oracle = q_quadrature(spec, lambdas, sigma) if with_oracle else None
    return MultiplierTable(lambdas, values, float(sigma), spec.m, oracle)
