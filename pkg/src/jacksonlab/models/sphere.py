"""The two-sphere with the three coordinate-plane rotation groups.

Coefficients are taken against orthonormal complex spherical harmonics with
the Condon-Shortley phase, ordered by ``(l, m)``, ``m = -l..l``.  The group
for plane ``(i, j)`` acts by ``f(x) -> f(R x)`` where ``R`` rotates by
``tau`` from ``x_i`` toward ``x_j``.  On coefficients this gives

* plane (1,2): ``c_{lm} -> exp(i m tau) c_{lm}``
* plane (1,3): ``c_l -> d^l(tau) c_l``
* plane (2,3): ``c_l -> Z(pi/2) d^l(-tau) Z(-pi/2) c_l``, ``Z(a) = diag(exp(i m a))``

These signs were fixed by comparing against pointwise evaluation of the
rotated harmonics (see ``tests/test_sphere.py``).
"""

from __future__ import annotations

import numpy as np

from ..core import Coeffs, ResourceBudgetError, SpectralModel
from .wigner import wigner_d_blocks, wigner_generator

MAX_LMAX = 64

#: plane pairs for group indices 1, 2, 3
PLANES = ((1, 2), (1, 3), (2, 3))

#: [D_{1,2}, D_{2,3}] = COMMUTATOR_SIGN * D_{1,3} in this realization
COMMUTATOR_SIGN = 1


class SphereModel(SpectralModel):
    def __init__(self, Lmax: int):
        if int(Lmax) != Lmax or Lmax < 0:
            raise ValueError("Lmax must be a non-negative integer")
        if Lmax > MAX_LMAX:
            raise ResourceBudgetError(f"Lmax={Lmax} exceeds the budget of {MAX_LMAX}")
        self.Lmax = int(Lmax)
        degrees = np.concatenate([np.full(2 * l + 1, l) for l in range(Lmax + 1)])
        orders = np.concatenate([np.arange(-l, l + 1) for l in range(Lmax + 1)])
        self.degrees = degrees
        self.orders = orders.astype(float)
        super().__init__(degrees * (degrees + 1.0), f"sphere:Lmax={Lmax}", 3)
        self.tolerance = 1e-12
        self._slices = [slice(l * l, (l + 1) ** 2) for l in range(Lmax + 1)]
        self._quarter = np.exp(0.5j * np.pi * self.orders)  # Z(pi/2)
        self._gen_y = [wigner_generator(l) for l in range(Lmax + 1)]

    def index_of(self, l: int, m: int) -> int:
        if not (0 <= l <= self.Lmax and -l <= m <= l):
            raise IndexError(f"(l, m) = ({l}, {m}) outside the basis")
        return l * l + l + m

    def harmonic(self, l: int, m: int) -> Coeffs:
        return self.unit(self.index_of(l, m))

    def _blockwise(self, mats, values):
        out = np.empty(np.broadcast_shapes(values.shape, (self.size,)), dtype=complex)
        for sl, mat in zip(self._slices, mats):
            out[..., sl] = values[..., sl] @ mat.T
        return out

    def act(self, j, tau, values):
        if j == 1:
            return values * np.exp(1j * tau * self.orders)
        if j == 2:
            return self._blockwise(wigner_d_blocks(self.Lmax, float(tau)), values)
        # x-axis rotation as z(-pi/2) . y(-tau) . z(pi/2) in operator order
        rotated = self._blockwise(
            wigner_d_blocks(self.Lmax, float(-tau)), values * np.conj(self._quarter)
        )
        return rotated * self._quarter

    def generator_act(self, j, values):
        if j == 1:
            return values * (1j * self.orders)
        if j == 2:
            return self._blockwise(self._gen_y, values)
        return -self._blockwise(self._gen_y, values * np.conj(self._quarter)) * self._quarter

    def sphere_rotate(self, f: Coeffs, pair, tau: float) -> Coeffs:
        pair = tuple(pair)
        if pair not in PLANES:
            raise ValueError(f"plane must be one of {PLANES}, got {pair}")
        return self.group_apply(PLANES.index(pair) + 1, tau, f)


def build_sphere(Lmax: int) -> SphereModel:
    return SphereModel(Lmax)


def sphere_rotate(model: SphereModel, f: Coeffs, pair, tau: float) -> Coeffs:
    """Rotate ``f`` by ``tau`` in the coordinate plane ``pair``."""
    return model.sphere_rotate(f, pair, tau)
