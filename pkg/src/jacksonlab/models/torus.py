"""Circle and torus: translations act diagonally on Fourier modes."""

from __future__ import annotations

import itertools

import numpy as np

from ..core import ResourceBudgetError, SpectralModel

MAX_TORUS_MODES = 200_000


class TorusModel(SpectralModel):
    """Fourier modes ``exp(i k.x)`` for ``k`` in ``[-K, K]^d``, ``L = -Laplacian``.

    The basis is ordered lexicographically over the lattice; ``T_j(tau)`` is
    translation along coordinate ``j`` and multiplies mode ``k`` by
    ``exp(i k_j tau)``.
    """

    def __init__(self, K: int, dims: int, name: str | None = None):
        if int(K) != K or K < 1:
            raise ValueError("K must be a positive integer")
        if dims not in (1, 2, 3):
            raise ValueError("dims must be 1, 2 or 3")
        n = (2 * K + 1) ** dims
        if n > MAX_TORUS_MODES:
            raise ResourceBudgetError(f"torus K={K}, d={dims} has {n} modes (max {MAX_TORUS_MODES})")
        self.K = int(K)
        self.wavenumbers = np.array(
            list(itertools.product(range(-K, K + 1), repeat=dims)), dtype=float
        ).reshape(n, dims)
        self.wavenumbers.setflags(write=False)
        super().__init__(
            np.sum(self.wavenumbers**2, axis=1),
            name or f"torus:K={K},d={dims}",
            dims,
        )
        self.tolerance = 1e-14

    def index_of(self, k) -> int:
        """Basis slot of the lattice point ``k``."""
        k = np.atleast_1d(np.asarray(k))
        if k.shape != (self.d,) or np.any(np.abs(k) > self.K):
            raise IndexError(f"wavenumber {tuple(k)} outside [-{self.K}, {self.K}]^{self.d}")
        idx = 0
        for kj in k:
            idx = idx * (2 * self.K + 1) + int(kj) + self.K
        return idx

    def act(self, j, tau, values):
        return values * np.exp(1j * tau * self.wavenumbers[:, j - 1])

    def generator_act(self, j, values):
        return values * (1j * self.wavenumbers[:, j - 1])


class CircleModel(TorusModel):
    """One-dimensional torus, basis ordered ``k = -K..K``."""

    def __init__(self, K: int):
        super().__init__(K, 1, name=f"circle:K={K}")


def build_circle(K: int) -> CircleModel:
    return CircleModel(K)


def build_torus(K: int, d: int) -> TorusModel:
    if d == 1:
        return CircleModel(K)
    return TorusModel(K, d)
