"""Schrodinger representation of the 3-dimensional Heisenberg group.

Basis: Hermite functions ``phi_0..phi_{K-1}``.  Generators ``D_1 = d/dx``,
``D_2 = i x`` and ``D_3 = i`` are truncated to tridiagonal matrices, and
``L = -(D_1^2 + D_2^2 + D_3^2) = -d^2/dx^2 + x^2 + 1`` has eigenvalues
``2k + 2``.

``G_2 = i X`` with ``X`` real symmetric tridiagonal, and
``G_1 = P (i X) P^{-1}`` with ``P = diag(i^k)``, so both exponentials come
from one real tridiagonal eigendecomposition of ``X`` and are unitary on the
truncated space to rounding.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ..core import Coeffs, ResourceBudgetError, SpectralModel

logger = logging.getLogger(__name__)

MAX_KBASIS = 256
TAIL_WARNING = 1e-8


def _ladder(K: int) -> np.ndarray:
    return np.sqrt(np.arange(1, K) / 2.0)


def hermite_generator(j: int, Kbasis: int) -> np.ndarray:
    """Dense truncated generator matrix ``G_j`` (column ``k`` is ``G_j phi_k``)."""
    K = int(Kbasis)
    if K < 1:
        raise ValueError("Kbasis must be >= 1")
    e = _ladder(K)
    if j == 1:
        # d/dx phi_k = sqrt(k/2) phi_{k-1} - sqrt((k+1)/2) phi_{k+1}
        return np.diag(e, 1) - np.diag(e, -1) + 0j
    if j == 2:
        # x phi_k = sqrt(k/2) phi_{k-1} + sqrt((k+1)/2) phi_{k+1}
        return 1j * (np.diag(e, 1) + np.diag(e, -1))
    if j == 3:
        return 1j * np.eye(K)
    raise ValueError("generator index must be 1, 2 or 3")


class HermiteModel(SpectralModel):
    def __init__(self, Kbasis: int):
        if int(Kbasis) != Kbasis or Kbasis < 1:
            raise ValueError("Kbasis must be a positive integer")
        if Kbasis > MAX_KBASIS:
            raise ResourceBudgetError(f"Kbasis={Kbasis} exceeds the budget of {MAX_KBASIS}")
        K = int(Kbasis)
        self.Kbasis = K
        super().__init__(2.0 * np.arange(K) + 2.0, f"hermite:K={K}", 3)
        # position operator X = V diag(mu) V^T
        if K > 1:
            self._mu, self._V = eigh_tridiagonal(np.zeros(K), _ladder(K))
        else:
            self._mu, self._V = np.zeros(1), np.ones((1, 1))
        self._phase = 1j ** np.arange(K)  # P = diag(i^k)
        self._gens = [hermite_generator(j, K) for j in (1, 2, 3)]
        self.tolerance = 1e-8

    def propagator(self, j: int, tau: float) -> np.ndarray:
        """Dense unitary ``exp(tau G_j)`` on the truncated space."""
        if j == 3:
            return np.exp(1j * tau) * np.eye(self.Kbasis)
        U = (self._V * np.exp(1j * tau * self._mu)) @ self._V.T
        if j == 1:
            U = self._phase[:, None] * U * np.conj(self._phase)[None, :]
        return U

    def act(self, j, tau, values):
        if j == 3:
            return values * np.exp(1j * tau)
        return values @ self.propagator(j, tau).T

    def generator_act(self, j, values):
        return values @ self._gens[j - 1].T

    def tail_fraction(self, f: Coeffs) -> float:
        """Share of ``||f||`` in the top eighth of the basis (at least 2 slots)."""
        c = self.check(f)
        n = np.linalg.norm(c)
        if n == 0:
            return 0.0
        width = max(2, self.Kbasis // 8)
        return float(np.linalg.norm(c[-width:]) / n)

    def group_apply(self, j, tau, f):
        out = super().group_apply(j, tau, f)
        tail = self.tail_fraction(f)
        if tail > TAIL_WARNING:
            logger.debug("hermite_apply: truncation tail %.3g of ||f||", tail)
            return Coeffs(out.values, out.basis_id, (f"truncation-tail:{tail:.3g}",))
        return out


def build_hermite(Kbasis: int) -> HermiteModel:
    return HermiteModel(Kbasis)


def hermite_apply(model: HermiteModel, f: Coeffs, j: int, tau: float) -> Coeffs:
    """``exp(tau G_j) f``; results carry a flag when ``f`` reaches the truncation edge."""
    return model.group_apply(j, tau, f)
