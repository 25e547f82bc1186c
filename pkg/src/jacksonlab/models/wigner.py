"""Small Wigner-d matrices by degree-ascending three-term recursion.

``d^l_{m m'}(beta) = <l m| exp(-i beta J_y) |l m'>`` with rows and columns
ordered ``m = -l..l``.  Each entry is seeded at degree ``max(|m|, |m'|)``
by the single-term closed form and then carried upward with

    d^{l+1} = A_l [(cos(beta) - m m' / (l (l + 1))) d^l - B_l d^{l-1}],

the same recurrence structure as associated Legendre functions, which is
stable in ``l``.  No factorial ratios larger than ``C(2L, L)`` are formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["WignerBlock", "wigner_d", "wigner_d_blocks", "wigner_generator"]


@dataclass(frozen=True, eq=False)
class WignerBlock:
    l: int
    beta: float
    matrix: np.ndarray

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.l, self.l + 1)


def _seed_row(J: int, c: float, s: float) -> np.ndarray:
    """``d^J_{J, m'}`` for ``m' = -J..J``."""
    out = np.empty(2 * J + 1)
    for i, mp in enumerate(range(-J, J + 1)):
        out[i] = math.sqrt(math.comb(2 * J, J + mp)) * c ** (J + mp) * (-s) ** (J - mp)
    return out


def _wigner_all(lmax: int, beta: float) -> tuple:
    size = 2 * lmax + 1
    m = np.arange(-lmax, lmax + 1)
    M, MP = np.meshgrid(m, m, indexing="ij")
    top = np.maximum(np.abs(M), np.abs(MP))
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    cb = math.cos(beta)

    prev = np.zeros((size, size))
    cur = np.zeros((size, size))
    blocks = []
    for l in range(lmax + 1):
        if l > 0:
            # carry entries with max(|m|,|m'|) <= l-1 from degree l-1 to l
            k = l - 1
            mask = top <= k
            Mm, Mp = M[mask].astype(float), MP[mask].astype(float)
            a = l * (2 * k + 1) / np.sqrt((l * l - Mm**2) * (l * l - Mp**2))
            mix = Mm * Mp / (k * (k + 1)) if k > 0 else 0.0
            b = np.sqrt((k * k - Mm**2) * (k * k - Mp**2)) / (k * (2 * k + 1)) if k > 0 else 0.0
            nxt = np.zeros((size, size))
            nxt[mask] = a * ((cb - mix) * cur[mask] - b * prev[mask])
            prev, cur = cur, nxt
        # seed the new outer ring max(|m|,|m'|) == l
        row = _seed_row(l, c, s)
        o = lmax
        mp = np.arange(-l, l + 1)
        sign = (-1.0) ** ((mp - l) % 2)
        cur[o + l, o + mp] = row  # d_{l, m'}
        cur[o + mp, o + l] = sign * row  # d_{m', l} = (-1)^{m'-l} d_{l, m'}
        cur[o + mp, o - l] = row[::-1]  # d_{m', -l} = d_{l, -m'}
        cur[o - l, o + mp] = sign[::-1] * row[::-1]  # d_{-l, m'} = (-1)^{m'+l} d_{l, -m'}
        blk = cur[o - l : o + l + 1, o - l : o + l + 1].copy()
        blk.setflags(write=False)
        blocks.append(blk)
    return tuple(blocks)


@lru_cache(maxsize=4096)
def wigner_d_blocks(lmax: int, beta: float) -> tuple:
    """Tuple of ``d^l(beta)`` for ``l = 0..lmax`` (read-only arrays, cached)."""
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    return _wigner_all(int(lmax), float(beta))


def wigner_d(l: int, beta: float) -> WignerBlock:
    """Small Wigner-d matrix of degree ``l`` for rotation by ``beta`` about y."""
    if l < 0:
        raise ValueError("degree must be >= 0")
    return WignerBlock(l, float(beta), wigner_d_blocks(int(l), float(beta))[l])


def wigner_generator(l: int) -> np.ndarray:
    """``d/dbeta d^l(beta)`` at ``beta = 0``, i.e. ``-i J_y``; real antisymmetric."""
    g = np.zeros((2 * l + 1, 2 * l + 1))
    for i, m in enumerate(range(-l, l + 1)):
        if m < l:
            # <m+1| -i J_y |m> = -sqrt(l(l+1) - m(m+1)) / 2
            g[i + 1, i] = -0.5 * math.sqrt(l * (l + 1) - m * (m + 1))
        if m > -l:
            g[i - 1, i] = 0.5 * math.sqrt(l * (l + 1) - m * (m - 1))
    return g
