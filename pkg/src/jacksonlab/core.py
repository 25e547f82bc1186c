"""Coefficient-space Hilbert algebra shared by every model.

A vector ``f`` is stored as its coordinates ``c_k`` in an orthonormal
eigenbasis of ``L`` (eigenvalues ``lambda_k``).  Everything that is a
function of ``L`` alone (projections, powers, the Schrodinger modulus, the
K-functional) is diagonal here; only :func:`omega_modulus` needs the group
actions of the model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "BasisMismatchError",
    "Coeffs",
    "ModulusGrid",
    "ResourceBudgetError",
    "SpectralModel",
    "apply_L_power",
    "best_approx_error",
    "k2_functional",
    "omega_modulus",
    "pw_project",
    "schrodinger_modulus",
    "schrodinger_profile",
    "sobolev_graph_norm",
]

# number of group applications omega_modulus may spend by default
DEFAULT_OMEGA_BUDGET = 60_000


class BasisMismatchError(ValueError):
    """Coefficient vectors bound to different eigenbases were combined."""


class ResourceBudgetError(RuntimeError):
    """A computation would exceed its configured resource budget."""


@dataclass(frozen=True, eq=False)
class Coeffs:
    """Complex amplitudes over the ordered eigenbasis ``basis_id``.

    ``flags`` carries warnings attached by the operation that produced the
    vector (for example a truncation-tail warning); arithmetic drops them.
    """

    values: np.ndarray
    basis_id: str
    flags: tuple = ()

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1:
            raise ValueError("Coeffs.values must be one-dimensional")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def _check(self, other: "Coeffs"):
        if not isinstance(other, Coeffs):
            return NotImplemented
        if other.basis_id != self.basis_id:
            raise BasisMismatchError(
                f"cannot combine basis {self.basis_id!r} with {other.basis_id!r}"
            )
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Coeffs(self.values + other.values, self.basis_id)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Coeffs(self.values - other.values, self.basis_id)

    def __mul__(self, scalar):
        if isinstance(scalar, Coeffs):
            return NotImplemented
        return Coeffs(self.values * scalar, self.basis_id)

    __rmul__ = __mul__

    def __neg__(self):
        return Coeffs(-self.values, self.basis_id)

    def vdot(self, other: "Coeffs") -> complex:
        """Inner product, conjugate-linear in ``self``."""
        self._check(other)
        return complex(np.vdot(self.values, other.values))

    def allclose(self, other: "Coeffs", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.values - other.values), initial=0.0) <= atol)


class SpectralModel:
    """An eigenvalue list for ``L`` plus ``d`` unitary one-parameter groups.

    Subclasses implement :meth:`act` (the group action on raw coefficient
    arrays, batched over leading axes) and :meth:`generator_act` (the
    infinitesimal operator ``D_j``).  Group indices are 1-based, ``1..d``.
    """

    name: str = "model"
    d: int = 1
    #: absolute error of the group actions on unit-norm input
    tolerance: float = 1e-12

    def __init__(self, eigenvalues, name: str, d: int):
        lam = np.asarray(eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("eigenvalues must be a non-empty 1-d array")
        if np.any(lam < 0):
            raise ValueError("L must be non-negative: all eigenvalues >= 0")
        lam.setflags(write=False)
        self.eigenvalues = lam
        self.name = name
        self.d = int(d)

    @property
    def basis_id(self) -> str:
        return self.name

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, d={self.d}, size={self.size})"

    # -- binding --------------------------------------------------------

    def coeffs(self, values) -> Coeffs:
        """Bind a raw coefficient array to this model's basis."""
        c = Coeffs(values, self.basis_id)
        if len(c) != self.size:
            raise BasisMismatchError(
                f"{self.name}: expected {self.size} coefficients, got {len(c)}"
            )
        return c

    def zeros(self) -> Coeffs:
        return self.coeffs(np.zeros(self.size))

    def unit(self, index: int) -> Coeffs:
        """Unit vector on the ``index``-th basis slot."""
        v = np.zeros(self.size, dtype=complex)
        v[index] = 1.0
        return self.coeffs(v)

    def check(self, f: Coeffs) -> np.ndarray:
        if not isinstance(f, Coeffs):
            raise TypeError(f"expected Coeffs, got {type(f).__name__}")
        if f.basis_id != self.basis_id or len(f) != self.size:
            raise BasisMismatchError(
                f"vector bound to {f.basis_id!r} used with model {self.basis_id!r}"
            )
        return f.values

    # -- group actions --------------------------------------------------

    def _check_group(self, j: int):
        if not 1 <= j <= self.d:
            raise ValueError(f"{self.name}: group index must be in 1..{self.d}, got {j}")

    def act(self, j: int, tau: float, values: np.ndarray) -> np.ndarray:
        """Apply ``T_j(tau)`` to coefficient arrays of shape ``(..., size)``."""
        raise NotImplementedError

    def generator_act(self, j: int, values: np.ndarray) -> np.ndarray:
        """Apply the infinitesimal operator ``D_j`` (truncated where relevant)."""
        raise NotImplementedError

    def group_apply(self, j: int, tau: float, f: Coeffs) -> Coeffs:
        self._check_group(j)
        return self.coeffs(self.act(j, float(tau), self.check(f)))

    def generator_apply(self, j: int, f: Coeffs) -> Coeffs:
        self._check_group(j)
        return self.coeffs(self.generator_act(j, self.check(f)))


@dataclass(frozen=True)
class ModulusGrid:
    """Uniform grid used to discretize the suprema over ``[0, s]``."""

    points_per_axis: int = 9
    includes_endpoint: bool = True

    def __post_init__(self):
        if int(self.points_per_axis) != self.points_per_axis or self.points_per_axis < 2:
            raise ValueError("points_per_axis must be an integer >= 2")
        if not self.includes_endpoint:
            raise ValueError("the grid over [0, s] must include s")

    def points(self, s: float) -> np.ndarray:
        return np.linspace(0.0, float(s), int(self.points_per_axis))


GridLike = Union[ModulusGrid, Sequence[float], np.ndarray, None]


def _grid_points(grid: GridLike, s: float) -> np.ndarray:
    if grid is None:
        grid = ModulusGrid()
    if isinstance(grid, ModulusGrid):
        return grid.points(s)
    taus = np.asarray(grid, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise ValueError("explicit grid must be a non-empty 1-d array of tau values")
    if np.any(taus < 0) or np.any(taus > s * (1 + 1e-12)):
        raise ValueError(f"explicit grid points must lie in [0, {s}]")
    return taus


# ---------------------------------------------------------------------------
# diagonal (functional-calculus) operations


def pw_project(model: SpectralModel, f: Coeffs, sigma: float) -> Coeffs:
    """Orthogonal projection onto the span of eigenvectors with ``lambda <= sigma``."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    c = model.check(f)
    return model.coeffs(np.where(model.eigenvalues <= sigma, c, 0.0))


def best_approx_error(model: SpectralModel, f: Coeffs, sigma: float) -> float:
    """Distance from ``f`` to the Paley-Wiener space of bandwidth ``sigma``."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    c = model.check(f)
    tail = c[model.eigenvalues > sigma]
    return float(np.linalg.norm(tail))


def _lambda_power(lam: np.ndarray, s: float) -> np.ndarray:
    if s == 0:
        # 0**0 == 1 keeps lambda=0 modes under L^0
        return np.ones_like(lam)
    return lam**s


def apply_L_power(model: SpectralModel, f: Coeffs, s: float) -> Coeffs:
    """Spectral power ``L^s f`` for ``s >= 0``."""
    if s < 0:
        raise ValueError("negative powers of L are not supported")
    c = model.check(f)
    return model.coeffs(_lambda_power(model.eigenvalues, s) * c)


def sobolev_graph_norm(model: SpectralModel, f: Coeffs, r: int) -> float:
    """Graph norm ``||f|| + ||L^{r/2} f||`` of the domain of ``L^{r/2}``."""
    if int(r) != r or r < 1:
        raise ValueError("r must be a positive integer")
    c = model.check(f)
    return float(np.linalg.norm(c) + np.linalg.norm(_lambda_power(model.eigenvalues, r / 2) * c))


def schrodinger_profile(model: SpectralModel, f: Coeffs, taus, r: int) -> np.ndarray:
    """``||(exp(i tau L) - I)^r f||`` for every ``tau`` in ``taus``."""
    c = model.check(f)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    # |exp(i x) - 1| = 2 |sin(x / 2)| avoids cancellation for small x
    mult = np.abs(2.0 * np.sin(0.5 * np.outer(taus, model.eigenvalues))) ** r
    return np.sqrt(np.sum((mult * np.abs(c)) ** 2, axis=1))


def schrodinger_modulus(
    model: SpectralModel, f: Coeffs, t: float, r: int, grid: GridLike = None
) -> float:
    """Grid supremum over ``0 <= tau <= t`` of ``||(exp(i tau L) - I)^r f||``.

    ``grid`` is a :class:`ModulusGrid` or an explicit array of ``tau`` values
    in ``[0, t]``.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if int(r) != r or r < 0:
        raise ValueError("r must be a non-negative integer")
    c = model.check(f)
    if r == 0:
        return float(np.linalg.norm(c))
    if t == 0:
        return 0.0
    return float(np.max(schrodinger_profile(model, f, _grid_points(grid, t), r)))


def omega_cost(d: int, r: int, points: int) -> int:
    """Group applications spent by :func:`omega_modulus` (``tau = 0`` skipped)."""
    g = points - 1
    return sum((d * g) ** k for k in range(1, r + 1))


def omega_modulus(
    model: SpectralModel,
    f: Coeffs,
    s: float,
    r: int,
    grid: GridLike = None,
    budget: int = DEFAULT_OMEGA_BUDGET,
) -> float:
    """Mixed-difference modulus built from the model's groups.

    Sum over all words ``(j_1, ..., j_r)`` in ``{1..d}^r`` of the grid
    supremum over ``(tau_1, ..., tau_r)`` in ``[0, s]^r`` of
    ``||(T_{j_1}(tau_1) - I) ... (T_{j_r}(tau_r) - I) f||``.

    Words sharing a suffix share the partial products, so the cost is
    :func:`omega_cost` group applications on batched vectors.

    Raises
    ------
    ResourceBudgetError
        If the cost exceeds ``budget``; the sum is never truncated.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if int(r) != r or r < 0:
        raise ValueError("r must be a non-negative integer")
    c = model.check(f)
    if r == 0:
        return float(np.linalg.norm(c))
    if s == 0:
        return 0.0
    taus = _grid_points(grid, s)
    taus = taus[taus > 0]
    if taus.size == 0:
        return 0.0
    cost = sum((model.d * taus.size) ** k for k in range(1, r + 1))
    if cost > budget:
        raise ResourceBudgetError(
            f"omega_modulus on {model.name} with d={model.d}, r={r}, "
            f"{taus.size} grid points needs {cost} group applications (budget {budget})"
        )

    total = 0.0
    # layer[word] holds every partial product for that suffix word, stacked
    layer = {(): c[np.newaxis, :]}
    for _ in range(r):
        nxt = {}
        for word, vecs in layer.items():
            for j in range(1, model.d + 1):
                parts = [model.act(j, tau, vecs) - vecs for tau in taus]
                nxt[(j,) + word] = np.concatenate(parts, axis=0)
        layer = nxt
    for vecs in layer.values():
        total += float(np.max(np.linalg.norm(vecs, axis=1)))
    return total


def k2_functional(model: SpectralModel, f: Coeffs, s: float, r: int) -> float:
    """Squared-form K-functional for the pair ``(H, D(L^{r/2}))``.

    Returns ``inf_g sqrt(||f - g||^2 + s^{2r} (||g||^2 + ||L^{r/2} g||^2))``,
    attained coefficientwise at ``g_k = c_k / (1 + w_k)`` with
    ``w_k = s^{2r} (1 + lambda_k^r)``.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if int(r) != r or r < 1:
        raise ValueError("r must be a positive integer")
    c = model.check(f)
    w = s ** (2 * r) * (1.0 + model.eigenvalues**r)
    return float(np.sqrt(np.sum(np.abs(c) ** 2 * (w / (1.0 + w)))))


def k2_minimizer(model: SpectralModel, f: Coeffs, s: float, r: int) -> Coeffs:
    """The vector ``g`` attaining :func:`k2_functional`."""
    c = model.check(f)
    w = s ** (2 * r) * (1.0 + model.eigenvalues**r)
    return model.coeffs(c / (1.0 + w))


def words(d: int, r: int):
    """All multi-indices ``(j_1, ..., j_r)`` with entries in ``1..d``."""
    return itertools.product(range(1, d + 1), repeat=r)
