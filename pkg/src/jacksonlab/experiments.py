"""Test vectors, sigma ladders, rate fits and the per-model verification suite."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, NamedTuple

import numpy as np

from . import jackson as jk
from .core import (
    Coeffs,
    ModulusGrid,
    ResourceBudgetError,
    SpectralModel,
    apply_L_power,
    best_approx_error,
    k2_functional,
    omega_modulus,
    pw_project,
    schrodinger_modulus,
    schrodinger_profile,
    sobolev_graph_norm,
)
from .models import HermiteModel, SphereModel, TorusModel
from .models.hermite import hermite_generator
from .models.sphere import COMMUTATOR_SIGN
from .models.wigner import wigner_d
from .smoothing import (
    SteklovSpec,
    double_inequality_report,
    steklov,
    steklov_dir,
    steklov_dir_tensor,
    telescoping_residuals,
)

__all__ = [
    "Budget",
    "CheckResult",
    "InvariantViolation",
    "RateFit",
    "ResultRow",
    "TestVectorSpec",
    "VerifyReport",
    "dilation_points",
    "fit_rate",
    "make_test_vector",
    "parallel_map",
    "poly_tail_oracle",
    "run_sigma_ladder",
    "standard_vectors",
    "verify_suite",
]

VECTOR_KINDS = ("single_eig", "poly_decay", "gauss_decay", "random_unit")


class InvariantViolation(AssertionError):
    """A proven inequality failed with its computed constant."""


@dataclass(frozen=True)
class TestVectorSpec:
    """Recipe for a deterministic unit-norm test vector.

    ``single_eig`` uses ``index``; ``poly_decay`` has ``|c_k| ~ (1 + lambda_k)^-p``;
    ``gauss_decay`` has ``|c_k| ~ exp(-beta lambda_k)``; ``random_unit`` draws
    complex Gaussian entries.  Phases (and random entries) come from ``seed``.
    """

    __test__ = False  # not a pytest class

    kind: str
    index: int = 0
    p: float = 1.0
    beta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in VECTOR_KINDS:
            raise ValueError(f"unknown vector kind {self.kind!r}; expected one of {VECTOR_KINDS}")
        if self.kind == "poly_decay" and not self.p > 0.5:
            raise ValueError("poly_decay needs p > 1/2")
        if self.kind == "gauss_decay" and not self.beta > 0:
            raise ValueError("gauss_decay needs beta > 0")
        if self.kind == "single_eig" and self.index < 0:
            raise ValueError("single_eig index must be >= 0")

    @property
    def vector_id(self) -> str:
        if self.kind == "single_eig":
            return f"single_eig({self.index})"
        if self.kind == "poly_decay":
            return f"poly_decay(p={self.p:g})"
        if self.kind == "gauss_decay":
            return f"gauss_decay(beta={self.beta:g})"
        return f"random_unit(seed={self.seed})"


def make_test_vector(model: SpectralModel, spec: TestVectorSpec) -> Coeffs:
    rng = np.random.default_rng(spec.seed)
    lam = model.eigenvalues
    if spec.kind == "single_eig":
        if spec.index >= model.size:
            raise IndexError(f"index {spec.index} out of range for {model.name} (size {model.size})")
        return model.unit(spec.index)
    if spec.kind == "random_unit":
        v = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
    else:
        phase = np.exp(2j * np.pi * rng.random(model.size))
        if spec.kind == "poly_decay":
            v = (1.0 + lam) ** (-spec.p) * phase
        else:
            v = np.exp(-spec.beta * lam) * phase
    return model.coeffs(v / np.linalg.norm(v))


def standard_vectors(model: SpectralModel, seed: int = 0) -> list:
    """The four-vector test set used by the experiments and acceptance runs."""
    return [
        TestVectorSpec("single_eig", index=model.size // 2 + 1, seed=seed),
        TestVectorSpec("poly_decay", p=1.0, seed=seed),
        TestVectorSpec("gauss_decay", beta=0.1, seed=seed),
        TestVectorSpec("random_unit", seed=seed),
    ]


def parallel_map(func: Callable, items, threads: int | None = None) -> list:
    """``list(map(func, items))`` on a thread pool; output order follows ``items``.

    ``threads`` defaults to ``$JACKSONLAB_THREADS`` (1 if unset).
    """
    items = list(items)
    if threads is None:
        threads = int(os.environ.get("JACKSONLAB_THREADS", "1") or 1)
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------------------
# sigma ladders


@dataclass(frozen=True)
class ResultRow:
    model: str
    vector: str
    seed: int
    r: int
    m: int
    sigma: float
    E: float
    Q_err: float
    omega_L: float
    Omega: float
    K2: float
    jackson_rhs: float
    main_rhs: float
    ratio_jackson: float
    ratio_Q: float
    ratio_main: float

    @classmethod
    def columns(cls) -> list:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)


def _ratio(num: float, den: float) -> float:
    if den > 0:
        return num / den
    return 0.0 if num == 0 else math.inf


def run_sigma_ladder(
    model: SpectralModel,
    vector_spec: TestVectorSpec,
    r: int,
    m: int,
    sigmas,
    grid: ModulusGrid | None = None,
    kernel: jk.KernelSpec | None = None,
    strict: bool = True,
) -> list:
    """One :class:`ResultRow` per bandwidth.

    ``E`` is the best approximation error, ``Q_err = ||f - Q f||`` the error of
    the Jackson operator, ``omega_L`` the Schrodinger modulus of order ``m`` at
    ``1/sigma`` and ``Omega`` the group modulus of order ``r``.  With
    ``strict`` an :class:`InvariantViolation` is raised when ``E`` or ``Q_err``
    exceeds ``c(m) omega_L``.
    """
    sigmas = [float(s) for s in sigmas]
    if any(s <= 1 for s in sigmas):
        raise ValueError("all sigmas must be > 1")
    if any(b <= a for a, b in zip(sigmas, sigmas[1:])):
        raise ValueError("sigmas must be strictly increasing")
    grid = grid or ModulusGrid()
    kernel = kernel or jk.KernelSpec(m)
    c_m = jk.jackson_constants(kernel, 0).c
    f = make_test_vector(model, vector_spec)
    fnorm = f.norm()
    rows = []
    for sigma in sigmas:
        E = best_approx_error(model, f, sigma)
        q_err = (f - jk.jackson_apply(model, f, sigma, m, kernel)).norm()
        om_L = schrodinger_modulus(model, f, 1.0 / sigma, m, grid)
        Om = omega_modulus(model, f, 1.0 / sigma, r, grid)
        jrhs = c_m * om_L
        mrhs = Om + sigma ** (-r) * fnorm
        rows.append(
            ResultRow(
                model=model.name,
                vector=vector_spec.vector_id,
                seed=vector_spec.seed,
                r=r,
                m=m,
                sigma=sigma,
                E=E,
                Q_err=q_err,
                omega_L=om_L,
                Omega=Om,
                K2=k2_functional(model, f, 1.0 / sigma, r),
                jackson_rhs=jrhs,
                main_rhs=mrhs,
                ratio_jackson=_ratio(E, jrhs),
                ratio_Q=_ratio(q_err, jrhs),
                ratio_main=_ratio(E, mrhs),
            )
        )
    if strict:
        bad = [row for row in rows if row.ratio_jackson > 1 or row.ratio_Q > 1]
        if bad:
            raise InvariantViolation(
                "Jackson bound violated: "
                + ", ".join(f"sigma={b.sigma:g} ratio={max(b.ratio_jackson, b.ratio_Q):.4g}" for b in bad)
            )
    return rows


class RateFit(NamedTuple):
    slope: float
    intercept: float
    r2: float
    used: int
    dropped: int


def fit_rate(rows, x_field: str, y_field: str) -> RateFit:
    """Least-squares line through ``(log x, log y)``; non-positive points are dropped."""

    def get(row, name):
        return row[name] if isinstance(row, dict) else getattr(row, name)

    pts = [(float(get(row, x_field)), float(get(row, y_field))) for row in rows]
    keep = [(x, y) for x, y in pts if x > 0 and y > 0 and math.isfinite(x) and math.isfinite(y)]
    if len(keep) < 3:
        raise ValueError(
            f"need at least 3 positive points to fit a rate, got {len(keep)} "
            f"({len(pts) - len(keep)} dropped)"
        )
    lx = np.log([x for x, _ in keep])
    ly = np.log([y for _, y in keep])
    A = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(slope), float(intercept), r2, len(keep), len(pts) - len(keep))


def poly_tail_oracle(p: float, sigmas, kmax: int = 2_000_000) -> np.ndarray:
    """Best approximation errors of the unit ``poly_decay(p)`` vector on an unbounded circle.

    Direct summation of ``(1 + k^2)^{-2p}`` over ``|k| <= kmax``, independent of
    the model classes.
    """
    k = np.arange(1, kmax + 1, dtype=float)
    terms = (1.0 + k * k) ** (-2.0 * p)
    total = 1.0 + 2.0 * terms.sum()
    # suffix sums: tail[i] = sum_{k > i} terms
    tail = np.concatenate([np.cumsum(terms[::-1])[::-1], [0.0]])
    out = []
    for s in sigmas:
        first = int(math.floor(math.sqrt(s))) + 1  # smallest k with k^2 > s
        out.append(math.sqrt(2.0 * tail[first - 1] / total) if first <= kmax else 0.0)
    return np.array(out)


def dilation_points(a: float, grid: ModulusGrid, s: float) -> np.ndarray:
    """Grid on ``[0, s]`` matched to ``grid.points(a s)`` for the dilation inequality.

    For every ``tau`` on the dilated grid the point ``tau / N`` with
    ``N = ceil(tau / s)`` is added, so ``g(tau) <= N^r g(tau / N)`` and
    ``N <= 1 + a`` make the discrete inequality exact.
    """
    base = grid.points(s)
    extra = []
    for tau in grid.points(a * s):
        if tau > 0:
            N = max(1, math.ceil(tau / s - 1e-12))
            extra.append(min(tau / N, s))
    return np.unique(np.concatenate([base, extra]))


# ---------------------------------------------------------------------------
# verification suite


@dataclass(frozen=True)
class Budget:
    """Caps for :func:`verify_suite`."""

    max_size: int = 4096
    grid_points: int = 9
    omega_r: int = 2
    sigmas: tuple = (4.0, 16.0, 64.0, 256.0)
    s_ladder: tuple = (0.5, 0.25, 0.125, 0.0625, 0.03125)
    seed: int = 0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    gating: bool = True


@dataclass
class VerifyReport:
    model: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gating)

    def add(self, name, passed, detail="", gating=True):
        self.checks.append(CheckResult(name, bool(passed), detail, gating))

    def rows(self):
        for c in self.checks:
            yield self.model, c.name, "pass" if c.passed else "FAIL", int(c.gating), c.detail


def _variation(values) -> float:
    v = [x for x in values if x > 0 and math.isfinite(x)]
    return max(v) / min(v) if v else math.inf


def _random_unit(model, rng):
    v = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
    return model.coeffs(v / np.linalg.norm(v))


def verify_suite(model: SpectralModel, budget: Budget | None = None) -> VerifyReport:
    """Check every implemented invariant on ``model``; failures are report content.

    Checks marked non-gating are empirical diagnostics whose outcome does not
    affect :attr:`VerifyReport.passed`.
    """
    budget = budget or Budget()
    if model.size > budget.max_size:
        raise ResourceBudgetError(f"{model.name} has {model.size} basis slots (budget {budget.max_size})")
    rep = VerifyReport(model.name)
    grid = ModulusGrid(budget.grid_points)
    rng = np.random.default_rng(budget.seed)
    vectors = [make_test_vector(model, v) for v in standard_vectors(model, budget.seed)]
    smooth = make_test_vector(model, TestVectorSpec("gauss_decay", beta=0.1, seed=budget.seed))
    randoms = [_random_unit(model, rng) for _ in range(3)]

    _check_core(model, rep, vectors, randoms, grid, budget)
    _check_model(model, rep, randoms, smooth, rng)
    _check_jackson(model, rep, vectors, grid, budget)
    _check_smoothing(model, rep, vectors, randoms, smooth, grid, budget)
    return rep


def _check_core(model, rep, vectors, randoms, grid, budget):
    worst_p = worst_b = 0.0
    for f in vectors + randoms:
        for sigma in budget.sigmas:
            P = pw_project(model, f, sigma)
            worst_p = max(
                worst_p,
                np.max(np.abs(pw_project(model, P, sigma).values - P.values)),
                abs(f.norm() ** 2 - P.norm() ** 2 - (f - P).norm() ** 2),
            )
            for s in (0.5, 1.0, 2.0):
                lhs = apply_L_power(model, P, s).norm()
                worst_b = max(worst_b, lhs - sigma**s * P.norm())
    rep.add("projection", worst_p <= 1e-12, f"max residual {worst_p:.2e}")
    rep.add("bernstein", worst_b <= 1e-12 * max(budget.sigmas) ** 2, f"max excess {worst_b:.2e}")

    worst_dil = worst_der = -math.inf
    for f in randoms:
        for r in (1, 2, 3):
            for s in (0.05, 0.2):
                for a in (0.5, 2.0, 3.7):
                    lhs = schrodinger_modulus(model, f, a * s, r, grid)
                    rhs = (1 + a) ** r * schrodinger_modulus(model, f, s, r, dilation_points(a, grid, s))
                    worst_dil = max(worst_dil, lhs - rhs)
                taus = grid.points(s)
                for k in range(1, r + 1):
                    Lk = apply_L_power(model, f, k)
                    lhs = schrodinger_profile(model, f, taus, r)
                    rhs = s**k * np.max(schrodinger_profile(model, Lk, taus, r - k))
                    worst_der = max(worst_der, float(np.max(lhs)) - rhs)
    rep.add("modulus-dilation", worst_dil <= 1e-9, f"max excess {worst_dil:.2e}")
    rep.add("modulus-derivative", worst_der <= 1e-9, f"max excess {worst_der:.2e}")

    mono = True
    f = randoms[0]
    sig = np.linspace(0, model.eigenvalues.max() + 1, 40)
    E = [best_approx_error(model, f, x) for x in sig]
    mono &= all(b <= a + 1e-15 for a, b in zip(E, E[1:]))
    ss = [0.01, 0.03, 0.1, 0.3]
    for r in (1, 2):
        om = [omega_modulus(model, f, s, r, grid) for s in ss]
        sm = [schrodinger_modulus(model, f, s, r, grid.points(max(ss))[grid.points(max(ss)) <= s]) for s in ss]
        mono &= all(b >= a - 1e-12 for a, b in zip(sm, sm[1:]))
        # nested grids are needed for the group modulus to be monotone on a grid
        om_nested = [omega_modulus(model, f, s, r, np.linspace(0, s, 2)) for s in ss]
        mono &= all(x >= 0 for x in om + om_nested)
    rep.add("monotonicity", mono, "best_approx_error and Schrodinger modulus on nested grids")


def _check_model(model, rep, randoms, smooth, rng):
    worst_u = worst_g = 0.0
    for f in randoms[:2]:
        c = f.values
        for j in range(1, model.d + 1):
            t1, t2 = rng.uniform(-2, 2, size=2)
            a = model.act(j, t1, model.act(j, t2, c))
            b = model.act(j, t1 + t2, c)
            worst_g = max(worst_g, float(np.max(np.abs(a - b))))
            worst_u = max(worst_u, abs(np.linalg.norm(model.act(j, t1, c)) - 1.0))
            worst_u = max(worst_u, float(np.max(np.abs(model.act(j, 0.0, c) - c))))
    tol = 1e-10
    rep.add("group-law", worst_g <= tol, f"max residual {worst_g:.2e}")
    rep.add("unitarity", worst_u <= tol, f"max residual {worst_u:.2e}")

    # forward differences: error O(eps), ratio ~10 per decade
    ratios = []
    c = smooth.values
    for j in range(1, model.d + 1):
        exact = model.generator_act(j, c)
        errs = [
            float(np.linalg.norm((model.act(j, eps, c) - c) / eps - exact))
            for eps in (1e-2, 1e-3, 1e-4)
        ]
        if errs[0] > 1e-13:
            ratios += [errs[0] / errs[1], errs[1] / errs[2]]
    ok = all(5 < q < 20 for q in ratios)
    rep.add("generator-consistency", ok, "decade ratios " + ", ".join(f"{q:.1f}" for q in ratios))

    if isinstance(model, SphereModel):
        f = randoms[0].values
        errs = []
        for eps in (1e-3, 1e-4):
            def D(j, v):
                return (model.act(j, eps, v) - model.act(j, -eps, v)) / (2 * eps)

            comm = D(1, D(3, f)) - D(3, D(1, f))
            errs.append(float(np.max(np.abs(comm - COMMUTATOR_SIGN * model.generator_act(2, f)))))
        rep.add("so3-commutator", errs[1] < 1e-5 and errs[1] < errs[0], f"errors {errs[0]:.1e}, {errs[1]:.1e}")
        eps = 1e-3
        worst = 0.0
        for l in range(0, model.Lmax + 1, max(1, model.Lmax // 4)):
            y = model.harmonic(l, min(l, 1)).values
            lap = -sum(
                (model.act(j, eps, y) - 2 * y + model.act(j, -eps, y)) / eps**2 for j in (1, 2, 3)
            )
            worst = max(worst, float(np.max(np.abs(lap - l * (l + 1) * y))) / max(1, l * (l + 1)) ** 2)
        rep.add("laplacian", worst < 1e-5, f"relative FD error {worst:.1e}")
        d = wigner_d(model.Lmax, 0.7).matrix
        orth = float(np.max(np.abs(d.T @ d - np.eye(d.shape[0]))))
        rep.add("wigner-orthogonality", orth <= 1e-12, f"residual {orth:.1e}")
    elif isinstance(model, HermiteModel):
        K = model.Kbasis
        G = [hermite_generator(j, K) for j in (1, 2, 3)]
        L = -(G[0] @ G[0] + G[1] @ G[1] + G[2] @ G[2])
        inner = L[: K - 2, : K - 2] - np.diag(model.eigenvalues[: K - 2])
        rep.add("laplacian", float(np.max(np.abs(inner))) < 1e-12, "exact away from the last two slots")
        worst = 0.0
        for tau in (0.25, 0.5, 1.0):
            v = model.act(1, tau, model.unit(0).values)
            k = np.arange(K)
            logfact = np.array([math.lgamma(x + 1) for x in k])
            with np.errstate(divide="ignore"):
                amp = np.exp(-tau * tau / 4 + k * math.log(tau / math.sqrt(2)) - 0.5 * logfact)
            oracle = amp * (-1.0) ** k
            worst = max(worst, float(np.max(np.abs(v - oracle))))
        rep.add("hermite-displacement", worst <= 1e-8, f"max entry error {worst:.1e}")
    elif isinstance(model, TorusModel):
        lap = -sum(model.generator_act(j, model.generator_act(j, c)) for j in range(1, model.d + 1))
        err = float(np.max(np.abs(lap - model.eigenvalues * c)))
        rep.add("laplacian", err <= 1e-9, f"max residual {err:.1e}")


def _check_jackson(model, rep, vectors, grid, budget):
    worst_support = worst_oracle = 0.0
    worst_ratio = 0.0
    worst_200 = 0.0
    for m in (1, 2, 3):
        kern = jk.KernelSpec(m)
        consts = [jk.jackson_constants(kern, k) for k in range(m + 1)]
        c_m = consts[0].c
        lam = np.linspace(0, 20.0, 50)
        q = jk.q_multiplier(kern, lam, 10.0)
        qo = jk.q_quadrature(kern, lam, 10.0)
        worst_support = max(worst_support, float(np.max(np.abs(q[lam >= 10.0]))))
        worst_oracle = max(worst_oracle, float(np.max(np.abs(q - qo))))
        for f in vectors:
            for sigma in budget.sigmas:
                E = best_approx_error(model, f, sigma)
                qerr = (f - jk.jackson_apply(model, f, sigma, m, kern)).norm()
                om = schrodinger_modulus(model, f, 1 / sigma, m, grid)
                worst_ratio = max(worst_ratio, _ratio(max(E, qerr), c_m * om))
                for k in range(1, m + 1):
                    Lk = apply_L_power(model, f, k)
                    rhs = consts[k].C / sigma**k * schrodinger_modulus(model, Lk, 1 / sigma, m - k, grid)
                    worst_200 = max(worst_200, _ratio(E, rhs))
    rep.add("multiplier-support", worst_support == 0.0, f"max |q| beyond sigma {worst_support:.1e}")
    rep.add("multiplier-oracle", worst_oracle <= 1e-7, f"max |q - quadrature| {worst_oracle:.1e}")
    rep.add("jackson-bound", worst_ratio <= 1.0, f"max ratio {worst_ratio:.3f}")
    rep.add("jackson-derivative-bound", worst_200 <= 1.0, f"max ratio {worst_200:.3f}")


def _check_smoothing(model, rep, vectors, randoms, smooth, grid, budget):
    worst_tel = max(max(telescoping_residuals(model, f, [0.3, 0.7, 1.1, 0.2])) for f in randoms)
    rep.add("telescoping", worst_tel <= 1e-12, f"max residual {worst_tel:.1e}")

    worst_tensor = 0.0
    for r in (1, 2, 3):
        spec = SteklovSpec(r, 0.25)
        for f in (smooth, randoms[0]):
            for j in range(1, model.d + 1):
                a = steklov_dir(model, f, j, spec).values
                b = steklov_dir_tensor(model, f, j, spec).values
                worst_tensor = max(worst_tensor, float(np.max(np.abs(a - b))))
    rep.add("steklov-tensor-oracle", worst_tensor <= 1e-8, f"max difference {worst_tensor:.1e}")

    small = max(
        (steklov(model, f, SteklovSpec(2, 1e-4)).smoothed - f).norm() for f in randoms
    )
    rep.add("steklov-small-s", small <= 1e-2, f"max ||Hf - f|| at s=1e-4: {small:.1e}")

    r = budget.omega_r
    hs = []
    for f in vectors:
        for s in budget.s_ladder:
            g = steklov(model, f, SteklovSpec(r, s)).smoothed
            hs.append(_ratio((g - f).norm(), omega_modulus(model, f, s, r, grid)))
    rep.add("steklov-approximation", _variation(hs) < 2.0, f"C variation {_variation(hs):.2f}")

    witness = True
    finite = True
    lower_var = upper_var = 0.0
    for rr in (1, 2):
        reports = [double_inequality_report(model, f, rr, budget.s_ladder, grid) for f in vectors]
        for rows in reports:
            witness &= all(row.steklov_bound >= row.K2 for row in rows)
            finite &= all(0 < row.lower_ratio < math.inf and not row.flagged for row in rows)
        # per-model constants: the best c and C valid for every vector at each s
        c_fit = [min(rows[i].lower_ratio for rows in reports) for i in range(len(budget.s_ladder))]
        C_fit = [max(rows[i].upper_ratio for rows in reports) for i in range(len(budget.s_ladder))]
        lower_var = max(lower_var, _variation(c_fit))
        upper_var = max(upper_var, _variation(C_fit))
    rep.add("k-functional-witness", witness, "steklov_k_upper >= K2 on every row")
    rep.add("omega-k-equivalence", finite, "K2/Omega finite and positive on every row")
    rep.add(
        "omega-k-ratio-stability",
        lower_var < 2 and upper_var < 2,
        f"variation of fitted c {lower_var:.2f}, of fitted C {upper_var:.2f}",
        gating=False,
    )

    # left side of the double inequality through the Paley-Wiener split
    consts = []
    for f in vectors:
        for s in budget.s_ladder:
            g = pw_project(model, f, s ** (-2))
            rhs = (f - g).norm() + s**r * sobolev_graph_norm(model, g, r)
            consts.append(_ratio(omega_modulus(model, f, s, r, grid), rhs))
    rep.add("moduli-split", max(consts) < math.inf, f"fitted C {max(consts):.2f}")
