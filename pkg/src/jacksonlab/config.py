"""Experiment configuration: JSON text to a validated :class:`ExperimentConfig`."""

from __future__ import annotations

import copy
import difflib
import json
from dataclasses import dataclass, field

from .core import ModulusGrid, SpectralModel
from .experiments import VECTOR_KINDS, TestVectorSpec, standard_vectors
from .jackson import KernelSpec
from .models import build_circle, build_hermite, build_sphere, build_torus

__all__ = ["ConfigError", "ExperimentConfig", "DEFAULTS", "parse_config", "REFERENCE_MODELS"]

MAX_ORDER = 3
MAX_DIM = 3

#: the four reference models, selectable by bare name
REFERENCE_MODELS = {
    "circle": {"K": 16},
    "torus": {"K": 8, "d": 2},
    "sphere": {"Lmax": 16},
    "hermite": {"Kbasis": 64},
}

DEFAULTS = {
    "model": {"circle": {"K": 16}},
    "vectors": None,  # null -> the standard four-vector set
    "r": 2,
    "m": 2,
    "sigmas": [4.0, 16.0, 64.0, 256.0],
    "s_ladder": [0.5, 0.25, 0.125, 0.0625, 0.03125],
    "grid": {"points_per_axis": 9},
    "quadrature": {"nodes": 16, "t_max": 1000.0},
    "seed": 0,
    "output": "jacksonlab",
}

_MODEL_PARAMS = {"circle": ("K",), "torus": ("K", "d"), "sphere": ("Lmax",), "hermite": ("Kbasis",)}
_VECTOR_KEYS = ("kind", "index", "p", "beta", "seed")


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists one message per problem."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass(frozen=True)
class ExperimentConfig:
    model_kind: str
    model_params: dict
    vectors: tuple | None
    r: int
    m: int
    sigmas: tuple
    s_ladder: tuple
    grid: ModulusGrid
    quad_nodes: int
    t_max: float
    seed: int
    output: str
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    def build_model(self) -> SpectralModel:
        p = self.model_params
        if self.model_kind == "circle":
            return build_circle(p["K"])
        if self.model_kind == "torus":
            return build_torus(p["K"], p["d"])
        if self.model_kind == "sphere":
            return build_sphere(p["Lmax"])
        return build_hermite(p["Kbasis"])

    def vector_specs(self, model: SpectralModel) -> list:
        if self.vectors is None:
            return standard_vectors(model, self.seed)
        return list(self.vectors)

    def kernel(self, m: int | None = None) -> KernelSpec:
        return KernelSpec(self.m if m is None else m, t_max=self.t_max, nodes=self.quad_nodes)


def _suggest(key, allowed):
    close = difflib.get_close_matches(key, list(allowed), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def _unknown(obj, allowed, path, errors):
    for key in obj:
        if key not in allowed:
            errors.append(f"{path}: unknown key {key!r}{_suggest(key, allowed)}")


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _int_field(obj, key, path, errors, lo=None, hi=None):
    val = obj[key]
    if not _is_int(val):
        errors.append(f"{path}.{key}: expected an integer, got {json.dumps(val)}")
        return None
    if lo is not None and val < lo:
        errors.append(f"{path}.{key}: must be >= {lo}, got {val}")
    if hi is not None and val > hi:
        errors.append(f"{path}.{key}: must be <= {hi}, got {val}")
    return val


def _object(val, path, errors):
    if not isinstance(val, dict):
        errors.append(f"{path}: expected an object, got {json.dumps(val)}")
        return None
    return val


def default_config_text() -> str:
    return json.dumps(DEFAULTS, indent=2) + "\n"


def parse_config(text: str, overrides: dict | None = None) -> ExperimentConfig:
    """Parse and validate JSON ``text``; missing fields take :data:`DEFAULTS`.

    ``overrides`` replaces top-level fields after parsing (used for CLI flags).
    Raises :class:`ConfigError` listing every problem found.
    """
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError([f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(data, dict):
        raise ConfigError(["<root>: expected an object"])
    errors: list = []
    _unknown(data, DEFAULTS, "<root>", errors)
    cfg = copy.deepcopy(DEFAULTS)
    cfg.update({k: v for k, v in data.items() if k in DEFAULTS})
    if overrides:
        cfg.update(overrides)

    # model
    kind, params = None, {}
    model = _object(cfg["model"], "model", errors)
    if model is not None:
        if len(model) != 1:
            errors.append(f"model: expected exactly one of {sorted(_MODEL_PARAMS)}, got {sorted(model)}")
        else:
            (kind, body), = model.items()
            if kind not in _MODEL_PARAMS:
                errors.append(f"model: unknown model {kind!r}{_suggest(kind, _MODEL_PARAMS)}")
                kind = None
            elif _object(body, f"model.{kind}", errors) is not None:
                _unknown(body, _MODEL_PARAMS[kind], f"model.{kind}", errors)
                for key in _MODEL_PARAMS[kind]:
                    if key not in body:
                        errors.append(f"model.{kind}.{key}: required")
                        continue
                    if key == "d":
                        params[key] = _int_field(body, key, f"model.{kind}", errors, 1, MAX_DIM)
                    elif key == "Lmax":
                        params[key] = _int_field(body, key, f"model.{kind}", errors, 0)
                    else:
                        params[key] = _int_field(body, key, f"model.{kind}", errors, 1)

    # scalar orders
    r = _int_field(cfg, "r", "<root>", errors, 1, MAX_ORDER)
    m = _int_field(cfg, "m", "<root>", errors, 1, MAX_ORDER)
    seed = _int_field(cfg, "seed", "<root>", errors, 0)

    sigmas = _ladder(cfg["sigmas"], "sigmas", errors, sigma=True)
    s_ladder = _ladder(cfg["s_ladder"], "s_ladder", errors, sigma=False)

    grid = None
    g = _object(cfg["grid"], "grid", errors)
    if g is not None:
        _unknown(g, ("points_per_axis",), "grid", errors)
        if "points_per_axis" in g:
            G = _int_field(g, "points_per_axis", "grid", errors, 2, 257)
            if G is not None and 2 <= G <= 257:
                grid = ModulusGrid(G)
        else:
            grid = ModulusGrid()

    nodes, t_max = 16, 1000.0
    q = _object(cfg["quadrature"], "quadrature", errors)
    if q is not None:
        _unknown(q, ("nodes", "t_max"), "quadrature", errors)
        if "nodes" in q:
            nodes = _int_field(q, "nodes", "quadrature", errors, 2, 64)
        if "t_max" in q:
            t_max = q["t_max"]
            if not _is_num(t_max) or not 10 <= t_max <= 1e5:
                errors.append(f"quadrature.t_max: expected a number in [10, 1e5], got {json.dumps(t_max)}")

    if not isinstance(cfg["output"], str) or not cfg["output"]:
        errors.append(f"output: expected a non-empty path prefix, got {json.dumps(cfg['output'])}")

    vectors = None
    if cfg["vectors"] is not None:
        vectors = _vectors(cfg["vectors"], errors, seed if seed is not None else 0)

    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(
        model_kind=kind,
        model_params=params,
        vectors=vectors,
        r=r,
        m=m,
        sigmas=sigmas,
        s_ladder=s_ladder,
        grid=grid,
        quad_nodes=nodes,
        t_max=float(t_max),
        seed=seed,
        output=cfg["output"],
        raw=cfg,
    )


def _ladder(val, name, errors, sigma):
    if not isinstance(val, list) or len(val) == 0:
        errors.append(f"{name}: expected a non-empty list of numbers")
        return None
    out = []
    for i, x in enumerate(val):
        if not _is_num(x):
            errors.append(f"{name}[{i}]: expected a number, got {json.dumps(x)}")
            return None
        if sigma and not x > 1:
            errors.append(
                f"{name}[{i}]: bandwidth must satisfy sigma > 1 (the Jackson estimate is stated "
                f"for sigma > 1), got {x}"
            )
        if not sigma and not 0 < x <= 1:
            errors.append(f"{name}[{i}]: scale must lie in (0, 1], got {x}")
        out.append(float(x))
    if any(b <= a for a, b in zip(out, out[1:])) and sigma:
        errors.append(f"{name}: must be strictly increasing")
    return tuple(out)


def _vectors(val, errors, seed):
    if not isinstance(val, list) or not val:
        errors.append("vectors: expected null or a non-empty list of vector specs")
        return None
    out = []
    for i, item in enumerate(val):
        path = f"vectors[{i}]"
        if _object(item, path, errors) is None:
            continue
        _unknown(item, _VECTOR_KEYS, path, errors)
        kind = item.get("kind")
        if kind not in VECTOR_KINDS:
            hint = _suggest(kind, VECTOR_KINDS) if isinstance(kind, str) else ""
            errors.append(f"{path}.kind: expected one of {list(VECTOR_KINDS)}, got {json.dumps(kind)}{hint}")
            continue
        kw = {"kind": kind, "seed": item.get("seed", seed)}
        for key in ("index", "p", "beta"):
            if key in item:
                kw[key] = item[key]
        try:
            out.append(TestVectorSpec(**kw))
        except (TypeError, ValueError) as exc:
            errors.append(f"{path}: {exc}")
    return tuple(out)


def model_override(name: str) -> dict:
    """``--model`` value to a model object: ``sphere`` or ``sphere:Lmax=8``."""
    kind, _, rest = name.partition(":")
    if kind not in REFERENCE_MODELS:
        raise ConfigError([f"--model: unknown model {kind!r}{_suggest(kind, REFERENCE_MODELS)}"])
    params = dict(REFERENCE_MODELS[kind])
    for part in filter(None, rest.split(",")):
        key, eq, val = part.partition("=")
        if not eq or key not in params:
            raise ConfigError([f"--model: bad parameter {part!r} for {kind}; expected one of {sorted(params)}"])
        try:
            params[key] = int(val)
        except ValueError:
            raise ConfigError([f"--model: {key} must be an integer, got {val!r}"]) from None
    return {kind: params}
