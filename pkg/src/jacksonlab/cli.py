"""Command line entry point: ``jacksonlab {verify,jackson,kfunc,multiplier,rates}``.

Exit codes: 0 success, 1 invariant failure, 2 config error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile

import numpy as np

from . import experiments as ex
from .config import ConfigError, default_config_text, model_override, parse_config
from .core import ResourceBudgetError
from .jackson import multiplier_table
from .models import CircleModel
from .smoothing import double_inequality_report

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3
SUBCOMMANDS = ("verify", "jackson", "kfunc", "multiplier", "rates")


def fmt(x) -> str:
    """CSV cell: shortest round-trip decimal for floats."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return "" if x is None else str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def svg_loglog(series: dict, title: str, xlabel: str, ylabel: str, width=640, height=420) -> str:
    """Minimal static log-log line chart; ``series`` maps label -> (xs, ys)."""
    pts = {k: [(x, y) for x, y in zip(*v) if x > 0 and y > 0] for k, v in series.items()}
    allx = [x for v in pts.values() for x, _ in v] or [1.0, 10.0]
    ally = [y for v in pts.values() for _, y in v] or [1.0, 10.0]
    x0, x1 = math.log10(min(allx)), math.log10(max(allx))
    y0, y1 = math.log10(min(ally)), math.log10(max(ally))
    x1, y1 = (x1 if x1 > x0 else x0 + 1), (y1 if y1 > y0 else y0 + 1)
    ml, mr, mt, mb = 70, 180, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def px(x):
        return ml + (math.log10(x) - x0) / (x1 - x0) * pw

    def py(y):
        return mt + ph - (math.log10(y) - y0) / (y1 - y0) * ph

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
        f'<text x="{ml + pw / 2:.1f}" y="20" text-anchor="middle" font-size="13">{_esc(title)}</text>',
        f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{_esc(xlabel)} (log)</text>',
        f'<text x="15" y="{mt + ph / 2:.1f}" transform="rotate(-90 15 {mt + ph / 2:.1f})" text-anchor="middle">{_esc(ylabel)} (log)</text>',
        f'<text x="{ml}" y="{mt + ph + 15}" text-anchor="middle">{10 ** x0:.3g}</text>',
        f'<text x="{ml + pw}" y="{mt + ph + 15}" text-anchor="middle">{10 ** x1:.3g}</text>',
        f'<text x="{ml - 5}" y="{mt + ph}" text-anchor="end">{10 ** y0:.3g}</text>',
        f'<text x="{ml - 5}" y="{mt + 8}" text-anchor="end">{10 ** y1:.3g}</text>',
    ]
    for i, (label, p) in enumerate(pts.items()):
        col = colors[i % len(colors)]
        if p:
            path = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in p)
            out.append(f'<polyline points="{path}" fill="none" stroke="{col}" stroke-width="1.5"/>')
            out += [f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="{col}"/>' for x, y in p]
        ly = mt + 12 + 16 * i
        out.append(f'<line x1="{ml + pw + 10}" y1="{ly - 4}" x2="{ml + pw + 28}" y2="{ly - 4}" stroke="{col}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw + 32}" y="{ly}">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, {path: text})


def _cmd_verify(cfg, args):
    model = cfg.build_model()
    budget = ex.Budget(
        grid_points=cfg.grid.points_per_axis,
        omega_r=cfg.r,
        sigmas=cfg.sigmas,
        s_ladder=cfg.s_ladder,
        seed=cfg.seed,
    )
    rep = ex.verify_suite(model, budget)
    for _, name, status, gating, detail in rep.rows():
        tag = status if gating else f"{status} (diagnostic)"
        print(f"{name:28s} {tag:18s} {detail}")
    print(f"{model.name}: {'all checks pass' if rep.passed else 'FAILED'}")
    text = csv_text(["model", "check", "status", "gating", "detail"], rep.rows())
    return (EXIT_OK if rep.passed else EXIT_INVARIANT), {f"{cfg.output}-verify.csv": text}


def _ladders(cfg, model):
    specs = cfg.vector_specs(model)
    kern = cfg.kernel()

    def one(spec):
        return ex.run_sigma_ladder(model, spec, cfg.r, cfg.m, cfg.sigmas, cfg.grid, kern, strict=False)

    return specs, ex.parallel_map(one, specs)


def _cmd_jackson(cfg, args):
    model = cfg.build_model()
    specs, ladders = _ladders(cfg, model)
    rows = [row for ladder in ladders for row in ladder]
    files = {
        f"{cfg.output}-jackson.csv": csv_text(
            ex.ResultRow.columns(), ([getattr(r, c) for c in ex.ResultRow.columns()] for r in rows)
        )
    }
    if args.svg:
        series = {}
        for spec, ladder in zip(specs, ladders):
            series[f"E {spec.vector_id}"] = ([r.sigma for r in ladder], [r.E for r in ladder])
        files[f"{cfg.output}-jackson.svg"] = svg_loglog(series, model.name, "sigma", "E(sigma, f)")
    bad = [r for r in rows if r.ratio_jackson > 1 or r.ratio_Q > 1]
    for r in bad:
        print(f"Jackson bound violated: {r.vector} sigma={r.sigma:g} ratio={max(r.ratio_jackson, r.ratio_Q):.4g}",
              file=sys.stderr)
    worst = max((r.ratio_main for r in rows), default=0.0)
    print(f"{model.name}: {len(rows)} rows, max ratio_jackson "
          f"{max(max(r.ratio_jackson, r.ratio_Q) for r in rows):.4g}, empirical main constant {worst:.4g}")
    return (EXIT_INVARIANT if bad else EXIT_OK), files


def _cmd_kfunc(cfg, args):
    model = cfg.build_model()
    specs = cfg.vector_specs(model)

    def one(spec):
        f = ex.make_test_vector(model, spec)
        return double_inequality_report(model, f, cfg.r, cfg.s_ladder, cfg.grid)

    reports = ex.parallel_map(one, specs)
    header = ["model", "vector", "seed", "r", "s", "Omega", "K2", "steklov_bound",
              "lower_ratio", "upper_ratio", "flagged"]
    rows, bad = [], False
    for spec, rep in zip(specs, reports):
        for k in rep:
            rows.append([model.name, spec.vector_id, spec.seed, cfg.r, k.s, k.Omega, k.K2,
                         k.steklov_bound, k.lower_ratio, k.upper_ratio, k.flagged])
            bad |= k.steklov_bound < k.K2 or k.flagged
    files = {f"{cfg.output}-kfunc.csv": csv_text(header, rows)}
    if args.svg:
        series = {f"K2/Omega {s.vector_id}": ([k.s for k in rep], [k.lower_ratio for k in rep])
                  for s, rep in zip(specs, reports)}
        files[f"{cfg.output}-kfunc.svg"] = svg_loglog(series, model.name, "s", "K2 / Omega")
    return (EXIT_INVARIANT if bad else EXIT_OK), files


def _cmd_multiplier(cfg, args):
    m = cfg.m if args.m is None else args.m
    sigma = 10.0 if args.sigma is None else args.sigma
    if not 1 <= m <= 3:
        raise ConfigError([f"--m: must be in 1..3, got {m}"])
    if not sigma > 1:
        raise ConfigError([f"--sigma: bandwidth must satisfy sigma > 1, got {sigma}"])
    table = multiplier_table(cfg.kernel(m), sigma)
    text = csv_text(["lambda", "q", "quad_oracle", "abs_diff"], table.rows())
    bad = np.any(table.values[table.lambdas >= sigma] != 0) or np.max(np.abs(table.values - table.oracle)) > 1e-7
    files = {f"{cfg.output}-multiplier.csv": text}
    if args.svg:
        mask = table.lambdas > 0
        series = {"q": (table.lambdas[mask], np.abs(table.values[mask]))}
        files[f"{cfg.output}-multiplier.svg"] = svg_loglog(series, f"m={m}, sigma={sigma:g}", "lambda", "|q|")
    return (EXIT_INVARIANT if bad else EXIT_OK), files


def _cmd_rates(cfg, args):
    model = cfg.build_model()
    specs, ladders = _ladders(cfg, model)
    header = ["model", "vector", "seed", "r", "m", "y_field", "slope", "intercept", "r2",
              "used", "dropped", "oracle_slope", "note"]
    rows = []
    for spec, ladder in zip(specs, ladders):
        for y in ("E", "Q_err"):
            oracle = None
            if y == "E" and isinstance(model, CircleModel) and spec.kind == "poly_decay":
                errs = ex.poly_tail_oracle(spec.p, cfg.sigmas)
                try:
                    oracle = ex.fit_rate([{"s": s, "e": e} for s, e in zip(cfg.sigmas, errs)], "s", "e").slope
                except ValueError:
                    oracle = None
            try:
                fit = ex.fit_rate(ladder, "sigma", y)
                note = f"{fit.dropped} non-positive rows dropped" if fit.dropped else ""
                rows.append([model.name, spec.vector_id, spec.seed, cfg.r, cfg.m, y, fit.slope,
                             fit.intercept, fit.r2, fit.used, fit.dropped, oracle, note])
            except ValueError as exc:
                rows.append([model.name, spec.vector_id, spec.seed, cfg.r, cfg.m, y, None, None, None,
                             None, None, oracle, f"fit error: {exc}"])
    files = {f"{cfg.output}-rates.csv": csv_text(header, rows)}
    if args.svg:
        series = {f"E {s.vector_id}": ([r.sigma for r in lad], [r.E for r in lad]) for s, lad in zip(specs, ladders)}
        files[f"{cfg.output}-rates.svg"] = svg_loglog(series, model.name, "sigma", "E(sigma, f)")
    return EXIT_OK, files


COMMANDS = {
    "verify": _cmd_verify,
    "jackson": _cmd_jackson,
    "kfunc": _cmd_kfunc,
    "multiplier": _cmd_multiplier,
    "rates": _cmd_rates,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacksonlab", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", nargs="?", choices=SUBCOMMANDS)
    p.add_argument("--config", metavar="PATH", help="JSON experiment config")
    p.add_argument("--model", metavar="NAME", help="circle, torus, sphere, hermite; optionally NAME:key=val,...")
    p.add_argument("--out", metavar="PREFIX", help="output path prefix")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--svg", action="store_true", help="also write a log-log SVG chart")
    p.add_argument("--print-defaults", action="store_true", help="print the default config and exit")
    p.add_argument("--m", type=int, help="kernel order for 'multiplier'")
    p.add_argument("--sigma", type=float, help="bandwidth for 'multiplier'")
    return p


def dispatch(subcommand: str, cfg, args) -> int:
    code, files = COMMANDS[subcommand](cfg, args)
    for path in sorted(files):
        write_atomic(path, files[path])
        print(f"wrote {path}")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.print_defaults:
        sys.stdout.write(default_config_text())
        return EXIT_OK
    if args.subcommand is None:
        print("jacksonlab: a subcommand is required", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text = ""
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except (OSError, UnicodeDecodeError) as exc:
                raise ConfigError([f"--config: cannot read {args.config}: {exc}"]) from None
        overrides = {}
        if args.model:
            overrides["model"] = model_override(args.model)
        if args.out:
            overrides["output"] = args.out
        if args.seed is not None:
            overrides["seed"] = args.seed
        cfg = parse_config(text, overrides)
        return dispatch(args.subcommand, cfg, args)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ex.InvariantViolation as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
