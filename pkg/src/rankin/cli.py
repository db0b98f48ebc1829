"""Command-line front end.

Every subcommand writes <out>/<command>.csv and <out>/<command>.json.
Settings come from built-in defaults, then an optional key = value config
file, then explicit flags (flags win).  Exit status: 0 when every
assertion passes, 1 on a failed assertion or a computational failure,
2 on a configuration or input-validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from . import automorphic_pipeline as ap
from . import checks
from .eisenstein import DomainSample
from .errors import DataValidationError, DomainError, RankinError
from .reports import write_report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


# per-command defaults; anything not listed falls back to COMMON
COMMON = {"out": "rankin-out", "threads": os.cpu_count() or 1, "seed": 0, "tol": None, "sigma": None,
          "t": None, "t_min": None, "t_max": None, "t_steps": None, "t_spacing": "log", "lambda1": 0.0,
          "lambda2": 0.0, "trunc": None, "data": None, "eps": None, "samples": None}

DEFAULTS = {
    "index-compute": {"sigma": "0.55,0.7,0.85", "t": "0,5,20", "lambdas": "0:0,1:2"},
    "index-scan": {"sigma": "0.6,0.75,0.9", "t_min": 1.0, "t_max": 200.0, "t_steps": 14},
    "l1-scan": {"eps": 1.0, "t_min": 10.0, "t_max": 1000.0, "t_steps": 12},
    "trilinear-check": {"samples": 20, "trunc": 4},
    "eisenstein-check": {"samples": 10},
    "eisenstein-supnorm": {"sigma": "0.5", "t_min": 10.0, "t_max": 60.0, "t_steps": 8},
    "weighted-sup": {"sigma": "0.5", "t": "20", "eps": 0.5},
    "unfold-check": {"s_values": "1.5,2,2.5"},
    "bound-pipeline": {"sigma": "0.75", "t_min": 5.0, "t_max": 60.0, "t_steps": 8},
    "pl-exponent": {"points": None},
}

HELP = {
    "index-compute": "index at lattice points, checked against brute force and delta extremizers",
    "index-scan": "index over a t grid per sigma, with growth fit and floor",
    "l1-scan": "l1 norm of |cos|^{eps + i u1} coefficients over a u1 grid (the t grid flags)",
    "trilinear-check": "Fourier route vs direct quadrature on random K-finite vectors",
    "eisenstein-check": "lattice sum vs Fourier expansion, invariance, scattering",
    "eisenstein-supnorm": "weighted Eisenstein sup-norm over a t grid",
    "weighted-sup": "sup of |E(s, z)| v(z) with the Siegel-set weight",
    "unfold-check": "L-quotient against the Rankin-Selberg Dirichlet series",
    "bound-pipeline": "sup E_v / index ratio and its growth in t",
    "pl-exponent": "exponent at sigma = 1/2 by convexity from exact rational inputs",
}


def read_config(path) -> dict:
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for k, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{k}: expected key = value")
        key, val = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rankin", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"rankin {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in DEFAULTS:
        c = sub.add_parser(name, help=HELP[name])
        a = c.add_argument
        # argparse defaults are all None so that config values can show through
        a("--config", help="key = value config file")
        a("--out", help="output directory")
        a("--threads", type=int, help="worker processes (default: all cores)")
        a("--seed", type=int)
        a("--tol", type=float, help="evaluation tolerance (eisenstein-*, weighted-sup, unfold-check)")
        a("--sigma", help="real part(s) of s, comma separated")
        a("--t", help="explicit comma separated t grid")
        a("--t-min", type=float)
        a("--t-max", type=float)
        a("--t-steps", type=int)
        a("--t-spacing", choices=("log", "linear"))
        a("--lambda1", type=float)
        a("--lambda2", type=float)
        a("--trunc", type=int, help="Fourier truncation N (mode count for trilinear-check)")
        a("--data", help="Maass form JSON (default: the bundled mock form)")
        a("--eps", type=float)
        a("--samples", type=int)
        if name == "index-compute":
            a("--lambdas", help="lambda pairs l1:l2, comma separated")
        if name == "unfold-check":
            a("--s-values", help="comma separated real s values")
            a("--data2", help="second Maass form (default: same as --data)")
        if name == "pl-exponent":
            a("--points", help="sigma:exponent pairs as exact rationals, e.g. 3/4:7/12,9/10:13/30")
    return p


def resolve(args) -> dict:
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[args.command])
    if args.config:
        file_cfg = read_config(args.config)
        unknown = set(file_cfg) - set(cfg) - {"data2"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for k, v in vars(args).items():
        if v is not None and k not in ("command", "config"):
            cfg[k] = v
    cfg["command"] = args.command
    return _coerce(cfg)


_TYPES = {"threads": int, "seed": int, "tol": float, "t_min": float, "t_max": float, "t_steps": int,
          "lambda1": float, "lambda2": float, "trunc": int, "eps": float, "samples": int}


def _coerce(cfg: dict) -> dict:
    for k, typ in _TYPES.items():
        v = cfg.get(k)
        if v is None or isinstance(v, typ):
            continue
        try:
            cfg[k] = typ(v)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{k}: cannot parse {v!r} as {typ.__name__}") from exc
    if cfg["threads"] < 1:
        raise ConfigError("threads must be >= 1")
    return cfg


def _floats(text, name) -> list:
    if text is None:
        return []
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"{name}: expected comma separated numbers, got {text!r}") from exc


def t_grid(cfg) -> list:
    if cfg.get("t") is not None:
        return sorted(_floats(cfg["t"], "t"))
    lo, hi, n = cfg.get("t_min"), cfg.get("t_max"), cfg.get("t_steps")
    if lo is None or hi is None or n is None:
        raise ConfigError("give --t or all of --t-min, --t-max, --t-steps")
    if n < 0 or hi < lo:
        raise ConfigError("need t_steps >= 0 and t_max >= t_min")
    if n == 1:
        return [float(lo)]
    if cfg["t_spacing"] == "log":
        if lo <= 0:
            raise ConfigError("log spacing needs t_min > 0")
        return [float(x) for x in np.geomspace(lo, hi, n)]
    return [float(x) for x in np.linspace(lo, hi, n)]


def _nonempty(grid, name):
    if not grid:
        raise ConfigError(f"{name} grid is empty")
    return grid


def _fraction_points(text):
    pts = []
    for item in str(text).split(","):
        try:
            sig, e = item.split(":")
            pts.append((Fraction(sig.strip()), Fraction(e.strip())))
        except ValueError as exc:
            raise ConfigError(f"points: cannot parse {item!r} as sigma:exponent") from exc
    return pts


def _form(path):
    return ap.mock_form() if path in (None, "", "mock") else ap.MaassFormData.from_json(path)


def run_command(cfg: dict, mapper):
    cmd = cfg["command"]
    if cmd == "index-compute":
        pts = []
        for pair in str(cfg["lambdas"]).split(","):
            try:
                l1, l2 = (float(v) for v in pair.split(":"))
            except ValueError as exc:
                raise ConfigError(f"lambdas: cannot parse {pair!r}") from exc
            pts += [(s, t, (l1, l2)) for s in _floats(cfg["sigma"], "sigma") for t in t_grid(cfg)]
        return checks.check_isup(_nonempty(pts, "index"), cfg["seed"], cfg["trunc"], mapper)
    if cmd == "index-scan":
        return checks.check_index_floor(tuple(_nonempty(_floats(cfg["sigma"], "sigma"), "sigma")),
                                        _nonempty(t_grid(cfg), "t"), cfg["lambda1"], cfg["lambda2"],
                                        cfg["trunc"], mapper)
    if cmd == "l1-scan":
        return checks.check_l1_growth(_nonempty(t_grid(cfg), "u1"), cfg["eps"], mapper)
    if cmd == "trilinear-check":
        return checks.check_trilinear(cfg["samples"], cfg["seed"], cfg["trunc"], mapper)
    if cmd == "eisenstein-check":
        return checks.check_eisenstein(cfg["samples"], cfg["seed"], mapper, cfg["tol"])
    if cmd == "eisenstein-supnorm":
        sig = _nonempty(_floats(cfg["sigma"], "sigma"), "sigma")
        if len(sig) != 1:
            raise ConfigError("eisenstein-supnorm takes one sigma")
        return checks.check_supnorm(_nonempty(t_grid(cfg), "t"), sig[0], DomainSample(), mapper, cfg["tol"])
    if cmd == "weighted-sup":
        ss = [complex(s, t) for s in _floats(cfg["sigma"], "sigma") for t in t_grid(cfg)]
        return checks.check_weighted_sup(_nonempty(ss, "s"), cfg["eps"], DomainSample(), cfg["tol"])
    if cmd == "unfold-check":
        f1 = _form(cfg["data"])
        f2 = _form(cfg.get("data2")) if cfg.get("data2") else f1
        return checks.check_unfold(f1, f2, tuple(_nonempty(_floats(cfg["s_values"], "s"), "s")), cfg["tol"])
    if cmd == "bound-pipeline":
        sig = _nonempty(_floats(cfg["sigma"], "sigma"), "sigma")
        if len(sig) != 1:
            raise ConfigError("bound-pipeline takes one sigma")
        return checks.check_bound(sig[0], _nonempty(t_grid(cfg), "t"), cfg["eps"], mapper)
    if cmd == "pl-exponent":
        if cfg["points"] is None:
            return checks.check_pl()
        return checks.check_pl([("input", _fraction_points(cfg["points"]), None)])
    raise ConfigError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
    except ConfigError as exc:
        print(f"rankin: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    pool = ProcessPoolExecutor(cfg["threads"]) if cfg["threads"] > 1 else None
    mapper = pool.map if pool else map
    try:
        result = run_command(cfg, mapper)
    except (ConfigError, DomainError, DataValidationError) as exc:
        print(f"rankin: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RankinError, ArithmeticError, ValueError) as exc:
        print(f"rankin: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if pool:
            pool.shutdown()
    # threads changes scheduling only, never results; keep it out of the report
    report_cfg = {k: v for k, v in cfg.items() if k != "threads"}
    csv_path, json_path = write_report(cfg["out"], cfg["command"], result, report_cfg)
    for label, ok, detail in result.assertions:
        print(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
