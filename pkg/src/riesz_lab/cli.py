"""Command-line entry point: one root seed, validated configs, deterministic
CSV/JSON artifacts, and gated exit codes (0 pass, 1 violation, 2 config, 3 I/O)."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

import numpy as np

from . import __version__
from .constants import constants_table, weak_type_constant
from .fd_transfer import (
    SMOOTH_FAMILY,
    CosineBump,
    DifferenceBump,
    FDGrid,
    consistency_order,
    ratio_convergence_study,
    sample,
    scale_invariance_check,
    weak_type_set_transfer,
)
from .group_lattice import (
    GroupSpec,
    LatticeFunction,
    load_binary,
    mean_value,
    mean_zero_project,
    random_real_function,
)
from .martingale_mc import (
    WalkConfig,
    check_quadratic_covariation,
    check_subordination,
    estimate_representation,
    evolve_martingales,
    simulate_walk,
)
from .norm_probe import power_iterate_lp, weak_type_lower_bound
from .spectral_ops import RieszCoefficients, apply_riesz2
from .zigzag_laminate import certify_weak_type_lower, search_gap_tree, tree_to_json

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

COMMANDS = ("constants", "probe", "mc", "zigzag", "fd", "report")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    cycles: list = field(default_factory=list)
    torus: list = field(default_factory=list)
    alpha_x: list = field(default_factory=list)
    alpha_y: list = field(default_factory=list)
    p: float = 2.0
    p_list: list = field(default_factory=lambda: [1.25, 1.5, 2.0, 3.0, 4.0])
    K: float = 2.0
    T: float = 1.0
    dt: float = 0.01
    paths: int = 10000
    seed: int = 0
    iters: int = 100
    depth: int = 8
    beam: int = 24
    h_list: list = field(default_factory=lambda: [0.1, 0.05, 0.025, 0.0125])
    dim: int = 2
    family: str = "gaussian"
    mode: str = "lp"
    f_path: str = ""
    trace: str = ""
    out: str = ""
    fmt: str = "json"
    in_dir: str = ""
    overrides: list = field(default_factory=list)

    def group(self) -> GroupSpec:
        try:
            return GroupSpec(tuple(int(n) for n in self.cycles),
                             tuple(int(m) for m in self.torus))
        except ValueError as e:
            raise ConfigError(f"group: {e}") from e

    def coefficients(self, spec: GroupSpec) -> RieszCoefficients:
        try:
            ax = self.alpha_x if self.alpha_x else None
            ay = self.alpha_y if self.alpha_y else None
            return RieszCoefficients.for_group(spec, ax, ay)
        except ValueError as e:
            raise ConfigError(f"alpha: {e}") from e


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)} - {"command", "overrides"}


def _validate(cfg: RunConfig):
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command: must be one of {COMMANDS}")
    if cfg.p <= 1.0:
        raise ConfigError(f"p: must satisfy p > 1, got {cfg.p}")
    for p in cfg.p_list:
        if p <= 1.0:
            raise ConfigError(f"p_list: entries must satisfy p > 1, got {p}")
    if cfg.K <= 1.0:
        raise ConfigError(f"K: must satisfy K > 1, got {cfg.K}")
    if cfg.T <= 0:
        raise ConfigError(f"T: must be positive, got {cfg.T}")
    if not (0 < cfg.dt <= cfg.T):
        raise ConfigError(f"dt: need 0 < dt <= T, got {cfg.dt}")
    if cfg.paths < 1:
        raise ConfigError(f"paths: must be >= 1, got {cfg.paths}")
    if cfg.iters < 1:
        raise ConfigError(f"iters: must be >= 1, got {cfg.iters}")
    if cfg.depth < 1 or cfg.beam < 1:
        raise ConfigError("depth/beam: must be >= 1")
    if len(cfg.h_list) < 1 or any(h <= 0 for h in cfg.h_list):
        raise ConfigError(f"h_list: steps must be positive, got {cfg.h_list}")
    if cfg.dim < 1:
        raise ConfigError(f"dim: must be >= 1, got {cfg.dim}")
    if cfg.family not in (*SMOOTH_FAMILY, "cosine_bump", "difference_bump"):
        raise ConfigError(f"family: unknown family {cfg.family!r}")
    if cfg.mode not in ("lp", "weak"):
        raise ConfigError(f"mode: must be lp or weak, got {cfg.mode}")
    if cfg.fmt not in ("json", "csv"):
        raise ConfigError(f"fmt: must be json or csv, got {cfg.fmt}")


def parse_config(argv) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        raise ConfigError("command: missing (see --help)")
    file_values = {}
    if ns.config:
        file_values = _load_config_file(ns.config)
        unknown = set(file_values) - _FIELD_NAMES
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown config key")
    cfg = RunConfig(command=ns.command)
    for key, val in file_values.items():
        setattr(cfg, key, val)
    for key in _FIELD_NAMES:
        val = getattr(ns, key, None)
        if val is not None:
            if key in file_values:
                cfg.overrides.append(key)
            setattr(cfg, key, val)
    _validate(cfg)
    return cfg


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise ConfigError(f"config: cannot read {path}: {e}") from e
    if path.endswith(".json"):
        return json.loads(raw)
    try:
        return tomllib.loads(raw.decode())
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config: parse error in {path}: {e}") from e


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riesz-lab",
        description="numerical laboratory for semi-discrete second-order Riesz transforms",
    )
    sub = parser.add_subparsers(dest="command")

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="TOML or JSON config file; flags override it")
        sp.add_argument("--cycles", type=_int_list, help="discrete cycle orders, e.g. 4,4")
        sp.add_argument("--torus", type=_int_list, help="torus resolutions, e.g. 16,16")
        sp.add_argument("--alpha-x", dest="alpha_x", type=_float_list,
                        help="per-cycle coefficients")
        sp.add_argument("--alpha-y", dest="alpha_y", type=_float_matrix,
                        help="torus coefficient matrix, rows ;-separated")
        sp.add_argument("--p", type=float)
        sp.add_argument("--p-list", dest="p_list", type=_float_list)
        sp.add_argument("--K", type=float)
        sp.add_argument("--T", type=float)
        sp.add_argument("--dt", type=float)
        sp.add_argument("--paths", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--iters", type=int)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--beam", type=int)
        sp.add_argument("--h-list", dest="h_list", type=_float_list)
        sp.add_argument("--dim", type=int)
        sp.add_argument("--family", choices=(*SMOOTH_FAMILY, "cosine_bump", "difference_bump"))
        sp.add_argument("--mode", choices=("lp", "weak"))
        sp.add_argument("--f", dest="f_path", help="LatticeFunction binary file")
        sp.add_argument("--trace", help="per-path CSV trace output (capped)")
        sp.add_argument("--out", help="artifact output path")
        sp.add_argument("--fmt", choices=("json", "csv"))
        sp.add_argument("--dir", dest="in_dir", help="directory of run artifacts (report)")
        return sp

    add("constants", "tabulate the closed-form constants")
    add("probe", "operator-norm lower-bound probes")
    add("mc", "martingale Monte Carlo checks")
    add("zigzag", "zigzag gap search and weak-type certificate")
    add("fd", "finite-difference transfer studies")
    add("report", "merge run artifacts into one summary")
    return parser


def _int_list(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip() != ""]


def _float_list(s: str) -> list:
    return [float(x) for x in s.split(",") if x.strip() != ""]


def _float_matrix(s: str) -> list:
    return [[float(x) for x in row.split(",")] for row in s.split(";") if row.strip()]


def _worker_cap() -> int:
    try:
        return max(1, int(os.environ.get("RIESZ_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".riesz-lab-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, csv_rows=None):
    if not cfg.out:
        sys.stdout.write(_json_text(payload))
        return
    if cfg.fmt == "csv" and csv_rows is not None:
        _atomic_write(cfg.out, _csv_text(csv_rows))
    else:
        _atomic_write(cfg.out, _json_text(payload))


def _header(cfg: RunConfig) -> dict:
    echo = {k: getattr(cfg, k) for k in sorted(_FIELD_NAMES)}
    return {
        "tool": "riesz-lab",
        "version": __version__,
        "command": cfg.command,
        "seed": cfg.seed,
        "workers": _worker_cap(),
        "config": echo,
        "flag_overrides": sorted(cfg.overrides),
    }


def _load_f(cfg: RunConfig, spec: GroupSpec) -> LatticeFunction:
    if cfg.f_path:
        try:
            f = load_binary(cfg.f_path)
        except OSError as e:
            raise ConfigError(f"f: cannot read {cfg.f_path}: {e}") from e
        if f.group != spec:
            raise ConfigError("f: stored group does not match --cycles/--torus")
        return f
    return mean_zero_project(random_real_function(spec, cfg.seed))


# ---------------------------------------------------------------------------
# subcommands

def _run_constants(cfg: RunConfig) -> int:
    table = constants_table(cfg.p_list)
    rows = [["p", "name", "value"]]
    rows += [[r.p, r.name, repr(r.value)] for r in table]
    payload = _header(cfg)
    payload["constants"] = [
        {"p": r.p, "name": r.name, "value": r.value} for r in table
    ]
    _emit(cfg, payload, rows)
    return EXIT_PASS


def _run_probe(cfg: RunConfig) -> int:
    spec = cfg.group()
    coeffs = cfg.coefficients(spec)
    f = _load_f(cfg, spec)
    if cfg.mode == "lp":
        res = power_iterate_lp(coeffs, cfg.p, f, iters=cfg.iters)
    else:
        res = weak_type_lower_bound(coeffs, cfg.p, f)
    payload = _header(cfg)
    payload["probe"] = {
        "mode": cfg.mode,
        "bound": res.bound,
        "theorem_cap": res.theorem_cap,
        "satisfied": bool(res.satisfied),
        "converged": bool(res.converged),
        "iterations": res.iterations,
        "bound_sequence": [float(b) for b in res.bound_sequence],
    }
    rows = [["iteration", "bound"]]
    rows += [[i, repr(float(b))] for i, b in enumerate(res.bound_sequence)]
    _emit(cfg, payload, rows)
    return EXIT_PASS if res.satisfied else EXIT_VIOLATION


def _run_mc(cfg: RunConfig) -> int:
    spec = cfg.group()
    coeffs = cfg.coefficients(spec)
    f = _load_f(cfg, spec)
    if abs(mean_value(f)) > 1e-10:
        raise ConfigError("f: must be mean-zero for the martingale checks")
    walk = WalkConfig(spec, cfg.T, cfg.dt, seed=cfg.seed, paths=cfg.paths)
    payload = _header(cfg)
    ok = True
    sub_paths = min(cfg.paths, 200)
    sub_walk = dataclasses.replace(walk, paths=sub_paths)
    compliance = []
    trace_rows = [["path", "time", "m_f", "m_alpha", "qv_f", "qv_alpha"]]
    for path in simulate_walk(sub_walk):
        pair = evolve_martingales(sub_walk, f, coeffs, path)
        compliance.append(check_subordination(pair, coeffs))
        if cfg.trace and path.path_index < 100:
            for i, t in enumerate(pair.times):
                trace_rows.append([
                    path.path_index, repr(float(t)), repr(float(pair.m_f[i])),
                    repr(float(pair.m_alpha[i])), repr(float(pair.qv_f[i])),
                    repr(float(pair.qv_alpha[i])),
                ])
    payload["subordination"] = {
        "paths": sub_paths,
        "compliance": float(min(compliance)),
    }
    ok = ok and min(compliance) == 1.0
    if spec.n == 0:
        rep = estimate_representation(walk, f, coeffs)
        oracle = apply_riesz2(coeffs, f)
        dev = rep.max_deviation(oracle)
        lam_min = _spectral_gap(spec)
        from .group_lattice import lp_norm
        tol = max(3.0 * float(np.max(rep.std_error)),
                  np.exp(-lam_min * cfg.T) * lp_norm(f, 2.0))
        payload["representation"] = {
            "max_deviation": dev,
            "tolerance": float(tol),
            "max_std_error": float(np.max(rep.std_error)),
            "empty_bins": int(np.count_nonzero(rep.empty_bins)),
            "estimate": [float(v) for v in rep.estimate.values.real],
            "oracle": [float(v) for v in oracle.values.real],
        }
        ok = ok and dev <= tol
    if cfg.trace:
        _atomic_write(cfg.trace, _csv_text(trace_rows))
    payload["passed"] = bool(ok)
    _emit(cfg, payload)
    return EXIT_PASS if ok else EXIT_VIOLATION


def _spectral_gap(spec: GroupSpec) -> float:
    from .spectral_ops import eigenvalue_grid

    lam = eigenvalue_grid(spec).reshape(-1)
    return float(np.min(lam[lam > 0]))


def _run_zigzag(cfg: RunConfig) -> int:
    tree = search_gap_tree(cfg.p, depth=cfg.depth, beam=cfg.beam)
    ceiling = weak_type_constant(cfg.p)
    payload = _header(cfg)
    try:
        bound = certify_weak_type_lower(cfg.p, tree, 1e-9)
        payload["certificate"] = {
            "bound": float(bound),
            "ceiling": float(ceiling),
            "ratio_to_ceiling": float(bound / ceiling),
        }
        ok = 0.0 < bound <= ceiling
    except Exception as e:  # refusal carries the diagnosis
        payload["certificate"] = {"refused": str(e), "ceiling": float(ceiling)}
        ok = False
    payload["tree"] = tree_to_json(tree)
    payload["passed"] = bool(ok)
    _emit(cfg, payload)
    return EXIT_PASS if ok else EXIT_VIOLATION


_FD_FAMILIES = {
    "gaussian": lambda: SMOOTH_FAMILY["gaussian"](),
    "cos_product": lambda: SMOOTH_FAMILY["cos_product"](),
    "cosine_bump": CosineBump,
    "difference_bump": DifferenceBump,
}


def _run_fd(cfg: RunConfig) -> int:
    payload = _header(cfg)
    ok = True
    func = _FD_FAMILIES[cfg.family]()
    if hasattr(func, "second_derivative"):
        cons = consistency_order(func, cfg.dim, 1.0, cfg.h_list)
        payload["consistency"] = {
            "h": [float(h) for h in cons["h"]],
            "error": [float(e) for e in cons["error"]],
            "slope": cons["slope"],
            "exact": cons["exact"],
        }
        if not cons["exact"]:
            ok = ok and 1.9 <= cons["slope"] <= 2.1
    grid = FDGrid(min(cfg.h_list), cfg.dim, 1.0)
    fld = sample(grid, func)
    coeffs = [1.0] + [-1.0] * (cfg.dim - 1)
    resid = scale_invariance_check(fld, coeffs, cfg.p)
    payload["scale_invariance_residual"] = float(resid)
    ok = ok and resid < 1e-12
    study = ratio_convergence_study(func, cfg.dim, 1.0, coeffs, cfg.p, cfg.h_list)
    payload["ratio_study"] = {
        "table": [{k: float(v) for k, v in row.items()} for row in study["table"]],
        "reference_h": float(study["reference_h"]),
        "reference_ratio": float(study["reference_ratio"]),
    }
    transfer = weak_type_set_transfer(func, cfg.dim, 1.0, 0.5, cfg.h_list)
    payload["set_transfer"] = {
        "table": [
            {k: (float(v) if not isinstance(v, bool) else v) for k, v in row.items()}
            for row in transfer["table"]
        ],
        "reference": {
            k: (float(v) if not isinstance(v, bool) else v)
            for k, v in transfer["reference"].items()
        },
    }
    payload["passed"] = bool(ok)
    _emit(cfg, payload)
    return EXIT_PASS if ok else EXIT_VIOLATION


def _run_report(cfg: RunConfig) -> int:
    if not cfg.in_dir:
        raise ConfigError("dir: report requires --dir")
    if not os.path.isdir(cfg.in_dir):
        raise ConfigError(f"dir: not a directory: {cfg.in_dir}")
    runs = []
    for name in sorted(os.listdir(cfg.in_dir)):
        if not name.endswith(".json"):
            continue
        try:
            with open(os.path.join(cfg.in_dir, name), encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError):
            continue
        if isinstance(doc, dict) and doc.get("tool") == "riesz-lab":
            runs.append({
                "file": name,
                "command": doc.get("command"),
                "seed": doc.get("seed"),
                "passed": doc.get("passed", True),
            })
    payload = _header(cfg)
    payload["runs"] = runs
    payload["all_passed"] = all(r["passed"] for r in runs)
    _emit(cfg, payload)
    return EXIT_PASS


_DISPATCH = {
    "constants": _run_constants,
    "probe": _run_probe,
    "mc": _run_mc,
    "zigzag": _run_zigzag,
    "fd": _run_fd,
    "report": _run_report,
}


def run(cfg: RunConfig) -> int:
    try:
        return _DISPATCH[cfg.command](cfg)
    except ConfigError:
        raise
    except ValueError as e:
        # precondition violations surfaced by the modules
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return run(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
