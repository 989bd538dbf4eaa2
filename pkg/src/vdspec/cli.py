"""Config-driven command-line front end.

Subcommands:
  list     print the benchmark catalog
  run      run catalog scenarios or a JSON config file, export CSV + JSON
  compare  compare two spectra CSV columns, exit nonzero above tolerance

Exit codes: 0 success, 1 configuration or validation error, 2 numerical
failure (non-finite amplitudes or an incomplete recording window), 3
comparison above tolerance. Outputs are written atomically and are
byte-identical across runs with the same configuration and thread count.
"""

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import compare
from .core import GaussianParams, Grid1D
from .detectors import Spectrum, TapConfig, cvd_on_grid
from .propagator import PotentialSpec, PropagationError
from .scenarios import (
    ScenarioConfig,
    ScenarioError,
    build_scenario,
    run_scenario,
    scenario_catalog,
    scenario_names,
    validate_config,
)

__all__ = ["main", "ConfigError", "load_config", "config_to_dict"]

THREADS_ENV = "VDSPEC_THREADS"


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""


def _reject_unknown(data, allowed, path):
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        where = f"{path}." if path else ""
        raise ConfigError(f"unknown key {where}{unknown[0]!r}")


def _get(data, key, path, default=None, required=False):
    if key not in data:
        if required:
            where = f"{path}." if path else ""
            raise ConfigError(f"missing required key {where}{key!r}")
        return default
    return data[key]


def _coefficient(raw, path):
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(
        isinstance(v, (int, float)) for v in raw
    ):
        return complex(raw[0], raw[1])
    raise ConfigError(f"{path}: coefficient must be a number or [re, im]")


def config_from_dict(data):
    """Build a ScenarioConfig from JSON-shaped data, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    _reject_unknown(
        data,
        {"name", "grid", "packets", "dt", "n_steps", "tap", "potential",
         "zero_pad_factor", "cvd_bin_width", "rho_floor"},
        "",
    )
    grid_d = _get(data, "grid", "", required=True)
    _reject_unknown(grid_d, {"n_points", "dx", "x_min"}, "grid")
    n_points = int(_get(grid_d, "n_points", "grid", required=True))
    dx = float(_get(grid_d, "dx", "grid", required=True))
    x_min = _get(grid_d, "x_min", "grid", default=None)
    if x_min is None:
        x_min = -(n_points // 2) * dx
    try:
        grid = Grid1D(n_points=n_points, dx=dx, x_min=float(x_min))
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None

    packets_d = _get(data, "packets", "", required=True)
    if not isinstance(packets_d, list) or not packets_d:
        raise ConfigError("packets: must be a non-empty list")
    packets = []
    for i, pd in enumerate(packets_d):
        path = f"packets[{i}]"
        _reject_unknown(pd, {"x0", "sigma_x", "k0", "phase", "coefficient"}, path)
        try:
            params = GaussianParams(
                x0=float(_get(pd, "x0", path, required=True)),
                sigma_x=float(_get(pd, "sigma_x", path, required=True)),
                k0=float(_get(pd, "k0", path, required=True)),
                global_phase=float(_get(pd, "phase", path, default=0.0)),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        packets.append((params, _coefficient(_get(pd, "coefficient", path, default=1.0), path)))

    tap_d = _get(data, "tap", "", default={})
    _reject_unknown(tap_d, {"x_detector", "dx_sep"}, "tap")
    tap = TapConfig(
        x_detector=float(_get(tap_d, "x_detector", "tap", default=0.0)),
        dx_sep=float(_get(tap_d, "dx_sep", "tap", default=dx)),
    )

    pot_d = _get(data, "potential", "", default={"kind": "zero"})
    _reject_unknown(pot_d, {"kind", "value"}, "potential")
    kind = _get(pot_d, "kind", "potential", default="zero")
    if kind == "zero":
        potential = PotentialSpec.zero()
    elif kind == "constant":
        potential = PotentialSpec.constant(float(_get(pot_d, "value", "potential", default=0.0)))
    else:
        raise ConfigError(
            f"potential.kind: {kind!r} not supported in config files (use 'zero' or 'constant')"
        )

    cfg = ScenarioConfig(
        name=str(_get(data, "name", "", default="custom")),
        grid=grid,
        packets=tuple(packets),
        dt=float(_get(data, "dt", "", required=True)),
        n_steps=int(_get(data, "n_steps", "", required=True)),
        tap=tap,
        potential=potential,
        zero_pad_factor=int(_get(data, "zero_pad_factor", "", default=4)),
        cvd_bin_width=float(_get(data, "cvd_bin_width", "", default=0.005)),
        rho_floor=float(_get(data, "rho_floor", "", default=1e-12)),
    )
    try:
        validate_config(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    return config_from_dict(data)


def config_to_dict(cfg):
    """JSON-ready echo of a configuration (coefficients as [re, im])."""
    return {
        "name": cfg.name,
        "grid": {
            "n_points": cfg.grid.n_points,
            "dx": cfg.grid.dx,
            "x_min": cfg.grid.x_min,
        },
        "packets": [
            {
                "x0": p.x0,
                "sigma_x": p.sigma_x,
                "k0": p.k0,
                "phase": p.global_phase,
                "coefficient": [complex(c).real, complex(c).imag],
            }
            for p, c in cfg.packets
        ],
        "dt": cfg.dt,
        "n_steps": cfg.n_steps,
        "tap": {"x_detector": cfg.tap.x_detector, "dx_sep": cfg.tap.dx_sep},
        "potential": {"kind": cfg.potential.kind, "value": cfg.potential.value},
        "zero_pad_factor": cfg.zero_pad_factor,
        "cvd_bin_width": cfg.cvd_bin_width,
        "rho_floor": cfg.rho_floor,
    }


def _atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_ready(obj):
    if isinstance(obj, dict):
        return {key: _json_ready(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(val) for val in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        return val if math.isfinite(val) else None
    return obj


def _spectra_csv_text(result):
    spectra = result.spectra
    k = spectra["exact"].k
    half = len(spectra["qvd"].k) - 1
    qvd_col = np.zeros(len(k))
    qvd_col[half:] = spectra["qvd"].density
    cvd_col = cvd_on_grid(spectra["cvd"], k)
    cols = (
        k,
        spectra["exact"].density,
        cvd_col,
        qvd_col,
        spectra["bqvd_discrete"].density,
        spectra["bqvd_continuous"].density,
    )
    lines = ["k,exact,cvd,qvd,bqvd_discrete,bqvd_continuous"]
    for row in zip(*cols):
        lines.append(",".join(f"{v:.12e}" for v in row))
    return "\n".join(lines) + "\n"


def _cvd_bins_csv_text(result):
    cvd = result.spectra["cvd"]
    lines = ["k,density"]
    for kv, dv in zip(cvd.k, cvd.density):
        lines.append(f"{kv:.12e},{dv:.12e}")
    return "\n".join(lines) + "\n"


def _report_json_text(result):
    payload = {
        "version": __version__,
        "scenario": result.config.name,
        "config": config_to_dict(result.config),
        "reports": {
            name: _json_ready(dataclasses.asdict(rep))
            for name, rep in result.reports.items()
        },
        "diagnostics": _json_ready(result.diagnostics),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_result(result, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / "spectra.csv", _spectra_csv_text(result))
    _atomic_write(out_dir / "cvd_bins.csv", _cvd_bins_csv_text(result))
    _atomic_write(out_dir / "report.json", _report_json_text(result))


def _max_workers(n_jobs):
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        cap = os.cpu_count() or 1
    else:
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        if cap < 1:
            raise ConfigError(f"{THREADS_ENV} must be at least 1")
    return max(1, min(n_jobs, cap))


def cmd_list(args):
    catalog = scenario_catalog()
    if args.json:
        print(json.dumps(
            [{"name": n, "description": d} for n, d in catalog], indent=2
        ))
    else:
        for name, description in catalog:
            print(f"{name}: {description}")
    return 0


def cmd_run(args):
    if bool(args.scenario) == bool(args.config):
        raise ConfigError("exactly one of --scenario or --config is required")
    if args.scenario:
        if len(set(args.scenario)) != len(args.scenario):
            raise ConfigError("--scenario: duplicate names would overwrite each other")
        configs = [build_scenario(name) for name in args.scenario]
    else:
        configs = [load_config(args.config)]
    if args.zero_pad is not None:
        if args.zero_pad < 1:
            raise ConfigError("--zero-pad: must be at least 1")
        configs = [dataclasses.replace(c, zero_pad_factor=args.zero_pad) for c in configs]

    out_root = Path(args.out)
    targets = (
        [out_root]
        if len(configs) == 1
        else [out_root / cfg.name for cfg in configs]
    )

    def job(cfg, target):
        _write_result(run_scenario(cfg), target)

    if args.parallel and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=_max_workers(len(configs))) as pool:
            futures = [pool.submit(job, c, t) for c, t in zip(configs, targets)]
            for fut in futures:
                fut.result()
    else:
        for cfg, target in zip(configs, targets):
            job(cfg, target)
    return 0


def _read_spectra_csv(path):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(v) for v in row] for row in reader if row]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except (ValueError, StopIteration) as exc:
        raise ConfigError(f"{path}: not a numeric CSV with a header row ({exc})") from None
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ConfigError(f"{path}: ragged CSV")
    return {name: data[:, i] for i, name in enumerate(header)}


def _pick_column(cols, requested, path):
    if requested is not None:
        if requested not in cols:
            raise ConfigError(f"{path}: no column {requested!r} (have {', '.join(cols)})")
        return requested
    if "bqvd_discrete" in cols:
        return "bqvd_discrete"
    others = [name for name in cols if name != "k"]
    if len(others) == 1:
        return others[0]
    raise ConfigError(f"{path}: ambiguous columns, pass --col-a/--col-b")


def cmd_compare(args):
    cols_a = _read_spectra_csv(args.file_a)
    cols_b = _read_spectra_csv(args.file_b)
    for path, cols in ((args.file_a, cols_a), (args.file_b, cols_b)):
        if "k" not in cols:
            raise ConfigError(f"{path}: no 'k' column")
    if cols_a["k"].shape != cols_b["k"].shape or np.max(np.abs(cols_a["k"] - cols_b["k"])) > 1e-12:
        raise ConfigError("the two files do not share the same k grid")
    name_a = _pick_column(cols_a, args.col_a, args.file_a)
    name_b = _pick_column(cols_b, args.col_b if args.col_b else name_a, args.file_b)
    a = Spectrum(k=cols_a["k"], density=cols_a[name_a], label=name_a)
    b = Spectrum(k=cols_b["k"], density=cols_b[name_b], label=name_b)
    region = None
    if args.kmin is not None or args.kmax is not None:
        region = (
            args.kmin if args.kmin is not None else float(a.k.min()),
            args.kmax if args.kmax is not None else float(a.k.max()),
        )
    report = compare(a, b, region=region, support_floor=args.support_floor)
    print(json.dumps(_json_ready(dataclasses.asdict(report)), indent=2, sort_keys=True))
    return 0 if report.l2_rel <= args.tol else 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="vdspec",
        description="1-D wavepacket propagation and virtual-detector momentum spectra",
    )
    parser.add_argument("--version", action="version", version=f"vdspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list the benchmark catalog")
    p_list.add_argument("--json", action="store_true", help="machine-readable output")
    p_list.set_defaults(func=cmd_list)

    p_run = sub.add_parser("run", help="run scenarios and export spectra")
    p_run.add_argument(
        "--scenario",
        action="append",
        metavar="NAME",
        help=f"catalog scenario (repeatable); one of: {', '.join(scenario_names())}",
    )
    p_run.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p_run.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p_run.add_argument("--zero-pad", type=int, default=None, metavar="N",
                       help="override the zero-padding factor")
    p_run.add_argument("--parallel", action="store_true",
                       help=f"run multiple scenarios concurrently (capped by ${THREADS_ENV})")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="compare two spectra CSV columns")
    p_cmp.add_argument("file_a")
    p_cmp.add_argument("file_b")
    p_cmp.add_argument("--col-a", default=None, help="column of file_a (default bqvd_discrete)")
    p_cmp.add_argument("--col-b", default=None, help="column of file_b (default: same as --col-a)")
    p_cmp.add_argument("--kmin", type=float, default=None)
    p_cmp.add_argument("--kmax", type=float, default=None)
    p_cmp.add_argument("--support-floor", type=float, default=1e-3)
    p_cmp.add_argument("--tol", type=float, default=0.03,
                       help="maximum allowed relative L2 (exit 3 above)")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed its message; --help and --version exit 0
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PropagationError, ScenarioError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
