"""Command-line experiment runner.

Each subcommand resolves a flat JSON config against a strict schema
(unknown keys are config errors), runs one experiment, and writes a
reproducibility bundle into the output directory: manifest.json with the
fully resolved config, data CSVs, and diagnostics.json with named checks
and pass flags.  Data files carry no timestamps, so identical configs
produce byte-identical CSVs.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 a check ran
but failed its threshold.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    CauchyData,
    Grid1D,
    NumericalError,
    SpinorSlice,
    SystemSpec,
    charge,
    norms,
    system_preset,
)
from .diagnostics import (
    charge_drift,
    constraint_residuals,
    energy_margin,
    md_compatible_data,
    norm_growth,
)
from .evolve import SolutionTrace, evolve
from .illposed import (
    DEFAULT_EPS_LIST,
    TestFunction,
    eps_data,
    key_bound_report,
    sweep_and_fit,
)
from .massless import MasslessSolution
from .picard import existence_time, fixed_point_residual, picard_iterate
from .profiles import EpsProfile, GaussianProfile


class ConfigError(ValueError):
    pass


_GRID_KEYS = {"x_min": -4.0, "x_max": 4.0, "n_cells": 4096}

SCHEMAS = {
    "simulate": {
        **_GRID_KEYS,
        "system": "MD",
        "dirac_mass": 0.0,
        "boson_mass": 0.0,
        "data": "gaussian",  # zero | gaussian | eps
        "eps": 0.1,
        "amplitude": 1.0,
        "T": 1.0,
        "stride": 0,  # 0 = pick a stride giving about 9 stored slices
        "drift_tol": 1e-11,
    },
    "picard": {
        **_GRID_KEYS,
        "system": "MD",
        "dirac_mass": 0.0,
        "boson_mass": 0.0,
        "amplitude": 0.5,
        "tol": 1e-8,
        "max_iter": 30,
        "c_cal": 0.4,
        "ratio_max": 0.9,
    },
    "illposed-sweep": {
        "x_min": -1.75,
        "x_max": 1.75,
        "n_cells": 896,
        "system": "MD",
        "dirac_mass": 0.0,
        "boson_mass": 0.0,
        "eps_list": list(DEFAULT_EPS_LIST),
        "oracle": True,
        "theta_t0": 0.5,
        "theta_x0": 0.0,
        "theta_r0": 0.2,
        "slope_factor": 0.95,
    },
    "keybound": {
        "x_min": -1.25,
        "x_max": 1.25,
        "n_cells": 8192,
        "dirac_mass": 1.0,
        "eps_list": [1e-2, 1e-3],
        "ratio_min": 0.45,
    },
    "convergence": {
        "x_min": -1.6,
        "x_max": 1.6,
        "n_list": [1024, 2048, 4096],
        "eps": 0.1,
        "T": 0.5,
        "order_min": 1.0,
    },
}


def resolve_config(command: str, path, overrides: dict) -> dict:
    schema = SCHEMAS[command]
    cfg = dict(schema)
    supplied = {}
    if path is not None:
        try:
            with open(path) as fh:
                supplied = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        if not isinstance(supplied, dict):
            raise ConfigError("config must be a flat JSON object")
    supplied.update({k: v for k, v in overrides.items() if v is not None})
    for key, value in supplied.items():
        if key not in schema:
            raise ConfigError(f"unknown config key {key!r} for {command!r}")
        default = schema[key]
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise ConfigError(f"{key} must be a boolean")
        elif isinstance(default, (int, float)):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{key} must be a number")
            value = type(default)(value)
        elif isinstance(default, list):
            if not isinstance(value, (list, tuple)) or not value:
                raise ConfigError(f"{key} must be a nonempty list")
            value = [float(v) for v in value]
        cfg[key] = value
    _validate(command, cfg)
    return cfg


def _validate(command: str, cfg: dict) -> None:
    if "n_cells" in cfg and cfg["n_cells"] < 8:
        raise ConfigError(
            f"invariant violated: n_cells >= 8 (lattice needs interior nodes), "
            f"got {cfg['n_cells']}"
        )
    if "x_min" in cfg and not cfg["x_min"] < cfg["x_max"]:
        raise ConfigError("invariant violated: x_min < x_max")
    if cfg.get("eps", 1.0) <= 0:
        raise ConfigError("invariant violated: eps > 0")
    if any(e <= 0 for e in cfg.get("eps_list", [1.0])):
        raise ConfigError("invariant violated: every eps > 0")
    if cfg.get("T", 1.0) < 0:
        raise ConfigError("invariant violated: T >= 0")
    if cfg.get("data", "zero") not in ("zero", "gaussian", "eps"):
        raise ConfigError(f"unknown data preset {cfg['data']!r}")
    if "system" in cfg:
        system_preset(cfg["system"])  # raises on unknown names


def _grid(cfg: dict) -> Grid1D:
    return Grid1D(cfg["x_min"], cfg["x_max"], cfg["n_cells"])


def _spec(cfg: dict) -> SystemSpec:
    return system_preset(cfg["system"], M=cfg["dirac_mass"], m=cfg["boson_mass"])


def _make_data(cfg: dict, grid: Grid1D, n_potentials: int) -> CauchyData:
    x = grid.nodes
    if cfg["data"] == "eps":
        return eps_data(cfg["eps"], grid, n_potentials)
    zeros = np.zeros((n_potentials, grid.n_nodes))
    if cfg["data"] == "zero":
        psi0 = SpinorSlice(np.zeros((grid.n_nodes, 2), dtype=complex), 0.0)
        return CauchyData(psi0, zeros, zeros.copy(), tag="zero")
    a = cfg["amplitude"]
    f = a * np.exp(-4.0 * x**2)
    g = 0.8 * a * np.exp(-4.0 * (x + 0.3) ** 2)
    psi0 = SpinorSlice(np.stack([f, 1j * g], axis=1), 0.0)
    v = np.zeros((n_potentials, grid.n_nodes))
    w = np.zeros((n_potentials, grid.n_nodes))
    v[0] = 0.3 * a * np.exp(-(x**2))
    w[0] = 0.1 * a * np.exp(-(x**2))
    return CauchyData(psi0, v, w, tag="gaussian")


def emit_fields(trace: SolutionTrace, grid: Grid1D, path) -> None:
    """CSV of every stored slice: t,x,re_u,im_u,re_v,im_v,V1..VN,Vdot1..VdotN
    in t-major order at full double precision."""
    if not trace.spinors:
        raise ValueError("trace holds no stored slices")
    n_pot = trace.potentials[0].n_potentials
    header = ["t", "x", "re_u", "im_u", "re_v", "im_v"]
    header += [f"V{j + 1}" for j in range(n_pot)]
    header += [f"Vdot{j + 1}" for j in range(n_pot)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for sl, pot in zip(trace.spinors, trace.potentials):
            vdot = pot.Vdot if pot.Vdot is not None else np.zeros_like(pot.V)
            for i, xi in enumerate(grid.nodes):
                row = [sl.time, xi, sl.values[i, 0].real, sl.values[i, 0].imag,
                       sl.values[i, 1].real, sl.values[i, 1].imag]
                row += [pot.V[j, i] for j in range(n_pot)]
                row += [vdot[j, i] for j in range(n_pot)]
                writer.writerow([f"{v:.17g}" for v in row])


def read_fields(path):
    """Parse an emit_fields CSV back into (times, nodes, columns dict)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = np.array([[float(v) for v in row] for row in reader])
    if rows.size == 0:
        raise ValueError(f"no data rows in {path}")
    cols = {name: rows[:, k] for k, name in enumerate(header)}
    times = np.unique(cols["t"])
    nodes = rows[rows[:, 0] == times[0], 1]
    return times, nodes, cols


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(out: Path, command: str, cfg: dict) -> None:
    _write_json(out / "manifest.json", {
        "command": command,
        "version": __version__,
        "config": cfg,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    })


def _finish(out: Path, checks: dict) -> int:
    _write_json(out / "diagnostics.json", checks)
    ok = all(c["passed"] for c in checks.values())
    for name, c in checks.items():
        status = "pass" if c["passed"] else "FAIL"
        print(f"{status}  {name}: {c['value']:.6g}")
    return 0 if ok else 4


def cmd_simulate(cfg: dict, out: Path) -> int:
    grid = _grid(cfg)
    spec = _spec(cfg)
    data = _make_data(cfg, grid, spec.n_potentials)
    n_steps = grid.steps(grid.dt * round(cfg["T"] / grid.dt))
    if abs(n_steps * grid.dt - cfg["T"]) > 1e-9:
        raise ConfigError(
            f"invariant violated: T must be a multiple of dt = {grid.dt}"
        )
    stride = cfg["stride"] or max(1, n_steps // 8)
    trace = evolve(data, spec, grid, cfg["T"], stride=stride)
    emit_fields(trace, grid, out / "fields.csv")
    checks = {
        "charge_drift": {
            "value": charge_drift(trace, grid),
            "threshold": cfg["drift_tol"],
            "passed": charge_drift(trace, grid) <= cfg["drift_tol"],
        },
        "energy_margin": {
            "value": energy_margin(trace, grid),
            "threshold": -1e-8,
            "passed": energy_margin(trace, grid) >= -1e-8,
        },
    }
    return _finish(out, checks)


def cmd_picard(cfg: dict, out: Path) -> int:
    grid = _grid(cfg)
    spec = _spec(cfg)
    data = _make_data({**cfg, "data": "gaussian"}, grid, spec.n_potentials)
    R = norms(np.sqrt(np.sum(np.abs(data.psi0.values) ** 2, axis=1)), grid).l2
    R += sum(norms(data.v[j], grid).y + norms(data.w[j], grid).l1
             for j in range(spec.n_potentials))
    T = grid.dt * max(1, int(existence_time(R, cfg["c_cal"]) / grid.dt))
    slices, report = picard_iterate(
        data, spec, grid, T, max_iter=cfg["max_iter"], tol=cfg["tol"]
    )
    residual = fixed_point_residual(slices, data, spec, grid)
    ratio = max(report.contraction_ratios) if report.contraction_ratios else 0.0
    _write_json(out / "fit.json", {
        "R": R, "T": report.T_used, "iterates": report.iterates_kept,
        "distances": report.successive_distances,
        "contraction_ratios": report.contraction_ratios,
    })
    checks = {
        "converged": {"value": float(report.converged), "threshold": 1.0,
                      "passed": report.converged},
        "contraction_ratio": {"value": ratio, "threshold": cfg["ratio_max"],
                              "passed": ratio <= cfg["ratio_max"]},
        "fixed_point_residual": {"value": residual, "threshold": 10 * cfg["tol"],
                                 "passed": residual <= 10 * cfg["tol"]},
        "energy_margin": {"value": report.energy_margin_min, "threshold": -1e-8,
                          "passed": report.energy_margin_min >= -1e-8},
    }
    return _finish(out, checks)


def cmd_illposed_sweep(cfg: dict, out: Path) -> int:
    grid = _grid(cfg)
    spec = _spec(cfg)
    theta = TestFunction(cfg["theta_t0"], cfg["theta_x0"], cfg["theta_r0"])
    fit = sweep_and_fit(cfg["eps_list"], spec, theta, grid, use_oracle=cfg["oracle"])
    with open(out / "pairing.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps", "pairing", "err_estimate"])
        for r in fit.pairings:
            writer.writerow([f"{r.eps:.17g}", f"{r.pairing:.17g}",
                             f"{r.quadrature_error_estimate:.17g}"])
    _write_json(out / "fit.json", {
        "slope": fit.slope, "intercept": fit.intercept,
        "residual": fit.residual, "S0": fit.reference_slope,
    })
    ps = [r.pairing for r in fit.pairings]
    monotone = all(a < b for a, b in zip(ps, ps[1:]))
    checks = {
        "slope_vs_reference": {
            "value": fit.slope / fit.reference_slope,
            "threshold": cfg["slope_factor"],
            "passed": fit.slope >= cfg["slope_factor"] * fit.reference_slope,
        },
        "pairing_monotone": {"value": float(monotone), "threshold": 1.0,
                             "passed": monotone},
    }
    return _finish(out, checks)


def cmd_keybound(cfg: dict, out: Path) -> int:
    grid = _grid(cfg)
    checks = {}
    rows = []
    for eps in cfg["eps_list"]:
        rep = key_bound_report(cfg["dirac_mass"], eps, grid=grid)
        rows.append((eps, rep.min_ratio, rep.gronwall_max))
        checks[f"min_ratio_eps={eps:g}"] = {
            "value": rep.min_ratio, "threshold": cfg["ratio_min"],
            "passed": rep.min_ratio >= cfg["ratio_min"],
        }
        checks[f"gronwall_eps={eps:g}"] = {
            "value": rep.gronwall_max, "threshold": 1.0,
            "passed": rep.gronwall_max <= 1.0,
        }
    with open(out / "keybound.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps", "min_ratio", "gronwall_max"])
        for row in rows:
            writer.writerow([f"{v:.17g}" for v in row])
    return _finish(out, checks)


def cmd_convergence(cfg: dict, out: Path) -> int:
    sol = MasslessSolution(EpsProfile(cfg["eps"]), EpsProfile(cfg["eps"]))
    spec = system_preset("MD")
    errs = []
    for n in cfg["n_list"]:
        grid = Grid1D(cfg["x_min"], cfg["x_max"], int(n))
        trace = evolve(eps_data(cfg["eps"], grid, 2), spec, grid, cfg["T"],
                       stride=grid.steps(cfg["T"]))
        sl, _ = trace.slice_at(cfg["T"])
        exact = sol.spinor(cfg["T"], grid.nodes)
        err = norms(np.sqrt(np.sum(np.abs(sl.values - exact) ** 2, axis=1)), grid).l2
        errs.append((int(n), err))
    with open(out / "convergence.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_cells", "l2_error"])
        for n, e in errs:
            writer.writerow([n, f"{e:.17g}"])
    orders = [float(np.log2(errs[k][1] / errs[k + 1][1]))
              for k in range(len(errs) - 1)]
    worst = min(orders) if orders else float("nan")
    checks = {
        "observed_order": {"value": worst, "threshold": cfg["order_min"],
                           "passed": worst >= cfg["order_min"]},
        "error_decreasing": {
            "value": float(all(a[1] > b[1] for a, b in zip(errs, errs[1:]))),
            "threshold": 1.0,
            "passed": all(a[1] > b[1] for a, b in zip(errs, errs[1:])),
        },
    }
    return _finish(out, checks)


COMMANDS = {
    "simulate": cmd_simulate,
    "picard": cmd_picard,
    "illposed-sweep": cmd_illposed_sweep,
    "keybound": cmd_keybound,
    "convergence": cmd_convergence,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="charge-class",
        description="run simulation and verification experiments",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="flat JSON config file")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--n-cells", type=int, dest="n_cells")
    parser.add_argument("--eps-list", dest="eps_list",
                        help="comma-separated eps values")
    args = parser.parse_args(argv)

    overrides = {"n_cells": args.n_cells}
    if args.eps_list is not None:
        try:
            overrides["eps_list"] = [float(v) for v in args.eps_list.split(",")]
        except ValueError as exc:
            print(f"config error: bad --eps-list: {exc}", file=sys.stderr)
            return 2

    try:
        cfg = resolve_config(args.command, args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(out, args.command, cfg)
    try:
        return COMMANDS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
