"""Command-line entry point: ``lognls {groundstate,simulate,stability,checks}``.

Runs are configured by an INI file (``--config``) with a ``[grid]`` section
and one section per command; unknown sections or keys are errors.  Exit
codes: 0 success, 1 property failure / non-convergence, 2 configuration
error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .checks import run_checks
from .evolve import EvolutionAborted, EvolveOptions, evolve_run
from .functionals import w_norm
from .gausson import GaussonParams, gausson_field
from .grid import make_grid
from .ground_state import MinimizeOptions, anisotropic_init, minimize_action
from .io import atomic_write, distance_plot_script, drift_plot_script, write_json, write_snapshot
from .stability import PERTURBATION_KINDS, PerturbationSpec, make_perturbation, stability_experiment

log = logging.getLogger("lognls")

EXIT_OK, EXIT_PROPERTY, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2, 3
GROUNDSTATE_TOL = 1e-3


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    items = [t for t in text.replace(",", " ").split() if t]
    return [float(t) for t in items]


def _str(text: str) -> str:
    return text.strip()


SECTIONS = {
    "grid": {"dim": int, "half_width": float, "points": int},
    "groundstate": {
        "omegas": _floats,
        "init": _str,
        "max_iters": int,
        "grad_tol": float,
        "step_init": float,
        "backtrack_factor": float,
    },
    "simulate": {
        "omega": float,
        "init": _str,
        "scale": float,
        "delta": float,
        "dt": float,
        "t_final": float,
        "amp_floor": float,
        "snapshot_every": int,
        "diagnostics_every": int,
    },
    "stability": {
        "omega": float,
        "kind": _str,
        "deltas": _floats,
        "band_limit": float,
        "dt": float,
        "t_final": float,
        "amp_floor": float,
        "diagnostics_every": int,
    },
    "checks": {"n_fields": int, "seeds": int, "fault": _str},
}

GRID_DEFAULTS = {1: (12.0, 256), 2: (10.0, 128), 3: (8.0, 64)}

DEFAULTS = {
    "groundstate": {"omegas": [-1.0, 0.0, 1.0], "init": "random", "max_iters": 20000, "grad_tol": 1e-6,
                    "step_init": 0.1, "backtrack_factor": 0.5},
    "simulate": {"omega": 0.0, "init": "perturbed", "scale": 1.05, "delta": 0.01, "dt": 1e-3, "t_final": 10.0,
                 "amp_floor": 1e-30, "snapshot_every": 0, "diagnostics_every": 100},
    "stability": {"omega": 0.0, "kind": "random_bandlimited", "deltas": [0.01], "band_limit": 3.0, "dt": 1e-3,
                  "t_final": 20.0, "amp_floor": 1e-30, "diagnostics_every": 250},
    "checks": {"n_fields": 100, "seeds": 1, "fault": "none"},
}


@dataclass
class RunConfig:
    command: str
    dim: int
    half_width: float
    points: int
    params: dict
    out: Path
    seed: int = 0
    jobs: int = 1
    quiet: bool = False

    def grid(self):
        return make_grid(self.dim, self.half_width, self.points)


def load_config(command: str, path=None, text: str | None = None) -> tuple[dict, dict]:
    """Parse an INI config into ``(grid_params, command_params)``."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__", inline_comment_prefixes=(";", "#"))
    try:
        if path is not None:
            with open(path) as fh:
                parser.read_file(fh)
        elif text is not None:
            parser.read_string(text)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    parsed: dict[str, dict] = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        types = SECTIONS[section]
        values = {}
        for key, raw in parser.items(section):
            if key not in types:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                values[key] = types[key](raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc
        parsed[section] = values
    params = dict(DEFAULTS[command])
    params.update(parsed.get(command, {}))
    return parsed.get("grid", {}), params


def build_config(args) -> RunConfig:
    grid_params, params = load_config(args.command, args.config)
    dim = grid_params.get("dim", 1)
    if dim not in GRID_DEFAULTS:
        raise ConfigError(f"grid.dim must be 1, 2 or 3, got {dim}")
    half_width, points = GRID_DEFAULTS[dim]
    half_width = grid_params.get("half_width", half_width)
    points = grid_params.get("points", points)
    out_root = args.out or os.environ.get("LOGNLS_OUT") or "lognls_out"
    cfg = RunConfig(
        command=args.command,
        dim=dim,
        half_width=half_width,
        points=points,
        params=params,
        out=Path(out_root) / args.command,
        seed=args.seed,
        jobs=max(1, args.jobs),
        quiet=args.quiet,
    )
    try:
        cfg.grid()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.command == "checks" and getattr(args, "fault", None):
        params["fault"] = args.fault
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    p = cfg.params
    try:
        if cfg.command == "groundstate":
            if not p["omegas"]:
                raise ConfigError("groundstate.omegas must list at least one value")
            if p["init"] not in ("random", "gausson-perturbed", "anisotropic"):
                raise ConfigError(f"unknown groundstate.init {p['init']!r}")
            MinimizeOptions(p["max_iters"], p["grad_tol"], p["step_init"], p["backtrack_factor"], cfg.seed)
        elif cfg.command == "simulate":
            if p["init"] not in ("gausson", "scaled", "perturbed"):
                raise ConfigError(f"unknown simulate.init {p['init']!r}")
            _evolve_opts(p)
        elif cfg.command == "stability":
            if not p["deltas"]:
                raise ConfigError("stability.deltas must list at least one value")
            if p["kind"] not in PERTURBATION_KINDS:
                raise ConfigError(f"unknown stability.kind {p['kind']!r}")
            _evolve_opts(p)
            limit = 0.1 * w_norm(gausson_field(GaussonParams(p["omega"], cfg.dim), cfg.grid()))
            for d in p["deltas"]:
                PerturbationSpec(p["kind"], d, cfg.seed, p["band_limit"])
                if d > limit:
                    raise ConfigError(f"delta={d} exceeds 0.1 * ||phi_w||_W = {limit:.4g}")
        elif cfg.command == "checks":
            if p["fault"] not in ("none", "a_seam"):
                raise ConfigError(f"unknown checks.fault {p['fault']!r}")
            if p["n_fields"] < 1 or p["seeds"] < 1:
                raise ConfigError("checks.n_fields and checks.seeds must be >= 1")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _evolve_opts(p) -> EvolveOptions:
    return EvolveOptions(
        dt=p["dt"],
        t_final=p["t_final"],
        amp_floor=p["amp_floor"],
        snapshot_every=p.get("snapshot_every", 0),
        diagnostics_every=p["diagnostics_every"],
    )


def _tag(x: float) -> str:
    return f"{x:g}".replace("+", "")


def _map(cfg: RunConfig, fn, tasks):
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def _echo(cfg: RunConfig, text: str):
    if not cfg.quiet:
        print(text)


# ------------------------------------------------------------------ commands


def _groundstate_job(task):
    cfg, omega = task
    p = cfg.params
    grid = cfg.grid()
    opts = MinimizeOptions(p["max_iters"], p["grad_tol"], p["step_init"], p["backtrack_factor"], cfg.seed)
    init = anisotropic_init(grid) if p["init"] == "anisotropic" else p["init"]
    return minimize_action(omega, grid, init, opts)


def cmd_groundstate(cfg: RunConfig) -> int:
    results = _map(cfg, _groundstate_job, [(cfg, w) for w in cfg.params["omegas"]])
    rows = []
    for res in results:
        stem = f"groundstate_omega{_tag(res.omega)}"
        write_json(cfg.out / f"{stem}.json", res.to_dict())
        write_snapshot(cfg.out / f"{stem}.snap", res.minimizer)
        rows.append([res.omega, cfg.dim, res.action_value, res.d_closed_ref, res.relative_error,
                     res.converged, res.iterations, res.orbit_distance_l2])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["omega", "dim", "action", "d_closed", "relative_error", "converged", "iterations",
                     "orbit_distance_l2"])
    writer.writerows([[repr(v) if isinstance(v, float) else v for v in r] for r in rows])
    atomic_write(cfg.out / "table.csv", buf.getvalue())
    _echo(cfg, buf.getvalue().rstrip())
    ok = all(r.converged and r.relative_error <= GROUNDSTATE_TOL for r in results)
    return EXIT_OK if ok else EXIT_PROPERTY


def _simulate_init(cfg: RunConfig):
    p = cfg.params
    grid = cfg.grid()
    base = GaussonParams(p["omega"], cfg.dim)
    if p["init"] == "gausson":
        return gausson_field(base, grid)
    if p["init"] == "scaled":
        return gausson_field(base, grid) * p["scale"]
    return make_perturbation(base, PerturbationSpec("random_bandlimited", p["delta"], cfg.seed), grid)


def cmd_simulate(cfg: RunConfig) -> int:
    p = cfg.params
    opts = _evolve_opts(p)
    init = _simulate_init(cfg)
    code = EXIT_OK
    try:
        diag = evolve_run(init, opts, omega_ref=p["omega"])
    except EvolutionAborted as exc:
        diag = exc.diagnostics
        code = EXIT_ABORT
        log.error("%s", exc)
    atomic_write(cfg.out / "diagnostics.csv", diag.to_csv())
    atomic_write(cfg.out / "plot_drift.py", drift_plot_script("diagnostics.csv"))
    for i, (t, snap) in enumerate(diag.snapshots):
        write_snapshot(cfg.out / f"snapshot_{i:05d}.snap", snap, t)
    summary = dict(diag.summary(), omega=p["omega"], dt=opts.dt, steps=opts.n_steps, aborted=code == EXIT_ABORT)
    write_json(cfg.out / "summary.json", summary)
    _echo(cfg, json.dumps(summary, sort_keys=True))
    return code


def _stability_job(task):
    cfg, delta = task
    p = cfg.params
    spec = PerturbationSpec(p["kind"], delta, cfg.seed, p["band_limit"])
    try:
        return stability_experiment(p["omega"], cfg.grid(), spec, _evolve_opts(p)), None
    except FloatingPointError as exc:
        return getattr(exc, "report", None), str(exc)


def cmd_stability(cfg: RunConfig) -> int:
    deltas = cfg.params["deltas"]
    outcomes = _map(cfg, _stability_job, [(cfg, d) for d in deltas])
    code = EXIT_OK
    csv_names = []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta", "kind", "initial_distance_w", "max_distance_w", "ratio", "max_charge_drift",
                     "max_energy_drift", "aborted"])
    for delta, (rep, err) in zip(deltas, outcomes):
        if err:
            code = EXIT_ABORT
            log.error("delta=%g: %s", delta, err)
        if rep is None:
            continue
        stem = f"stability_delta{_tag(delta)}"
        write_json(cfg.out / f"{stem}.json", rep.to_dict())
        atomic_write(cfg.out / f"{stem}.csv", rep.to_csv())
        csv_names.append(f"{stem}.csv")
        cons = rep.conservation
        writer.writerow([repr(delta), rep.spec.kind, repr(rep.initial_distance_w), repr(rep.max_distance_w),
                         repr(rep.max_distance_w / delta if delta else 0.0), repr(cons.get("max_charge_drift", math.nan)),
                         repr(cons.get("max_energy_drift", math.nan)), rep.aborted])
    atomic_write(cfg.out / "summary.csv", buf.getvalue())
    if csv_names:
        atomic_write(cfg.out / "plot_distance.py", distance_plot_script(csv_names))
    _echo(cfg, buf.getvalue().rstrip())
    return code


def cmd_checks(cfg: RunConfig) -> int:
    p = cfg.params
    fault = None if p["fault"] == "none" else p["fault"]
    results = []
    for s in range(cfg.seed, cfg.seed + p["seeds"]):
        for r in run_checks(seed=s, n_fields=p["n_fields"], fault=fault):
            results.append((s, r))
    write_json(cfg.out / "checks.json", [dict(r.to_dict(), seed=s) for s, r in results])
    lines = [f"{'seed':>4}  {'check':<22} {'status':<6} {'worst':>12}  {'threshold':>10}"]
    for s, r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{s:>4}  {r.name:<22} {status:<6} {r.worst:>12.4e}  {r.threshold:>10.1e}  {r.detail}")
    _echo(cfg, "\n".join(lines))
    return EXIT_OK if all(r.passed for _, r in results) else EXIT_PROPERTY


COMMANDS = {
    "groundstate": cmd_groundstate,
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "checks": cmd_checks,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS, help="INI run configuration")
    common.add_argument("--out", metavar="DIR", default=argparse.SUPPRESS, help="output root (default $LOGNLS_OUT)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (u64)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="concurrent independent jobs")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="lognls", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("groundstate", parents=[common], help="Nehari-manifold ground states vs the closed form")
    sub.add_parser("simulate", parents=[common], help="Strang-split evolution with conservation diagnostics")
    sub.add_parser("stability", parents=[common], help="orbit distance of a perturbed Gausson over time")
    checks = sub.add_parser("checks", parents=[common], help="randomized property suites")
    checks.add_argument("--fault", choices=["a_seam"], help="inject a fault to self-test the harness")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    for name, default in (("config", None), ("out", None), ("seed", 0), ("jobs", 1), ("quiet", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.seed < 0 or args.seed >= 2**64:
        print("lognls: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="lognls: %(message)s")
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"lognls: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return COMMANDS[args.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
