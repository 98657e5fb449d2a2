"""Command line harness: run, reference, sweep, validate.

Exit codes: 0 success, 1 run or validation failure, 2 invalid configuration.
Every output file is bitwise reproducible from the configuration and seed
alone (the sweep summary's wall_time_s column is the sole timing field).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace

import numpy as np

from .averaging import default_node_count
from .config import ConfigError, RunConfig, default_config, format_config, load_config
from .diagnostics import make_error_report
from .dynamics import PhysicsParams, State, max_frequency
from .grid import make_grid
from .integrator import Trajectory, make_step_config, run
from .io import (read_snapshot_state, write_diagnostics, write_error_report,
                 write_snapshot)
from .testcase import CaseParams, balanced_jet, physics_params
from .validation import run_validation

__all__ = ["build_problem", "cmd_run", "cmd_reference", "cmd_sweep",
           "cmd_validate", "main"]


def build_problem(cfg: RunConfig):
    """Grid, physics, and initial state for the configured jet + mountain case."""
    grid = make_grid(cfg.nx, cfg.ny, cfg.Lx, cfg.Ly)
    case = CaseParams(f=cfg.f, g=cfg.g, H=cfg.H, u0=cfg.u0,
                      jet_width=cfg.jet_width, b0=cfg.b0, r0=cfg.r0,
                      xc=cfg.xc, yc=cfg.yc)
    params = physics_params(case, grid, with_mountain=cfg.b0 > 0)
    return grid, case, params, balanced_jet(case, grid)


def _write_run_outputs(outdir: str, cfg: RunConfig, traj: Trajectory) -> None:
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "config.resolved"), "w", encoding="utf-8") as fh:
        fh.write(format_config(cfg))
    for step, state in zip(traj.steps, traj.states):
        write_snapshot(outdir, step, state)
    write_diagnostics(outdir, traj.times, traj.steps, traj.energy, traj.mass,
                      traj.max_speed)


def _load_reference(path: str, final: State) -> State:
    ref = read_snapshot_state(path)
    if (ref.grid.nx, ref.grid.ny) != (final.grid.nx, final.grid.ny):
        raise ValueError(f"reference grid {(ref.grid.nx, ref.grid.ny)} does not "
                         f"match run grid {(final.grid.nx, final.grid.ny)}")
    if abs(ref.t - final.t) > 1e-6 * max(1.0, abs(final.t)):
        raise ValueError(f"reference time {ref.t} does not match run final "
                         f"time {final.t}")
    return ref


def _execute(cfg: RunConfig, outdir: str, dt: float, T: float, M: int | None,
             propagator: str) -> tuple[Trajectory, State]:
    grid, _case, params, state0 = build_problem(cfg)
    step_cfg = make_step_config(grid, params, dt=dt, T=T, M=M,
                                propagator=propagator, tol=cfg.tol)
    traj = run(state0, step_cfg, params, cfg.t_end,
               snapshot_every=cfg.snapshot_every, workers=cfg.workers)
    _write_run_outputs(outdir, cfg, traj)
    return traj, params


def cmd_run(cfg: RunConfig) -> int:
    """Phase-averaged run; writes snapshots, diagnostics, and (against a
    reference, if configured) an error report."""
    traj, params = _execute(cfg, cfg.output_dir, cfg.dt, cfg.T, cfg.M,
                            cfg.propagator)
    final = traj.states[-1]
    print(f"run: {traj.steps[-1]} steps to t = {final.t:g} s, "
          f"{len(traj.states)} snapshots -> {cfg.output_dir}")
    if cfg.reference_path:
        ref = _load_reference(cfg.reference_path, final)
        report = make_error_report(final, ref, params, traj.states[0])
        write_error_report(os.path.join(cfg.output_dir, "error_report.txt"), report)
        print(f"errors vs reference: l2_eta = {report.l2_eta:.6g}, "
              f"l2_u = {report.l2_u:.6g}")
    return 0


def cmd_reference(cfg: RunConfig) -> int:
    """Unaveraged fine-step reference run (T = 0, exact propagator, dt = ref_dt)."""
    ref_cfg = replace(cfg, dt=cfg.ref_dt, T=0.0, M=0, propagator="exact")
    traj, _params = _execute(ref_cfg, cfg.output_dir, cfg.ref_dt, 0.0, 0, "exact")
    drift = abs(traj.energy[-1] - traj.energy[0]) / max(abs(traj.energy[0]), 1e-300)
    print(f"reference: {traj.steps[-1]} steps to t = {traj.times[-1]:g} s, "
          f"energy drift {drift:.3e} -> {cfg.output_dir}")
    return 0


def _sweep_node_count(cfg: RunConfig, T: float) -> int:
    if cfg.M is not None:
        return cfg.M if T > 0 else 0
    grid = make_grid(cfg.nx, cfg.ny, cfg.Lx, cfg.Ly)
    params = PhysicsParams(f=cfg.f, g=cfg.g, H=cfg.H, b=np.zeros((cfg.nx, cfg.ny)))
    return default_node_count(T, max_frequency(grid, params))


def cmd_sweep(cfg: RunConfig, t_list: list[float]) -> int:
    """Run the window sweep against the configured reference; one CSV row per T."""
    if not cfg.reference_path:
        raise ConfigError("sweep needs reference_path pointing at a reference run")
    if not t_list:
        raise ConfigError("sweep needs a nonempty T list")
    os.makedirs(cfg.output_dir, exist_ok=True)
    rows = []
    failures = 0
    ref = None
    for T in t_list:
        subdir = os.path.join(cfg.output_dir, f"T_{T:g}s")
        M = None if cfg.M is None else (cfg.M if T > 0 else 0)
        run_cfg = replace(cfg, T=T, M=M, output_dir=subdir)
        started = time.perf_counter()
        try:
            traj, params = _execute(run_cfg, subdir, cfg.dt, T, M, cfg.propagator)
            final = traj.states[-1]
            if ref is None:
                ref = _load_reference(cfg.reference_path, final)
            report = make_error_report(final, ref, params, traj.states[0])
            write_error_report(os.path.join(subdir, "error_report.txt"), report)
            elapsed = time.perf_counter() - started
            rows.append((T, _sweep_node_count(cfg, T), report.l2_eta,
                         report.l2_u, elapsed))
            print(f"T = {T:g} s: l2_eta = {report.l2_eta:.6g}, "
                  f"l2_u = {report.l2_u:.6g} ({elapsed:.1f} s)")
        except Exception as exc:
            elapsed = time.perf_counter() - started
            failures += 1
            rows.append((T, _sweep_node_count(cfg, T), float("nan"),
                         float("nan"), elapsed))
            print(f"T = {T:g} s: FAILED: {exc}", file=sys.stderr)
    with open(os.path.join(cfg.output_dir, "sweep.csv"), "w", encoding="utf-8") as fh:
        fh.write("T_seconds,M,l2_eta,l2_u,wall_time_s\n")
        for T, M, l2_eta, l2_u, wall in rows:
            fh.write(f"{T!r},{M},{l2_eta!r},{l2_u!r},{wall!r}\n")
    return 1 if failures else 0


def cmd_validate(cfg: RunConfig, level: str = "fast") -> int:
    """Oracle self-checks; full level appends the 15-day sweep experiment."""
    results = run_validation(level=level, seed=cfg.seed, workers=cfg.workers,
                             cfg=cfg)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        if not r.ok:
            failed += 1
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="phaseswe",
        description="Phase-averaged rotating shallow water simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (("run", "phase-averaged run"),
                       ("reference", "fine-step unaveraged reference run"),
                       ("sweep", "averaging-window sweep against a reference"),
                       ("validate", "oracle self-checks")):
        sp = sub.add_parser(name, help=desc)
        sp.add_argument("--config", help="path to key = value config file")
        sp.add_argument("--workers", type=int, help="worker threads")
        sp.add_argument("--output", help="output directory")
        if name == "sweep":
            sp.add_argument("--tlist", required=True,
                            help="comma-separated window half-widths in seconds")
        if name == "validate":
            sp.add_argument("--level", choices=("fast", "full"), default="fast")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else default_config()
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError(f"workers must be at least 1, got {args.workers}")
            cfg = replace(cfg, workers=args.workers)
        if args.output is not None:
            cfg = replace(cfg, output_dir=args.output)
        if args.command == "sweep":
            try:
                t_list = [float(part) for part in args.tlist.split(",") if part.strip()]
            except ValueError:
                raise ConfigError(f"--tlist must be comma-separated numbers, "
                                  f"got {args.tlist!r}") from None
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "reference":
            return cmd_reference(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, t_list)
        return cmd_validate(cfg, level=args.level)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
