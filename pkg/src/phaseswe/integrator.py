"""Transformed SSPRK3 time stepping for the phase-averaged system.

The scheme advances U_t = L U + N(U) by applying the three-stage strong
stability preserving Runge-Kutta method to the exponentially transformed
variable V = e^{-Lt} U, which after changing back to U gives, with
A(U) = <e^{-Ls} N(e^{Ls} U)>_s the averaged tendency,

    U1      = e^{L dt} U^n  +  dt e^{L dt} A(U^n)
    U2      = 3/4 e^{L dt/2} U^n  +  1/4 e^{-L dt/2} [U1 + dt A(U1)]
    U^{n+1} = 1/3 e^{L dt} U^n  +  2/3 e^{L dt/2} [U2 + dt A(U2)]

The linear part is treated exactly: with N = 0 a step reduces to e^{L dt} up
to the group-law round-off of the propagator.  The reference configuration is
the same scheme with a zero-width window (T = 0, M = 0), the exact
propagator, and a fine step.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .averaging import Quadrature, averaged_tendency, default_node_count, kernel_weights, Kernel, BUMP_KERNEL
from .diagnostics import energy_mass
from .dynamics import PhysicsParams, State, apply_nonlinear, max_frequency
from .grid import SpectralGrid, to_physical
from .propagator import PropagatorSpec, choose_npoly, propagate

__all__ = [
    "StepConfig",
    "make_step_config",
    "step_averaged_ssprk3",
    "step_reference",
    "Trajectory",
    "run",
]


@dataclass(frozen=True)
class StepConfig:
    """Time step, averaging quadrature, and propagator route for one stepper."""

    dt: float
    quadrature: Quadrature
    propagator_spec: PropagatorSpec

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")


def make_step_config(grid: SpectralGrid, params: PhysicsParams, dt: float,
                     T: float = 0.0, M: int | None = None,
                     propagator: str = "exact", tol: float = 1e-10,
                     kernel: Kernel = BUMP_KERNEL) -> StepConfig:
    """Resolve a stepper configuration for the given grid and physics.

    M = None picks the default node count from the fastest mode.  For the
    Chebyshev route, Lambda covers the largest exponential argument the
    stages can request, max(dt, T + dt), with the degree chosen from tol.
    """
    if M is None:
        M = default_node_count(T, max_frequency(grid, params))
    quad = kernel_weights(T, M, kernel)
    if propagator == "exact":
        spec = PropagatorSpec.exact()
    elif propagator == "chebyshev":
        lam = max_frequency(grid, params) * max(dt, T + dt)
        spec = PropagatorSpec.chebyshev(lam, tol=tol, n_poly=choose_npoly(lam, tol))
    else:
        raise ValueError(f"unknown propagator {propagator!r}")
    return StepConfig(dt=float(dt), quadrature=quad, propagator_spec=spec)


def _require_finite(state: State, stage: int) -> None:
    for name in ("u", "v", "eta"):
        if not np.all(np.isfinite(getattr(state, name))):
            raise RuntimeError(f"non-finite values in field {name} after stage {stage}")


def step_averaged_ssprk3(state: State, config: StepConfig, params: PhysicsParams,
                         executor=None, nonlinear=apply_nonlinear) -> State:
    """Advance one step of the transformed SSPRK3 scheme."""
    dt = config.dt
    quad = config.quadrature
    spec = config.propagator_spec

    def E(t: float, s: State) -> State:
        return propagate(t, s, params, spec)

    def A(s: State) -> State:
        return averaged_tendency(s, quad, params, spec, executor, nonlinear)

    e_dt_un = E(dt, state)
    u1 = e_dt_un + dt * E(dt, A(state))
    _require_finite(u1, 1)
    u2 = 0.75 * E(0.5 * dt, state) + 0.25 * E(-0.5 * dt, u1 + dt * A(u1))
    _require_finite(u2, 2)
    out = (1.0 / 3.0) * e_dt_un + (2.0 / 3.0) * E(0.5 * dt, u2 + dt * A(u2))
    _require_finite(out, 3)
    return out.with_time(state.t + dt)


def step_reference(state: State, dt_fine: float, params: PhysicsParams) -> State:
    """One unaveraged step: T = 0, M = 0, exact propagator, step dt_fine."""
    config = StepConfig(dt=dt_fine, quadrature=kernel_weights(0.0, 0),
                        propagator_spec=PropagatorSpec.exact())
    return step_averaged_ssprk3(state, config, params)


@dataclass
class Trajectory:
    """Snapshots plus per-snapshot diagnostics from a run."""

    times: list[float] = field(default_factory=list)
    steps: list[int] = field(default_factory=list)
    states: list[State] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    max_speed: list[float] = field(default_factory=list)

    def record(self, step: int, state: State, params: PhysicsParams) -> None:
        en, ms = energy_mass(state, params)
        g = state.grid
        vel_scale = max(float(np.max(np.abs(state.u))), float(np.max(np.abs(state.v))))
        speed = np.hypot(to_physical(g, state.u, vel_scale),
                         to_physical(g, state.v, vel_scale))
        self.times.append(state.t)
        self.steps.append(step)
        self.states.append(state)
        self.energy.append(en)
        self.mass.append(ms)
        self.max_speed.append(float(speed.max()))


def _exact_multiple(value: float, dt: float, what: str) -> int:
    n = value / dt
    if abs(n - round(n)) > 1e-9 * max(1.0, abs(n)):
        raise ValueError(f"{what} = {value} is not a multiple of dt = {dt}")
    return int(round(n))


def run(initial: State, config: StepConfig, params: PhysicsParams, t_end: float,
        snapshot_every: float = 0.0, workers: int = 1) -> Trajectory:
    """Step from the initial state to t_end, recording snapshots and diagnostics.

    t_end must be a nonnegative multiple of dt; snapshot_every must be a
    positive multiple of dt, or 0 to record only the initial and final states.
    The initial and final states are always recorded.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    n_steps = _exact_multiple(t_end, config.dt, "t_end")
    if snapshot_every == 0.0:
        stride = 0
    else:
        stride = _exact_multiple(snapshot_every, config.dt, "snapshot_every")
        if stride <= 0:
            raise ValueError(f"snapshot_every must be positive, got {snapshot_every}")

    traj = Trajectory()
    traj.record(0, initial, params)
    if n_steps == 0:
        return traj

    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        state = initial
        for i in range(1, n_steps + 1):
            try:
                state = step_averaged_ssprk3(state, config, params, executor)
            except Exception as exc:
                raise RuntimeError(f"step {i} (t = {state.t:.6g} s) failed: {exc}") from exc
            if i == n_steps or (stride > 0 and i % stride == 0):
                traj.record(i, state, params)
    finally:
        if executor is not None:
            executor.shutdown(wait=False)
    return traj
