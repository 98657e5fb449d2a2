"""Self-check battery behind the validate subcommand.

Each check rebuilds its expected answer from an independent route (direct
convolution sums, dense per-mode matrices, Bessel power series, brute-force
quadrature) and compares the production code against it.  fast finishes in
well under a minute; full adds the 15-day averaging-window experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import propagator as _prop
from .config import RunConfig
from .diagnostics import l2_error_normalized
from .dynamics import (State, apply_linear, apply_nonlinear,
                       energy_norm, flat_bottom, max_frequency)
from .grid import dealias, make_grid, to_physical, to_spectral
from .integrator import make_step_config, run, step_averaged_ssprk3
from .propagator import PropagatorSpec, exact_exp
from .testcase import balanced_jet, default_case, physics_params

__all__ = ["CheckResult", "run_validation"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _random_state(grid, params, rng, eta_scale=100.0) -> State:
    def fld(scale):
        c = to_spectral(grid, rng.standard_normal((grid.nx, grid.ny)))
        return scale * dealias(grid, c)
    return State(grid=grid, u=fld(1.0), v=fld(1.0), eta=fld(eta_scale), t=0.0)


def _wrap(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0 / n).astype(int)


def _check_roundtrip(rng) -> CheckResult:
    grid = make_grid(64, 64, 4.0e7, 4.0e7)
    f = rng.standard_normal((64, 64))
    back = to_physical(grid, to_spectral(grid, f))
    err = float(np.max(np.abs(back - f))) / float(np.max(np.abs(f)))
    # Parseval: physical Riemann sum against the coefficient sum
    g2 = rng.standard_normal((64, 64))
    phys = float(np.sum(f * g2) * grid.cell_area)
    spec = float(np.real(np.vdot(to_spectral(grid, g2), to_spectral(grid, f)))
                 * grid.Lx * grid.Ly / (64 * 64) ** 2)
    perr = abs(phys - spec) / abs(phys)
    ok = err <= 1e-13 and perr <= 1e-12
    return CheckResult("transform round-trip + Parseval", ok,
                       f"roundtrip {err:.2e}, parseval {perr:.2e}")


def _convolve_truncated(grid, ca, cb) -> np.ndarray:
    # direct O(n^4) sum of the dealiased product's spectral coefficients
    nx, ny = grid.nx, grid.ny
    wx, wy = _wrap(nx), _wrap(ny)
    pos = {(wx[i], wy[j]): (i, j) for i in range(nx) for j in range(ny)}
    out = np.zeros((nx, ny), dtype=np.complex128)
    nz = [(wx[i], wy[j], ca[i, j]) for i in range(nx) for j in range(ny)
          if ca[i, j] != 0]
    nzb = [(wx[i], wy[j], cb[i, j]) for i in range(nx) for j in range(ny)
           if cb[i, j] != 0]
    for px, py, av in nz:
        for qx, qy, bv in nzb:
            key = (px + qx, py + qy)
            if key in pos:
                out[pos[key]] += av * bv
    out /= nx * ny
    return np.where(grid.dealias_mask, out, 0.0)


def _check_convolution(rng) -> CheckResult:
    grid = make_grid(8, 8, 2.0 * np.pi, 2.0 * np.pi)
    ca = dealias(grid, to_spectral(grid, rng.standard_normal((8, 8))))
    cb = dealias(grid, to_spectral(grid, rng.standard_normal((8, 8))))
    prod = dealias(grid, to_spectral(grid, to_physical(grid, ca) * to_physical(grid, cb)))
    exact = _convolve_truncated(grid, ca, cb)
    err = float(np.max(np.abs(prod - exact))) / float(np.max(np.abs(exact)))
    return CheckResult("dealiased product = truncated convolution", err <= 1e-12,
                       f"max rel {err:.2e}")


def _check_linear_matrix(rng) -> CheckResult:
    grid = make_grid(8, 8, 2.0 * np.pi, 2.0 * np.pi)
    params = flat_bottom(grid, f=1.3, g=2.7, H=0.9)
    st = State(grid=grid, u=rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)),
               v=rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)),
               eta=rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
    out = apply_linear(st, params)
    worst = 0.0
    for i in range(8):
        for j in range(8):
            kx, ky = grid.kx[i], grid.ky[j]
            mat = np.array([[0.0, params.f, -1j * params.g * kx],
                            [-params.f, 0.0, -1j * params.g * ky],
                            [-1j * params.H * kx, -1j * params.H * ky, 0.0]])
            vec = np.array([st.u[i, j], st.v[i, j], st.eta[i, j]])
            expect = mat @ vec
            got = np.array([out.u[i, j], out.v[i, j], out.eta[i, j]])
            worst = max(worst, float(np.max(np.abs(got - expect))))
    scale = max(float(np.max(np.abs(a))) for a in (out.u, out.v, out.eta))
    rel = worst / scale
    return CheckResult("linear operator = per-mode 3x3 matrix", rel <= 1e-13,
                       f"max rel {rel:.2e}")


def _check_nonlinear_oracle(rng) -> CheckResult:
    grid = make_grid(8, 8, 2.0 * np.pi, 2.0 * np.pi)
    params = flat_bottom(grid, f=1.0, g=1.5, H=2.0)
    st = _random_state(grid, params, rng, eta_scale=0.3)
    out = apply_nonlinear(st, params)
    ikx = 1j * grid.kx[:, None]
    iky = 1j * grid.ky[None, :]
    adv_u = -(_convolve_truncated(grid, st.u, ikx * st.u)
              + _convolve_truncated(grid, st.v, iky * st.u))
    adv_v = -(_convolve_truncated(grid, st.u, ikx * st.v)
              + _convolve_truncated(grid, st.v, iky * st.v))
    depth = st.eta - params.b
    deta = -(ikx * _convolve_truncated(grid, st.u, depth)
             + iky * _convolve_truncated(grid, st.v, depth))
    deta = np.where(grid.dealias_mask, deta, 0.0)
    scale = max(float(np.max(np.abs(a))) for a in (adv_u, adv_v, deta))
    worst = max(float(np.max(np.abs(out.u - adv_u))),
                float(np.max(np.abs(out.v - adv_v))),
                float(np.max(np.abs(out.eta - deta)))) / scale
    return CheckResult("nonlinear tendency = convolution oracle", worst <= 1e-12,
                       f"max rel {worst:.2e}")


def _check_exact_exp_group(rng) -> CheckResult:
    grid = make_grid(32, 32, 4.0e7, 4.0e7)
    case = default_case()
    params = physics_params(case, grid, with_mountain=False)
    st = _random_state(grid, params, rng)
    t = 5431.0
    fwd = exact_exp(t, st, params)
    checks = {
        "identity": energy_norm(exact_exp(0.0, st, params) - st, params),
        "group": energy_norm(exact_exp(t / 2, exact_exp(t / 2, st, params), params)
                             - fwd, params),
        "inverse": energy_norm(exact_exp(-t, fwd, params) - st, params),
        "isometry": abs(energy_norm(fwd, params) - energy_norm(st, params)),
    }
    ref = energy_norm(st, params)
    worst = max(v / ref for v in checks.values())
    return CheckResult("exact propagator group law + isometry", worst <= 1e-12,
                       f"max rel {worst:.2e}")


def _bessel_series(k: int, x: float) -> float:
    # power series J_k(x) = sum_m (-1)^m (x/2)^{k+2m} / (m! (m+k)!)
    term = (x / 2.0) ** k / math.factorial(k)
    total = term
    for m in range(1, 200):
        term *= -((x / 2.0) ** 2) / (m * (m + k))
        total += term
        if abs(term) < 1e-300:
            break
    return total


def _check_cheb_coeffs() -> CheckResult:
    lam = 5.0
    coeffs = _prop.cheb_coeffs(lam, 30)
    worst = 0.0
    for k in range(31):
        expect = (1.0 if k == 0 else 2.0) * _bessel_series(k, lam)
        worst = max(worst, abs(float(coeffs.a[k]) - expect))
    return CheckResult("Chebyshev coefficients = Bessel series", worst <= 1e-12,
                       f"max abs {worst:.2e}")


def _check_cheb_vs_exact(rng) -> CheckResult:
    grid = make_grid(64, 64, 4.0e7, 4.0e7)
    case = default_case()
    params = physics_params(case, grid)
    lam = max_frequency(grid, params) * 3600.0
    spec = PropagatorSpec.chebyshev(lam, tol=1e-12)
    worst = 0.0
    for _ in range(3):
        st = _random_state(grid, params, rng)
        a = exact_exp(3600.0, st, params)
        b = _prop.cheb_exp(3600.0, st, params, spec)
        worst = max(worst, energy_norm(a - b, params) / energy_norm(a, params))
    return CheckResult("Chebyshev propagator vs exact", worst <= 1e-10,
                       f"max rel {worst:.2e}")


def _check_steady_jet() -> CheckResult:
    grid = make_grid(64, 64, 4.0e7, 4.0e7)
    case = default_case()
    params = physics_params(case, grid, with_mountain=False)
    st = balanced_jet(case, grid)
    cfg = make_step_config(grid, params, dt=3600.0, T=3600.0)
    s = st
    for _ in range(10):
        s = step_averaged_ssprk3(s, cfg, params)
    l2_eta, l2_u = l2_error_normalized(s, st)
    worst = max(l2_eta, l2_u)
    return CheckResult("balanced jet is a steady state", worst <= 1e-12,
                       f"10-step drift {worst:.2e}")


def _check_linear_step(rng) -> CheckResult:
    # with the nonlinearity zeroed, one step must telescope to exact_exp(dt)
    grid = make_grid(32, 32, 4.0e7, 4.0e7)
    case = default_case()
    params = physics_params(case, grid, with_mountain=False)
    st = _random_state(grid, params, rng)
    zero_tend = lambda s, p: State(grid=s.grid, u=np.zeros_like(s.u),
                                   v=np.zeros_like(s.v), eta=np.zeros_like(s.eta),
                                   t=s.t)
    dt = 3600.0
    cfg = make_step_config(grid, params, dt=dt, T=0.0)
    stepped = step_averaged_ssprk3(st, cfg, params, nonlinear=zero_tend)
    expect = exact_exp(dt, st, params)
    rel = energy_norm(stepped - expect, params) / energy_norm(expect, params)
    return CheckResult("pure-linear step = exact exponential", rel <= 1e-12,
                       f"rel {rel:.2e}")


def _check_convergence() -> CheckResult:
    grid = make_grid(32, 32, 4.0e7, 4.0e7)
    case = default_case()
    params = physics_params(case, grid)
    st = balanced_jet(case, grid)
    horizon = 21600.0
    ref_cfg = make_step_config(grid, params, dt=30.0, T=0.0)
    ref = run(st, ref_cfg, params, horizon).states[-1]
    errs = []
    for dt in (900.0, 450.0, 225.0):
        cfg = make_step_config(grid, params, dt=dt, T=0.0)
        final = run(st, cfg, params, horizon).states[-1]
        errs.append(l2_error_normalized(final, ref)[0])
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    order = min(orders)
    return CheckResult("time convergence order (eta)", order >= 2.7,
                       f"orders {orders[0]:.2f}, {orders[1]:.2f}")


def _check_window_sweep(cfg: RunConfig, workers: int) -> CheckResult:
    grid = make_grid(cfg.nx, cfg.ny, cfg.Lx, cfg.Ly)
    case = default_case(cfg.Lx, cfg.Ly)
    params = physics_params(case, grid)
    st = balanced_jet(case, grid)
    t_end = cfg.t_end
    ref = run(st, make_step_config(grid, params, dt=cfg.ref_dt, T=0.0),
              params, t_end).states[-1]
    errs_eta, errs_u = [], []
    for T_h in (0.0, 0.5, 1.0, 2.0, 4.0, 8.0):
        sc = make_step_config(grid, params, dt=cfg.dt, T=T_h * 3600.0)
        final = run(st, sc, params, t_end, workers=workers).states[-1]
        e, u = l2_error_normalized(final, ref)
        errs_eta.append(e)
        errs_u.append(u)
    def has_interior_min(errs):
        lo = min(errs[1:-1])
        return lo < errs[0] and lo < errs[-1]
    ok = has_interior_min(errs_eta) and has_interior_min(errs_u)
    return CheckResult("averaging window has an interior optimum", ok,
                       f"eta errors {['%.4f' % e for e in errs_eta]}")


def run_validation(level: str = "fast", seed: int = 0, workers: int = 1,
                   cfg: RunConfig | None = None) -> list[CheckResult]:
    """Run the oracle battery; full level appends the 15-day sweep."""
    if level not in ("fast", "full"):
        raise ValueError(f"level must be fast or full, got {level!r}")
    rng = np.random.default_rng(seed)
    results = [
        _check_roundtrip(rng),
        _check_convolution(rng),
        _check_linear_matrix(rng),
        _check_nonlinear_oracle(rng),
        _check_exact_exp_group(rng),
        _check_cheb_coeffs(),
        _check_cheb_vs_exact(rng),
        _check_steady_jet(),
        _check_linear_step(rng),
        _check_convergence(),
    ]
    if level == "full":
        results.append(_check_window_sweep(cfg or RunConfig(), workers))
    return results
