"""Balanced double jet and conical mountain construction."""

import numpy as np
import pytest

from phaseswe.dynamics import PhysicsParams
from phaseswe.grid import make_grid, to_physical
from phaseswe.testcase import (CaseParams, balanced_jet, default_case,
                               mountain, physics_params)


def test_default_case_constants():
    case = default_case()
    assert case.f == 1.0e-4
    assert case.g == 9.8
    assert case.H == 5960.0
    assert case.u0 == 20.0
    assert case.b0 == 2000.0
    assert case.jet_width == 4.0e7 / 16.0
    assert case.r0 == 4.0e7 / 9.0
    assert case.xc == 2.0e7
    assert case.yc == 1.0e7


def test_case_validation():
    with pytest.raises(ValueError, match="b0"):
        CaseParams(f=1e-4, g=9.8, H=100.0, u0=20.0, jet_width=1.0, b0=100.0,
                   r0=1.0, xc=0.0, yc=0.0)
    with pytest.raises(ValueError, match="jet_width"):
        CaseParams(f=1e-4, g=9.8, H=100.0, u0=20.0, jet_width=0.0, b0=10.0,
                   r0=1.0, xc=0.0, yc=0.0)
    with pytest.raises(ValueError, match="r0"):
        CaseParams(f=1e-4, g=9.8, H=100.0, u0=20.0, jet_width=1.0, b0=10.0,
                   r0=-1.0, xc=0.0, yc=0.0)


def test_mountain_volume_peak_and_position(grid64):
    case = default_case()
    b = mountain(case, grid64)
    b_phys = to_physical(grid64, b)

    volume = grid64.cell_area * float(b_phys.sum())
    cone = np.pi * case.r0**2 * case.b0 / 3.0
    assert volume == pytest.approx(cone, rel=0.02)

    peak = float(b_phys.max())
    assert 0.8 * case.b0 <= peak <= 1.1 * case.b0
    i, j = np.unravel_index(int(b_phys.argmax()), b_phys.shape)
    assert abs(grid64.x[i] - case.xc) <= grid64.dx
    assert abs(grid64.y[j] - case.yc) <= grid64.dy
    # truncation ripple may undershoot zero but only mildly
    assert float(b_phys.min()) >= -0.1 * case.b0


def test_mountain_radius_must_fit_the_domain():
    grid = make_grid(16, 16, 1.0e6, 1.0e6)
    case = CaseParams(f=1e-4, g=9.8, H=5960.0, u0=20.0, jet_width=1.0e5,
                      b0=2000.0, r0=6.0e5, xc=5.0e5, yc=2.5e5)
    with pytest.raises(ValueError, match="radius"):
        mountain(case, grid)


def test_balanced_jet_structure(grid64):
    case = default_case()
    jet = balanced_jet(case, grid64)
    umax = float(np.max(np.abs(jet.u)))

    assert np.all(jet.v == 0.0)
    assert jet.u[0, 0] == 0.0
    assert jet.eta[0, 0] == 0.0
    # zonal flow: x wavenumbers carry only transform round-off
    assert np.max(np.abs(jet.u[1:, :])) <= 1e-12 * umax

    u_phys = to_physical(grid64, jet.u)
    assert float(u_phys.max()) == pytest.approx(case.u0, rel=0.02)
    assert float(u_phys.min()) == pytest.approx(-case.u0, rel=0.02)
    # eastward jet at y = Ly/4, westward at 3 Ly/4
    j_east = int(np.argmax(u_phys[0]))
    j_west = int(np.argmin(u_phys[0]))
    assert abs(grid64.y[j_east] - 0.25 * grid64.Ly) <= grid64.dy
    assert abs(grid64.y[j_west] - 0.75 * grid64.Ly) <= grid64.dy


def test_physics_params_wiring(grid64):
    case = default_case()
    rough = physics_params(case, grid64, with_mountain=True)
    assert isinstance(rough, PhysicsParams)
    assert np.array_equal(rough.b, mountain(case, grid64))
    smooth = physics_params(case, grid64, with_mountain=False)
    assert np.all(smooth.b == 0.0)
    for p in (rough, smooth):
        assert (p.f, p.g, p.H) == (case.f, case.g, case.H)
