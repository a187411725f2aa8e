import math

import numpy as np
import pytest

import radstefan as rs
from radstefan.errors import ConfigError, TangentialRayError


def test_constant_solution_exact():
    prof = rs.solve_selfsimilar(0.6, 0.6, 1.0, z_max=10.0, n=400)
    assert np.max(np.abs(prof.values - 0.6)) <= 1e-13
    assert prof.values[0] == pytest.approx(0.6) and prof.values[-1] == pytest.approx(0.6)


def test_erf_oracle_large_alpha():
    prof = rs.solve_selfsimilar(1.0, 0.25, 1e6, z_max=10.0, n=2000)
    oracle = rs.heat_ramp(1.0, 0.25, prof.grid.nodes)
    assert np.max(np.abs(prof.values - oracle)) <= 1e-4


def test_boundary_states_and_interval():
    prof = rs.solve_selfsimilar(1.0, 0.0, 1.0, z_max=10.0, n=800)
    assert prof.values[0] == pytest.approx(1.0, abs=1e-12)
    assert prof.values[-1] == pytest.approx(0.0, abs=1e-12)
    assert prof.values.min() >= -1e-9
    assert prof.values.max() <= 1.0 + 1e-9
    # discrete maximum-principle check: monotone decreasing connection
    assert np.all(np.diff(prof.values) <= 1e-12)
    assert float(prof.residual.max()) <= 1e-8


def test_grid_halving_improves_residual():
    def err(n):
        prof = rs.solve_selfsimilar(1.0, 0.25, 1e6, z_max=10.0, n=n)
        oracle = rs.heat_ramp(1.0, 0.25, prof.grid.nodes)
        return np.max(np.abs(prof.values - oracle))

    assert err(250) / err(500) >= 3.0


def test_selfsimilar_validation():
    with pytest.raises(ConfigError):
        rs.solve_selfsimilar(-1.0, 0.5, 1.0)
    with pytest.raises(ConfigError):
        rs.solve_selfsimilar(1.0, 0.5, -1.0)
    with pytest.raises(ConfigError):
        rs.solve_selfsimilar(1.0, 0.5, 1.0, z_max=4.0)


@pytest.fixture(scope="module")
def const_profile():
    grid = rs.build_grid(8.0, 64, 1.0)
    return rs.Profile(grid=grid, values=np.full(65, 0.7), boundary_value=0.7)


NU = 1.5e10   # h nu / k T ~ 1 for the O(1) nondimensional temperatures here


def test_intensity_constant_state(const_profile):
    alpha, mu, x = 1.3, 0.5, 1.25
    d = x / mu
    got = rs.reconstruct_intensity(const_profile, NU, x, mu, alpha)
    exact = rs.planck_B(NU, 0.7) * (1.0 - math.exp(-alpha * d))
    assert got == pytest.approx(exact, rel=1e-8)


def test_intensity_boundary_and_equilibrium(const_profile):
    # outgoing-from-interface ray at the interface carries nothing
    assert rs.reconstruct_intensity(const_profile, NU, 0.0, 0.7, 1.3) == 0.0
    # infinite path reaches the equilibrium Planck value
    got = rs.reconstruct_intensity(const_profile, NU, 4.0, -0.3, 1.3)
    assert got == pytest.approx(rs.planck_B(NU, 0.7), rel=1e-12)


def test_intensity_monotone_in_path_length(const_profile):
    xs = np.linspace(0.2, 7.8, 12)
    vals = [rs.reconstruct_intensity(const_profile, NU, x, 1.0, 0.8)
            for x in xs]
    assert all(v > 0.0 for v in vals)
    assert np.all(np.diff(vals) > 0.0)


def test_intensity_bounded_by_extreme_temperatures():
    grid = rs.build_grid(8.0, 128, 1.0)
    values = 0.5 + 0.3 * np.exp(-grid.nodes)
    prof = rs.Profile(grid=grid, values=values, boundary_value=0.8)
    alpha, mu, x = 1.1, 0.6, 3.0
    d = x / mu
    got = rs.reconstruct_intensity(prof, NU, x, mu, alpha)
    lo = rs.planck_B(NU, float(values.min())) * (1.0 - math.exp(-alpha * d))
    hi = rs.planck_B(NU, float(values.max())) * (1.0 - math.exp(-alpha * d))
    assert lo <= got <= hi


def test_intensity_errors(const_profile):
    with pytest.raises(TangentialRayError):
        rs.reconstruct_intensity(const_profile, NU, 1.0, 0.0, 1.3)
    with pytest.raises(ConfigError):
        rs.reconstruct_intensity(const_profile, NU, 100.0, 0.5, 1.3)
    with pytest.raises(ConfigError):
        rs.reconstruct_intensity(const_profile, NU, 1.0, 0.5, -1.0)
