import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqxy import ed
from floqxy.model import (ModelParams, dispersion, ground_energy, ground_state,
                          mode_grid, pair_hamiltonians)


def test_mode_grid_small_chains():
    assert np.allclose(mode_grid(ModelParams(N=4)), [np.pi / 4, 3 * np.pi / 4])
    assert np.allclose(mode_grid(ModelParams(N=8)),
                       [np.pi / 8, 3 * np.pi / 8, 5 * np.pi / 8, 7 * np.pi / 8])


def test_mode_grid_is_strictly_increasing_in_open_interval():
    k = mode_grid(ModelParams(N=64))
    assert k.size == 32
    assert np.all(np.diff(k) > 0)
    assert 0 < k[0] and k[-1] < np.pi


@pytest.mark.parametrize("bad", [3, 7, 2, 0, -4])
def test_odd_or_tiny_N_rejected(bad):
    with pytest.raises(ValueError):
        ModelParams(N=bad)


def test_param_validation():
    with pytest.raises(ValueError):
        ModelParams(N=8, gamma=0.0)
    with pytest.raises(ValueError):
        ModelParams(N=8, gamma=1.5)
    with pytest.raises(ValueError):
        ModelParams(N=8, dh=-0.1)
    with pytest.raises(ValueError):
        ModelParams(N=8, omega=0.0)


def test_field_returns_base_value_at_full_periods():
    p = ModelParams(N=8, h0=0.7, dh=0.3, omega=1.7)
    for n in range(5):
        assert p.field(n * p.period) == pytest.approx(0.7, abs=1e-12)


def test_dispersion_values():
    p = ModelParams(N=8, gamma=1.0)
    assert dispersion(p, np.pi, h=1.0) == pytest.approx(2.0, abs=1e-14)
    assert dispersion(p, 1e-9, h=1.0) == pytest.approx(0.0, abs=1e-8)
    p2 = ModelParams(N=8, gamma=0.5)
    assert dispersion(p2, np.pi / 2, h=1.5) == pytest.approx(np.sqrt(2.5), abs=1e-14)


def test_dispersion_critical_identity_on_grid():
    p = ModelParams(N=128, gamma=1.0, h0=1.0)
    k = mode_grid(p)
    assert np.allclose(dispersion(p, k), 2 * np.abs(np.sin(k / 2)), atol=1e-13)


def test_ground_state_polarized_limit():
    p = ModelParams(N=16, gamma=0.7)
    st_ = ground_state(p, h=1e8)
    assert np.allclose(st_.u, 1.0, atol=1e-7)
    assert np.allclose(st_.v, 0.0, atol=1e-7)


def test_ground_state_angle_at_critical_midpoint():
    # gamma=1, h=1, k=pi/2: tan(theta) = 1 so (u, v) = (cos pi/8, sin pi/8)
    p = ModelParams(N=4, gamma=1.0, h0=1.0)
    st_ = ground_state(p)
    idx = 0  # k = pi/4 for N=4; use N=4 grid? use direct angle instead
    p8 = ModelParams(N=8, gamma=1.0, h0=1.0)
    st8 = ground_state(p8)
    # k = pi/2 is not on the N=8 grid; check against the angle formula instead
    from floqxy.model import bogoliubov_angle

    theta = bogoliubov_angle(p8, np.pi / 2)
    assert theta == pytest.approx(np.pi / 4, abs=1e-14)
    assert np.cos(theta / 2) == pytest.approx(np.cos(np.pi / 8), abs=1e-14)


def test_ground_state_normalized():
    p = ModelParams(N=32, gamma=0.4, h0=0.9)
    ground_state(p).check_normalized(1e-12)


def test_ground_energy_matches_dense_oracle_at_criticality():
    p = ModelParams(N=8, gamma=1.0, h0=1.0)
    # global and even-sector minima coincide at the critical point
    assert ground_energy(p) == pytest.approx(ed.ground_state_energy(8, 1.0, 1.0), abs=1e-10)
    assert ground_energy(p) == pytest.approx(ed.even_sector_ground_state(8, 1.0, 1.0)[0],
                                             abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(gamma=st.floats(0.05, 1.0), h=st.floats(0.5, 1.5))
def test_ground_state_is_even_sector_optimum(gamma, h):
    p = ModelParams(N=8, gamma=gamma, h0=h)
    e_even = ed.even_sector_ground_state(8, gamma, h)[0]
    assert ground_energy(p) == pytest.approx(e_even, abs=1e-10)


@settings(max_examples=10, deadline=None)
@given(gamma=st.floats(0.05, 1.0), h=st.floats(1.0, 1.5))
def test_ground_state_is_global_optimum_in_paramagnet(gamma, h):
    # In the ferromagnetic phase the odd sector can dip below by an
    # exponentially small splitting, so global equality is asserted only
    # at and above criticality.
    p = ModelParams(N=8, gamma=gamma, h0=h)
    assert ground_energy(p) == pytest.approx(ed.ground_state_energy(8, gamma, h), abs=1e-10)


@settings(max_examples=15, deadline=None)
@given(gamma=st.floats(0.05, 1.0), h=st.floats(0.0, 3.0))
def test_normalization_invariant(gamma, h):
    p = ModelParams(N=24, gamma=gamma, h0=1.0)
    ground_state(p, h=h).check_normalized(1e-12)


def test_pair_hamiltonian_spectrum():
    p = ModelParams(N=16, gamma=0.6, h0=1.2)
    H = pair_hamiltonians(p)
    eps = dispersion(p, mode_grid(p))
    vals = np.linalg.eigvalsh(H)
    assert np.allclose(vals[:, 0], -2 * eps, atol=1e-12)
    assert np.allclose(vals[:, 1], 2 * eps, atol=1e-12)
