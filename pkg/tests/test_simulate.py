"""Time integration as an independent check on the spectral results.

The oracles here are dynamical: equilibria must be discrete fixed points,
a crude front must be selected at the computed wavespeed, the solved
profile must sit still in its own frame, and small perturbations must
decay once the neutral translation is aligned away.  None of these reuse
the Evans machinery, which is the point.
"""

from __future__ import annotations

import numpy as np
import pytest

from wavestab.model import DEFAULT_PARAMS, ModelParams
from wavestab.simulate import (
    FRAME_COMOVING,
    IC_PERTURBED,
    IC_PROFILE,
    InstabilityError,
    SimulationConfig,
    _integrate,
    perturbation_decay,
    run,
)


@pytest.fixture(scope="module")
def tanh_run():
    # long window: the selected front approaches the wave on the slow
    # timescale set by the spectral gap, so the fit needs late samples
    config = SimulationConfig(
        X=200.0, n_cells=800, dt=0.1, t_end=2000.0,
        snapshot_times=(0.0, 500.0, 1000.0, 2000.0),
    )
    return config, run(config, DEFAULT_PARAMS)


@pytest.fixture(scope="module")
def gaussian_trace(paper_profile):
    return perturbation_decay(paper_profile, DEFAULT_PARAMS,
                              amplitude=0.01, width=10.0)


# -------------------------------------------------------------- stationarity


@pytest.mark.parametrize("state", ["invaded", "uninfected"])
def test_equilibria_are_discrete_fixed_points(state):
    config = SimulationConfig(X=150.0, n_cells=600, dt=0.1, t_end=50.0)
    x = -config.X + config.dx * (np.arange(config.n_cells) + 0.5)
    if state == "invaded":
        u0 = np.full(config.n_cells, DEFAULT_PARAMS.u_minus)
        v0 = np.zeros(config.n_cells)
    else:
        u0 = np.zeros(config.n_cells)
        v0 = np.full(config.n_cells, DEFAULT_PARAMS.v_plus)
    result = _integrate(x, u0.copy(), v0.copy(), config, DEFAULT_PARAMS)
    final = result.snapshots[-1]
    drift = max(np.max(np.abs(final.u - u0)), np.max(np.abs(final.v - v0)))
    assert drift / config.t_end <= 1e-10


# ------------------------------------------------------------- front speeds


def test_tanh_front_selects_the_wavespeed(tanh_run, paper_profile):
    _, result = tanh_run
    assert abs(result.front.speed - paper_profile.c_star) \
        <= 0.05 * paper_profile.c_star


def test_profile_is_stationary_in_its_frame(paper_profile):
    config = SimulationConfig(
        X=150.0, n_cells=600, dt=0.1, t_end=500.0,
        frame=FRAME_COMOVING, c=paper_profile.c_star, initial=IC_PROFILE,
    )
    result = run(config, DEFAULT_PARAMS, paper_profile)
    positions = result.front.positions
    assert np.all(np.isfinite(positions))
    assert np.max(np.abs(positions - positions[0])) <= config.dx


def test_grid_refinement_leaves_speed_alone():
    base = run(SimulationConfig(X=200.0, n_cells=800, dt=0.1, t_end=1000.0),
               DEFAULT_PARAMS)
    fine = run(SimulationConfig(X=200.0, n_cells=1600, dt=0.025,
                                t_end=1000.0), DEFAULT_PARAMS)
    assert abs(fine.front.speed - base.front.speed) \
        <= 0.01 * abs(base.front.speed)


def test_advection_shifts_the_lab_speed():
    drifting = ModelParams(F=DEFAULT_PARAMS.F, mu=DEFAULT_PARAMS.mu,
                           s_h=DEFAULT_PARAMS.s_h, alpha=DEFAULT_PARAMS.alpha,
                           rho=0.2)
    still = run(SimulationConfig(X=200.0, n_cells=800, dt=0.1, t_end=500.0),
                DEFAULT_PARAMS)
    moved = run(SimulationConfig(X=200.0, n_cells=800, dt=0.1, t_end=500.0),
                drifting)
    expected = still.front.speed + drifting.rho
    assert abs(moved.front.speed - expected) <= 0.02 * abs(expected)


def test_front_track_bookkeeping(tanh_run):
    config, result = tanh_run
    n_steps = int(round(config.t_end / config.dt))
    assert result.front.times.shape == result.front.positions.shape \
        == (n_steps + 1,)
    assert np.all(np.isfinite(result.front.positions))
    assert np.isfinite(result.front.speed)
    assert 0.0 <= result.front.fit_residual <= 0.1


# ---------------------------------------------------------------- snapshots


def test_snapshots_arrive_at_requested_times(tanh_run):
    config, result = tanh_run
    assert [snap.t for snap in result.snapshots] \
        == list(config.snapshot_times)
    for snap in result.snapshots:
        assert snap.u.shape == snap.v.shape == (config.n_cells,)
    assert result.x.shape == (config.n_cells,)
    assert result.x[0] == pytest.approx(-config.X + 0.5 * config.dx)
    assert result.x[-1] == pytest.approx(config.X - 0.5 * config.dx)


def test_solutions_stay_in_the_unit_box(tanh_run):
    _, result = tanh_run
    for snap in result.snapshots:
        for field in (snap.u, snap.v):
            assert np.all(field >= -1e-10)
            assert np.all(field <= 1.0 + 1e-10)


# --------------------------------------------------------------- stability


def test_unperturbed_run_has_no_deviation(paper_profile):
    trace = perturbation_decay(paper_profile, DEFAULT_PARAMS,
                               amplitude=0.0, width=10.0)
    assert np.max(trace.deviations) <= 1e-8


def test_gaussian_perturbation_decays(gaussian_trace):
    trace = gaussian_trace
    at = {t: d for t, d in zip(trace.times, trace.deviations)}
    assert at[1000.0] <= 0.2 * at[100.0]
    # the late tail keeps shrinking too
    assert at[1000.0] <= at[500.0]


def test_decay_trace_agrees_across_resolutions(paper_profile,
                                               gaussian_trace):
    fine = perturbation_decay(paper_profile, DEFAULT_PARAMS,
                              amplitude=0.01, width=10.0,
                              n_cells=800, dt=0.025)
    for t_check in (100.0, 1000.0):
        coarse_dev = gaussian_trace.deviations[gaussian_trace.times == t_check]
        fine_dev = fine.deviations[fine.times == t_check]
        assert abs(coarse_dev[0] - fine_dev[0]) <= 0.1 * fine_dev[0]


def test_translation_mode_is_neutral(paper_profile):
    trace = perturbation_decay(paper_profile, DEFAULT_PARAMS,
                               amplitude=0.01, shape="derivative")
    assert np.max(trace.deviations) <= 1e-4
    # adding amplitude * derivative is a shift by -amplitude, and the
    # alignment should report exactly that
    assert trace.shifts[-1] == pytest.approx(-0.01, abs=2e-3)


# -------------------------------------------------------------- validation


def test_config_validation():
    good = SimulationConfig()
    good.validate()
    with pytest.raises(ValueError, match="n_cells"):
        SimulationConfig(n_cells=399).validate()
    with pytest.raises(ValueError, match="stability bound"):
        SimulationConfig(dt=0.2).validate()
    with pytest.raises(ValueError, match="frame"):
        SimulationConfig(frame="rotating").validate()
    with pytest.raises(ValueError, match="needs the wave speed"):
        SimulationConfig(frame=FRAME_COMOVING).validate()
    with pytest.raises(ValueError, match="initial"):
        SimulationConfig(initial="square").validate()
    with pytest.raises(ValueError, match="amplitude"):
        SimulationConfig(initial=IC_PERTURBED, amplitude=0.06).validate()
    with pytest.raises(ValueError, match="width"):
        SimulationConfig(initial=IC_PERTURBED, amplitude=0.01,
                         width=0.0).validate()
    with pytest.raises(ValueError, match="X"):
        SimulationConfig(X=-5.0).validate()


def test_profile_selectors_require_a_profile():
    config = SimulationConfig(frame=FRAME_COMOVING, c=0.027,
                              initial=IC_PROFILE, t_end=1.0)
    with pytest.raises(ValueError, match="profile"):
        run(config, DEFAULT_PARAMS)


def test_perturbation_decay_validation(paper_profile):
    with pytest.raises(ValueError, match="amplitude"):
        perturbation_decay(paper_profile, DEFAULT_PARAMS, amplitude=0.06)
    with pytest.raises(ValueError, match="shape"):
        perturbation_decay(paper_profile, DEFAULT_PARAMS, shape="sine")


def test_violent_kinetics_blow_up_is_reported():
    # legal parameters (bistable), but kinetics far too fast for dt = 0.1
    harsh = ModelParams(F=500.0, mu=DEFAULT_PARAMS.mu,
                        s_h=0.999, alpha=DEFAULT_PARAMS.alpha)
    config = SimulationConfig(X=100.0, n_cells=400, dt=0.1, t_end=50.0)
    with pytest.raises(InstabilityError) as excinfo:
        run(config, harsh)
    assert excinfo.value.t > 0.0
