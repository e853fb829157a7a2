"""Confirm the spectral verdict by direct time integration.

Three independent dynamical checks: a crude tanh release sharpens into a
front travelling at the computed c*; the solved profile is stationary in
its own co-moving frame; and a localised perturbation of the front decays
once the neutral translation shift is aligned away.  None of them uses
the Evans machinery -- plain finite differences and explicit stepping.
"""

import numpy as np

from wavestab.model import DEFAULT_PARAMS
from wavestab.profile import solve_profile
from wavestab.simulate import (
    FRAME_COMOVING,
    FRAME_LAB,
    IC_PROFILE,
    IC_TANH,
    SimulationConfig,
    perturbation_decay,
    run,
)


def main() -> None:
    profile = solve_profile(DEFAULT_PARAMS, L=120.0, n_nodes=1201)
    print(f"reference wavespeed c* = {profile.c_star:.9f}\n")

    print("1) tanh release in the lab frame (the transient dies on the")
    print("   spectral-gap timescale, so the window is long):")
    lab = SimulationConfig(X=200.0, n_cells=800, dt=0.1, t_end=2000.0,
                           frame=FRAME_LAB, initial=IC_TANH,
                           snapshot_times=(0.0, 2000.0))
    track = run(lab, DEFAULT_PARAMS).front
    err = abs(track.speed - profile.c_star) / profile.c_star
    print(f"   fitted speed = {track.speed:.6f}  "
          f"({100 * err:.2f}% from c*)\n")

    print("2) the solved front in its own frame:")
    co = SimulationConfig(X=150.0, n_cells=600, dt=0.1, t_end=500.0,
                          frame=FRAME_COMOVING, c=profile.c_star,
                          initial=IC_PROFILE, snapshot_times=(0.0, 500.0))
    track = run(co, DEFAULT_PARAMS, profile).front
    drift = np.max(np.abs(track.positions - track.positions[0]))
    print(f"   front drift over t = 500: {drift:.4f} "
          f"(one cell = {co.dx:.3f})\n")

    print("3) gaussian perturbation, deviation from the aligned base run:")
    trace = perturbation_decay(profile, DEFAULT_PARAMS,
                               amplitude=0.01, width=10.0)
    for t_check in (0.0, 100.0, 500.0, 1000.0):
        k = int(np.argmin(np.abs(trace.times - t_check)))
        bar = "#" * min(50, int(trace.deviations[k] / 1e-3))
        print(f"   t = {trace.times[k]:6.0f}:  "
              f"deviation = {trace.deviations[k]:.3e}  {bar}")
    print("\nall three agree with the spectral picture: the front is an")
    print("attractor up to translation")


if __name__ == "__main__":
    main()
