"""Solve the invasion front and report its wavespeed and tail structure.

The front connects the infected-only state (u = 1 - alpha*mu, v = 0) far
left to the uninfected state (u = 0, v = 1 - mu/F) far right, and exists
only at one wavespeed c*.  The solver treats c as an unknown alongside
the shape; afterwards the measured tail decay rates are compared with the
closed-form slow eigenvalues they must match.
"""

import numpy as np

from wavestab.model import DEFAULT_PARAMS, ModelParams, spatial_eigen
from wavestab.profile import decay_rates, solve_profile


def describe(params: ModelParams, label: str) -> None:
    profile = solve_profile(params, L=120.0, n_nodes=1201)
    rates = decay_rates(profile)
    minus = spatial_eigen("-", params.with_c(profile.c_star), 0.0)
    plus = spatial_eigen("+", params.with_c(profile.c_star), 0.0)

    print(f"--- {label} ---")
    print(f"  equilibria: u- = {params.u_minus:.6f}, v+ = {params.v_plus:.6f}")
    print(f"  c*          = {profile.c_star:.9f}")
    print(f"  residual    = {profile.residual_norm:.3e}")
    print("  tail rates (fitted vs closed form):")
    print(f"    left  u: {rates.u_minus:.5f} vs {minus.eta2.real:.5f}")
    print(f"    left  v: {rates.v_minus:.5f} vs {minus.eta2.real:.5f}")
    print(f"    right u: {rates.u_plus:.5f} vs {abs(plus.eta2.real):.5f}")
    print(f"    right v: {rates.v_plus:.5f} vs {abs(plus.eta2.real):.5f}")

    # a coarse picture of the front: u falls, v rises, crossing near z = 0
    z = np.linspace(-60.0, 60.0, 13)
    rows = np.searchsorted(profile.grid, z)
    print("      z        u        v")
    for k, row in enumerate(rows):
        print(f"  {z[k]:7.1f}  {profile.u_hat[row]:.5f}  "
              f"{profile.v_hat[row]:.5f}")
    print()


def main() -> None:
    describe(DEFAULT_PARAMS, "reference parameters")
    describe(
        ModelParams(F=DEFAULT_PARAMS.F, mu=DEFAULT_PARAMS.mu,
                    s_h=DEFAULT_PARAMS.s_h, alpha=1.0),
        "no extra mortality for infected hosts (alpha = 1)",
    )
    print("the sterility cost alone nearly halves the invasion speed")


if __name__ == "__main__":
    main()
