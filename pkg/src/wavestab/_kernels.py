"""Compiled inner loops for the compound-system flow.

Everything here is numba-jitted and shared-read-only: the profile enters as
plain float arrays (nodes, values, derivatives) and is evaluated by cubic
Hermite interpolation, matching ``profile.interpolate`` on the interior.
The right-hand side hard-codes the second-compound structure of the 4x4
linearisation (state (p, q, p_z, q_z)), which is sparse enough that forming
the 6x6 matrix would be wasted work; ``evans.compound_matrix`` holds the
generic dense version and the tests check the two against each other.

The integrator is a standard adaptive Dormand-Prince 5(4) pair.  It tracks,
per accepted step, the solution norm (the rescaled flow should keep it
near 1; escaping [1e-8, 1e8] or going non-finite aborts with a stiffness
flag) and the relative Plucker residual |psi1 psi6 - psi2 psi5 + psi3 psi4|
/ ||psi||^2, which is conserved (= 0) by any decomposable flow and so
measures accumulated integration error.
"""

import numpy as np
from numba import njit, prange

# Dormand-Prince 5(4) tableau.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
# Error weights: 5th-order minus embedded 4th-order coefficients.
_E1, _E3, _E4, _E5, _E6, _E7 = (
    35.0 / 384.0 - 5179.0 / 57600.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
)

# Status codes returned by the flow.
OK = 0
STIFF = 1


@njit(cache=True)
def _profile_at(z, grid, u, v, du, dv):
    """Cubic Hermite evaluation of (u, v) at one interior point."""
    n = grid.shape[0]
    i = np.searchsorted(grid, z)
    if i < 1:
        i = 1
    elif i > n - 1:
        i = n - 1
    z0 = grid[i - 1]
    h = grid[i] - z0
    t = (z - z0) / h
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = 3.0 * t2 - 2.0 * t3
    h11 = t3 - t2
    uz = h00 * u[i - 1] + h * h10 * du[i - 1] + h01 * u[i] + h * h11 * du[i]
    vz = h00 * v[i - 1] + h * h10 * dv[i - 1] + h01 * v[i] + h * h11 * dv[i]
    return uz, vz


@njit(cache=True)
def _compound_rhs(z, psi, out, lam, shift, c, F, mu, s_h, alpha,
                  grid, u, v, du, dv):
    """out <- (compound(A(z, lam)) - shift*I) psi, exploiting A's sparsity."""
    uz, vz = _profile_at(z, grid, u, v, du, dv)
    S = uz + vz
    f_u = (1.0 - S) - uz - alpha * mu
    f_v = -uz
    g_u = F * vz * (s_h * (S * S - vz) / (S * S) - 1.0)
    g_v = (
        F * ((1.0 - S - vz) * (1.0 - s_h * uz / S)
             + s_h * uz * vz * (1.0 - S) / (S * S))
        - mu
    )
    b11 = lam - f_u
    b12 = -f_v
    b21 = -g_u
    b22 = lam - g_v
    out[0] = psi[2] - psi[3] - shift * psi[0]
    out[1] = b12 * psi[0] - (c + shift) * psi[1]
    out[2] = b22 * psi[0] - (c + shift) * psi[2] + psi[5]
    out[3] = -b11 * psi[0] - (c + shift) * psi[3] - psi[5]
    out[4] = -b21 * psi[0] - (c + shift) * psi[4]
    out[5] = (
        -b21 * psi[1] + b11 * psi[2] - b22 * psi[3] + b12 * psi[4]
        - (2.0 * c + shift) * psi[5]
    )


@njit(cache=True)
def _flow_to_zero(psi0, z0, lam, shift, c, F, mu, s_h, alpha,
                  grid, u, v, du, dv, rtol, atol):
    """Integrate the rescaled compound system from z0 to the matching point 0.

    Returns (psi, status, fail_z, plucker_max, norm_min, norm_max, n_steps).
    """
    psi = psi0.copy()
    ys = np.empty(6, np.complex128)
    k1 = np.empty(6, np.complex128)
    k2 = np.empty(6, np.complex128)
    k3 = np.empty(6, np.complex128)
    k4 = np.empty(6, np.complex128)
    k5 = np.empty(6, np.complex128)
    k6 = np.empty(6, np.complex128)
    k7 = np.empty(6, np.complex128)
    ynew = np.empty(6, np.complex128)

    direction = 1.0 if z0 < 0.0 else -1.0
    z = z0
    h = 0.05 * direction

    nrm2 = 0.0
    for i in range(6):
        nrm2 += abs(psi[i]) ** 2
    nrm = np.sqrt(nrm2)
    norm_min = nrm
    norm_max = nrm
    plucker_max = abs(psi[0] * psi[5] - psi[1] * psi[4] + psi[2] * psi[3]) / nrm2

    _compound_rhs(z, psi, k1, lam, shift, c, F, mu, s_h, alpha,
                  grid, u, v, du, dv)
    n_steps = 0
    while direction * (0.0 - z) > 0.0:
        if n_steps > 1_000_000 or abs(h) < 1e-13:
            return psi, STIFF, z, plucker_max, norm_min, norm_max, n_steps
        if direction * (z + h) > 0.0:
            h = -z  # land exactly on the matching point

        for i in range(6):
            ys[i] = psi[i] + h * _A21 * k1[i]
        _compound_rhs(z + h / 5.0, ys, k2, lam, shift, c, F, mu, s_h, alpha,
                      grid, u, v, du, dv)
        for i in range(6):
            ys[i] = psi[i] + h * (_A31 * k1[i] + _A32 * k2[i])
        _compound_rhs(z + 0.3 * h, ys, k3, lam, shift, c, F, mu, s_h, alpha,
                      grid, u, v, du, dv)
        for i in range(6):
            ys[i] = psi[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        _compound_rhs(z + 0.8 * h, ys, k4, lam, shift, c, F, mu, s_h, alpha,
                      grid, u, v, du, dv)
        for i in range(6):
            ys[i] = psi[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i]
                                  + _A54 * k4[i])
        _compound_rhs(z + 8.0 * h / 9.0, ys, k5, lam, shift, c, F, mu, s_h,
                      alpha, grid, u, v, du, dv)
        for i in range(6):
            ys[i] = psi[i] + h * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                  + _A64 * k4[i] + _A65 * k5[i])
        _compound_rhs(z + h, ys, k6, lam, shift, c, F, mu, s_h, alpha,
                      grid, u, v, du, dv)
        for i in range(6):
            ynew[i] = psi[i] + h * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                    + _B5 * k5[i] + _B6 * k6[i])
        _compound_rhs(z + h, ynew, k7, lam, shift, c, F, mu, s_h, alpha,
                      grid, u, v, du, dv)

        err = 0.0
        for i in range(6):
            e = h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                     + _E6 * k6[i] + _E7 * k7[i])
            big = abs(psi[i])
            if abs(ynew[i]) > big:
                big = abs(ynew[i])
            sk = atol + rtol * big
            err += (abs(e) / sk) ** 2
        err = np.sqrt(err / 6.0)

        if err <= 1.0:
            z = z + h
            for i in range(6):
                psi[i] = ynew[i]
                k1[i] = k7[i]
            n_steps += 1
            nrm2 = 0.0
            for i in range(6):
                nrm2 += abs(psi[i]) ** 2
            nrm = np.sqrt(nrm2)
            if not np.isfinite(nrm) or nrm > 1e8 or nrm < 1e-8:
                return psi, STIFF, z, plucker_max, norm_min, norm_max, n_steps
            if nrm < norm_min:
                norm_min = nrm
            if nrm > norm_max:
                norm_max = nrm
            pl = abs(psi[0] * psi[5] - psi[1] * psi[4] + psi[2] * psi[3]) / nrm2
            if pl > plucker_max:
                plucker_max = pl

        if err > 1e-30:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        else:
            fac = 5.0
        h *= fac
    return psi, OK, 0.0, plucker_max, norm_min, norm_max, n_steps


@njit(cache=True)
def _match(psi_m, psi_p):
    """The matching-point pairing: the e1^e2^e3^e4 coefficient of psi- ^ psi+."""
    return (
        psi_m[0] * psi_p[5]
        - psi_m[1] * psi_p[4]
        + psi_m[2] * psi_p[3]
        + psi_m[3] * psi_p[2]
        - psi_m[4] * psi_p[1]
        + psi_m[5] * psi_p[0]
    )


@njit(cache=True, parallel=True)
def _evans_batch(lams, shifts_m, shifts_p, psi0_m, psi0_p, half_width,
                 c, F, mu, s_h, alpha, grid, u, v, du, dv, rtol, atol):
    """Independent Evans evaluations across lambda (read-only shared profile).

    Returns (d, status, fail_z, plucker, norm_min, norm_max) arrays; status
    is OK, STIFF (minus half) or STIFF + 1 (plus half).
    """
    n = lams.shape[0]
    d = np.empty(n, np.complex128)
    status = np.zeros(n, np.int64)
    fail_z = np.zeros(n, np.float64)
    plucker = np.zeros(n, np.float64)
    norm_min = np.zeros(n, np.float64)
    norm_max = np.zeros(n, np.float64)
    for j in prange(n):
        psi_m, st_m, zf_m, pl_m, lo_m, hi_m, _ = _flow_to_zero(
            psi0_m[j], -half_width, lams[j], shifts_m[j], c, F, mu, s_h,
            alpha, grid, u, v, du, dv, rtol, atol,
        )
        psi_p, st_p, zf_p, pl_p, lo_p, hi_p, _ = _flow_to_zero(
            psi0_p[j], half_width, lams[j], shifts_p[j], c, F, mu, s_h,
            alpha, grid, u, v, du, dv, rtol, atol,
        )
        plucker[j] = pl_m if pl_m > pl_p else pl_p
        norm_min[j] = lo_m if lo_m < lo_p else lo_p
        norm_max[j] = hi_m if hi_m > hi_p else hi_p
        if st_m != OK:
            status[j] = STIFF
            fail_z[j] = zf_m
            d[j] = complex(np.nan, np.nan)
        elif st_p != OK:
            status[j] = STIFF + 1
            fail_z[j] = zf_p
            d[j] = complex(np.nan, np.nan)
        else:
            d[j] = _match(psi_m, psi_p)
    return d, status, fail_z, plucker, norm_min, norm_max
