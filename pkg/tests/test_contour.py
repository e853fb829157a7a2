"""Argument-principle root counting on the right-half-plane contour.

The winding machinery is exercised twice over: on synthetic analytic
functions whose root count is known exactly (circle identities, a
two-root rational through the full sampling/refinement pipeline), and on
the Evans function itself, where the count must be zero on both the
moderate and the wide paper contours and stay zero under resampling.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from wavestab.contour import (
    AliasingError,
    Contour,
    ZeroSampleError,
    _count_roots_of,
    build_contour,
    count_roots,
    winding_number,
)


@pytest.fixture(scope="module")
def paper_count_small(paper_profile):
    return count_roots(paper_profile, r_s=0.1, r_b=10.0, n_points=1024)


@pytest.fixture(scope="module")
def paper_count_wide(paper_profile):
    return count_roots(paper_profile, r_s=0.001, r_b=500.0, n_points=1024)


# ---------------------------------------------------------------- geometry


@pytest.mark.parametrize("r_s, r_b, n", [(0.1, 10.0, 1024), (0.001, 500.0, 4096)])
def test_contour_geometry(r_s, r_b, n):
    contour = build_contour(r_s, r_b, n)
    pts = contour.points
    assert pts.shape == (n + 1,)
    assert contour.n_points == n
    assert abs(pts[0] - pts[-1]) <= 1e-12 * r_b
    assert np.all(pts.real >= -1e-13 * r_b)
    assert np.min(np.abs(pts)) >= r_s * (1.0 - 1e-12)
    assert np.max(np.abs(pts)) <= r_b * (1.0 + 1e-12)
    # positively oriented: shoelace area of the closed polygon is positive
    area = 0.5 * np.sum(np.imag(np.conj(pts[:-1]) * pts[1:]))
    assert area > 0.0
    # starts at the bottom of the big arc and visits both axis endpoints
    assert pts[0] == pytest.approx(-1j * r_b)
    assert np.min(np.abs(pts - 1j * r_b)) <= 2.0 * math.pi * r_b / n
    assert np.min(np.abs(pts - r_b)) <= 2.0 * math.pi * r_b / n


def test_samples_track_arc_length():
    contour = build_contour(0.1, 10.0, 1024)
    pts = contour.points[:-1]
    big, seg, small = math.pi * 10.0, 9.9, math.pi * 0.1
    total = big + 2.0 * seg + small
    on_big = np.sum(np.abs(np.abs(pts) - 10.0) < 1e-9)
    assert abs(on_big / 1024 - big / total) < 0.02
    on_axis = np.sum(np.abs(pts.real) < 1e-9)
    assert abs(on_axis / 1024 - 2.0 * seg / total) < 0.02


def test_at_parametrises_the_curve():
    contour = build_contour(0.1, 10.0, 1024)
    assert contour.at(0.0) == pytest.approx(-10.0j)
    assert contour.at(1.0) == pytest.approx(-10.0j)
    # fraction of the big arc -> on the big circle
    quarter = contour.at(0.25)
    assert abs(quarter) == pytest.approx(10.0)
    assert np.allclose(contour.at(contour.s), contour.points)


def test_build_contour_rejects_bad_parameters():
    with pytest.raises(ValueError, match="r_s"):
        build_contour(10.0, 0.1, 1024)
    with pytest.raises(ValueError, match="r_s"):
        build_contour(0.1, 0.1, 1024)
    with pytest.raises(ValueError, match="r_s"):
        build_contour(0.0, 10.0, 1024)
    with pytest.raises(ValueError, match="n_points"):
        build_contour(0.1, 10.0, 255)


# ---------------------------------------------------- winding of known data


def test_winding_of_identity_on_unit_circle():
    theta = np.linspace(0.0, 2.0 * math.pi, 600)
    result = winding_number(np.exp(1j * theta))
    assert result.winding == 1
    assert abs(result.residual) <= 1e-12
    assert result.total_arg_change == pytest.approx(2.0 * math.pi)


def test_winding_of_constant_is_zero():
    result = winding_number(np.full(400, 7.0 + 0.0j))
    assert result.winding == 0
    assert result.total_arg_change == 0.0
    assert result.max_step_arg == 0.0


def test_winding_of_powers():
    theta = np.linspace(0.0, 2.0 * math.pi, 2048)
    for k in (2, 3, -1):
        result = winding_number(np.exp(1j * k * theta))
        assert result.winding == k


def test_winding_rejects_zero_samples():
    values = np.array([1.0, 1.0j, 0.0, -1.0j], dtype=complex)
    with pytest.raises(ZeroSampleError):
        winding_number(values)
    with pytest.raises(ZeroSampleError):
        winding_number(np.array([1.0, np.nan + 0j, 1.0]))


def test_winding_rejects_near_pi_jumps():
    values = np.array([1.0, np.exp(1j * (math.pi - 1e-9)), 1.0, 1.0])
    with pytest.raises(AliasingError, match="jump"):
        winding_number(values)


# ------------------------------------------------- synthetic root counting


def test_two_root_rational_counts_two():
    a, b = 0.5 + 0.2j, 2.0 - 1.5j

    def f(z):
        return (z - a) * (z - b) / (z + 1.0)

    result = _count_roots_of(f, build_contour(0.1, 10.0, 1024))
    assert result.winding == 2
    assert abs(result.total_arg_change / (2.0 * math.pi) - 2.0) <= 0.05
    assert result.max_step_arg < math.pi / 2


def test_root_outside_radius_is_not_counted():
    # one root inside, one pushed beyond the big arc, pole unchanged
    def f(z):
        return (z - 0.5) * (z - 20.0) / (z + 1.0)

    result = _count_roots_of(f, build_contour(0.1, 10.0, 1024))
    assert result.winding == 1


def test_refinement_resolves_a_root_near_the_curve():
    # a root 3e-3 inside the small arc forces jumps past pi/2 that the
    # base sampling cannot resolve; bisection must fix them
    z0 = 0.097 * np.exp(0.5j)

    def f(z):
        return z - z0

    result = _count_roots_of(f, build_contour(0.1, 10.0, 1024))
    assert result.winding == 0  # just inside the indentation = excluded
    assert result.n_points_final > 1024
    assert result.max_step_arg < math.pi / 2


def test_auto_refine_off_returns_coarse_steps():
    z0 = 0.103 * np.exp(0.5j)

    def f(z):
        return z - z0

    coarse = _count_roots_of(f, build_contour(0.1, 10.0, 1024),
                             auto_refine=False)
    assert coarse.n_points_final == 1024
    assert coarse.max_step_arg >= math.pi / 2  # left unresolved by request
    refined = _count_roots_of(f, build_contour(0.1, 10.0, 1024))
    assert refined.winding == coarse.winding == 1
    assert refined.max_step_arg < math.pi / 2


def test_refinement_exhaustion_names_the_segment():
    # a root a hair off the curve cannot be resolved by four bisections
    z0 = 0.1 * (1.0 + 1e-12) * np.exp(0.3j)

    def f(z):
        return z - z0

    with pytest.raises(AliasingError, match="refinement exhausted"):
        _count_roots_of(f, build_contour(0.1, 10.0, 1024))


def test_pipeline_detects_on_sample_zero():
    contour = build_contour(0.1, 10.0, 1024)
    z0 = contour.points[17]

    def f(z):
        return z - z0

    with pytest.raises(ZeroSampleError):
        _count_roots_of(f, contour)


def test_cumulative_argument_bookkeeping():
    a, b = 0.5 + 0.2j, 2.0 - 1.5j

    def f(z):
        return (z - a) * (z - b) / (z + 1.0)

    result = _count_roots_of(f, build_contour(0.1, 10.0, 1024))
    assert result.cum_arg.shape == result.points.shape == result.d_values.shape
    assert result.cum_arg[0] == 0.0
    assert result.cum_arg[-1] == pytest.approx(result.total_arg_change)
    steps = np.diff(result.cum_arg)
    assert np.max(np.abs(steps)) == pytest.approx(result.max_step_arg)


# ------------------------------------------------------- the Evans winding


def test_no_roots_inside_moderate_contour(paper_count_small):
    assert paper_count_small.winding == 0
    assert abs(paper_count_small.total_arg_change / (2.0 * math.pi)) <= 0.05
    assert paper_count_small.max_step_arg < math.pi / 2


def test_no_roots_inside_wide_contour(paper_count_wide):
    assert paper_count_wide.winding == 0
    assert abs(paper_count_wide.total_arg_change / (2.0 * math.pi)) <= 0.05
    assert paper_count_wide.max_step_arg < math.pi / 2


def test_no_roots_for_equal_competition(alpha1_profile):
    result = count_roots(alpha1_profile, r_s=0.1, r_b=10.0, n_points=1024)
    assert result.winding == 0


def test_winding_invariant_under_doubling(paper_profile, paper_count_small,
                                          paper_count_wide):
    doubled = count_roots(paper_profile, r_s=0.1, r_b=10.0, n_points=2048)
    assert doubled.winding == paper_count_small.winding == 0
    doubled_wide = count_roots(paper_profile, r_s=0.001, r_b=500.0,
                               n_points=2048)
    assert doubled_wide.winding == paper_count_wide.winding == 0


def test_winding_invariant_under_outer_radius(paper_profile,
                                              paper_count_small):
    for r_b in (50.0, 500.0):
        result = count_roots(paper_profile, r_s=0.1, r_b=r_b, n_points=1024)
        assert result.winding == paper_count_small.winding == 0


def test_count_roots_validates_parameters(paper_profile):
    with pytest.raises(ValueError, match="r_s"):
        count_roots(paper_profile, r_s=10.0, r_b=0.1)
    with pytest.raises(ValueError, match="n_points"):
        count_roots(paper_profile, n_points=100)
