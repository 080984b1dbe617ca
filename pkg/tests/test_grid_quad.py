import numpy as np
import pytest
from hypothesis import given, strategies as st

from spps_ist.errors import InvalidGridError
from spps_ist.grid_quad import (NC6_WEIGHTS, SampledFunction, UniformGrid, cumulative_from_left,
                                cumulative_from_right, cumulative_left_values,
                                cumulative_right_values, integrate, integrate_values,
                                spline_derivative)

coef = st.floats(-10, 10, allow_nan=False)


def test_panel_weights_are_newton_cotes():
    assert np.allclose(NC6_WEIGHTS, 5 / 288 * np.array([19, 75, 50, 50, 75, 19]), rtol=0,
                       atol=1e-15)


def test_grid_from_density_anchors_zero_and_whole_panels():
    g = UniformGrid.from_density(-12, 12, 1500)
    assert (len(g) - 1) % 5 == 0
    assert g.points[g.index_of(0.0)] == 0.0
    assert g.x_min <= -12 and g.x_max >= 12
    assert g.h == pytest.approx(1 / 1500)


@pytest.mark.parametrize("n", [0, 5, 7, 12])
def test_grid_rejects_partial_panels(n):
    with pytest.raises(InvalidGridError):
        UniformGrid.from_count(0.0, 1.0, n)


def test_sampled_function_length_mismatch():
    g = UniformGrid.from_count(0, 1, 11)
    with pytest.raises(InvalidGridError):
        SampledFunction(g, np.zeros(10))


def test_sin_integral_exact():
    g = UniformGrid.from_count(0.0, np.pi, 5001)
    assert abs(integrate(SampledFunction.from_callable(g, np.sin)) - 2) < 1e-13


@given(st.lists(coef, min_size=6, max_size=6), st.floats(-3, 0), st.floats(0.5, 4))
def test_quintics_integrated_exactly(c, lo, width):
    # one or several panels; every cumulative node value is exact for degree <= 5
    p = np.polynomial.Polynomial(c)
    P = p.integ()
    for count in (6, 31):
        g = UniformGrid.from_count(lo, lo + width, count)
        y = p(g.points)
        scale = 1 + np.max(np.abs(P(g.points)))
        assert abs(integrate_values(y, g.h) - (P(g.x_max) - P(g.x_min))) <= 1e-12 * scale
        left = cumulative_left_values(y, g.h)
        assert np.max(np.abs(left - (P(g.points) - P(g.x_min)))) <= 1e-12 * scale
        right = cumulative_right_values(y, g.h)
        assert np.max(np.abs(right - (P(g.x_max) - P(g.points)))) <= 1e-12 * scale


def test_cumulative_matches_total():
    g = UniformGrid.from_count(-1, 2, 301)
    f = SampledFunction.from_callable(g, lambda x: np.exp(1j * x) * np.cos(3 * x))
    assert abs(cumulative_from_left(f).values[-1] - integrate(f)) < 1e-15
    assert abs(cumulative_from_right(f).values[0] - integrate(f)) < 1e-15


@pytest.mark.parametrize("rate", [1.0, -0.7, 3.0])
def test_weighted_cumulative_against_direct_form(rate):
    # int_{x0}^{x} exp(rate (s - x)) y(s) ds and its right-hand mirror
    g = UniformGrid.from_count(-2, 3, 2001)
    x, h = g.points, g.h
    y = np.cos(2 * x) + 1j * x ** 2
    left = cumulative_left_values(y, h, rate=rate)
    right = cumulative_right_values(y, h, rate=rate)
    for j in (0, 7, 1000, 2000):
        ref_l = cumulative_left_values(np.exp(rate * (x - x[j])) * y, h)[j]
        ref_r = cumulative_right_values(np.exp(rate * (x[j] - x)) * y, h)[j]
        assert abs(left[j] - ref_l) <= 1e-13 * (1 + abs(ref_l))
        assert abs(right[j] - ref_r) <= 1e-13 * (1 + abs(ref_r))


def test_weighted_cumulative_no_overflow_on_long_domain():
    g = UniformGrid.from_count(-400, 400, 80001)
    out = cumulative_right_values(np.ones(len(g)), g.h, rate=1.0)
    # int_x^400 exp(x - s) ds = 1 - exp(x - 400)
    assert np.all(np.isfinite(out))
    assert np.max(np.abs(out - (1 - np.exp(g.points - 400)))) < 1e-10


def test_spline_derivative_accuracy():
    g = UniformGrid.from_count(-5, 5, 1001)
    f = SampledFunction.from_callable(g, lambda x: np.sin(x) + 1j * np.exp(-x * x))
    d = spline_derivative(f)
    ref = np.cos(g.points) - 2j * g.points * np.exp(-g.points ** 2)
    assert np.max(np.abs(d.values - ref)[5:-5]) < 1e-6
