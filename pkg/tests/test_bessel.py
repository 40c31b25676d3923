"""Order-0 and order-1 kernel accuracy against frozen high-precision values."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charge_class.bessel import j0, j1_over_x

# frozen from a 40-digit arbitrary-precision evaluation
J0_REFERENCE = [
    (0.5, 0.9384698072408129),
    (1.0, 0.7651976865579666),
    (2.404825557695773, -6.10876525973673e-17),  # first zero
    (5.0, -0.1775967713143383),
    (15.5, -0.10923065090005017),
    (16.5, -0.19638069293686103),
    (25.0, 0.09626678327595811),
    (40.0, 0.00736689058423729),
]

J1X_REFERENCE = [
    (0.5, 0.4845369153497478),
    (1.0, 0.4400505857449335),
    (3.831705970207512, 3.062944524966523e-17),  # first zero of J1
    (7.0, -0.0006689747831922618),
    (15.9, 0.006794206922205347),
    (20.0, 0.003341656208792502),
    (33.0, 0.003049080276215682),
]


@pytest.mark.parametrize("x,ref", J0_REFERENCE)
def test_j0_reference_values(x, ref):
    assert j0(x) == pytest.approx(ref, abs=5e-14)


@pytest.mark.parametrize("x,ref", J1X_REFERENCE)
def test_j1_over_x_reference_values(x, ref):
    assert j1_over_x(x) == pytest.approx(ref, abs=5e-14)


def test_values_at_zero():
    assert j0(0.0) == 1.0
    assert j1_over_x(0.0) == 0.5


def test_even_symmetry():
    x = np.linspace(0.0, 30.0, 301)
    assert np.array_equal(j0(x), j0(-x))
    assert np.array_equal(j1_over_x(x), j1_over_x(-x))


def test_series_asymptotic_crossover_continuity():
    # the branch switch sits at x = 16; both sides must agree there
    x = np.linspace(15.999, 16.001, 101)
    d0 = np.diff(j0(x))
    d1 = np.diff(j1_over_x(x))
    assert np.max(np.abs(np.diff(d0))) < 1e-9
    assert np.max(np.abs(np.diff(d1))) < 1e-9


def test_vectorized_matches_scalar():
    x = np.array([0.1, 3.0, 17.0, 42.0])
    assert np.array_equal(j0(x), np.array([j0(v) for v in x]))


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        j0(np.nan)
    with pytest.raises(ValueError):
        j1_over_x(np.inf)


@given(st.floats(min_value=0.0, max_value=200.0))
def test_j0_bounded_by_one(x):
    assert abs(j0(x)) <= 1.0 + 1e-12


@given(st.floats(min_value=0.0, max_value=200.0))
def test_j1_over_x_bounded_by_half(x):
    assert abs(j1_over_x(x)) <= 0.5 + 1e-12
