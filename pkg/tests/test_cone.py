"""Cone-quadrature solver unit tests against closed-form wave solutions."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charge_class.cone import (
    SourceSampler,
    dalembert_solve,
    kg_bound_margin,
    kg_solve,
    simpson_weights,
    wave_bound_margin,
)
from charge_class.core import make_grid


def _quad(w, f, h=1.0):
    return h * float(np.sum(w * f))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7, 10, 11])
def test_simpson_weights_exact_on_cubics(n):
    x = np.arange(n + 1, dtype=float)
    w = simpson_weights(n)
    for p in range(4):
        exact = n ** (p + 1) / (p + 1)
        assert _quad(w, x**p) == pytest.approx(exact, rel=1e-13)


def test_simpson_weights_edge_cases():
    assert np.array_equal(simpson_weights(0), [0.0])
    assert np.array_equal(simpson_weights(1), [0.5, 0.5])
    with pytest.raises(ValueError):
        simpson_weights(-1)


def test_free_transport_is_exact():
    # f(x - t)/2 + f(x + t)/2 with g = 0, m = 0: lattice-exact
    g = make_grid(-4.0, 4.0, 256)
    f = np.exp(-8.0 * g.nodes**2)
    u = kg_solve(f, np.zeros(g.n_nodes), None, 0.0, g, 1.0)
    exact = 0.5 * (np.exp(-8.0 * (g.nodes - 1.0) ** 2) + np.exp(-8.0 * (g.nodes + 1.0) ** 2))
    assert np.max(np.abs(u - exact)) < 1e-15


def test_spatially_constant_oscillator():
    # constant-in-x data: u(t) = cos(m t) f; probe away from the boundary
    g = make_grid(-6.0, 6.0, 1200)
    m = 2.0
    f = np.ones(g.n_nodes)
    u = kg_solve(f, np.zeros(g.n_nodes), None, m, g, 2.0)
    mid = slice(g.n_nodes // 4, 3 * g.n_nodes // 4)
    assert np.max(np.abs(u[mid] - np.cos(m * 2.0))) < 1e-8


def test_constant_source_quadratic_growth():
    # u_tt - u_xx = 1, zero data: u = t^2/2 in the interior
    g = make_grid(-3.0, 3.0, 300)
    F = SourceSampler(lambda s, y: np.ones_like(y))
    u = dalembert_solve(np.zeros(g.n_nodes), np.zeros(g.n_nodes), F, g, 1.0)
    mid = slice(g.n_nodes // 3, 2 * g.n_nodes // 3)
    assert np.max(np.abs(u[mid] - 0.5)) < 1e-12


def test_dalembert_equals_kg_massless():
    g = make_grid(-2.0, 2.0, 200)
    f = np.sin(3.0 * g.nodes)
    gg = np.cos(g.nodes)
    F = SourceSampler(lambda s, y: np.exp(-(y**2)) * np.cos(s))
    a = dalembert_solve(f, gg, F, g, 0.5)
    b = kg_solve(f, gg, F, 0.0, g, 0.5)
    assert np.max(np.abs(a - b)) < 1e-13


def test_primitive_path_matches_sampled_path():
    g = make_grid(-2.0, 2.0, 400)
    func = lambda s, y: np.cos(y) * (1.0 + s)
    prim = lambda s, y: np.sin(y) * (1.0 + s)
    z = np.zeros(g.n_nodes)
    a = dalembert_solve(z, z, SourceSampler(func, prim), g, 1.0)
    b = dalembert_solve(z, z, SourceSampler(func), g, 1.0)
    mid = slice(g.n_nodes // 4, 3 * g.n_nodes // 4)
    assert np.max(np.abs(a - b)[mid]) < 1e-6


def test_horizon_check():
    g = make_grid(0.0, 1.0, 10)
    z = np.zeros(g.n_nodes)
    with pytest.raises(ValueError):
        kg_solve(z, z, None, 1.0, g, 2.0)


def test_time_snapping_rejected_off_lattice():
    g = make_grid(0.0, 1.0, 10)
    z = np.zeros(g.n_nodes)
    with pytest.raises(ValueError):
        kg_solve(z, z, None, 1.0, g, 0.123)


def test_zero_time_returns_data():
    g = make_grid(-1.0, 1.0, 64)
    f = np.tanh(g.nodes)
    u = kg_solve(f, np.ones(g.n_nodes), None, 3.0, g, 0.0)
    assert np.array_equal(u, f)


@given(st.floats(min_value=0.0, max_value=3.0), st.floats(min_value=0.1, max_value=1.0))
@settings(max_examples=15, deadline=None)
def test_sup_bound_margin_nonnegative(m, t_raw):
    g = make_grid(-4.0, 4.0, 256)
    t = g.dt * max(1, round(t_raw / g.dt))
    f = np.exp(-2.0 * g.nodes**2)
    gg = 0.5 * np.sin(g.nodes) * np.exp(-(g.nodes**2))
    assert kg_bound_margin(f, gg, None, m, g, t, C=1.0) >= -1e-12


def test_wave_persistence_margin_nonnegative():
    g = make_grid(-4.0, 4.0, 512)
    f = np.exp(-4.0 * g.nodes**2)
    gg = np.exp(-2.0 * (g.nodes - 0.3) ** 2)
    F = SourceSampler(lambda s, y: 0.3 * np.exp(-(y**2)))
    assert wave_bound_margin(f, gg, F, g, 1.0) >= 0.0


def test_kg_linearity():
    g = make_grid(-2.0, 2.0, 128)
    f1 = np.exp(-(g.nodes**2))
    f2 = np.cos(2.0 * g.nodes)
    z = np.zeros(g.n_nodes)
    a = kg_solve(f1 + 2.0 * f2, z, None, 1.0, g, 0.5)
    b = kg_solve(f1, z, None, 1.0, g, 0.5) + 2.0 * kg_solve(f2, z, None, 1.0, g, 0.5)
    assert np.max(np.abs(a - b)) < 1e-13
