"""Trace diagnostics: constraints, growth envelopes, rescaling invariance."""

import numpy as np
import pytest

from charge_class.core import CauchyData, SpinorSlice, make_grid, system_preset
from charge_class.diagnostics import (
    charge_drift,
    constraint_residuals,
    energy_margin,
    md_compatible_data,
    norm_growth,
    scaling_check,
    scaling_mismatch_oracle,
)
from charge_class.evolve import evolve
from charge_class.profiles import EpsProfile, GaussianProfile


def _compatible_trace(n, T=1.0, stride=None):
    grid = make_grid(-4.0, 4.0, n)
    x = grid.nodes
    f = np.exp(-4.0 * x**2)
    g = 0.5 * np.exp(-4.0 * (x - 0.2) ** 2)
    psi0 = SpinorSlice(np.stack([f, g], axis=1).astype(complex), 0.0)
    a0 = 0.3 * np.exp(-(x**2))
    a1 = 0.2 * np.exp(-((x + 0.3) ** 2))
    data = md_compatible_data(psi0, a0, a1, grid)
    spec = system_preset("MD", M=1.0)
    stride = stride or grid.steps(0.25)
    return evolve(data, spec, grid, T, stride=stride), grid, data, spec


def test_charge_drift_zero_trace_uses_absolute_scale():
    grid = make_grid(-1.0, 1.0, 64)
    psi0 = SpinorSlice(np.zeros((grid.n_nodes, 2), dtype=complex), 0.0)
    z = np.zeros((2, grid.n_nodes))
    trace = evolve(CauchyData(psi0, z, z.copy()), system_preset("MD"), grid, 0.25)
    assert charge_drift(trace, grid) == 0.0


def test_compatible_data_satisfies_constraints_at_start():
    trace, grid, _, _ = _compatible_trace(1024)
    gauge, gauss = constraint_residuals(trace, grid)
    assert gauge[0] < 1e-3
    assert gauss[0] < 1e-3


def test_constraint_residuals_refine_at_first_order():
    results = []
    for n in (512, 1024):
        trace, grid, _, _ = _compatible_trace(n)
        gauge, gauss = constraint_residuals(trace, grid)
        results.append((gauge.max(), gauss.max()))
    assert results[1][0] < 0.55 * results[0][0]
    assert results[1][1] < 0.55 * results[0][1]


def test_incompatible_data_keeps_visible_residual():
    grid = make_grid(-4.0, 4.0, 1024)
    x = grid.nodes
    f = np.exp(-4.0 * x**2)
    psi0 = SpinorSlice(np.stack([f, 0.5 * f], axis=1).astype(complex), 0.0)
    v = np.zeros((2, grid.n_nodes))
    w = np.zeros((2, grid.n_nodes))  # ignores the Gauss constraint entirely
    trace = evolve(CauchyData(psi0, v, w), system_preset("MD", M=1.0), grid, 1.0,
                   stride=grid.steps(0.25))
    _, gauss = constraint_residuals(trace, grid)
    assert np.min(gauss) > 0.1


def test_constraint_residuals_need_md_shape():
    grid = make_grid(-1.0, 1.0, 64)
    psi0 = SpinorSlice(np.zeros((grid.n_nodes, 2), dtype=complex), 0.0)
    z = np.zeros((1, grid.n_nodes))
    trace = evolve(CauchyData(psi0, z, z.copy()), system_preset("DKG"), grid, 0.25)
    with pytest.raises(ValueError):
        constraint_residuals(trace, grid)


def test_energy_margin_nonnegative():
    trace, grid, _, _ = _compatible_trace(512)
    assert energy_margin(trace, grid) >= -1e-10


def test_norm_growth_needs_enough_samples():
    trace, grid, _, _ = _compatible_trace(512, stride=512 // 2)
    with pytest.raises(ValueError):
        norm_growth(trace, grid, 0.0)


def test_norm_growth_flat_for_decoupled_free_wave():
    # zero spinor, stationary bump: norms stay bounded, exponent small
    grid = make_grid(-8.0, 8.0, 1024)
    x = grid.nodes
    psi0 = SpinorSlice(np.zeros((grid.n_nodes, 2), dtype=complex), 0.0)
    v = np.stack([np.exp(-(x**2)), 0.5 * np.exp(-((x - 1.0) ** 2))])
    w = np.zeros((2, grid.n_nodes))
    trace = evolve(CauchyData(psi0, v, w), system_preset("MD"), grid, 4.0, stride=16)
    _, expo = norm_growth(trace, grid, 0.0)
    assert abs(expo) < 0.6


def test_scaling_oracle_invariance_exact():
    mism = scaling_mismatch_oracle(
        2.0, GaussianProfile(1.0, 0.7, 0.1), GaussianProfile(0.8, 0.5, -0.2),
        0.5, np.linspace(-2.0, 2.0, 41),
    )
    assert mism < 1e-10


def test_scaling_oracle_invariance_eps_family():
    mism = scaling_mismatch_oracle(
        0.5, EpsProfile(0.1), EpsProfile(0.2), 0.4, np.linspace(-1.5, 1.5, 31)
    )
    assert mism < 1e-10


def test_scaling_check_lattice_exact_for_node_aligned_lambda():
    grid = make_grid(-4.0, 4.0, 1024)
    x = grid.nodes
    f = np.exp(-2.0 * x**2)
    g = 0.6 * np.exp(-2.0 * (x - 0.25) ** 2)
    psi0 = SpinorSlice(np.stack([f, g], axis=1).astype(complex), 0.0)
    v = np.stack([0.2 * np.exp(-(x**2)), 0.1 * np.exp(-((x + 0.5) ** 2))])
    w = np.stack([0.05 * np.exp(-(x**2)), -0.1 * np.exp(-(x**2))])
    data = CauchyData(psi0, v, w)
    mism = scaling_check(2.0, data, system_preset("MD"), grid, 0.25)
    assert mism < 1e-12


def test_scaling_check_rejects_massive_systems():
    grid = make_grid(-1.0, 1.0, 64)
    psi0 = SpinorSlice(np.zeros((grid.n_nodes, 2), dtype=complex), 0.0)
    z = np.zeros((2, grid.n_nodes))
    data = CauchyData(psi0, z, z.copy())
    with pytest.raises(ValueError):
        scaling_check(2.0, data, system_preset("MD", M=1.0), grid, 0.25)
