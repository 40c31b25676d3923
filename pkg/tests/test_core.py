"""Grid, norm, charge, and system-specification unit tests."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charge_class.core import (
    ALPHA,
    BETA,
    CauchyData,
    Grid1D,
    IDENTITY2,
    SpinorSlice,
    SystemSpec,
    charge,
    make_grid,
    norms,
    spinor_source,
    system_preset,
)


def test_grid_basics():
    g = make_grid(-2.0, 2.0, 8)
    assert g.dx == 0.5
    assert g.dt == g.dx  # unit CFL is hard-wired
    assert g.n_nodes == 9
    assert g.nodes[0] == -2.0 and g.nodes[-1] == 2.0


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(1.0, -1.0, 8)
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        Grid1D(np.inf, 1.0, 8)


def test_grid_steps_requires_lattice_time():
    g = make_grid(0.0, 1.0, 10)
    assert g.steps(0.3) == 3
    with pytest.raises(ValueError):
        g.steps(0.35)
    with pytest.raises(ValueError):
        g.steps(-0.1)


def test_norms_constant_function():
    g = make_grid(0.0, 2.0, 100)
    r = norms(np.full(g.n_nodes, 3.0), g)
    assert r.l1 == pytest.approx(6.0)
    assert r.l2 == pytest.approx(3.0 * np.sqrt(2.0))
    assert r.linf == 3.0
    assert r.y == 3.0  # no variation


def test_norms_hat_function_variation():
    g = make_grid(-1.0, 1.0, 4)
    f = np.array([0.0, 0.5, 1.0, 0.5, 0.0])
    r = norms(f, g)
    assert r.y == pytest.approx(1.0 + 2.0)  # sup + up-and-down variation


def test_charge_of_unit_gaussian():
    g = make_grid(-10.0, 10.0, 4000)
    psi = np.stack([np.exp(-g.nodes**2), np.zeros(g.n_nodes)], axis=1).astype(complex)
    # int exp(-2x^2) = sqrt(pi/2)
    assert charge(psi, g) == pytest.approx(np.sqrt(np.pi / 2.0), rel=1e-12)


def test_eps_family_charge_closed_form():
    from charge_class.profiles import EpsProfile

    # 2 * int_{-1}^{1} dx/(eps+|x|) = 4 log((1+eps)/eps), both components
    eps = 0.01
    p = EpsProfile(eps)
    exact = 4.0 * np.log((1.0 + eps) / eps)
    assert 2.0 * 2.0 * p.sq_primitive(1.0) == pytest.approx(exact, rel=1e-14)


def test_dirac_matrix_algebra():
    assert np.allclose(ALPHA, np.diag([1.0, -1.0]))
    assert np.allclose(BETA @ BETA, IDENTITY2)
    assert np.allclose(ALPHA @ BETA + BETA @ ALPHA, 0.0)


def test_system_presets():
    md = system_preset("MD", M=2.0)
    assert md.n_potentials == 2
    assert md.M == 2.0 and md.m == 0.0
    dkg = system_preset("DKG", M=1.0, m=0.5)
    assert dkg.n_potentials == 1
    with pytest.raises(ValueError):
        system_preset("MD", m=1.0)  # massless potential is part of the preset
    with pytest.raises(ValueError):
        system_preset("unknown")


def test_system_spec_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        SystemSpec(M=0.0, m=0.0, B=(bad,), C=(IDENTITY2,))


def test_reflected_system():
    md = system_preset("MD", M=1.5)
    r = md.reflected()
    assert r.M == -1.5
    assert np.allclose(r.B[0], -md.B[0])
    assert np.allclose(r.C[0], md.C[0])


def test_spinor_source_md_signs():
    spec = system_preset("MD")
    psi = np.array([[1.0 + 1j, 2.0]], dtype=complex)
    s = spinor_source(psi, spec)
    # C = (-I, alpha): S_1 = -(|u|^2+|v|^2), S_2 = |u|^2-|v|^2
    assert s[0, 0] == pytest.approx(-(2.0 + 4.0))
    assert s[1, 0] == pytest.approx(2.0 - 4.0)


def test_spinor_slice_shape_validation():
    with pytest.raises(ValueError):
        SpinorSlice(np.zeros((5, 3)), 0.0)


def test_cauchy_data_shape_validation():
    g = make_grid(0.0, 1.0, 4)
    psi0 = SpinorSlice(np.zeros((g.n_nodes, 2), dtype=complex), 0.0)
    with pytest.raises(ValueError):
        CauchyData(psi0, np.zeros((1, 3)), np.zeros((1, 3)))
    with pytest.raises(ValueError):
        CauchyData(psi0, np.zeros((1, g.n_nodes)), np.zeros((2, g.n_nodes)))


@given(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
@settings(max_examples=30)
def test_norm_homogeneity(scale):
    g = make_grid(-1.0, 1.0, 64)
    f = np.sin(3.0 * g.nodes)
    r1 = norms(f, g)
    r2 = norms(scale * f, g)
    for name in ("l1", "l2", "linf", "y"):
        assert getattr(r2, name) == pytest.approx(abs(scale) * getattr(r1, name), abs=1e-12)


@given(st.floats(min_value=0.0, max_value=2 * np.pi))
@settings(max_examples=30)
def test_charge_invariant_under_pointwise_phase(angle):
    g = make_grid(-1.0, 1.0, 64)
    psi = np.stack([np.cos(g.nodes), np.sin(2.0 * g.nodes) * 1j], axis=1).astype(complex)
    rotated = psi * np.exp(1j * angle)
    assert charge(rotated, g) == pytest.approx(charge(psi, g), rel=1e-14)
