"""Characteristic-lattice evolution of the coupled spinor/potential system.

The spinor advances by Strang splitting: half-step unitary rotation by the
pointwise hermitian interaction, exact one-node characteristic shift
(u right, v left), half-step rotation.  The rotation is a closed-form 2x2
matrix exponential via the Pauli decomposition, so each node update is
exactly unitary and the discrete charge is conserved to rounding.  The
potentials advance by leapfrog at CFL 1, which is exact for free waves.
Fields are assumed to vanish outside the grid (pad by the time horizon).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    BETA,
    CauchyData,
    Grid1D,
    NumericalError,
    PotentialState,
    SpinorSlice,
    SystemSpec,
    charge,
    norms,
    spinor_source,
)


@dataclass
class SolutionTrace:
    """Stored evolution: slices every `stride` steps plus cheap per-step
    scalars (charge and the L2 norm of the interaction RHS)."""

    grid: Grid1D
    stride: int
    spinors: list = field(default_factory=list)
    potentials: list = field(default_factory=list)
    step_times: list = field(default_factory=list)
    step_charge: list = field(default_factory=list)
    step_rhs_l2: list = field(default_factory=list)
    hook_results: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.spinors])

    def slice_at(self, t: float) -> tuple[SpinorSlice, PotentialState]:
        idx = int(round(t / (self.stride * self.grid.dt)))
        s = self.spinors[idx]
        if abs(s.time - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"time {t} is not stored (stride {self.stride})")
        return s, self.potentials[idx]


def _pauli_rotation(psi: np.ndarray, V: np.ndarray, spec: SystemSpec, theta: float) -> np.ndarray:
    """exp(i theta H) psi per node, H = sum_j V_j B_j - M beta (hermitian)."""
    H = np.einsum("jn,jab->nab", V, spec.B_array) - spec.M * BETA
    # H = c0 I + c . sigma with real c for hermitian H
    c0 = 0.5 * (H[:, 0, 0] + H[:, 1, 1]).real
    c3 = 0.5 * (H[:, 0, 0] - H[:, 1, 1]).real
    c1 = H[:, 0, 1].real
    c2 = -H[:, 0, 1].imag
    r = np.sqrt(c1 * c1 + c2 * c2 + c3 * c3)
    cos = np.cos(theta * r)
    # sin(theta r)/r with the removable singularity at r = 0
    sinc = theta * np.sinc(theta * r / np.pi)
    phase = np.exp(1j * theta * c0)
    u, v = psi[:, 0], psi[:, 1]
    out = np.empty_like(psi)
    out[:, 0] = phase * ((cos + 1j * sinc * c3) * u + 1j * sinc * (c1 - 1j * c2) * v)
    out[:, 1] = phase * (1j * sinc * (c1 + 1j * c2) * u + (cos - 1j * sinc * c3) * v)
    return out


def _transport(psi: np.ndarray) -> np.ndarray:
    """u moves one node right, v one node left; zero inflow at the edges."""
    out = np.zeros_like(psi)
    out[1:, 0] = psi[:-1, 0]
    out[:-1, 1] = psi[1:, 1]
    return out


def dirac_step(psi: SpinorSlice, V_mid: PotentialState, spec: SystemSpec, grid: Grid1D) -> SpinorSlice:
    """One Strang step of the spinor using the half-step potential V_mid."""
    grid.check_length(psi.values.T)
    grid.check_length(V_mid.V)
    half = 0.5 * grid.dt
    values = _pauli_rotation(psi.values, V_mid.V, spec, half)
    values = _transport(values)
    values = _pauli_rotation(values, V_mid.V, spec, half)
    return SpinorSlice(values=values, time=psi.time + grid.dt)


def _laplacian(V: np.ndarray, dx: float) -> np.ndarray:
    padded = np.pad(V, ((0, 0), (1, 1)))
    return (padded[:, :-2] - 2.0 * V + padded[:, 2:]) / (dx * dx)


def wave_step(
    V_prev: np.ndarray, V_curr: np.ndarray, source: np.ndarray, spec: SystemSpec, grid: Grid1D
) -> np.ndarray:
    """Leapfrog at CFL 1: V^{n+1}_i = V^n_{i-1} + V^n_{i+1} - V^{n-1}_i
    + dt^2 (S^n_i - m^2 V^n_i), with zero ghost nodes."""
    grid.check_length(V_curr)
    dt2 = grid.dt * grid.dt
    padded = np.pad(V_curr, ((0, 0), (1, 1)))
    return padded[:, :-2] + padded[:, 2:] - V_prev + dt2 * (source - spec.m**2 * V_curr)


def first_slice(data: CauchyData, spec: SystemSpec, grid: Grid1D) -> np.ndarray:
    """Second-order leapfrog bootstrap:
    V^1 = v + dt w + dt^2/2 (Lap v - m^2 v + S^0)."""
    S0 = spinor_source(data.psi0.values, spec)
    dt = grid.dt
    return data.v + dt * data.w + 0.5 * dt * dt * (
        _laplacian(data.v, grid.dx) - spec.m**2 * data.v + S0
    )


def evolve(
    data: CauchyData,
    spec: SystemSpec,
    grid: Grid1D,
    T: float,
    stride: int = 1,
    hook: Optional[Callable[[int, SpinorSlice, np.ndarray], object]] = None,
    store_fields: bool = True,
) -> SolutionTrace:
    """Interleaved spinor/potential evolution to time T.

    The spinor step at level k uses the predictor average (V^k + V^{k+1})/2;
    Vdot is the centered difference of adjacent potential levels.
    """
    if data.n_potentials != spec.n_potentials:
        raise ValueError(
            f"data carries {data.n_potentials} potentials, system expects "
            f"{spec.n_potentials}"
        )
    grid.check_length(data.v)
    n_steps = grid.steps(T)
    dt = grid.dt

    psi = data.psi0.values.copy()
    V_k = data.v.astype(float).copy()
    V_k1 = first_slice(data, spec, grid)

    trace = SolutionTrace(grid=grid, stride=stride)

    def record(step, psi_vals, V, Vdot):
        t = step * dt
        if store_fields and step % stride == 0:
            trace.spinors.append(SpinorSlice(values=psi_vals.copy(), time=t))
            trace.potentials.append(PotentialState(V=V.copy(), Vdot=Vdot.copy(), time=t))
        trace.step_times.append(t)
        trace.step_charge.append(charge(psi_vals, grid))
        rhs = np.einsum("jn,jab,nb->na", V, spec.B_array, psi_vals)
        trace.step_rhs_l2.append(norms(np.sqrt(np.sum(np.abs(rhs) ** 2, axis=1)), grid).l2)
        if hook is not None:
            trace.hook_results.append(hook(step, SpinorSlice(psi_vals, t), V))

    record(0, psi, V_k, data.w.astype(float))

    for k in range(n_steps):
        V_mid = PotentialState(V=0.5 * (V_k + V_k1), Vdot=None, time=(k + 0.5) * dt)
        psi = dirac_step(SpinorSlice(psi, k * dt), V_mid, spec, grid).values
        if not np.all(np.isfinite(psi)):
            raise NumericalError(f"spinor became non-finite at step {k + 1}")
        S = spinor_source(psi, spec)
        V_k2 = wave_step(V_k, V_k1, S, spec, grid)
        if not np.all(np.isfinite(V_k2)):
            raise NumericalError(f"potential became non-finite at step {k + 1}")
        Vdot = (V_k2 - V_k) / (2.0 * dt)
        record(k + 1, psi, V_k1, Vdot)
        V_k, V_k1 = V_k1, V_k2

    return trace
