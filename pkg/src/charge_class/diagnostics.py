"""Conserved-quantity and a-priori-bound checkers over stored traces.

All checks are read-only; re-running them on the same trace is bit-stable.
Residuals are restricted to the domain of determinacy so padding-boundary
effects never contaminate them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import CauchyData, Grid1D, SpinorSlice, SystemSpec, charge, norms
from .evolve import SolutionTrace, evolve
from .massless import MasslessSolution
from .profiles import Profile


@dataclass
class DiagnosticsReport:
    charge_drift_rel: float
    gauge_residual_norms: Optional[np.ndarray] = None
    gauss_residual_norms: Optional[np.ndarray] = None
    energy_margin_min: float = float("nan")
    norm_growth_samples: Optional[np.ndarray] = None
    norm_growth_exponent: float = float("nan")
    scaling_mismatch: float = float("nan")


def charge_drift(trace: SolutionTrace, grid: Grid1D) -> float:
    """max_t |Q(t) - Q(0)| / Q(0) (absolute drift when Q(0) = 0)."""
    q = np.asarray(trace.step_charge)
    if q.size == 0:
        raise ValueError("empty trace")
    drift = np.max(np.abs(q - q[0]))
    return float(drift / q[0]) if q[0] > 0 else float(drift)


def _centered_dx(arr: np.ndarray, dx: float) -> np.ndarray:
    out = np.empty_like(arr)
    out[1:-1] = (arr[2:] - arr[:-2]) / (2.0 * dx)
    out[0] = (arr[1] - arr[0]) / dx
    out[-1] = (arr[-1] - arr[-2]) / dx
    return out


def _determinacy_mask(grid: Grid1D, t: float) -> np.ndarray:
    x = grid.nodes
    return (x >= grid.x_min + t + 2 * grid.dx) & (x <= grid.x_max - t - 2 * grid.dx)


def constraint_residuals(trace: SolutionTrace, grid: Grid1D):
    """Per-time L1 norms of the gauge residual d_t A_0 - d_x A_1 and the
    Gauss residual d_x E - |psi|^2 with E = d_x A_0 - d_t A_1, restricted to
    the domain of determinacy.  Requires a two-potential (MD-shaped) trace."""
    gauge, gauss = [], []
    for sl, pot in zip(trace.spinors, trace.potentials):
        if pot.n_potentials != 2:
            raise ValueError("constraint residuals only apply to the MD preset")
        if pot.Vdot is None:
            raise ValueError("trace must store Vdot")
        t = sl.time
        mask = _determinacy_mask(grid, t)
        if not np.any(mask):
            break
        a0, a1 = pot.V
        a0dot, a1dot = pot.Vdot
        lg = a0dot - _centered_dx(a1, grid.dx)
        e_field = _centered_dx(a0, grid.dx) - a1dot
        gs = _centered_dx(e_field, grid.dx) - np.sum(np.abs(sl.values) ** 2, axis=1)
        gauge.append(grid.dx * float(np.sum(np.abs(lg)[mask])))
        gauss.append(grid.dx * float(np.sum(np.abs(gs)[mask])))
    return np.asarray(gauge), np.asarray(gauss)


def md_compatible_data(
    psi0: SpinorSlice, a0: np.ndarray, a1: np.ndarray, grid: Grid1D, c: Optional[float] = None
) -> CauchyData:
    """MD data satisfying the gauge and Gauss constraints at t = 0:
    b_0 = a_1', b_1 = a_0' - E_0 with E_0 = c + cumulative integral of
    |psi_0|^2; by default c = -1/2 the total charge (symmetric field)."""
    density = np.sum(np.abs(psi0.values) ** 2, axis=1)
    cumulative = np.concatenate(
        [[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * grid.dx)]
    )
    # shift so the integral is measured from x = 0
    i0 = int(np.argmin(np.abs(grid.nodes)))
    cumulative = cumulative - cumulative[i0]
    if c is None:
        c = -0.5 * (cumulative[-1] + cumulative[0])
    e0 = c + cumulative
    b0 = _centered_dx(a1, grid.dx)
    b1 = _centered_dx(a0, grid.dx) - e0
    return CauchyData(psi0, np.stack([a0, a1]), np.stack([b0, b1]), tag="md-compatible")


def energy_margin(trace: SolutionTrace, grid: Grid1D) -> float:
    """min over steps of (|psi_0|_2 + int_0^t |F(s)|_2 ds) - |psi(t)|_2,
    with F the recorded interaction RHS."""
    rhs = np.asarray(trace.step_rhs_l2)
    q = np.sqrt(np.asarray(trace.step_charge))
    dt = grid.dt
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (rhs[1:] + rhs[:-1]) * dt)])
    return float(np.min(q[0] + cum - q))


def norm_growth(trace: SolutionTrace, grid: Grid1D, m: float):
    """Samples of sum_j (|V_j(t)|_Y + |Vdot_j(t)|_1) and the least-squares
    exponent of log(sample) against log(1 + t)."""
    if len(trace.potentials) < 10:
        raise ValueError("horizon too short for a growth fit (need >= 10 samples)")
    samples = []
    for pot in trace.potentials:
        if pot.Vdot is None:
            raise ValueError("trace must store Vdot")
        total = 0.0
        for j in range(pot.n_potentials):
            total += norms(pot.V[j], grid).y + norms(pot.Vdot[j], grid).l1
        samples.append((pot.time, total))
    arr = np.asarray(samples)
    pos = arr[:, 1] > 0
    if np.count_nonzero(pos) < 2:
        return arr, 0.0  # flat (e.g. identically zero data)
    p = np.polyfit(np.log1p(arr[pos, 0]), np.log(arr[pos, 1]), 1)
    return arr, float(p[0])


def scaling_mismatch_oracle(lam: float, f: Profile, g: Profile, t: float, x: np.ndarray) -> float:
    """Massless-invariance check on the closed form: compares the potential
    of the rescaled data against lam * A(lam t, lam x), and the spinor
    against lam^{3/2} psi(lam t, lam x), at the sampled points."""
    base = MasslessSolution(f, g)
    scaled = MasslessSolution(f.scaled(lam), g.scaled(lam))
    x = np.asarray(x, dtype=float)
    mism = 0.0
    for comp in ("A_plus", "A_minus"):
        a = getattr(scaled, comp)(t, x)
        b = lam * getattr(base, comp)(lam * t, lam * x)
        mism = max(mism, float(np.max(np.abs(a - b))))
    sa = scaled.spinor(t, x)
    sb = lam**1.5 * base.spinor(lam * t, lam * x)
    mism = max(mism, float(np.max(np.abs(sa - sb))))
    return mism


def scaling_check(
    lam: float, data: CauchyData, spec: SystemSpec, grid: Grid1D, T: float
) -> float:
    """Lattice version: evolve, then compare the rescaled solution with the
    evolution of the rescaled data on the node-aligned contracted grid.
    lam must map lattice nodes to lattice nodes (integer or dyadic)."""
    if spec.m != 0 or spec.M != 0:
        raise ValueError("the rescaling invariance is a massless MD property")
    # contracted grid with the same node count: node i maps to node i under
    # x -> lam x, and the step counts of the two evolutions coincide
    if lam <= 0:
        raise ValueError("lambda must be positive")
    fine = Grid1D(grid.x_min / lam, grid.x_max / lam, grid.n_cells)
    # rescaled data sampled on the contracted grid
    psi_s = lam**1.5 * _resample_complex(data.psi0.values, grid, fine, lam)
    v_s = lam * _resample_real(data.v, grid, fine, lam)
    w_s = lam * lam * _resample_real(data.w, grid, fine, lam)
    data_s = CauchyData(SpinorSlice(psi_s, 0.0), v_s, w_s)

    base = evolve(data, spec, grid, lam * T, stride=grid.steps(lam * T))
    scaled = evolve(data_s, spec, fine, T, stride=fine.steps(T))
    sl_b, pot_b = base.slice_at(lam * T)
    sl_s, pot_s = scaled.slice_at(T)
    mask = _determinacy_mask(fine, T)
    dpsi = np.max(
        np.abs(sl_s.values - lam**1.5 * _resample_complex(sl_b.values, grid, fine, lam))[mask]
    )
    dV = np.max(
        np.abs(pot_s.V - lam * _resample_real(pot_b.V, grid, fine, lam))[:, mask]
    )
    scale = max(1.0, float(np.max(np.abs(sl_s.values))))
    return float(max(dpsi, dV) / scale)


def _resample_complex(values: np.ndarray, grid: Grid1D, fine: Grid1D, lam: float) -> np.ndarray:
    idx = np.rint((lam * fine.nodes - grid.x_min) / grid.dx).astype(int)
    return values[idx]


def _resample_real(rows: np.ndarray, grid: Grid1D, fine: Grid1D, lam: float) -> np.ndarray:
    idx = np.rint((lam * fine.nodes - grid.x_min) / grid.dx).astype(int)
    return rows[:, idx]
