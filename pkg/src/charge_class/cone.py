"""Klein-Gordon and d'Alembert solution formulas as backward-cone quadratures.

Because dt = dx, every cone boundary passes through lattice nodes, so
composite Simpson along cone slices needs no interpolation.  Fields are
treated as zero outside the grid; callers are responsible for padding the
grid by at least the time horizon around the region of interest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bessel import j0, j1_over_x
from .core import Grid1D, norms


@dataclass(frozen=True)
class SourceSampler:
    """Inhomogeneity F(s, y) sampled on lattice slices.

    func(s, y_nodes) returns F on the given nodes at time s.  primitive, if
    set, returns an antiderivative P(s, y) in y (vectorized in y); it enables
    exact subcell integration of singular closed-form sources on the m = 0
    path, where the cone kernel is identically 1.
    """

    func: Callable[[float, np.ndarray], np.ndarray]
    primitive: Optional[Callable[[float, np.ndarray], np.ndarray]] = None

    @staticmethod
    def zero() -> "SourceSampler":
        return SourceSampler(lambda s, y: np.zeros_like(y))


def simpson_weights(n_intervals: int) -> np.ndarray:
    """Unit-spacing composite Newton-Cotes weights on n_intervals intervals.

    Simpson for even counts; Simpson plus a 3/8 tail for odd counts >= 3;
    trapezoid for a single interval.
    """
    if n_intervals < 0:
        raise ValueError("negative interval count")
    if n_intervals == 0:
        return np.zeros(1)
    if n_intervals == 1:
        return np.array([0.5, 0.5])
    w = np.zeros(n_intervals + 1)
    if n_intervals % 2 == 0:
        body = n_intervals
    else:
        body = n_intervals - 3
    if body > 0:
        w[0] += 1.0 / 3.0
        w[1:body:2] += 4.0 / 3.0
        w[2:body:2] += 2.0 / 3.0
        w[body] += 1.0 / 3.0
    if n_intervals % 2 == 1:
        w[-4] += 3.0 / 8.0
        w[-3] += 9.0 / 8.0
        w[-2] += 9.0 / 8.0
        w[-1] += 3.0 / 8.0
    return w


def _shift(f: np.ndarray, k: int) -> np.ndarray:
    """out[i] = f[i - k], zero-filled (fields vanish outside the grid)."""
    out = np.zeros_like(f)
    if k == 0:
        out[:] = f
    elif k > 0:
        out[k:] = f[:-k]
    else:
        out[:k] = f[-k:]
    return out


def _correlate(f: np.ndarray, kernel: np.ndarray, r: int) -> np.ndarray:
    """c[i] = sum_{d=-r..r} kernel[d + r] * f[i - d], kernel symmetric."""
    n = f.shape[0]
    return np.convolve(f, kernel, mode="full")[r : r + n]


def _check_horizon(grid: Grid1D, t: float) -> int:
    r = grid.steps(t)
    if r * grid.dx > grid.x_max - grid.x_min:
        raise ValueError(
            f"cone of half-width {t} exceeds the grid extent "
            f"[{grid.x_min}, {grid.x_max}]; pad the grid"
        )
    return r


def _cone_solve(f, g, F, m, grid, t, use_bessel):
    f = np.asarray(f)
    g = np.asarray(g)
    grid.check_length(f, "f")
    grid.check_length(g, "g")
    r = _check_horizon(grid, t)
    dx = grid.dx
    out = 0.5 * (_shift(f, r) + _shift(f, -r)).astype(
        complex if np.iscomplexobj(f) or np.iscomplexobj(g) else float
    )
    if r == 0:
        return out

    offsets = dx * np.arange(-r, r + 1)

    def kernels(lag):
        # kernel argument m * sqrt(tau^2 - (x-y)^2) on a slice at time lag tau
        tau = lag * dx
        d = offsets[r - lag : r + lag + 1]
        z = m * np.sqrt(np.maximum(tau * tau - d * d, 0.0))
        w = simpson_weights(2 * lag) * dx
        if use_bessel:
            return w * j0(z), w * j1_over_x(z)
        return w, None

    k0_full, k1_full = kernels(r)
    if use_bessel and m != 0.0:
        out -= (0.5 * m * m * t) * _correlate(f, k1_full, r)
    out += 0.5 * _correlate(g, k0_full, r)

    if F is not None:
        tw = simpson_weights(r) * grid.dt
        nodes = grid.nodes
        for q in range(r):  # lag r - q; the q = r slice has zero width
            lag = r - q
            s = q * grid.dt
            if not use_bessel and F.primitive is not None:
                tau = lag * dx
                inner = F.primitive(s, nodes + tau) - F.primitive(s, nodes - tau)
            else:
                k0_lag, _ = kernels(lag)
                inner = _correlate(np.asarray(F.func(s, nodes)), k0_lag, lag)
            out += 0.5 * tw[q] * inner
    return out


def kg_solve(f, g, F: Optional[SourceSampler], m: float, grid: Grid1D, t: float):
    """Solution of (d_tt - d_xx + m^2) u = F with (u, u_t)(0) = (f, g) at
    lattice time t, evaluated at every grid node (zero fields assumed outside
    the grid; keep the cone of the region of interest inside it)."""
    return _cone_solve(f, g, F, m, grid, t, use_bessel=True)


def dalembert_solve(f, g, F: Optional[SourceSampler], grid: Grid1D, t: float):
    """m = 0 case, evaluated without Bessel kernels; uses the exact
    antiderivative of F in the inner integral when the sampler provides one."""
    return _cone_solve(f, g, F, 0.0, grid, t, use_bessel=False)


def _source_l1_integral(F: SourceSampler, grid: Grid1D, t: float) -> float:
    r = grid.steps(t)
    if r == 0:
        return 0.0
    tw = simpson_weights(r) * grid.dt
    total = 0.0
    for q in range(r + 1):
        total += tw[q] * norms(np.asarray(F.func(q * grid.dt, grid.nodes)), grid).l1
    return total


def kg_bound_margin(
    f, g, F: Optional[SourceSampler], m: float, grid: Grid1D, t: float, C: float
) -> float:
    """RHS - LHS of the sup-norm a priori bound
    |u(t)|_inf <= C (1 + m^2 t^2) |f|_inf + C |g|_1 + C int_0^t |F(s)|_1 ds."""
    u = kg_solve(f, g, F, m, grid, t)
    lhs = norms(u, grid).linf
    rhs = C * (1.0 + m * m * t * t) * norms(np.asarray(f), grid).linf
    rhs += C * norms(np.asarray(g), grid).l1
    if F is not None:
        rhs += C * _source_l1_integral(F, grid, t)
    return rhs - lhs


def wave_bound_margin(f, g, F: Optional[SourceSampler], grid: Grid1D, t: float) -> float:
    """RHS - LHS of the m = 0 persistence bound
    |u(t)|_Y + |u_t(t)|_1 <= 3 (|f|_Y + |g|_1 + int_0^t |F(s)|_1 ds),
    with u_t by centered differencing of adjacent output times."""
    r = grid.steps(t)
    if r < 1:
        raise ValueError("need t >= dt to difference in time")
    u_prev = dalembert_solve(f, g, F, grid, (r - 1) * grid.dt)
    u = dalembert_solve(f, g, F, grid, r * grid.dt)
    u_next = dalembert_solve(f, g, F, grid, (r + 1) * grid.dt)
    ut = (u_next - u_prev) / (2.0 * grid.dt)
    lhs = norms(u, grid).y + norms(ut, grid).l1
    rhs = norms(np.asarray(f), grid).y + norms(np.asarray(g), grid).l1
    if F is not None:
        rhs += _source_l1_integral(F, grid, t)
    return 3.0 * rhs - lhs
