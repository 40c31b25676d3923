"""The below-charge blow-up experiment.

Sweeps the regularized data family over eps, pairs the resulting potential
component A_- against a smooth bump supported in the forward wedge
t > |x|, and fits the pairing against -log(eps); the fitted slope is
compared with the reference slope S0 = integral of ((t+x)/2) theta.  The
massive case is probed through the pointwise lower bound
|u|^2 (eps + x - t) >= 1/2 on short times and a Gronwall sup envelope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import CauchyData, Grid1D, SpinorSlice, SystemSpec, system_preset
from .cone import simpson_weights
from .evolve import SolutionTrace, evolve
from .massless import MasslessSolution
from .profiles import EpsProfile


def eps_data(eps: float, grid: Grid1D, n_potentials: int = 2) -> CauchyData:
    """Spinor data (eps + |x|)^{-1/2} on [-1, 1] in both components, zero
    potential data.  The node at x = 0, when present, carries the exact
    value eps^{-1/2}; the eps in the family is the regularization, so the
    samples are taken pointwise with no mollification."""
    p = EpsProfile(eps)
    x = grid.nodes
    f = p(x)
    psi0 = SpinorSlice(values=np.stack([f, f], axis=1).astype(complex), time=0.0)
    zeros = np.zeros((n_potentials, grid.n_nodes))
    return CauchyData(psi0, zeros, zeros.copy(), tag=f"eps-family({eps})")


@dataclass(frozen=True)
class TestFunction:
    """Bump exp(-1/(1 - r^2)) on the disc of radius r0 around (t0, x0),
    zero outside; support must sit inside {t > |x|} and {|x| + t <= 1}."""

    t0: float
    x0: float
    r0: float

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError("bump radius must be positive")
        if not (self.t0 - self.r0 > abs(self.x0) + self.r0):
            raise ValueError("bump support leaves the wedge t > |x|")
        if not (self.t0 + self.r0 + abs(self.x0) + self.r0 <= 1.0):
            raise ValueError("bump support leaves the region |x| + t <= 1")

    def __call__(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        r2 = ((t - self.t0) ** 2 + (x - self.x0) ** 2) / (self.r0**2)
        out = np.zeros(np.broadcast(t, x).shape)
        inside = r2 < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
        return out

    @property
    def t_range(self):
        return (self.t0 - self.r0, self.t0 + self.r0)

    @property
    def x_range(self):
        return (self.x0 - self.r0, self.x0 + self.r0)


@dataclass(frozen=True)
class PairingResult:
    eps: float
    pairing: float
    quadrature_error_estimate: float


@dataclass(frozen=True)
class FitReport:
    slope: float
    intercept: float
    residual: float
    reference_slope: float
    pairings: tuple = ()


def _box_quadrature(func, t_range, x_range, h: float) -> float:
    """2D composite Simpson of func(t, x) over a box at spacing ~h."""
    nt = max(2, int(np.ceil((t_range[1] - t_range[0]) / h)))
    nx = max(2, int(np.ceil((x_range[1] - x_range[0]) / h)))
    nt += nt % 2
    nx += nx % 2
    ts = np.linspace(*t_range, nt + 1)
    xs = np.linspace(*x_range, nx + 1)
    wt = simpson_weights(nt) * (t_range[1] - t_range[0]) / nt
    wx = simpson_weights(nx) * (x_range[1] - x_range[0]) / nx
    tt, xx = np.meshgrid(ts, xs, indexing="ij")
    vals = func(tt, xx)
    return float(np.einsum("i,j,ij->", wt, wx, vals))


def pairing(
    A_minus: Callable[[np.ndarray, np.ndarray], np.ndarray],
    theta: TestFunction,
    grid: Grid1D,
    eps: float = float("nan"),
) -> PairingResult:
    """P = - integral of A_-(t,x) theta(t,x) over the bump support, by 2D
    Simpson at the lattice spacing; the error estimate is the Richardson
    difference against the double spacing."""
    func = lambda t, x: -np.asarray(A_minus(t, x)) * theta(t, x)
    fine = _box_quadrature(func, theta.t_range, theta.x_range, grid.dx)
    coarse = _box_quadrature(func, theta.t_range, theta.x_range, 2.0 * grid.dx)
    return PairingResult(
        eps=eps, pairing=fine, quadrature_error_estimate=abs(fine - coarse) / 15.0
    )


def reference_slope(theta: TestFunction, h: float = 1e-3) -> float:
    """S0 = integral of ((t + x)/2) theta(t, x) dt dx."""
    return _box_quadrature(
        lambda t, x: 0.5 * (t + x) * theta(t, x), theta.t_range, theta.x_range, h
    )


def oracle_A_minus(eps: float) -> Callable:
    sol = MasslessSolution(EpsProfile(eps), EpsProfile(eps))
    return sol.A_minus


def trace_A_minus(trace: SolutionTrace, grid: Grid1D) -> Callable:
    """A_- = A_0 - A_1 = V_1 - V_2 from stored lattice slices, bilinearly
    interpolated between nodes and time levels (requires stride 1)."""
    if trace.stride != 1:
        raise ValueError("A_- lookup needs a full-stride trace")
    table = np.stack([pot.V[0] - pot.V[1] for pot in trace.potentials])

    def A(t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        tt, xx = np.broadcast_arrays(t, x)
        ft = tt / grid.dt
        fx = (xx - grid.x_min) / grid.dx
        it = np.clip(np.floor(ft).astype(int), 0, table.shape[0] - 2)
        ix = np.clip(np.floor(fx).astype(int), 0, table.shape[1] - 2)
        at = ft - it
        ax = fx - ix
        return (
            (1 - at) * (1 - ax) * table[it, ix]
            + (1 - at) * ax * table[it, ix + 1]
            + at * (1 - ax) * table[it + 1, ix]
            + at * ax * table[it + 1, ix + 1]
        )

    return A


def sweep_and_fit(
    eps_list,
    spec: SystemSpec,
    theta: TestFunction,
    grid: Grid1D,
    use_oracle: bool = True,
) -> FitReport:
    """Pair A_- against theta for each eps and fit P(eps) ~ slope * (-log eps).

    The massless path uses the closed-form solution; otherwise each eps is
    evolved on the lattice (stride 1) and the stored potential is paired.
    """
    eps_list = list(eps_list)
    if len(eps_list) < 3:
        raise ValueError("need at least 3 eps values for a meaningful fit")
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps values must be positive")
    results = []
    for eps in eps_list:
        if use_oracle:
            A = oracle_A_minus(eps)
        else:
            horizon = theta.t0 + theta.r0
            T = grid.dt * int(np.ceil(horizon / grid.dt))
            trace = evolve(eps_data(eps, grid, spec.n_potentials), spec, grid, T)
            A = trace_A_minus(trace, grid)
        results.append(pairing(A, theta, grid, eps=eps))
    logs = np.array([-np.log(r.eps) for r in results])
    ps = np.array([r.pairing for r in results])
    coef, res, *_ = np.polyfit(logs, ps, 1, full=True)
    residual = float(res[0]) if len(res) else 0.0
    return FitReport(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        residual=residual,
        reference_slope=reference_slope(theta),
        pairings=tuple(results),
    )


DEFAULT_THETA = TestFunction(t0=0.5, x0=0.0, r0=0.2)
DEFAULT_THETA_MASSIVE = TestFunction(t0=0.08, x0=0.0, r0=0.03)
DEFAULT_EPS_LIST = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
DEFAULT_EPS_LIST_LATTICE = (1e-2, 1e-3, 1e-4)


@dataclass
class KeyBoundReport:
    min_ratio: float  # min over the region of |u|^2 (eps + x - t)
    gronwall_max: float  # max over (rho, t) of B_rho(t) (eps + rho) / 4
    eps: float
    M: float


def key_bound_report(
    M: float,
    eps: float,
    spec: Optional[SystemSpec] = None,
    grid: Optional[Grid1D] = None,
    rho_list=(0.05, 0.1, 0.2, 0.4),
) -> KeyBoundReport:
    """Evolve the massive system with eps-family data and measure both the
    pointwise lower-bound ratio |u|^2 (eps + x - t) on
    {0 < t < 1/(8|M|), t < x < 1 - t} and the Gronwall envelope
    B_rho(t) <= 4 / (eps + rho) for t < 1/(2|M|)."""
    if M == 0:
        raise ValueError("the key bound probe needs M != 0")
    if spec is None:
        spec = system_preset("MD", M=M)
    if grid is None:
        grid = Grid1D(-1.25, 1.25, 8192)
    t_key = 1.0 / (8.0 * abs(M))
    t_gron = 1.0 / (2.0 * abs(M))
    T = grid.dt * int(t_gron / grid.dt)
    x = grid.nodes

    state = {"min_ratio": np.inf, "gron": 0.0}

    def hook(step, sl, V):
        t = step * grid.dt
        u2 = np.abs(sl.values[:, 0]) ** 2
        v2 = np.abs(sl.values[:, 1]) ** 2
        if 0 < t < t_key:
            sel = (x > t) & (x < 1.0 - t)
            if np.any(sel):
                ratio = u2[sel] * (eps + x[sel] - t)
                state["min_ratio"] = min(state["min_ratio"], float(np.min(ratio)))
        if t < t_gron:
            for rho in rho_list:
                sel = (x >= t + rho) & (x <= 1.0 - t)
                if np.any(sel):
                    b = float(np.max(u2[sel] + v2[sel]))
                    state["gron"] = max(state["gron"], b * (eps + rho) / 4.0)
        return None

    evolve(eps_data(eps, grid, spec.n_potentials), spec, grid, T, hook=hook,
           store_fields=False)
    return KeyBoundReport(
        min_ratio=state["min_ratio"], gronwall_max=state["gron"], eps=eps, M=M
    )


def moduli_identities_check(
    trace: SolutionTrace, spec: SystemSpec, grid: Grid1D, n_samples: int = 64, seed: int = 0
) -> float:
    """Max residual of the transported-modulus identities
    |u(t,x)|^2 = |u(0,x-t)|^2 - 2M int_0^t Im(u vbar) along the right
    characteristic (and the v counterpart along the left one), with the
    integral by trapezoid over stored full-stride slices."""
    if trace.stride != 1:
        raise ValueError("moduli identities need a full-stride trace")
    M = spec.M
    rng = np.random.default_rng(seed)
    n_steps = len(trace.spinors) - 1
    n_nodes = grid.n_nodes
    psi0 = trace.spinors[0].values
    worst = 0.0
    for _ in range(n_samples):
        r = int(rng.integers(1, n_steps + 1))
        i = int(rng.integers(r, n_nodes - r))
        imuv_right = np.array(
            [
                float(np.imag(s.values[i - r + q, 0] * np.conj(s.values[i - r + q, 1])))
                for q, s in enumerate(trace.spinors[: r + 1])
            ]
        )
        imuv_left = np.array(
            [
                float(np.imag(s.values[i + r - q, 0] * np.conj(s.values[i + r - q, 1])))
                for q, s in enumerate(trace.spinors[: r + 1])
            ]
        )
        dt = grid.dt
        int_r = dt * float(np.sum(imuv_right) - 0.5 * (imuv_right[0] + imuv_right[-1]))
        int_l = dt * float(np.sum(imuv_left) - 0.5 * (imuv_left[0] + imuv_left[-1]))
        st = trace.spinors[r].values
        res_u = abs(
            np.abs(st[i, 0]) ** 2 - np.abs(psi0[i - r, 0]) ** 2 + 2.0 * M * int_r
        )
        res_v = abs(
            np.abs(st[i, 1]) ** 2 - np.abs(psi0[i + r, 1]) ** 2 - 2.0 * M * int_l
        )
        worst = max(worst, res_u, res_v)
    return worst
