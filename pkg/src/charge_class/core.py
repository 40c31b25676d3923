"""Grids, field slices, discrete norms, and the coupled-system specification.

Everything here is an immutable value; operations are pure and safe to share
across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

# Dirac matrices in the representation gamma^0 = [[0,1],[1,0]],
# gamma^1 = [[0,-1],[1,0]]; alpha = gamma^0 gamma^1, beta = gamma^0.
GAMMA0 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
GAMMA1 = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
ALPHA = GAMMA0 @ GAMMA1  # diag(1, -1)
BETA = GAMMA0
IDENTITY2 = np.eye(2, dtype=complex)

HERMITICITY_TOL = 1e-14


class NumericalError(RuntimeError):
    """Raised when an evolution produces non-finite values."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform spatial lattice on [x_min, x_max] with dt = dx hard-wired."""

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if self.x_min >= self.x_max:
            raise ValueError(
                f"grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]"
            )
        if self.n_cells < 2:
            raise ValueError(f"grid needs n_cells >= 2, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def dt(self) -> float:
        # CFL = 1: characteristic transport is exact on the lattice
        return self.dx

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_nodes)

    def check_length(self, arr: np.ndarray, what: str = "field") -> None:
        if arr.shape[-1] != self.n_nodes:
            raise ValueError(
                f"{what} length {arr.shape[-1]} does not match grid "
                f"({self.n_nodes} nodes)"
            )

    def steps(self, t: float) -> int:
        """Number of lattice steps to reach time t; t must sit on the lattice."""
        k = int(round(t / self.dt))
        if k < 0 or abs(k * self.dt - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"time {t} is not a nonnegative multiple of dt={self.dt}")
        return k


def make_grid(x_min: float, x_max: float, n_cells: int) -> Grid1D:
    return Grid1D(x_min, x_max, n_cells)


@dataclass(frozen=True)
class SpinorSlice:
    """psi = (u, v) on one time slice; values has shape (n_nodes, 2)."""

    values: np.ndarray
    time: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("spinor slice must have shape (n_nodes, 2)")
        if not np.all(np.isfinite(v)):
            raise NumericalError(f"non-finite spinor entries at t={self.time}")
        object.__setattr__(self, "values", v)

    @property
    def u(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.values[:, 1]


@dataclass(frozen=True)
class PotentialState:
    """Potential components V_j and their time derivatives on one slice.

    V and Vdot have shape (N, n_nodes); Vdot may be None when a consumer
    only needs the values (e.g. the fixed-point operator output).
    """

    V: np.ndarray
    Vdot: Optional[np.ndarray]
    time: float

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        if V.ndim != 2:
            raise ValueError("potential values must have shape (N, n_nodes)")
        if not np.all(np.isfinite(V)):
            raise NumericalError(f"non-finite potential entries at t={self.time}")
        object.__setattr__(self, "V", V)
        if self.Vdot is not None:
            Vdot = np.asarray(self.Vdot, dtype=float)
            if Vdot.shape != V.shape:
                raise ValueError("Vdot shape must match V")
            if not np.all(np.isfinite(Vdot)):
                raise NumericalError(f"non-finite Vdot entries at t={self.time}")
            object.__setattr__(self, "Vdot", Vdot)

    @property
    def n_potentials(self) -> int:
        return self.V.shape[0]


@dataclass(frozen=True)
class CauchyData:
    """Initial data: spinor psi0, potential values v and velocities w."""

    psi0: SpinorSlice
    v: np.ndarray
    w: np.ndarray
    tag: Optional[str] = None

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.v, dtype=float))
        w = np.atleast_2d(np.asarray(self.w, dtype=float))
        if v.shape != w.shape:
            raise ValueError("v and w must have matching shapes")
        if v.shape[1] != self.psi0.values.shape[0]:
            raise ValueError("potential data length does not match spinor data")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @property
    def n_potentials(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class NormReport:
    l1: float
    l2: float
    linf: float
    y: float  # L_inf + discrete total variation


def _trapezoid_weights(n_nodes: int) -> np.ndarray:
    w = np.ones(n_nodes)
    w[0] = w[-1] = 0.5
    return w


def norms(values: np.ndarray, grid: Grid1D) -> NormReport:
    """Discrete L1 / L2 / L_inf / Y norms of a nodal field.

    L1 and L2 use trapezoid endpoint weights; the Y norm is sup plus the
    discrete total variation sum |f_{i+1} - f_i|.
    """
    f = np.asarray(values)
    grid.check_length(f)
    a = np.abs(f)
    w = _trapezoid_weights(grid.n_nodes)
    l1 = grid.dx * float(np.sum(w * a))
    l2 = float(np.sqrt(grid.dx * np.sum(w * a * a)))
    linf = float(np.max(a))
    tv = float(np.sum(np.abs(np.diff(f))))
    return NormReport(l1=l1, l2=l2, linf=linf, y=linf + tv)


def charge(psi: SpinorSlice | np.ndarray, grid: Grid1D) -> float:
    """dx-weighted integral of |u|^2 + |v|^2."""
    values = psi.values if isinstance(psi, SpinorSlice) else np.asarray(psi)
    grid.check_length(values.T if values.ndim == 2 else values)
    density = np.sum(np.abs(values) ** 2, axis=1)
    w = _trapezoid_weights(grid.n_nodes)
    return grid.dx * float(np.sum(w * density))


def _check_hermitian(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError(f"{name} must be a 2x2 matrix")
    if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
        raise ValueError(f"{name} is not hermitian to {HERMITICITY_TOL}")
    return mat


@dataclass(frozen=True)
class SystemSpec:
    """Coupled Dirac/wave system: matrices B_j (spinor coupling) and C_j
    (wave sources), Dirac mass M and boson mass m."""

    M: float
    m: float
    B: tuple
    C: tuple

    def __post_init__(self):
        if len(self.B) != len(self.C) or not self.B:
            raise ValueError("need matching, nonempty B and C matrix lists")
        B = tuple(_check_hermitian(b, f"B[{j}]") for j, b in enumerate(self.B))
        C = tuple(_check_hermitian(c, f"C[{j}]") for j, c in enumerate(self.C))
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def n_potentials(self) -> int:
        return len(self.B)

    @property
    def B_array(self) -> np.ndarray:
        return np.stack(self.B)

    @property
    def C_array(self) -> np.ndarray:
        return np.stack(self.C)

    def reflected(self) -> "SystemSpec":
        """The (M, B_j) -> (-M, -B_j) counterpart system."""
        return SystemSpec(
            M=-self.M, m=self.m, B=tuple(-b for b in self.B), C=self.C
        )


def system_preset(name: str, M: float = 0.0, m: float = 0.0) -> SystemSpec:
    """MD: V = (A_0, A_1), B = (I, alpha), C = (-I, alpha), m = 0.
    DKG: V = (phi,), B = C = (beta,)."""
    key = name.strip().upper()
    if key == "MD":
        if m != 0.0:
            raise ValueError("the MD preset has a massless potential (m = 0)")
        return SystemSpec(M=M, m=0.0, B=(IDENTITY2, ALPHA), C=(-IDENTITY2, ALPHA))
    if key == "DKG":
        return SystemSpec(M=M, m=m, B=(BETA,), C=(BETA,))
    raise ValueError(f"unknown system preset {name!r} (expected MD or DKG)")


def spinor_source(psi_values: np.ndarray, spec: SystemSpec) -> np.ndarray:
    """Wave-equation sources S_j = psi^* C_j psi, shape (N, n_nodes)."""
    return np.einsum(
        "na,jab,nb->jn", psi_values.conj(), spec.C_array, psi_values
    ).real
