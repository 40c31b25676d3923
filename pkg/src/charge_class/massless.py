"""Closed-form massless (M = 0) Maxwell-Dirac solution.

With data u(0) = f, v(0) = g and zero potential data, the light-cone
components transport freely up to a real phase,

    u(t,x) = f(x-t) e^{i phi_+},   v(t,x) = g(x+t) e^{i phi_-},

and the potentials are double cone integrals of |g|^2 and |f|^2.  Writing
Q, Q2 for the first and second antiderivatives of |f|^2 (G, G2 for |g|^2),
the cone integrals collapse to

    A_-(t,x) = t Q(x-t) - (Q2(x+t) - Q2(x-t)) / 2,
    A_+(t,x) = -t G(x+t) + (G2(x+t) - G2(x-t)) / 2,

which this module evaluates exactly; the phases are Gauss-Legendre
quadratures of A_+- along the characteristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .profiles import Profile

GL_NODES_PER_UNIT_TIME = 32


@dataclass(frozen=True)
class MasslessSolution:
    f: Profile
    g: Profile
    gl_nodes_per_unit_time: int = GL_NODES_PER_UNIT_TIME

    def A_minus(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        Q = self.f.sq_primitive
        Q2 = self.f.sq_primitive2
        return t * Q(x - t) - 0.5 * (Q2(x + t) - Q2(x - t))

    def A_plus(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        G = self.g.sq_primitive
        G2 = self.g.sq_primitive2
        return -t * G(x + t) + 0.5 * (G2(x + t) - G2(x - t))

    def _piecewise_gl(self, integrand, t: float, sigma_breaks):
        """Gauss-Legendre in sigma over [0, t], split at the (per-x) break
        positions where the integrand loses smoothness.

        sigma_breaks is a list of arrays (one per break, each shaped like x,
        already sorted along the list); empty segments get zero weight.
        """
        n = max(16, int(np.ceil(self.gl_nodes_per_unit_time * t)))
        xi, wq = np.polynomial.legendre.leggauss(n)
        bounds = [np.clip(np.asarray(b, dtype=float), 0.0, t) for b in sigma_breaks]
        segs = [np.zeros_like(bounds[0])] + bounds + [np.full_like(bounds[0], t)]
        acc = 0.0
        for a, b in zip(segs[:-1], segs[1:]):
            half = 0.5 * (np.asarray(b) - np.asarray(a))
            mid = 0.5 * (np.asarray(a) + np.asarray(b))
            for q in range(n):
                sig = mid + half * xi[q]
                acc = acc + half * wq[q] * integrand(sig)
        return acc

    def phi_plus(self, t: float, x):
        """int_0^t A_+(sigma, x - t + sigma) d sigma (right characteristic)."""
        x = np.asarray(x, dtype=float)
        zc = x - t
        breaks = [0.5 * (b - zc) for b in sorted(self.g.breakpoints())]
        if not breaks:
            breaks = [np.full_like(zc, 0.0)]
        return self._piecewise_gl(lambda sig: self.A_plus(sig, zc + sig), t, breaks)

    def phi_minus(self, t: float, x):
        """int_0^t A_-(sigma, x + t - sigma) d sigma (left characteristic)."""
        x = np.asarray(x, dtype=float)
        zc = x + t
        breaks = [0.5 * (zc - b) for b in sorted(self.f.breakpoints(), reverse=True)]
        if not breaks:
            breaks = [np.full_like(zc, 0.0)]
        return self._piecewise_gl(lambda sig: self.A_minus(sig, zc - sig), t, breaks)

    def spinor(self, t: float, x):
        """(u, v) at time t, shape (n, 2) for array x."""
        x = np.asarray(x, dtype=float)
        u = self.f(x - t) * np.exp(1j * self.phi_plus(t, x))
        v = self.g(x + t) * np.exp(1j * self.phi_minus(t, x))
        return np.stack([u, v], axis=-1)

    def potentials_md(self, t: float, x):
        """(A_0, A_1) = ((A_+ + A_-)/2, (A_+ - A_-)/2) as an (2, n) array."""
        ap = self.A_plus(t, x)
        am = self.A_minus(t, x)
        return np.stack([0.5 * (ap + am), 0.5 * (ap - am)])


def exact_spinor(f: Profile, g: Profile, t: float, x):
    return MasslessSolution(f, g).spinor(t, x)


def exact_potentials(f: Profile, g: Profile, t: float, x):
    sol = MasslessSolution(f, g)
    return sol.A_plus(t, x), sol.A_minus(t, x)


def lower_bound_A_minus(t: float, x: float, eps: float) -> float:
    """Closed-form lower bound for -A_- of the eps-family solution, valid in
    the wedge t > |x|."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not t > abs(x):
        raise ValueError(f"point (t, x) = ({t}, {x}) is outside the wedge t > |x|")
    s = x + t
    return (
        0.5 * s * (-np.log(eps))
        + 0.5 * (eps + s) * (np.log(eps + s) - 1.0)
        - 0.5 * eps * (np.log(eps) - 1.0)
    )
