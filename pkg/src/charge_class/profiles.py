"""Analytic data profiles for the spinor components.

A profile carries its pointwise values plus the first and second
antiderivatives of its squared modulus, which the closed-form massless
solution consumes.  Q(z) = int_0^z |f|^2 and Q2(z) = int_0^z Q; both vanish
at 0.  Everything is vectorized over the argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

SQRT_PI = float(np.sqrt(np.pi))


class Profile:
    def __call__(self, x):
        raise NotImplementedError

    def sq(self, x):
        return np.abs(self(x)) ** 2

    def sq_primitive(self, x):
        raise NotImplementedError

    def sq_primitive2(self, x):
        raise NotImplementedError

    def scaled(self, lam: float) -> "ScaledProfile":
        """lam^{3/2} f(lam x), the massless-invariance rescaling of the data."""
        return ScaledProfile(self, lam)

    def breakpoints(self) -> tuple:
        """Arguments where |f|^2 is not smooth (quadrature split points)."""
        return ()


@dataclass(frozen=True)
class ZeroProfile(Profile):
    def __call__(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def sq_primitive(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    sq_primitive2 = sq_primitive


@dataclass(frozen=True)
class GaussianProfile(Profile):
    """f(x) = amplitude * exp(-(x - center)^2 / (2 width^2))."""

    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0

    def __call__(self, x):
        xi = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-0.5 * xi * xi)

    def sq_primitive(self, x):
        xi = (np.asarray(x, dtype=float) - self.center) / self.width
        xi0 = -self.center / self.width
        c = self.amplitude**2 * self.width * SQRT_PI / 2.0
        return c * (erf(xi) - erf(xi0))

    def sq_primitive2(self, x):
        x = np.asarray(x, dtype=float)
        xi = (x - self.center) / self.width
        xi0 = -self.center / self.width
        c = self.amplitude**2 * self.width * SQRT_PI / 2.0

        def ierf(t):  # antiderivative of erf
            return t * erf(t) + np.exp(-t * t) / SQRT_PI

        return c * (self.width * (ierf(xi) - ierf(xi0)) - erf(xi0) * x)


@dataclass(frozen=True)
class EpsProfile(Profile):
    """The regularized square-root singularity (eps + |x|)^{-1/2} on [-1, 1].

    The antiderivatives of |f|^2 = 1/(eps + |x|) are hand-integrated
    logarithms; they are unit-tested against brute-force quadrature.
    """

    eps: float
    cutoff: bool = True

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")

    def breakpoints(self) -> tuple:
        return (-1.0, 0.0, 1.0) if self.cutoff else (0.0,)

    def _mask(self, x):
        if self.cutoff:
            return (np.abs(x) <= 1.0).astype(float)
        return np.ones_like(x)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self._mask(x) / np.sqrt(self.eps + np.abs(x))

    def sq(self, x):
        x = np.asarray(x, dtype=float)
        return self._mask(x) / (self.eps + np.abs(x))

    def sq_primitive(self, x):
        x = np.asarray(x, dtype=float)
        a = np.abs(x)
        eps = self.eps
        inside = np.log1p(np.minimum(a, 1.0) / eps) if self.cutoff else np.log1p(a / eps)
        return np.sign(x) * inside

    def sq_primitive2(self, x):
        x = np.asarray(x, dtype=float)
        a = np.abs(x)
        eps = self.eps

        def phi(z):  # int_0^z log((eps + z')/eps) dz' for z >= 0
            return (eps + z) * (np.log(eps + z) - 1.0) - eps * (np.log(eps) - 1.0) - z * np.log(eps)

        if self.cutoff:
            z = np.minimum(a, 1.0)
            tail = np.maximum(a - 1.0, 0.0) * np.log1p(1.0 / eps)
            return phi(z) + tail
        return phi(a)


@dataclass(frozen=True)
class ScaledProfile(Profile):
    base: Profile
    lam: float

    def breakpoints(self) -> tuple:
        return tuple(b / self.lam for b in self.base.breakpoints())

    def __call__(self, x):
        return self.lam**1.5 * self.base(self.lam * np.asarray(x, dtype=float))

    def sq(self, x):
        return self.lam**3 * self.base.sq(self.lam * np.asarray(x, dtype=float))

    def sq_primitive(self, x):
        return self.lam**2 * self.base.sq_primitive(self.lam * np.asarray(x, dtype=float))

    def sq_primitive2(self, x):
        return self.lam * self.base.sq_primitive2(self.lam * np.asarray(x, dtype=float))


class NumericProfile(Profile):
    """Wraps an arbitrary callable; antiderivatives by adaptive quadrature.

    Slow; meant for cross-checks, not production sweeps.
    """

    def __init__(self, func):
        self.func = func

    def __call__(self, x):
        return np.vectorize(self.func)(np.asarray(x, dtype=float))

    def sq_primitive(self, x):
        sq = lambda z: abs(self.func(z)) ** 2
        return np.vectorize(lambda z: quad(sq, 0.0, z, limit=200)[0])(
            np.asarray(x, dtype=float)
        )

    def sq_primitive2(self, x):
        return np.vectorize(lambda z: quad(lambda s: self.sq_primitive(s), 0.0, z, limit=200)[0])(
            np.asarray(x, dtype=float)
        )


def sample(profile: Profile, x: np.ndarray) -> np.ndarray:
    return np.asarray(profile(x))
