"""Bessel kernels J0(x) and J1(x)/x used by the Klein-Gordon cone integrals.

Evaluation strategy: Maclaurin series in x^2 up to the switch point
``_SWITCH`` (terms by recurrence, accumulated in double-double arithmetic to
tame the cancellation of the alternating series), Hankel asymptotic expansion
beyond.  J1(x)/x is computed directly as a series in x^2, never as J1(x)/x,
so the removable singularity at 0 costs nothing.
"""

from __future__ import annotations

import numpy as np

_SWITCH = 16.0
_SPLITTER = 134217729.0  # 2**27 + 1, Dekker split constant


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _two_prod(a, b):
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_mul(hi, lo, b):
    # (hi, lo) * b with b an ordinary double (array ok)
    p, e = _two_prod(hi, b)
    e = e + lo * b
    s, e2 = _two_sum(p, e)
    return s, e2


def _dd_add(hi, lo, bhi, blo):
    s, e = _two_sum(hi, bhi)
    e = e + lo + blo
    s2, e2 = _two_sum(s, e)
    return s2, e2


def _dd_div(hi, lo, b):
    # (hi, lo) / b with b an ordinary double
    q1 = hi / b
    p, e = _two_prod(q1, b)
    r = ((hi - p) - e) + lo
    q2 = r / b
    s, e2 = _two_sum(q1, q2)
    return s, e2


def _series(q, t0, denom):
    """Sum_{n>=0} t_n with t_0 = t0 and t_n = -t_{n-1} * q / denom(n).

    q = (x/2)^2 elementwise; accumulation and term recurrence in
    double-double precision.
    """
    acc_hi = np.full_like(q, t0)
    acc_lo = np.zeros_like(q)
    t_hi = np.full_like(q, t0)
    t_lo = np.zeros_like(q)
    for n in range(1, 200):
        t_hi, t_lo = _dd_mul(t_hi, t_lo, q)
        t_hi, t_lo = _dd_div(t_hi, t_lo, -denom(n))
        acc_hi, acc_lo = _dd_add(acc_hi, acc_lo, t_hi, t_lo)
        if np.all(np.abs(t_hi) <= 1e-17 * (np.abs(acc_hi) + 1e-300)):
            break
    return acc_hi + acc_lo


def _hankel(x, nu):
    """Asymptotic J_nu(x) for large x via the P/Q cosine expansion."""
    mu = 4.0 * nu * nu
    inv = 1.0 / x
    c = np.ones_like(x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    for k in range(1, 19):
        c = c * (mu - (2 * k - 1) ** 2) / (8.0 * k) * inv
        if k % 2 == 1:
            q = q + (-1.0) ** ((k - 1) // 2) * c
        else:
            p = p + (-1.0) ** (k // 2) * c
    chi = x - (0.5 * nu + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _validate(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel kernel argument must be finite")
    # both kernels are even; evaluate on |x|
    return np.abs(x)


def j0(x):
    """J0(x), accurate to ~1e-13 absolute over [-100, 100]."""
    x = _validate(x)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = x <= _SWITCH
    if np.any(small):
        xs = x[small]
        out[small] = _series(0.25 * xs * xs, 1.0, lambda n: float(n * n))
    if np.any(~small):
        out[~small] = _hankel(x[~small], 0.0)
    return out[0] if scalar else out


def j1_over_x(x):
    """J1(x)/x, with j1_over_x(0) = 1/2 exactly."""
    x = _validate(x)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = x <= _SWITCH
    if np.any(small):
        xs = x[small]
        out[small] = _series(0.25 * xs * xs, 0.5, lambda n: float(n * (n + 1)))
    if np.any(~small):
        xl = x[~small]
        out[~small] = _hankel(xl, 1.0) / xl
    return out[0] if scalar else out
