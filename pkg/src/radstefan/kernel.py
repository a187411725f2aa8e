"""Exponential-integral kernel, its exact integrals, and the Planck function.

The radiative operator acts through the normalized kernel

    E(x) = E1(|x|) / 2,      E1(x) = int_x^inf exp(-t)/t dt,

which has unit mass on the real line.  Everything downstream (product
integration, tail closures, exponential moments) reduces to four closed
forms collected here:

* antiderivative of E1:        t*E1(t) - exp(-t)
* antiderivative of t*E1(t):   t^2/2*E1(t) - (t+1)/2*exp(-t)
* tail mass:                   int_a^inf E = (exp(-a) - a*E1(a))/2
* exponential moment:          int_R E(z) exp(a z) dz = artanh(a)/a,  |a| < 1
"""

from dataclasses import dataclass

import numpy as np

from .errors import SingularityError

EULER_GAMMA = 0.57721566490153286060651209008240243

# Series below the split point, continued fraction above; the split at 1.0
# keeps both expansions at relative error <= 1e-12 in double precision.
_SERIES_SPLIT = 1.0
_SERIES_TERMS = 30
_CF_MAX_ITER = 400


def _e1_series(x):
    s = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, _SERIES_TERMS + 1):
        term = term * (-x) / k
        s -= term / k
    return -EULER_GAMMA - np.log(x) + s


def _e1_cf_scaled(x):
    # Modified Lentz evaluation of e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
    b = x + 1.0
    c = np.full_like(x, 1e300)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _CF_MAX_ITER + 1):
        a = -float(i * i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h[active] = h[active] * delta[active]
        active &= np.abs(delta - 1.0) > 1e-16
        if not active.any():
            break
    return h


def _e1_contfrac(x):
    return _e1_cf_scaled(x) * np.exp(-x)


def _e1_positive(x):
    """E1 on an array of strictly positive arguments."""
    out = np.empty_like(x)
    small = x <= _SERIES_SPLIT
    if small.any():
        out[small] = _e1_series(x[small])
    big = ~small
    if big.any():
        out[big] = _e1_contfrac(x[big])
    return out


def e1_scaled(x):
    """exp(x) E1(x) for x > 0; stays finite where E1 itself underflows."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("e1_scaled requires strictly positive finite arguments")
    flat = np.atleast_1d(arr)
    out = np.empty_like(flat)
    small = flat <= _SERIES_SPLIT
    if small.any():
        out[small] = np.exp(flat[small]) * _e1_series(flat[small])
    big = ~small
    if big.any():
        out[big] = _e1_cf_scaled(flat[big])
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def e1(x):
    """Exponential integral E1(x) = int_x^inf exp(-t)/t dt for x > 0.

    Accepts scalars or arrays; relative error <= 1e-12 over the whole
    positive axis (power series up to x = 1, modified Lentz continued
    fraction beyond).
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("e1 requires strictly positive finite arguments")
    res = _e1_positive(np.atleast_1d(arr))
    return float(res[0]) if arr.ndim == 0 else res.reshape(arr.shape)


def kernel_E(x):
    """Normalized kernel E(x) = E1(|x|)/2; symmetric, singular at 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr == 0.0):
        raise SingularityError(
            "kernel_E(0) is logarithmically singular; integrate over a cell instead"
        )
    return e1(np.abs(arr)) / 2.0


@dataclass(frozen=True)
class KernelEval:
    """A single kernel evaluation E(x) = E1(|x|)/2 away from the origin."""

    x: float
    value: float


def kernel_eval(x):
    return KernelEval(x=float(x), value=float(kernel_E(x)))


def _antiderivative_G(t):
    """G(t) = int_0^t E1(s) ds - 1 = t*E1(t) - exp(-t), t >= 0 (G(0) = -1)."""
    t = np.asarray(t, dtype=float)
    out = np.full_like(t, -1.0)
    pos = t > 0.0
    if pos.any():
        tp = t[pos]
        with np.errstate(over="ignore"):
            out[pos] = tp * _e1_positive(tp) - np.exp(-tp)
    return out


def _antiderivative_H(t):
    """H(t) = antiderivative of t*E1(t): t^2/2*E1(t) - (t+1)/2*exp(-t), H(0) = -1/2."""
    t = np.asarray(t, dtype=float)
    out = np.full_like(t, -0.5)
    pos = t > 0.0
    if pos.any():
        tp = t[pos]
        out[pos] = 0.5 * tp * tp * _e1_positive(tp) - 0.5 * (tp + 1.0) * np.exp(-tp)
    return out


def cumulative_mass(t):
    """C(t) = int_0^t E(s) ds for signed t; odd in t, C(+-inf) = +-1/2."""
    t = np.asarray(t, dtype=float)
    sign = np.sign(t)
    mag = np.where(np.isinf(t), 0.0, np.abs(t))
    res = 0.5 * (_antiderivative_G(mag) + 1.0)
    res = np.where(np.isinf(t), 0.5, res)
    res = sign * res
    return float(res) if np.isscalar(t) or res.ndim == 0 else res


def cumulative_first_moment(t):
    """D(t) = int_0^t s E(s) ds for signed t; even in t, D(+-inf) = 1/4."""
    t = np.asarray(t, dtype=float)
    mag = np.where(np.isinf(t), 0.0, np.abs(t))
    res = 0.5 * (_antiderivative_H(mag) + 0.5)
    res = np.where(np.isinf(t), 0.25, res)
    return float(res) if np.isscalar(t) or res.ndim == 0 else res


def kernel_cell_integral(a, b):
    """Exact int_a^b E(s) ds via the closed-form antiderivative.

    Handles intervals straddling the singularity at 0 and infinite
    endpoints; absolute error <= 1e-13.
    """
    a = float(a)
    b = float(b)
    if a > b:
        raise ValueError("kernel_cell_integral requires a <= b")
    if a == b:
        return 0.0
    return float(cumulative_mass(b) - cumulative_mass(a))


def kernel_tail(a):
    """Tail mass int_a^inf E(s) ds = (exp(-a) - a*E1(a))/2 for a >= 0.

    Satisfies kernel_tail(a) <= exp(-a)/2 and kernel_tail(0) = 1/2.
    """
    arr = np.asarray(a, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("kernel_tail requires a >= 0")
    out = np.full_like(arr, 0.5)
    pos = np.atleast_1d(arr > 0.0)
    flat = np.atleast_1d(arr)
    vals = np.atleast_1d(out)
    if pos.any():
        ap = flat[pos]
        vals[pos] = 0.5 * (np.exp(-ap) - ap * _e1_positive(ap))
    vals = np.clip(vals, 0.0, None)
    return float(vals[0]) if arr.ndim == 0 else vals.reshape(arr.shape)


def kernel_exp_moment(a):
    """int_R E(z) exp(a z) dz = artanh(a)/a for |a| < 1 (1 at a = 0)."""
    a = float(a)
    if abs(a) >= 1.0:
        raise ValueError("kernel exponential moment diverges for |a| >= 1")
    if a == 0.0:
        return 1.0
    return float(np.arctanh(a) / a)


# CODATA 2018 (exact by SI definition); kept local so the kernel module has
# no scipy dependency.
PLANCK_H = 6.62607015e-34      # J s
BOLTZMANN_K = 1.380649e-23     # J / K
LIGHT_SPEED = 299792458.0      # m / s


def planck_B(nu, T):
    """Planck spectral radiance B_nu(T) = 2 h nu^3 / c^2 / (exp(h nu / k T) - 1).

    nu in Hz, T in K; monotone increasing in T for fixed nu.
    """
    nu_arr = np.asarray(nu, dtype=float)
    t_arr = np.asarray(T, dtype=float)
    if np.any(nu_arr <= 0.0):
        raise ValueError("planck_B requires nu > 0")
    if np.any(t_arr <= 0.0):
        raise ValueError("planck_B requires T > 0")
    with np.errstate(over="ignore"):
        denom = np.expm1(PLANCK_H * nu_arr / (BOLTZMANN_K * t_arr))
        res = 2.0 * PLANCK_H * nu_arr**3 / LIGHT_SPEED**2 / denom
    res = np.where(np.isinf(denom), 0.0, res)
    if np.isscalar(nu) and np.isscalar(T):
        return float(res)
    return res
