"""Far-field self-similar profile and radiation-intensity reconstruction.

The similarity equation

    -(z/2) F'(z) - F''(z) - (1/alpha^2) (F^4(z))'' = 0

is treated as a standalone two-point problem on [-Z, Z] with Dirichlet
states; the nonlinear flux is discretized conservatively as the centered
second difference of the nodal F^4 values.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve
from scipy.special import erf

from .discretization import Grid
from .errors import ConfigError, NonConvergenceError, OvershootWarning, TangentialRayError
from .kernel import planck_B

GAUSS_POINTS = 10


@dataclass
class SelfSimilarProfile:
    grid: Grid                 # nodes on [-Z, Z], z = x / sqrt(t)
    values: np.ndarray
    T_int: float
    T_inf: float
    alpha: float
    residual: np.ndarray = None

    def interp(self, z):
        return np.interp(z, self.grid.nodes, self.values)


def heat_ramp(t_int, t_inf, z):
    """alpha -> infinity reduction: classical erf connection profile."""
    return t_int + (t_inf - t_int) * (1.0 + erf(np.asarray(z) / 2.0)) / 2.0


def solve_selfsimilar(t_int, t_inf, alpha, z_max=10.0, n=2000, tol=1e-8,
                      max_newton=60):
    """Damped Newton on the discretized similarity equation.

    Initial guess is the erf-smoothed ramp; overshoot past the boundary
    states is flagged with a warning, not an error.
    """
    if t_int < 0.0 or t_inf < 0.0:
        raise ConfigError("boundary states must be nonnegative")
    if alpha <= 0.0:
        raise ConfigError("alpha must be positive")
    if z_max < 8.0:
        raise ConfigError("Z >= 8 required for the Gaussian-tail truncation")
    nodes = np.linspace(-z_max, z_max, n + 1)
    grid = Grid(nodes=nodes, y_max=float(z_max), stretch=1.0)
    h = nodes[1] - nodes[0]
    z_int = nodes[1:-1]
    inv_a2 = 1.0 / alpha**2

    def second_diff(v):
        return (v[:-2] - 2.0 * v[1:-1] + v[2:]) / h**2

    def first_diff(v):
        return (v[2:] - v[:-2]) / (2.0 * h)

    def residual_vec(f):
        r = np.empty_like(f)
        r[0] = f[0] - t_int
        r[-1] = f[-1] - t_inf
        r[1:-1] = (-0.5 * z_int * first_diff(f) - second_diff(f)
                   - inv_a2 * second_diff(f**4))
        return r

    f = heat_ramp(t_int, t_inf, nodes)
    r = residual_vec(f)
    rnorm = float(np.max(np.abs(r)))
    n1 = nodes.size
    main = np.arange(1, n1 - 1)
    for _ in range(max_newton):
        if rnorm <= tol:
            break
        fc = 4.0 * f**3 * inv_a2
        rows = np.concatenate([[0], main, main, main, [n1 - 1]])
        cols = np.concatenate([[0], main - 1, main, main + 1, [n1 - 1]])
        vals = np.concatenate([
            [1.0],
            0.5 * z_int / (2.0 * h) - 1.0 / h**2 - fc[:-2] / h**2,
            2.0 / h**2 + 2.0 * fc[1:-1] / h**2,
            -0.5 * z_int / (2.0 * h) - 1.0 / h**2 - fc[2:] / h**2,
            [1.0],
        ])
        jac = sparse.csr_matrix((vals, (rows, cols)), shape=(n1, n1)).tocsc()
        step = spsolve(jac, -r)
        lam = 1.0
        for _ in range(31):
            f_new = f + lam * step
            r_new = residual_vec(f_new)
            rn_new = float(np.max(np.abs(r_new)))
            if rn_new < rnorm:
                break
            lam *= 0.5
        else:
            raise NonConvergenceError(
                f"self-similar Newton stalled at residual {rnorm:.3e}",
                profile=SelfSimilarProfile(grid, f, t_int, t_inf, alpha))
        f, r, rnorm = f_new, r_new, rn_new
    else:
        raise NonConvergenceError(
            f"self-similar Newton did not reach tol {tol:.1e} "
            f"(residual {rnorm:.3e})",
            profile=SelfSimilarProfile(grid, f, t_int, t_inf, alpha))
    lo, hi = min(t_int, t_inf), max(t_int, t_inf)
    over = max(float(lo - f.min()), float(f.max() - hi))
    if over > 1e-8 * max(1.0, hi):
        warnings.warn(f"profile overshoots the state interval by {over:.2e}",
                      OvershootWarning)
    return SelfSimilarProfile(grid=grid, values=f, T_int=float(t_int),
                              T_inf=float(t_inf), alpha=float(alpha),
                              residual=np.abs(r))


def reconstruct_intensity(temperature, nu, x, mu, alpha):
    """Radiation intensity at position x along direction cosine mu.

    Integrates alpha e^{-alpha tau} B_nu(T(x - tau mu)) along the ray.
    For mu > 0 the path ends at the interface (I = 0 enters there); for
    mu < 0 the path is infinite and closed with the constant far value of
    the temperature profile past the grid end.
    """
    if mu == 0.0:
        raise TangentialRayError("tangential rays (mu = 0) carry no path length")
    if alpha <= 0.0:
        raise ConfigError("alpha must be positive")
    nodes = temperature.grid.nodes
    values = temperature.values
    if x < nodes[0] or x > nodes[-1]:
        raise ConfigError("x must lie inside the solid grid")
    gx, gw = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    if mu > 0.0:
        s_end = nodes[0]          # interface side
    else:
        s_end = nodes[-1]
    # breakpoints in position space between x and s_end
    inner = nodes[(nodes > min(x, s_end)) & (nodes < max(x, s_end))]
    breaks = np.unique(np.concatenate([[min(x, s_end)], inner, [max(x, s_end)]]))
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        if half <= 0.0:
            continue
        s = mid + half * gx
        tau = (x - s) / mu
        t_ray = np.interp(s, nodes, values)
        total += half * np.sum(gw * alpha * np.exp(-alpha * tau)
                               * planck_B(nu, t_ray) / abs(mu))
    if mu < 0.0:
        tau_end = (x - nodes[-1]) / mu
        total += float(planck_B(nu, float(values[-1]))) * np.exp(-alpha * tau_end)
    return float(total)
