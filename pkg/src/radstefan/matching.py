"""Liquid closed form, Stefan matching, c_max search, and the alpha rescaling."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .discretization import Grid, assemble_kernel, boundary_derivative, build_grid
from .errors import ConfigError, ScanRangeError, SupercriticalSpeedError
from .profiles import Profile
from .solid import monotone_iterate

STEFAN_TOL = 1e-8


@dataclass
class WaveParams:
    """Physical parameters of the two-phase wave."""

    c: float = None
    t_m: float = 1.0
    alpha: float = 1.0
    kappa: float = 1.0
    conductivity_ratio: float = 1.0   # K, liquid-over-solid flux weight
    latent_heat: float = 1.0          # L

    def __post_init__(self):
        if self.c is not None and self.c < 0.0:
            raise ConfigError(
                "c < 0 rejected: no bounded traveling wave exists for negative speeds")
        for name in ("t_m", "alpha", "kappa", "conductivity_ratio", "latent_heat"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")


@dataclass
class LiquidProfile:
    """Closed-form liquid temperature for y <= 0."""

    slope: float          # A = -T1'(0-)
    t_m: float
    c: float
    kappa: float

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.c > 0.0:
            vals = self.t_m + (self.slope / self.c) * self.kappa * (
                1.0 - np.exp(self.c / self.kappa * y))
        else:
            # c = 0 branch: T1 solves T1'' = 0
            vals = self.t_m - self.slope * y
        return float(vals) if vals.ndim == 0 else vals

    @property
    def far_field(self):
        if self.c > 0.0:
            return self.t_m + self.slope * self.kappa / self.c
        return math.inf if self.slope > 0.0 else self.t_m


@dataclass
class TravelingWave:
    params: WaveParams
    liquid_A: float
    liquid: LiquidProfile
    solid: Profile
    T_minus_inf: float
    f_inf: float
    interface_speed: float
    stefan_residual: float


def liquid_profile(a, params):
    """Evaluator of T1(y) = T_M + (A/c) kappa (1 - e^{(c/kappa) y}), y <= 0.

    For c = 0 the linear variant T1 = T_M - A y is returned instead.
    """
    if a < 0.0:
        raise ConfigError("liquid slope coefficient A must be nonnegative")
    return LiquidProfile(slope=float(a), t_m=params.t_m, c=float(params.c or 0.0),
                         kappa=params.kappa)


def match_interface(solid, params):
    """Assemble the two-phase wave from a converged solid profile.

    The liquid slope follows from the flux-jump condition,
    A = -(L c + T2'(0+)) / K; speeds past c_max (A < 0) are rejected.
    """
    c = float(params.c)
    lat = params.latent_heat
    k_ratio = params.conductivity_ratio
    solid_slope = boundary_derivative(solid)
    a_raw = -(lat * c + solid_slope) / k_ratio
    if a_raw < -STEFAN_TOL:
        raise SupercriticalSpeedError(
            f"requested c = {c:g} is supercritical: matching requires the liquid "
            f"slope A = {a_raw:.3e} >= 0 (T2'(0+) = {solid_slope:.6f})",
            liquid_slope=a_raw)
    a = max(a_raw, 0.0)
    liquid = liquid_profile(a, params)
    # c = (1/L) (K T1'(0-) - T2'(0+)) with T1'(0-) = -A
    residual = abs(c - (k_ratio * (-a) - solid_slope) / lat)
    t_minus = liquid.far_field if c > 0.0 else (math.inf if a > 0.0 else params.t_m)
    return TravelingWave(params=params, liquid_A=a, liquid=liquid, solid=solid,
                         T_minus_inf=t_minus,
                         f_inf=solid.f_inf_estimate if solid.f_inf_estimate is not None
                         else float(solid.values[-1]),
                         interface_speed=-c, stefan_residual=float(residual))


def _psi(c, params, grid, kernel_op, tol, max_outer):
    run = WaveParams(c=c, t_m=params.t_m, alpha=params.alpha, kappa=params.kappa,
                     conductivity_ratio=params.conductivity_ratio,
                     latent_heat=params.latent_heat)
    profile, report = monotone_iterate(run, grid, tol=tol, kernel_op=kernel_op,
                                       max_outer=max_outer)
    return report.derivative_at_zero + params.latent_heat * c, profile, report


def find_cmax(params, grid=None, scan_lo=1e-3, scan_hi=10.0, scan_points=40,
              psi_tol=1e-9, solve_tol=1e-10, max_outer=6000, n=800, y_max=16.0):
    """Largest admissible speed: root of psi(c) = T2'(0+; c) + L c.

    Scans a geometric c-grid over [scan_lo, scan_hi] * T_M^4 / L, brackets
    the smallest sign change, and bisects. All psi evaluations share one
    fixed compact grid so psi is continuous in c; the full (c, psi) table
    is returned for audit.  Returns (c_max, table) where table is a list of
    (c, psi) pairs sorted by c.
    """
    if grid is None:
        grid = build_grid(y_max, n, 1.0)
    kernel_op = assemble_kernel(grid, alpha=params.alpha)
    scale = params.t_m**4 / params.latent_heat
    cs = np.geomspace(scan_lo * scale, scan_hi * scale, scan_points)
    table = []
    bracket = None
    for c in cs:
        val, _, _ = _psi(float(c), params, grid, kernel_op, solve_tol, max_outer)
        table.append((float(c), float(val)))
        if bracket is None and len(table) >= 2:
            c0, p0 = table[-2]
            c1, p1 = table[-1]
            if p0 < 0.0 <= p1:
                bracket = (c0, p0, c1, p1)
    if table[0][1] >= 0.0:
        raise ScanRangeError(
            f"psi({table[0][0]:.4g}) = {table[0][1]:.4g} >= 0 at the smallest "
            "scanned speed; no admissible band found", table=table)
    if bracket is None:
        raise ScanRangeError(
            f"no sign change of psi on the scan range "
            f"[{cs[0]:.4g}, {cs[-1]:.4g}]; psi at endpoints: "
            f"{table[0][1]:.4g}, {table[-1][1]:.4g}", table=table)
    lo, plo, hi, phi = bracket
    c_root, p_root = (lo, plo) if abs(plo) < abs(phi) else (hi, phi)
    for _ in range(200):
        if abs(p_root) <= psi_tol or (hi - lo) <= 4.0 * np.finfo(float).eps * hi:
            break
        mid = 0.5 * (lo + hi)
        pmid, _, _ = _psi(mid, params, grid, kernel_op, solve_tol, max_outer)
        table.append((float(mid), float(pmid)))
        if abs(pmid) < abs(p_root):
            c_root, p_root = mid, pmid
        if pmid < 0.0:
            lo, plo = mid, pmid
        else:
            hi, phi = mid, pmid
    table.sort(key=lambda t: t[0])
    return float(c_root), table


def rescale(solid, alpha, target_grid=None):
    """Map an alpha = 1 solution to the alpha problem: f(y) = a^(2/3) ftilde(a y).

    Node positions contract by 1/alpha and values scale by alpha^(2/3);
    passing target_grid resamples by cubic spline onto it.
    """
    if alpha <= 0.0:
        raise ConfigError("alpha must be positive")
    nodes = solid.grid.nodes / alpha
    values = alpha ** (2.0 / 3.0) * solid.values
    if target_grid is None:
        grid = Grid(nodes=nodes, y_max=float(nodes[-1]),
                    stretch=solid.grid.stretch)
        out_values = values
    else:
        grid = target_grid
        spline = CubicSpline(nodes, values)
        out_values = spline(np.clip(target_grid.nodes, nodes[0], nodes[-1]))
    f_inf = solid.f_inf_estimate
    return Profile(grid=grid, values=out_values,
                   boundary_value=float(alpha ** (2.0 / 3.0) * solid.boundary_value),
                   f_inf_estimate=None if f_inf is None
                   else float(alpha ** (2.0 / 3.0) * f_inf))
