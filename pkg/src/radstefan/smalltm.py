"""Contraction fixed point for small melting temperature.

After pulling the melting temperature out of the unknown (f = eps * ftilde,
ftilde(0) = 1), the solid equation becomes the integral fixed point

    L[f](y) = 1 + eps^3 int_0^y e^{c xi} int_xi^inf e^{-c eta}
              ( K[f^4](eta) - f^4(eta) ) deta dxi,

a contraction in the norm |f_inf| + sup e^{y/2} |f - f_inf| once eps is
below explicit thresholds.  The double integral is evaluated in O(N): the
inner factor by an exponentially weighted backward recursion (no e^{c y}
overflow), the outer by a cumulative trapezoid.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .discretization import assemble_kernel
from .errors import (
    ContractionFailureError,
    InsufficientDecayDataError,
    ExperimentalEpsilonWarning,
    SpaceViolationError,
)
from .kernel import kernel_tail
from .profiles import Profile, SolveReport

ATANH_HALF = math.atanh(0.5)

# Space constants of the weighted norm; the theory only needs B > 1 and a
# finite A, these defaults are loose enough not to trip at desk scale.
SPACE_A = 10.0
SPACE_B = 2.0
CONTRACTION_THETA = 0.5


@dataclass
class EpsilonThresholds:
    """Explicit smallness thresholds (all decreasing in c for c >= 1)."""

    eps1: float
    eps2: float
    eps3: float
    eps4: float
    A: float          # constant of the exponential decay estimate
    B_of_c: float
    gamma: float

    def admissible(self):
        return min(self.eps1, self.eps2, self.eps4)


@dataclass
class WeightedProfile:
    """Rescaled unknown ftilde with its far-field value and weighted seminorm."""

    profile: Profile
    f_inf: float
    weighted_seminorm: float


def epsilon_thresholds(c, c0=0.5, space_a=SPACE_A, space_b=SPACE_B,
                       theta=CONTRACTION_THETA):
    """Evaluate the explicit eps_1..eps_4 formulas at speed c > 0."""
    if c <= 0.0:
        raise ValueError("thresholds are defined for c > 0")
    eps1 = (c / (8.0 * math.exp(c))) ** (1.0 / 3.0)
    b_of_c = math.exp(c) * (1.0 + (4.0 + 8.0 * math.e) / c)
    gamma = 2.5 / (1.0 - math.exp(-0.5))
    eps2 = (1.0 / (2.0 * b_of_c * gamma)) ** (1.0 / 3.0)
    a_decay = 4.0 * b_of_c * math.sqrt(math.e) \
        + 2.0 * b_of_c * math.sqrt(math.e) / (1.0 - math.exp(-0.5))
    eps3 = min(1.0, ((1.0 - c0) / (1.0 / (2.0 * (c + 1.0))
                                   + (4.0 * a_decay / (2.0 * c + 1.0))
                                   * (16.0 * ATANH_HALF + 15.0))) ** (1.0 / 3.0))
    c1_ab = space_b / (2.0 * (c + 1.0)) \
        + (4.0 * space_a * space_b / (2.0 * c + 1.0)) * (40.0 * ATANH_HALF + 20.0)
    eps5 = (1.0 / space_b) * ((space_b - 1.0) / c1_ab) ** (1.0 / 3.0)
    eps6 = ((space_b**3 / space_a)
            * (4.0 * space_a * (2.0 * ATANH_HALF + 1.0) / (2.0 * c + 1.0)
               + space_b / (2.0 * (c + 1.0)))) ** (-1.0 / 3.0)
    c2_ab = max(52.0 * space_a * space_b**2 + 4.0 * space_b**3,
                108.0 * space_b**3)
    eps7 = ((2.0 * c2_ab / theta)
            * (4.0 * (2.0 * ATANH_HALF + 1.0) / (2.0 * c + 1.0)
               + 1.0 / (c + 1.0))) ** (-1.0 / 3.0)
    return EpsilonThresholds(eps1=eps1, eps2=eps2, eps3=eps3,
                             eps4=min(eps5, eps6, eps7),
                             A=a_decay, B_of_c=b_of_c, gamma=gamma)


def _wrap(profile_values, grid, f_inf):
    dev = np.abs(profile_values - f_inf)
    seminorm = float(np.max(np.exp(grid.nodes / 2.0) * dev))
    prof = Profile(grid=grid, values=profile_values, boundary_value=1.0,
                   f_inf_estimate=float(f_inf))
    return WeightedProfile(profile=prof, f_inf=float(f_inf),
                           weighted_seminorm=seminorm)


def fixedpoint_map(f, eps, c, grid, kernel_op=None, left_closure=None,
                   space_a=SPACE_A, space_b=SPACE_B):
    """One application of the integral map L to a WeightedProfile.

    left_closure, when given, extends the kernel integrand by that constant
    on (-inf, 0) (idealized full-line variant used by identity tests).
    Raises SpaceViolationError when the image leaves the weighted space.
    """
    if kernel_op is None:
        kernel_op = assemble_kernel(grid, alpha=1.0)
    y = grid.nodes
    h = np.diff(y)
    v = f.profile.values**4
    s = kernel_op.apply(v, left_value=left_closure) - v
    # backward recursion for W(y_i) = int_{y_i}^inf e^{-c(eta-y_i)} s(eta) deta
    w = np.empty_like(s)
    w[-1] = -(f.f_inf**4) * kernel_tail(float(y[-1])) / (c + 1.0)
    decay = np.exp(-c * h)
    for i in range(y.size - 2, -1, -1):
        w[i] = decay[i] * w[i + 1] + 0.5 * h[i] * (s[i] + decay[i] * s[i + 1])
    outer = np.concatenate([[0.0], np.cumsum(0.5 * h * (w[:-1] + w[1:]))])
    values = 1.0 + eps**3 * outer
    f_inf = float(values[-1])
    image = _wrap(values, grid, f_inf)
    if np.max(np.abs(values)) > space_b or image.weighted_seminorm > space_a:
        raise SpaceViolationError(
            f"map image left the space (|f| <= {space_b}, seminorm <= {space_a}); "
            "eps is too large for the weighted-space iteration")
    return image


def _xnorm_difference(f, g):
    """Norm |df_inf| + sup e^{y/2}|d(f - f_inf)| of the difference f - g."""
    d_inf = f.f_inf - g.f_inf
    dev = (f.profile.values - f.f_inf) - (g.profile.values - g.f_inf)
    y = f.profile.grid.nodes
    return abs(d_inf) + float(np.max(np.exp(y / 2.0) * np.abs(dev)))


def contraction_solve(eps, c, grid, tol=1e-12, kernel_op=None, max_iter=80,
                      space_a=SPACE_A, space_b=SPACE_B):
    """Iterate the map from ftilde = 1 until the weighted increment is < tol.

    The report's contraction_ratio is the first measured increment ratio
    theta_hat = ||f_2 - f_1|| / ||f_1 - f_0||; the solve aborts if ratios
    stay >= 1 for three consecutive steps.
    """
    thresholds = epsilon_thresholds(c, space_a=space_a, space_b=space_b)
    if eps >= thresholds.admissible():
        warnings.warn(
            f"eps = {eps:g} above the proven contraction threshold "
            f"{thresholds.admissible():.4g}; run is experimental",
            ExperimentalEpsilonWarning)
    if kernel_op is None:
        kernel_op = assemble_kernel(grid, alpha=1.0)
    current = _wrap(np.ones(grid.nodes.size), grid, 1.0)
    report = SolveReport()
    bad_ratio_streak = 0
    for k in range(max_iter):
        nxt = fixedpoint_map(current, eps, c, grid, kernel_op=kernel_op,
                             space_a=space_a, space_b=space_b)
        inc = _xnorm_difference(nxt, current)
        report.residual_history.append(inc)
        if len(report.residual_history) >= 2 and report.residual_history[-2] > 0:
            ratio = inc / report.residual_history[-2]
            if math.isnan(report.contraction_ratio):
                report.contraction_ratio = ratio
            if ratio >= 1.0 and inc > 64.0 * np.finfo(float).eps:
                bad_ratio_streak += 1
                if bad_ratio_streak >= 3:
                    raise ContractionFailureError(
                        f"measured ratio {ratio:.3f} >= 1 for 3 consecutive steps",
                        profile=nxt.profile, report=report)
            else:
                bad_ratio_streak = 0
        current = nxt
        report.outer_iterations = k + 1
        if inc < tol:
            report.converged = True
            break
    if not report.converged:
        raise ContractionFailureError(
            f"fixed-point iteration cap {max_iter} reached", profile=current.profile,
            report=report)
    report.f_inf = current.f_inf
    report.derivative_at_zero = float("nan")
    return current, report


def decay_rate(f, floor=1e-13):
    """Least-squares slope of log|f - f_inf| on [y_max/4, 3 y_max/4].

    Nodes where the deviation is below the floor are excluded; raises when
    fewer than 8 usable nodes remain (constant profiles carry no decay data).
    """
    y = f.profile.grid.nodes
    dev = np.abs(f.profile.values - f.f_inf)
    window = (y >= y[-1] / 4.0) & (y <= 3.0 * y[-1] / 4.0) & (dev > floor)
    if np.count_nonzero(window) < 8:
        raise InsufficientDecayDataError(
            "too few nodes with measurable deviation from f_inf")
    slope = np.polyfit(y[window], np.log(dev[window]), 1)[0]
    return float(slope)
