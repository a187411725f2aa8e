"""Verification harness: every solver invariant as a named pass/fail suite.

Suites run deterministic, seeded computations at documented desk-scale
sizes and report the measured worst case against the pinned threshold.
The kernel_scale hook multiplies the assembled operator weights inside the
discrete-normalization suite (fault injection for the harness tests).
"""

import io
import math
import os
import platform
import tempfile
from dataclasses import dataclass

import numpy as np
import scipy
from scipy import integrate

from . import kernel as kmod
from .config import RunConfig, DEFAULT_SEED
from .discretization import (
    assemble_diff,
    assemble_kernel,
    build_grid,
    discrete_gradient,
    kernel_apply_gauss,
)
from .errors import SupercriticalSpeedError
from .matching import WaveParams, find_cmax, match_interface, rescale
from .profiles import Profile
from .selfsimilar import heat_ramp, reconstruct_intensity, solve_selfsimilar
from .smalltm import contraction_solve, epsilon_thresholds
from .solid import monotone_iterate
from .tables import write_profile

# Documented verify-scale problem sizes: compact domains keep the slowly
# mixing outer iterations affordable without touching any threshold.
SOLID_YMAX, SOLID_N = 12.0, 600
AGREE_YMAX, AGREE_N = 40.0, 1000
CMAX_YMAX, CMAX_N = 16.0, 800


@dataclass
class SuiteResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""


@dataclass
class VerificationReport:
    results: list
    seed: int
    config_echo: dict
    environment: str

    def all_passed(self):
        return all(r.passed for r in self.results)

    def to_text(self):
        out = io.StringIO()
        out.write("# radstefan verification report\n")
        out.write(f"environment: {self.environment}\n")
        out.write(f"seed: {self.seed}\n")
        for key in sorted(self.config_echo):
            out.write(f"config {key}: {self.config_echo[key]}\n")
        out.write(f"suites: {len(self.results)}\n")
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            out.write(f"suite {r.name}: {status} measured={r.measured:.6e} "
                      f"threshold={r.threshold:.6e}")
            if r.detail:
                out.write(f" ({r.detail})")
            out.write("\n")
        out.write(f"overall: {'PASS' if self.all_passed() else 'FAIL'}\n")
        return out.getvalue()


def exit_code(report):
    """Exit-status contract: zero iff all suites pass."""
    return 0 if report.all_passed() else 1


class _Context:
    """Shared seeded RNG plus solve caches reused across suites."""

    def __init__(self, seed, kernel_scale):
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.kernel_scale = kernel_scale
        self._grids = {}
        self._kernels = {}
        self._solid = {}
        self._cmax = None

    def grid(self, y_max, n):
        key = (y_max, n)
        if key not in self._grids:
            self._grids[key] = build_grid(y_max, n, 1.0)
        return self._grids[key]

    def kernel_op(self, y_max, n, alpha=1.0):
        key = (y_max, n, alpha)
        if key not in self._kernels:
            self._kernels[key] = assemble_kernel(self.grid(y_max, n), alpha=alpha)
        return self._kernels[key]

    def solid_run(self, c, t_m, y_max=SOLID_YMAX, n=SOLID_N, alpha=1.0,
                  tol=1e-10):
        key = (c, t_m, y_max, n, alpha, tol)
        if key not in self._solid:
            params = WaveParams(c=c, t_m=t_m, alpha=alpha)
            self._solid[key] = monotone_iterate(
                params, self.grid(y_max, n), tol=tol,
                kernel_op=self.kernel_op(y_max, n, alpha))
        return self._solid[key]

    def cmax_run(self):
        if self._cmax is None:
            params = WaveParams(c=None, t_m=1.0, alpha=1.0)
            self._cmax = find_cmax(params, n=CMAX_N, y_max=CMAX_YMAX)
        return self._cmax

    def band_run(self):
        if getattr(self, "_band", None) is None:
            c_max, _ = self.cmax_run()
            grid = self.grid(CMAX_YMAX, CMAX_N)
            op = self.kernel_op(CMAX_YMAX, CMAX_N)
            self._band = []
            for frac in (0.2, 0.4, 0.6, 0.8, 1.0):
                params = WaveParams(c=frac * c_max, t_m=1.0, alpha=1.0)
                profile, _ = monotone_iterate(params, grid, tol=1e-10,
                                              kernel_op=op, max_outer=6000)
                self._band.append(match_interface(profile, params))
        return self._band

    def agreement_run(self):
        if getattr(self, "_agree", None) is None:
            self._agree = _smalltm_agreement_runs(self)
        return self._agree


def _result(name, measured, threshold, detail="", larger_is_fail=True):
    passed = measured <= threshold if larger_is_fail else measured >= threshold
    return SuiteResult(name=name, passed=bool(passed), measured=float(measured),
                       threshold=float(threshold), detail=detail)


# ----------------------------------------------------------------- kernel

def _suite_kernel_normalization(ctx):
    worst = 0.0
    for big_l in (5.0, 10.0, 20.0):
        cuts = np.sort(ctx.rng.uniform(-big_l, big_l, size=37))
        edges = np.concatenate([[-big_l], cuts, [big_l]])
        total = sum(kmod.kernel_cell_integral(a, b)
                    for a, b in zip(edges[:-1], edges[1:]))
        total += 2.0 * kmod.kernel_tail(big_l)
        worst = max(worst, abs(total - 1.0))
    return _result("kernel.normalization", worst, 1e-10,
                   "partition mass + tails vs 1")


def _suite_kernel_tail_bound(ctx):
    a = np.sort(ctx.rng.uniform(0.0, 40.0, size=1000))
    excess = np.max(kmod.kernel_tail(a) - np.exp(-a) / 2.0)
    return _result("kernel.tail_bound", excess, 0.0,
                   "kernel_tail(a) - exp(-a)/2 over 1000 samples")


def _suite_kernel_moment(ctx):
    worst = 0.0
    for a in (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9):
        span = 60.0 / (1.0 - abs(a))
        val = 0.0
        for lo, hi in ((-span, 0.0), (0.0, span)):
            part, _ = integrate.quad(
                lambda z: 0.5 * kmod.e1(abs(z)) * math.exp(a * z), lo, hi,
                epsabs=1e-12, epsrel=1e-12, limit=800)
            val += part
        worst = max(worst, abs(val - kmod.kernel_exp_moment(a)))
    return _result("kernel.moment_identity", worst, 1e-8,
                   "artanh(a)/a vs adaptive quadrature at 6 values")


def _suite_kernel_antiderivative(ctx):
    t = np.linspace(0.01, 20.0, 400)
    h = 1e-5
    g_plus = (t + h) * kmod.e1(t + h) - np.exp(-(t + h))
    g_minus = (t - h) * kmod.e1(t - h) - np.exp(-(t - h))
    deriv = (g_plus - g_minus) / (2.0 * h)
    worst = float(np.max(np.abs(deriv - kmod.e1(t))))
    return _result("kernel.antiderivative", worst, 1e-6,
                   "d/dt[t E1 - e^-t] vs E1 by finite differences")


# --------------------------------------------------------- discretization

def _suite_disc_normalization(ctx):
    op = ctx.kernel_op(40.0, 400)
    total = (ctx.kernel_scale * op.weights).sum(axis=1) + op.left_tail + op.right_tail
    worst = float(np.max(np.abs(total - 1.0)))
    return _result("discretization.normalization", worst, 1e-8,
                   "row sums + tail corrections vs 1")


def _suite_disc_exp_moment(ctx):
    grid = ctx.grid(40.0, 800)     # h = 0.05
    op = ctx.kernel_op(40.0, 800)
    worst = 0.0
    for a in (0.25, 0.5):
        v = np.exp(a * grid.nodes)
        approx = op.apply(v, left_value=1.0)
        exact = kmod.kernel_exp_moment(a) * v
        sel = (grid.nodes >= 15.0) & (grid.nodes <= 22.0)
        worst = max(worst, float(np.max(np.abs((approx - exact) / exact)[sel])))
    return _result("discretization.exp_moment", worst, 1e-3,
                   "interior reproduction of the artanh identity")


def _suite_disc_refinement(ctx):
    a = 0.25

    def err(n):
        grid = ctx.grid(40.0, n)
        op = ctx.kernel_op(40.0, n)
        v = np.exp(a * grid.nodes)
        approx = op.apply(v, left_value=1.0)
        exact = kmod.kernel_exp_moment(a) * v
        sel = (grid.nodes >= 15.0) & (grid.nodes <= 22.0)
        return float(np.max(np.abs((approx - exact) / exact)[sel]))

    ratio = err(400) / err(800)
    return _result("discretization.refinement", ratio, 3.0,
                   "error contraction under h -> h/2", larger_is_fail=False)


# ------------------------------------------------------------------ solid

def _suite_solid_monotone(ctx):
    _, report = ctx.solid_run(1.0, 1.0)
    worst = max(report.monotonicity_violation, report.bound_violation)
    return _result("solid.monotone_iteration", worst, 1e-10,
                   f"{report.outer_iterations} sweeps, increments monotone and <= T_M")


def _suite_solid_boundary(ctx):
    _, report = ctx.solid_run(1.0, 1.0)
    return _result("solid.boundary_derivative", report.derivative_at_zero, 0.0,
                   "f'(0+) strictly negative",)


def _suite_solid_gradient(ctx):
    profile, _ = ctx.solid_run(1.0, 1.0)
    grad = discrete_gradient(profile.grid, profile.values)
    worst = float(np.max(np.abs(grad)))
    return _result("solid.gradient_bound", worst, 1.0 + 1e-6,
                   "sup |f'| vs T_M^4 / c")


def _suite_solid_residual(ctx):
    profile, _ = ctx.solid_run(1.0, 1.0)
    grid = profile.grid
    rows = np.arange(0, grid.nodes.size, 5)
    v = profile.values**4
    independent = kernel_apply_gauss(grid, v, rows=rows)
    lap = assemble_diff(grid, 1.0).apply(profile.values)
    res = lap[rows] - (v[rows] - independent)
    res[rows == 0] = 0.0
    res[rows == grid.nodes.size - 1] = 0.0
    worst = float(np.max(np.abs(res)))
    return _result("solid.residual_certificate", worst, 1e-6,
                   f"independent Gauss quadrature on {rows.size} rows")


def _suite_solid_tm_monotonicity(ctx):
    profiles = [ctx.solid_run(1.0, t_m)[0].values for t_m in (0.25, 0.5, 1.0)]
    worst = max(float(np.max(profiles[0] - profiles[1])),
                float(np.max(profiles[1] - profiles[2])))
    return _result("solid.tm_monotonicity", worst, 1e-8,
                   "pointwise ordering across T_M in {0.25, 0.5, 1.0}")


# ---------------------------------------------------------------- smalltm

def _suite_smalltm_contraction(ctx):
    import warnings as _w

    worst = 0.0
    for c in (0.5, 1.0, 2.0):
        thresholds = epsilon_thresholds(c)
        cap = 0.5 * min(thresholds.eps1, thresholds.eps2)
        grid = ctx.grid(40.0, 800)
        op = ctx.kernel_op(40.0, 800)
        for frac in (0.2, 0.5, 0.8):
            with _w.catch_warnings():
                _w.simplefilter("ignore")
                _, report = contraction_solve(frac * cap, c, grid, kernel_op=op)
            worst = max(worst, report.contraction_ratio)
    return _result("smalltm.contraction", worst, 1.0 - 1e-12,
                   "theta_hat over 3 eps x 3 c combinations")


def _smalltm_agreement_runs(ctx):
    eps, c = 0.05, 1.0
    grid = ctx.grid(AGREE_YMAX, AGREE_N)
    op = ctx.kernel_op(AGREE_YMAX, AGREE_N)
    import warnings as _w
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        weighted, _ = contraction_solve(eps, c, grid, kernel_op=op)
    params = WaveParams(c=c, t_m=eps, alpha=1.0)
    mono, _ = monotone_iterate(params, grid, tol=1e-12, kernel_op=op)
    return eps, weighted, mono


def _suite_smalltm_agreement(ctx):
    eps, weighted, mono = ctx.agreement_run()
    gap = float(np.max(np.abs(mono.values - eps * weighted.profile.values)))
    return _result("smalltm.agreement", gap, 1e-5,
                   "monotone solve vs eps * contraction solve, sup norm")


def _suite_smalltm_positivity(ctx):
    _, weighted, _ = ctx.agreement_run()
    return _result("smalltm.positivity", float(np.min(weighted.profile.values)),
                   0.5, "converged ftilde >= c0", larger_is_fail=False)


def _suite_smalltm_limit(ctx):
    _, weighted, _ = ctx.agreement_run()
    return _result("smalltm.limit_positivity", weighted.f_inf, 0.5,
                   "f_inf >= c0", larger_is_fail=False)


# --------------------------------------------------------------- matching

def _suite_matching_stefan(ctx):
    worst = max(w.stefan_residual for w in ctx.band_run())
    return _result("matching.stefan_residual", worst, 1e-8,
                   "flux-jump residual over the admissible band")


def _suite_matching_band(ctx):
    c_max, _ = ctx.cmax_run()
    band_ok = all(w.liquid_A >= 0.0 for w in ctx.band_run())
    grid = ctx.grid(CMAX_YMAX, CMAX_N)
    op = ctx.kernel_op(CMAX_YMAX, CMAX_N)
    params = WaveParams(c=1.2 * c_max, t_m=1.0, alpha=1.0)
    profile, _ = monotone_iterate(params, grid, tol=1e-10, kernel_op=op,
                                  max_outer=6000)
    try:
        match_interface(profile, params)
        rejected = False
    except SupercriticalSpeedError:
        rejected = True
    measured = 0.0 if (band_ok and rejected) else 1.0
    return _result("matching.admissible_band", measured, 0.0,
                   "A >= 0 on (0, c_max], supercritical speed rejected")


def _suite_matching_liquid(ctx):
    band = ctx.band_run()
    undershoot = min(w.T_minus_inf - w.params.t_m for w in band)
    at_cmax = band[-1].T_minus_inf - band[-1].params.t_m
    interior_positive = all(
        w.T_minus_inf - w.params.t_m > 0.0 for w in band[:-1])
    measured = max(-undershoot, abs(at_cmax)) if interior_positive else 1.0
    return _result("matching.liquid_far_field", measured, 1e-6,
                   "T(-inf) >= T_M, equality only at c_max")


def _suite_matching_rescaling(ctx):
    params2 = WaveParams(c=1.0, t_m=1.0, alpha=2.0)
    grid_direct = ctx.grid(10.0, 500)
    direct, _ = monotone_iterate(params2, grid_direct, tol=1e-10,
                                 kernel_op=ctx.kernel_op(10.0, 500, alpha=2.0),
                                 max_outer=6000)
    params1 = WaveParams(c=0.5, t_m=2.0 ** (-2.0 / 3.0), alpha=1.0)
    leg, _ = monotone_iterate(params1, ctx.grid(20.0, 500), tol=1e-10,
                              kernel_op=ctx.kernel_op(20.0, 500),
                              max_outer=6000)
    mapped = rescale(leg, 2.0)
    gap = float(np.max(np.abs(mapped.values - direct.values)))
    return _result("matching.rescaling", gap, 1e-5,
                   "direct alpha=2 solve vs rescaled alpha=1 solve")


# ------------------------------------------------------------ selfsimilar

def _suite_selfsimilar_constant(ctx):
    theta = 0.7
    prof = solve_selfsimilar(theta, theta, 1.0, z_max=10.0, n=400)
    worst = float(np.max(np.abs(prof.values - theta)))
    nu, alpha, d = 1.5e10, 1.3, 2.5
    solid_grid = build_grid(8.0, 64, 1.0)
    const_profile = Profile(grid=solid_grid,
                            values=np.full(65, theta), boundary_value=theta)
    intensity = reconstruct_intensity(const_profile, nu, d * 0.5, 0.5, alpha)
    exact = kmod.planck_B(nu, theta) * (1.0 - math.exp(-alpha * d))
    rel = abs(intensity - exact) / exact
    return _result("selfsimilar.constant_state", max(worst, rel), 1e-8,
                   "constant profile and constant-T intensity closed forms")


def _suite_selfsimilar_convergence(ctx):
    alpha = 1e6

    def err(n):
        prof = solve_selfsimilar(1.0, 0.25, alpha, z_max=10.0, n=n)
        oracle = heat_ramp(1.0, 0.25, prof.grid.nodes)
        return float(np.max(np.abs(prof.values - oracle)))

    ratio = err(250) / err(500)
    return _result("selfsimilar.grid_convergence", ratio, 3.0,
                   "erf-oracle error contraction under h -> h/2",
                   larger_is_fail=False)


def _suite_selfsimilar_intensity(ctx):
    theta, nu, alpha = 0.9, 1.2e10, 0.8
    grid = build_grid(12.0, 64, 1.0)
    prof = Profile(grid=grid, values=np.full(65, theta), boundary_value=theta)
    xs = np.linspace(0.5, 11.5, 12)
    vals = [reconstruct_intensity(prof, nu, x, 1.0, alpha) for x in xs]
    diffs = np.diff(vals)
    measured = max(-float(np.min(vals)), -float(np.min(diffs)))
    return _result("selfsimilar.intensity", measured, 0.0,
                   "positivity and monotonicity in path length")


# -------------------------------------------------------------------- cli

def _suite_cli_determinism(ctx):
    grid = build_grid(5.0, 64, 1.0)
    values = np.exp(-grid.nodes)
    prof = Profile(grid=grid, values=values, boundary_value=1.0,
                   residual=np.abs(np.sin(grid.nodes)) * 1e-12)
    echo = {"command": "solve-wave", "c": 1.0, "tm": 1.0}
    with tempfile.TemporaryDirectory() as tmp:
        p1 = write_profile(prof, os.path.join(tmp, "a.tsv"), echo)
        p2 = write_profile(prof, os.path.join(tmp, "b.tsv"), echo)
        with open(p1, "rb") as f1, open(p2, "rb") as f2:
            identical = f1.read() == f2.read()
    rerun = [_suite_kernel_normalization(_Context(ctx.seed, 1.0)).measured
             for _ in range(2)]
    measured = 0.0 if (identical and rerun[0] == rerun[1]) else 1.0
    return _result("cli.determinism", measured, 0.0,
                   "byte-identical tables and repeatable seeded suites")


def _suite_cli_exit_status(ctx):
    env = "x"
    clean = VerificationReport(
        results=[_suite_kernel_normalization(_Context(ctx.seed, 1.0))],
        seed=ctx.seed, config_echo={}, environment=env)
    faulty_ctx = _Context(ctx.seed, 1.01)
    faulty = VerificationReport(
        results=[_suite_disc_normalization(faulty_ctx)],
        seed=ctx.seed, config_echo={}, environment=env)
    ok = exit_code(clean) == 0 and exit_code(faulty) == 1
    return _result("cli.exit_status", 0.0 if ok else 1.0, 0.0,
                   "zero iff all suites pass")


_SUITES = {
    "kernel.normalization": _suite_kernel_normalization,
    "kernel.tail_bound": _suite_kernel_tail_bound,
    "kernel.moment_identity": _suite_kernel_moment,
    "kernel.antiderivative": _suite_kernel_antiderivative,
    "discretization.normalization": _suite_disc_normalization,
    "discretization.exp_moment": _suite_disc_exp_moment,
    "discretization.refinement": _suite_disc_refinement,
    "solid.monotone_iteration": _suite_solid_monotone,
    "solid.boundary_derivative": _suite_solid_boundary,
    "solid.gradient_bound": _suite_solid_gradient,
    "solid.residual_certificate": _suite_solid_residual,
    "solid.tm_monotonicity": _suite_solid_tm_monotonicity,
    "smalltm.contraction": _suite_smalltm_contraction,
    "smalltm.agreement": _suite_smalltm_agreement,
    "smalltm.positivity": _suite_smalltm_positivity,
    "smalltm.limit_positivity": _suite_smalltm_limit,
    "matching.stefan_residual": _suite_matching_stefan,
    "matching.admissible_band": _suite_matching_band,
    "matching.liquid_far_field": _suite_matching_liquid,
    "matching.rescaling": _suite_matching_rescaling,
    "selfsimilar.constant_state": _suite_selfsimilar_constant,
    "selfsimilar.grid_convergence": _suite_selfsimilar_convergence,
    "selfsimilar.intensity": _suite_selfsimilar_intensity,
    "cli.determinism": _suite_cli_determinism,
    "cli.exit_status": _suite_cli_exit_status,
}

SUITE_NAMES = tuple(_SUITES)


def run_verify(config=None, suites=None, kernel_scale=1.0):
    """Run the requested suites (all by default) and return the report."""
    if config is None:
        config = RunConfig(command="verify")
    requested = suites
    if requested is None and config.suite:
        requested = [s.strip() for s in str(config.suite).split(",") if s.strip()]
    if requested is None:
        requested = list(SUITE_NAMES)
    expanded = []
    for s in requested:
        if s in _SUITES:
            expanded.append(s)
        else:
            matches = [n for n in SUITE_NAMES if n.startswith(s)]
            if not matches:
                raise KeyError(f"unknown suite {s!r}; known: {SUITE_NAMES}")
            expanded.extend(matches)
    requested = expanded
    ctx = _Context(config.seed if config.seed is not None else DEFAULT_SEED,
                   kernel_scale)
    results = [_SUITES[name](ctx) for name in requested]
    env = (f"python={platform.python_version()} numpy={np.__version__} "
           f"scipy={scipy.__version__} machine={platform.machine()}")
    return VerificationReport(results=results, seed=ctx.seed,
                              config_echo=config.echo(), environment=env)
