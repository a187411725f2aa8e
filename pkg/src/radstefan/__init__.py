"""Traveling-wave solvers for a two-phase Stefan problem with a radiating solid."""

from .discretization import (
    DiffOperator,
    Grid,
    KernelOperator,
    assemble_diff,
    assemble_kernel,
    boundary_derivative,
    build_grid,
    kernel_apply_gauss,
)
from .kernel import (
    KernelEval,
    e1,
    kernel_E,
    kernel_cell_integral,
    kernel_eval,
    kernel_exp_moment,
    kernel_tail,
    planck_B,
)
from .matching import (
    LiquidProfile,
    TravelingWave,
    WaveParams,
    find_cmax,
    liquid_profile,
    match_interface,
    rescale,
)
from .profiles import Profile, SolveReport
from .selfsimilar import (
    SelfSimilarProfile,
    heat_ramp,
    reconstruct_intensity,
    solve_selfsimilar,
)
from .smalltm import (
    EpsilonThresholds,
    WeightedProfile,
    contraction_solve,
    decay_rate,
    epsilon_thresholds,
    fixedpoint_map,
)
from .solid import (
    estimate_limit,
    exact_c0_seed,
    inner_solve,
    monotone_iterate,
    oscillation,
    solve_c0,
)
from .config import RunConfig, build_config, parse_config
from .verify import SUITE_NAMES, VerificationReport, exit_code, run_verify

__version__ = "0.1.0"

__all__ = [
    "DiffOperator", "Grid", "KernelOperator", "assemble_diff", "assemble_kernel",
    "boundary_derivative", "build_grid", "kernel_apply_gauss",
    "KernelEval", "e1", "kernel_E", "kernel_cell_integral", "kernel_eval",
    "kernel_exp_moment", "kernel_tail", "planck_B",
    "LiquidProfile", "TravelingWave", "WaveParams", "find_cmax",
    "liquid_profile", "match_interface", "rescale",
    "Profile", "SolveReport",
    "SelfSimilarProfile", "heat_ramp", "reconstruct_intensity", "solve_selfsimilar",
    "EpsilonThresholds", "WeightedProfile", "contraction_solve", "decay_rate",
    "epsilon_thresholds", "fixedpoint_map",
    "estimate_limit", "exact_c0_seed", "inner_solve", "monotone_iterate",
    "oscillation", "solve_c0",
    "RunConfig", "build_config", "parse_config",
    "SUITE_NAMES", "VerificationReport", "exit_code", "run_verify",
]
