"""Command-line interface: solve-wave, cmax, small-tm, selfsimilar, c0, verify.

Each run writes a delimited table (profile or psi scan), a small key-value
report, and a rendered figure next to them (disable with --no-figures).
Config files supply defaults; explicit flags override file values.
"""

import argparse
import os
import sys

import yaml

from . import plots
from .config import build_config
from .discretization import build_grid
from .errors import RadStefanError
from .matching import WaveParams, find_cmax, match_interface
from .selfsimilar import solve_selfsimilar
from .smalltm import contraction_solve, decay_rate, epsilon_thresholds
from .solid import estimate_limit, monotone_iterate, solve_c0
from .tables import run_report_text, write_profile, write_psi_table
from .verify import exit_code, run_verify


def _add_common(sp):
    sp.add_argument("--config", help="key-value config file (flags override it)")
    sp.add_argument("--out", help="output directory (default .)")
    sp.add_argument("--n", type=int, help="grid cells")
    sp.add_argument("--ymax", type=float, help="domain truncation length")
    sp.add_argument("--stretch", type=float, help="geometric grid stretching")
    sp.add_argument("--tol", type=float, help="solver tolerance")
    sp.add_argument("--max-outer", dest="max_outer", type=int,
                    help="outer iteration cap")
    sp.add_argument("--seed", type=int, help="seed for sampled checks")
    sp.add_argument("--no-figures", dest="figures", action="store_false",
                    default=None, help="skip figure rendering")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="radstefan",
        description="Traveling waves of a Stefan problem with radiating solid")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve-wave", help="two-phase wave at given speed")
    sp.add_argument("--c", type=float, help="wave speed (> 0)")
    sp.add_argument("--tm", type=float, help="melting temperature")
    sp.add_argument("--alpha", type=float, help="absorption coefficient")
    sp.add_argument("--kappa", type=float, help="liquid diffusivity")
    sp.add_argument("--k-ratio", dest="k_ratio", type=float,
                    help="conductivity ratio K")
    sp.add_argument("--latent", type=float, help="latent heat L")
    _add_common(sp)

    sp = sub.add_parser("cmax", help="largest admissible wave speed")
    sp.add_argument("--tm", type=float, help="melting temperature")
    sp.add_argument("--alpha", type=float, help="absorption coefficient")
    sp.add_argument("--latent", type=float, help="latent heat L")
    _add_common(sp)

    sp = sub.add_parser("small-tm", help="small melting temperature fixed point")
    sp.add_argument("--eps", type=float, help="melting temperature epsilon")
    sp.add_argument("--c", type=float, help="wave speed")
    _add_common(sp)

    sp = sub.add_parser("selfsimilar", help="far-field similarity profile")
    sp.add_argument("--tint", type=float, help="left state T_int")
    sp.add_argument("--tinf", type=float, help="right state T_inf")
    sp.add_argument("--alpha", type=float, help="absorption coefficient")
    sp.add_argument("--z", type=float, help="similarity-domain half width")
    _add_common(sp)

    sp = sub.add_parser("c0", help="standing wave (c = 0) from the exact seed")
    sp.add_argument("--tm", type=float, help="melting temperature")
    sp.add_argument("--alpha", type=float, help="absorption coefficient")
    _add_common(sp)

    sp = sub.add_parser("verify", help="run the invariant suites")
    sp.add_argument("--suite", help="suite name or prefix (comma separated)")
    _add_common(sp)
    return parser


def _config_from_args(args):
    mapping = {}
    if args.config:
        with open(args.config) as fh:
            data = yaml.safe_load(fh.read()) or {}
        if not isinstance(data, dict):
            raise RadStefanError("config file must hold a key-value mapping")
        data.pop("command", None)
        mapping.update(data)
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config") and v is not None}
    mapping.update(overrides)
    return build_config(args.command, mapping)


def _outdir(cfg):
    os.makedirs(cfg.out, exist_ok=True)
    return cfg.out


def _write_outputs(cfg, profile, report_entries, table_name, fig_title):
    out = _outdir(cfg)
    table_path = os.path.join(out, table_name + ".tsv")
    write_profile(profile, table_path, echo=cfg.echo())
    report_path = os.path.join(out, table_name + "_report.txt")
    with open(report_path, "w") as fh:
        fh.write(run_report_text(cfg.command, report_entries))
    if cfg.figures:
        plots.render_profile_figure(profile, os.path.join(out, table_name + ".png"),
                                    fig_title)
    print(f"wrote {table_path}")
    return 0


def _cmd_solve_wave(cfg):
    params = WaveParams(c=cfg.c, t_m=cfg.tm, alpha=cfg.alpha, kappa=cfg.kappa,
                        conductivity_ratio=cfg.k_ratio, latent_heat=cfg.latent)
    grid = build_grid(cfg.grid_ymax(), cfg.grid_n(), cfg.stretch)
    profile, report = monotone_iterate(params, grid, tol=cfg.tol,
                                       max_outer=cfg.max_outer)
    wave = match_interface(profile, params)
    entries = {
        "outer_iterations": report.outer_iterations,
        "final_residual": report.final_residual,
        "monotonicity_violation": report.monotonicity_violation,
        "bound_violation": report.bound_violation,
        "derivative_at_zero": report.derivative_at_zero,
        "f_inf": report.f_inf,
        "liquid_A": wave.liquid_A,
        "T_minus_inf": wave.T_minus_inf,
        "stefan_residual": wave.stefan_residual,
        "interface_speed": wave.interface_speed,
    }
    return _write_outputs(cfg, profile, entries, "wave_profile",
                          f"solid wave: c={cfg.c:g}, T_M={cfg.tm:g}, "
                          f"alpha={cfg.alpha:g}")


def _cmd_cmax(cfg):
    params = WaveParams(c=None, t_m=cfg.tm, alpha=cfg.alpha, kappa=cfg.kappa,
                        conductivity_ratio=cfg.k_ratio, latent_heat=cfg.latent)
    c_max, table = find_cmax(params, solve_tol=cfg.tol,
                             max_outer=cfg.max_outer,
                             n=cfg.grid_n(800),
                             y_max=cfg.ymax if cfg.ymax is not None else 16.0)
    out = _outdir(cfg)
    table_path = os.path.join(out, "psi_table.tsv")
    write_psi_table(table, c_max, table_path, echo=cfg.echo())
    psi_root = min(table, key=lambda t: abs(t[0] - c_max))[1]
    entries = {"c_max": c_max, "scan_points": len(table), "psi_at_root": psi_root}
    with open(os.path.join(out, "cmax_report.txt"), "w") as fh:
        fh.write(run_report_text("cmax", entries))
    if cfg.figures:
        plots.render_psi_figure(table, c_max, os.path.join(out, "psi_scan.png"))
    print(f"c_max = {c_max:.12g}; wrote {table_path}")
    return 0


def _cmd_small_tm(cfg):
    grid = build_grid(cfg.ymax if cfg.ymax is not None else 40.0,
                      cfg.grid_n(), cfg.stretch)
    weighted, report = contraction_solve(cfg.eps, cfg.c, grid, tol=max(cfg.tol, 1e-13))
    thresholds = epsilon_thresholds(cfg.c)
    entries = {
        "iterations": report.outer_iterations,
        "contraction_ratio": report.contraction_ratio,
        "f_inf": weighted.f_inf,
        "weighted_seminorm": weighted.weighted_seminorm,
        "decay_slope": decay_rate(weighted),
        "eps1": thresholds.eps1, "eps2": thresholds.eps2,
        "eps3": thresholds.eps3, "eps4": thresholds.eps4,
    }
    out = _outdir(cfg)
    table_path = os.path.join(out, "smalltm_profile.tsv")
    write_profile(weighted.profile, table_path, echo=cfg.echo())
    with open(os.path.join(out, "smalltm_report.txt"), "w") as fh:
        fh.write(run_report_text("small-tm", entries))
    if cfg.figures:
        plots.render_decay_figure(weighted, os.path.join(out, "smalltm.png"),
                                  f"small-T_M fixed point: eps={cfg.eps:g}, "
                                  f"c={cfg.c:g}")
    print(f"wrote {table_path}")
    return 0


def _cmd_selfsimilar(cfg):
    prof = solve_selfsimilar(cfg.tint, cfg.tinf, cfg.alpha, z_max=cfg.z,
                             n=cfg.grid_n(), tol=max(cfg.tol, 1e-12))
    entries = {
        "T_int": prof.T_int, "T_inf": prof.T_inf, "alpha": prof.alpha,
        "residual_sup": float(prof.residual.max()),
        "min_value": float(prof.values.min()),
        "max_value": float(prof.values.max()),
    }
    return _write_outputs(cfg, prof, entries, "selfsimilar_profile",
                          f"self-similar profile: T_int={cfg.tint:g}, "
                          f"T_inf={cfg.tinf:g}, alpha={cfg.alpha:g}")


def _cmd_c0(cfg):
    grid = build_grid(cfg.ymax if cfg.ymax is not None else 12.0,
                      cfg.grid_n(), cfg.stretch)
    profile, report = solve_c0(cfg.tm, grid, tol=cfg.tol,
                               max_outer=cfg.max_outer)
    entries = {
        "outer_iterations": report.outer_iterations,
        "final_residual": report.final_residual,
        "bracket_violation": report.monotonicity_violation,
        "f_inf": estimate_limit(profile),
        "derivative_at_zero": report.derivative_at_zero,
    }
    return _write_outputs(cfg, profile, entries, "c0_profile",
                          f"standing wave: T_M={cfg.tm:g}")


def _cmd_verify(cfg):
    report = run_verify(cfg)
    out = _outdir(cfg)
    path = os.path.join(out, "verify_report.txt")
    text = report.to_text()
    with open(path, "w") as fh:
        fh.write(text)
    sys.stdout.write(text)
    return exit_code(report)


_DISPATCH = {
    "solve-wave": _cmd_solve_wave,
    "cmax": _cmd_cmax,
    "small-tm": _cmd_small_tm,
    "selfsimilar": _cmd_selfsimilar,
    "c0": _cmd_c0,
    "verify": _cmd_verify,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[cfg.command](cfg)
    except RadStefanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
