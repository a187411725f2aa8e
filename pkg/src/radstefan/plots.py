"""Figure rendering for the CLI report path (PNG next to each table)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_profile_figure(profile, path, title):
    """Two panels: the profile and (when available) its pointwise residual."""
    has_residual = getattr(profile, "residual", None) is not None
    n_rows = 2 if has_residual else 1
    fig, axes = plt.subplots(n_rows, 1, figsize=(7.0, 3.0 * n_rows),
                             sharex=True, squeeze=False)
    ax = axes[0, 0]
    ax.plot(profile.grid.nodes, profile.values, lw=1.2)
    ax.set_ylabel("temperature")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    if has_residual:
        ax2 = axes[1, 0]
        res = np.maximum(np.abs(profile.residual), 1e-300)
        ax2.semilogy(profile.grid.nodes, res, lw=0.9, color="tab:red")
        ax2.set_ylabel("|residual|")
        ax2.grid(alpha=0.3)
    axes[-1, 0].set_xlabel("position")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_psi_figure(table, c_max, path):
    cs = [c for c, _ in table]
    ps = [p for _, p in table]
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.semilogx(cs, ps, ".-", lw=0.9, ms=4)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.axvline(c_max, color="tab:red", lw=0.9, ls="--",
               label=f"c_max = {c_max:.6g}")
    ax.set_xlabel("wave speed c")
    ax.set_ylabel("psi(c) = T2'(0+) + L c")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_decay_figure(weighted, path, title):
    """Small-T_M diagnostics: profile and far-field deviation decay."""
    y = weighted.profile.grid.nodes
    fig, (ax, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
    ax.plot(y, weighted.profile.values, lw=1.2)
    ax.axhline(weighted.f_inf, color="k", lw=0.7, ls=":")
    ax.set_ylabel("ftilde")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    dev = np.maximum(np.abs(weighted.profile.values - weighted.f_inf), 1e-300)
    ax2.semilogy(y, dev, lw=0.9, color="tab:red")
    ax2.set_ylabel("|ftilde - f_inf|")
    ax2.set_xlabel("position")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
