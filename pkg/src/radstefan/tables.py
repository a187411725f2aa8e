"""Delimited text output: profile tables, psi tables, run reports.

One header line carrying the parameter echo, then tab-separated rows at 17
significant digits so a write/read round trip is bit-exact.
"""

import numpy as np

from .errors import ConfigError

_FMT = "%.17g"


def _echo_string(echo):
    return " ".join(f"{k}={echo[k]!r}" if isinstance(echo[k], str)
                    else f"{k}={_FMT % echo[k] if isinstance(echo[k], float) else echo[k]}"
                    for k in sorted(echo))


def write_profile(profile, path, echo=None):
    """Profile table: one header row, then y / value / local residual."""
    nodes = profile.grid.nodes
    values = profile.values
    residual = profile.residual if profile.residual is not None \
        else np.zeros_like(values)
    lines = ["# radstefan profile | " + _echo_string(echo or {})
             + " | columns: y value residual"]
    for y, v, r in zip(nodes, values, residual):
        lines.append("\t".join(_FMT % x for x in (y, v, r)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_profile(path):
    """Read a profile table back: (header string, (N+1) x 3 array)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ConfigError(f"{path} is not a radstefan profile table")
    data = np.array([[float(tok) for tok in line.split("\t")]
                     for line in lines[1:] if line.strip()])
    return lines[0], data


def write_psi_table(table, c_max, path, echo=None):
    """(c, psi) audit table from a c_max scan."""
    lines = ["# radstefan psi table | " + _echo_string(echo or {})
             + f" | c_max={_FMT % c_max} | columns: c psi"]
    for c, p in table:
        lines.append("\t".join(_FMT % x for x in (c, p)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def run_report_text(title, entries):
    """Small deterministic key-value report document."""
    lines = [f"# radstefan report: {title}"]
    for key in sorted(entries):
        val = entries[key]
        if isinstance(val, float):
            lines.append(f"{key}: {_FMT % val}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"
