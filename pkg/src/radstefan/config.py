"""Run configuration: key-value documents plus CLI overrides."""

from dataclasses import dataclass, field

import yaml

from .errors import ConfigError

COMMANDS = ("solve-wave", "cmax", "small-tm", "selfsimilar", "c0", "verify")

DEFAULT_SEED = 20260810
DEFAULT_N = 2000
DEFAULT_TOL = 1e-10
MAX_N = 200_000

# canonical key -> accepted aliases in config documents
_ALIASES = {
    "command": ("command",),
    "c": ("c",),
    "tm": ("tm", "T_M", "t_m"),
    "alpha": ("alpha",),
    "kappa": ("kappa",),
    "k_ratio": ("k_ratio", "K", "conductivity_ratio"),
    "latent": ("latent", "L", "latent_heat"),
    "eps": ("eps", "epsilon"),
    "tint": ("tint", "T_int"),
    "tinf": ("tinf", "T_inf"),
    "z": ("z", "z_max", "Z"),
    "ymax": ("ymax", "y_max"),
    "n": ("n",),
    "stretch": ("stretch",),
    "tol": ("tol",),
    "max_outer": ("max_outer",),
    "out": ("out", "output_dir"),
    "seed": ("seed",),
    "suite": ("suite",),
    "figures": ("figures",),
}

_REQUIRED = {
    "solve-wave": ("c", "tm"),
    "cmax": (),
    "small-tm": ("eps", "c"),
    "selfsimilar": ("tint", "tinf"),
    "c0": ("tm",),
    "verify": (),
}


@dataclass
class RunConfig:
    command: str
    c: float = None
    tm: float = 1.0
    alpha: float = 1.0
    kappa: float = 1.0
    k_ratio: float = 1.0
    latent: float = 1.0
    eps: float = None
    tint: float = None
    tinf: float = None
    z: float = 10.0
    ymax: float = None
    n: int = None
    stretch: float = 1.0
    tol: float = DEFAULT_TOL
    max_outer: int = 3000
    out: str = "."
    seed: int = DEFAULT_SEED
    suite: str = None
    figures: bool = True
    extras: dict = field(default_factory=dict)

    def grid_ymax(self):
        """Default truncation 40/min(1, c); plain 40 when c is 0 or absent."""
        if self.ymax is not None:
            return float(self.ymax)
        if self.c is not None and self.c > 0.0:
            return 40.0 / min(1.0, float(self.c))
        return 40.0

    def grid_n(self, default=DEFAULT_N):
        return int(self.n) if self.n is not None else int(default)

    def echo(self):
        keys = ("command", "c", "tm", "alpha", "kappa", "k_ratio", "latent",
                "eps", "tint", "tinf", "z", "ymax", "n", "stretch", "tol",
                "max_outer", "seed")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}


def _canonicalize(mapping):
    lookup = {}
    for canon, names in _ALIASES.items():
        for name in names:
            lookup[name] = canon
    out = {}
    unknown = []
    for key, value in mapping.items():
        canon = lookup.get(str(key))
        if canon is None:
            unknown.append(str(key))
        else:
            out[canon] = value
    if unknown:
        raise ConfigError("unknown configuration keys: " + ", ".join(sorted(unknown)))
    return out


def build_config(command, mapping):
    """Validate a canonical mapping and fill defaults."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {COMMANDS}")
    values = _canonicalize(mapping)
    values.pop("command", None)
    missing = [k for k in _REQUIRED[command] if values.get(k) is None]
    if missing:
        raise ConfigError(
            f"command {command!r} is missing required parameter(s): "
            + ", ".join(missing))
    cfg = RunConfig(command=command, **values)
    if cfg.c is not None and cfg.c < 0.0:
        raise ConfigError(
            "c < 0 rejected: the traveling-wave problem admits no bounded "
            "solution for negative speeds")
    if not (1e-14 <= cfg.tol <= 1e-2):
        raise ConfigError(f"tol = {cfg.tol:g} outside the allowed range [1e-14, 1e-2]")
    if cfg.n is not None:
        if not (16 <= int(cfg.n) <= MAX_N):
            raise ConfigError(f"n = {cfg.n} outside the allowed range [16, {MAX_N}]")
        cfg.n = int(cfg.n)
    if cfg.stretch < 1.0:
        raise ConfigError("stretch must be >= 1")
    for name in ("tm", "alpha", "kappa", "k_ratio", "latent"):
        if getattr(cfg, name) is not None and getattr(cfg, name) <= 0.0:
            raise ConfigError(f"{name} must be positive")
    if cfg.eps is not None and cfg.eps <= 0.0:
        raise ConfigError("eps must be positive")
    if cfg.ymax is not None and cfg.ymax <= 0.0:
        raise ConfigError("ymax must be positive")
    return cfg


def parse_config(text, command=None):
    """Parse a YAML-style key-value document into a validated RunConfig.

    The document may name the command itself; an explicit command argument
    overrides it.
    """
    data = yaml.safe_load(text) if text.strip() else {}
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("configuration document must be a key-value mapping")
    doc_command = data.get("command")
    cmd = command or doc_command
    if cmd is None:
        raise ConfigError("no command given (neither argument nor config key)")
    return build_config(str(cmd), data)
