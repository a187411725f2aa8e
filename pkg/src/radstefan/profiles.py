"""Solution containers shared by the solvers."""

from dataclasses import dataclass, field

import numpy as np

from .discretization import Grid


@dataclass
class Profile:
    """Temperature values on a grid with boundary metadata.

    residual, when present, holds the pointwise residual of the governing
    equation produced by the solver that built the profile (same vector
    that the table writer emits).
    """

    grid: Grid
    values: np.ndarray
    boundary_value: float
    f_inf_estimate: float = None
    residual: np.ndarray = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.nodes.shape:
            raise ValueError("profile values must match the grid")

    def interp(self, y):
        return np.interp(y, self.grid.nodes, self.values)


@dataclass
class SolveReport:
    """Iteration diagnostics of one solve.

    residual_history records the outer sup-norm increments; the invariant
    fields hold the worst case seen over all recorded steps.
    """

    outer_iterations: int = 0
    residual_history: list = field(default_factory=list)
    monotonicity_violation: float = 0.0
    bound_violation: float = 0.0
    derivative_at_zero: float = float("nan")
    f_inf: float = float("nan")
    final_residual: float = float("nan")
    contraction_ratio: float = float("nan")
    converged: bool = False
