"""Grids, the product-integration kernel operator, and difference operators.

The nonlocal operator rows approximate

    (K v)(y_i) = int_0^inf alpha E(alpha (y_i - eta)) v(eta) deta

exactly for piecewise-linear v on the grid, by writing each cell integral
through the closed-form antiderivatives of E1 and t*E1.  Beyond y_max the
integrand is extrapolated as the constant v(y_max) and absorbed into a
per-row tail correction; the mass missing on (-inf, 0) is reported per row
as a left-tail coefficient so the discrete normalization

    row sum + left tail + right tail = 1

holds to roundoff.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.linalg import toeplitz

from .errors import ConfigError
from .kernel import (
    cumulative_first_moment,
    cumulative_mass,
    kernel_tail,
    _e1_positive,
)

_CHUNK_ROWS = 256


@dataclass
class Grid:
    """Strictly increasing nodes on [nodes[0], y_max]."""

    nodes: np.ndarray
    y_max: float
    stretch: float = 1.0

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes.ndim != 1 or self.nodes.size < 17:
            raise ConfigError("grid needs at least 17 nodes (n >= 16 cells)")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise ConfigError("grid nodes must be strictly increasing")
        if abs(self.nodes[-1] - self.y_max) > 1e-12 * max(1.0, abs(self.y_max)):
            raise ConfigError("y_max must coincide with the last node")

    @property
    def n_cells(self):
        return self.nodes.size - 1

    @property
    def spacing(self):
        return np.diff(self.nodes)

    @property
    def is_uniform(self):
        h = self.spacing
        return float(h.max() - h.min()) <= 1e-12 * float(h[0])


def build_grid(y_max, n, stretch=1.0):
    """Grid of n+1 nodes on [0, y_max]; geometric refinement near 0 when stretch > 1."""
    if not y_max > 0.0:
        raise ConfigError("y_max must be positive")
    if n < 16:
        raise ConfigError("grid resolution n must be at least 16")
    if stretch < 1.0:
        raise ConfigError("stretch factor must be >= 1")
    if stretch == 1.0:
        nodes = np.linspace(0.0, y_max, n + 1)
    else:
        h0 = y_max * (stretch - 1.0) / (stretch**n - 1.0)
        nodes = np.concatenate([[0.0], np.cumsum(h0 * stretch ** np.arange(n))])
        nodes[-1] = y_max
    return Grid(nodes=nodes, y_max=float(y_max), stretch=float(stretch))


@dataclass
class KernelOperator:
    """Dense product-integration weights plus analytic tail coefficients.

    apply(v) returns the half-line integral with constant extrapolation of
    v past y_max; passing left_value additionally extends v by a constant
    on (-inf, 0) (full-line variant used by identity checks).
    """

    grid: Grid
    alpha: float
    weights: np.ndarray
    left_tail: np.ndarray
    right_tail: np.ndarray

    def apply(self, v, left_value=None):
        v = np.asarray(v, dtype=float)
        out = self.weights @ v + self.right_tail * v[-1]
        if left_value is not None:
            out = out + self.left_tail * float(left_value)
        return out

    def row_sum_defect(self):
        total = self.weights.sum(axis=1) + self.left_tail + self.right_tail
        return float(np.max(np.abs(total - 1.0)))


def _cell_coefficients(a, b, m0, m1, h):
    """Weights of the two hat functions of a cell from its M0/M1 moments."""
    left = (b * m0 - m1) / h
    right = (m1 - a * m0) / h
    return left, right


def _assemble_uniform(nodes, alpha):
    n1 = nodes.size
    n = n1 - 1
    h = nodes[1] - nodes[0]
    offsets = np.arange(-n1, n1 + 1, dtype=float) * h
    c_line = cumulative_mass(alpha * offsets)
    d_line = cumulative_first_moment(alpha * offsets) / alpha
    m = np.arange(-n, n)
    m0 = c_line[m + 1 + n1] - c_line[m + n1]
    m1 = d_line[m + 1 + n1] - d_line[m + n1]
    lc, rc = _cell_coefficients(m * h, (m + 1) * h, m0, m1, h)
    diag = np.zeros(2 * n1 - 1)
    diag[:-1] += lc           # offset q = m in [-n, n-1]
    diag[1:] += rc            # offset q = m+1 in [-n+1, n]
    weights = toeplitz(diag[n::-1], diag[n:])
    rows = np.arange(n1)
    weights[:, 0] = 0.0
    sel = (0 - rows) <= n - 1
    weights[sel, 0] = lc[(0 - rows[sel]) + n]
    weights[:, n] = 0.0
    sel = (n - 1 - rows) >= -n
    weights[sel, n] = rc[(n - 1 - rows[sel]) + n]
    return weights


def _assemble_general(nodes, alpha):
    n1 = nodes.size
    h = np.diff(nodes)
    weights = np.zeros((n1, n1))
    for i0 in range(0, n1, _CHUNK_ROWS):
        i1 = min(i0 + _CHUNK_ROWS, n1)
        t = nodes[None, :] - nodes[i0:i1, None]
        c_t = cumulative_mass(alpha * t)
        d_t = cumulative_first_moment(alpha * t) / alpha
        m0 = c_t[:, 1:] - c_t[:, :-1]
        m1 = d_t[:, 1:] - d_t[:, :-1]
        lc, rc = _cell_coefficients(t[:, :-1], t[:, 1:], m0, m1, h[None, :])
        weights[i0:i1, :-1] += lc
        weights[i0:i1, 1:] += rc
    return weights


def assemble_kernel(grid, alpha=1.0, method="exact", gauss_points=12):
    """Product-integration kernel operator for the half-line problem.

    method="exact" uses the closed-form antiderivatives (default);
    method="gauss" rebuilds the same weights by per-cell Gauss-Legendre
    with geometric panel subdivision near the singularity, providing an
    independent quadrature route for residual certificates.
    """
    if alpha <= 0.0:
        raise ConfigError("alpha must be positive")
    nodes = grid.nodes
    if method == "exact":
        if grid.is_uniform:
            weights = _assemble_uniform(nodes, alpha)
        else:
            weights = _assemble_general(nodes, alpha)
    elif method == "gauss":
        weights = _assemble_gauss(nodes, alpha, gauss_points)
    else:
        raise ConfigError(f"unknown kernel assembly method: {method!r}")
    # far-tail entries are exponentially small and may round to -1e-14;
    # anything more negative would be an assembly bug
    if float(weights.min()) < -1e-10:
        raise AssertionError("kernel weights came out negative beyond roundoff")
    np.clip(weights, 0.0, None, out=weights)
    left = kernel_tail(alpha * (nodes - nodes[0]))
    right = kernel_tail(alpha * (nodes[-1] - nodes))
    return KernelOperator(grid=grid, alpha=alpha, weights=weights,
                          left_tail=left, right_tail=right)


def _row_panels(nodes, yi, near=2):
    """Integration panels for one row: cells split geometrically toward yi."""
    los, his = [], []
    n1 = nodes.size
    h_ref = np.min(np.diff(nodes))
    for j in range(n1 - 1):
        a, b = nodes[j], nodes[j + 1]
        dist = 0.0 if a <= yi <= b else min(abs(yi - a), abs(yi - b))
        if dist > near * h_ref:
            los.append(np.array([a]))
            his.append(np.array([b]))
            continue
        # split at yi if interior, then geometric panels shrinking toward the
        # singular side; the innermost panel touches it (Gauss nodes stay
        # interior, so E1 remains evaluable and the panel's mass is tiny).
        for lo, hi, sing_at_hi in ((a, min(max(yi, a), b), True),
                                   (min(max(yi, a), b), b, False)):
            if hi - lo <= 0.0:
                continue
            length = hi - lo
            k = 44 if dist == 0.0 else 12
            frac = np.concatenate([0.5 ** np.arange(0, k + 1.0), [0.0]])
            if sing_at_hi:
                edges = hi - length * frac
            else:
                edges = lo + length * frac[::-1]
            los.append(edges[:-1])
            his.append(edges[1:])
    lo = np.concatenate(los)
    hi = np.concatenate(his)
    keep = hi > lo
    return lo[keep], hi[keep]


def kernel_apply_gauss(grid, v, alpha=1.0, rows=None, gauss_points=12):
    """Independent quadrature of (K v)(y_i) for piecewise-linear v.

    Per-cell Gauss-Legendre with geometric panel refinement toward the
    logarithmic singularity; same constant tail closure as the exact
    operator.  rows selects the node indices to evaluate (all by default).
    """
    nodes = grid.nodes
    v = np.asarray(v, dtype=float)
    if rows is None:
        rows = np.arange(nodes.size)
    gx, gw = np.polynomial.legendre.leggauss(gauss_points)
    out = np.empty(len(rows))
    for k, i in enumerate(rows):
        yi = nodes[i]
        lo, hi = _row_panels(nodes, yi)
        mid = 0.5 * (hi + lo)
        half = 0.5 * (hi - lo)
        eta = mid[:, None] + half[:, None] * gx[None, :]
        x = np.abs(alpha * (yi - eta)).ravel()
        x = np.maximum(x, 1e-300)
        kv = 0.5 * alpha * _e1_positive(x).reshape(eta.shape)
        integrand = kv * np.interp(eta, nodes, v)
        out[k] = float(np.sum(half[:, None] * gw[None, :] * integrand))
    out += v[-1] * kernel_tail(alpha * (nodes[-1] - nodes[rows]))
    return out


def _assemble_gauss(nodes, alpha, gauss_points):
    n1 = nodes.size
    weights = np.zeros((n1, n1))
    grid_like = Grid(nodes=nodes, y_max=float(nodes[-1]), stretch=1.0)
    basis = np.eye(n1)
    for j in range(n1):
        col = kernel_apply_gauss(grid_like, basis[j], alpha=alpha,
                                 gauss_points=gauss_points)
        col -= basis[j][-1] * kernel_tail(alpha * (nodes[-1] - nodes))
        weights[:, j] = col
    return weights


def _deriv_weights_3pt(x0, x1, x2, at):
    """Derivative weights of the quadratic through x0 < x1 < x2 at `at`."""
    w0 = (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2))
    w1 = (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2))
    w2 = (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1))
    return w0, w1, w2


@dataclass
class DiffOperator:
    """Rows of d^2/dy^2 - c d/dy with a Dirichlet row at y0 and a
    one-sided zero-derivative row at y_max."""

    grid: Grid
    c: float
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    far_row: tuple = field(default=None)

    def matrix(self):
        if getattr(self, "_matrix", None) is None:
            n1 = self.grid.nodes.size
            rows = [0]
            cols = [0]
            vals = [1.0]
            idx = np.arange(1, n1 - 1)
            rows.extend(np.repeat(idx, 3))
            cols.extend(np.stack([idx - 1, idx, idx + 1], axis=1).ravel())
            vals.extend(np.stack([self.sub[idx - 1], self.diag[idx],
                                  self.sup[idx - 1]], axis=1).ravel())
            (j0, j1, j2), (w0, w1, w2) = self.far_row
            rows.extend([n1 - 1] * 3)
            cols.extend([j0, j1, j2])
            vals.extend([w0, w1, w2])
            self._matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(n1, n1))
        return self._matrix

    def banded_template(self):
        """LAPACK band storage (l, u) = (2, 1) of the operator rows."""
        if getattr(self, "_banded", None) is None:
            n1 = self.grid.nodes.size
            ab = np.zeros((4, n1))
            ab[1, 0] = 1.0
            ab[1, 1:-1] = self.diag[1:-1]
            ab[0, 2:] = self.sup                     # A[i, i+1], i = 1..n-1
            ab[2, :-2] = self.sub                    # A[i+1, i], i = 0..n-2
            (j0, j1, j2), (w0, w1, w2) = self.far_row
            ab[1, j2] = w2
            ab[2, j1] = w1
            ab[3, j0] = w0
            self._banded = ab
        return self._banded

    def apply(self, f):
        f = np.asarray(f, dtype=float)
        out = np.empty_like(f)
        out[0] = f[0]
        out[1:-1] = (self.sub * f[:-2] + self.diag[1:-1] * f[1:-1]
                     + self.sup * f[2:])
        (j0, j1, j2), (w0, w1, w2) = self.far_row
        out[-1] = w0 * f[j0] + w1 * f[j1] + w2 * f[j2]
        return out


def assemble_diff(grid, c, conservative=False):
    """Second-order discretization of d^2/dy^2 - c d/dy on the grid.

    The default uses central differences of both terms.  conservative=True
    instead discretizes the flux form e^{cy} d/dy (e^{-cy} d/dy), which is
    identical analytically and more robust against advective oscillations
    at large c; both reduce to the same operator as h -> 0.
    """
    y = grid.nodes
    h1 = y[1:-1] - y[:-2]
    h2 = y[2:] - y[1:-1]
    diag = np.zeros(y.size)
    if conservative:
        # e^{c y_i} [ w+ (f_{i+1}-f_i)/h2 - w- (f_i-f_{i-1})/h1 ] / hbar
        # with face weights w+- = e^{-c (y_{i+-1/2})}
        hbar = 0.5 * (h1 + h2)
        w_minus = np.exp(-c * (0.5 * (y[1:-1] + y[:-2]) - y[1:-1]))
        w_plus = np.exp(-c * (0.5 * (y[2:] + y[1:-1]) - y[1:-1]))
        sub = w_minus / (h1 * hbar)
        sup = w_plus / (h2 * hbar)
        diag[1:-1] = -(w_minus / h1 + w_plus / h2) / hbar
    else:
        d2_sub = 2.0 / (h1 * (h1 + h2))
        d2_diag = -2.0 / (h1 * h2)
        d2_sup = 2.0 / (h2 * (h1 + h2))
        d1_sub = -h2 / (h1 * (h1 + h2))
        d1_diag = (h2 - h1) / (h1 * h2)
        d1_sup = h1 / (h2 * (h1 + h2))
        sub = d2_sub - c * d1_sub
        diag[1:-1] = d2_diag - c * d1_diag
        sup = d2_sup - c * d1_sup
    diag[0] = 1.0
    n1 = y.size
    w = _deriv_weights_3pt(y[-3], y[-2], y[-1], y[-1])
    far_row = ((n1 - 3, n1 - 2, n1 - 1), w)
    return DiffOperator(grid=grid, c=float(c), sub=sub, diag=diag, sup=sup,
                        far_row=far_row)


def boundary_derivative(profile):
    """Second-order one-sided estimate of f'(0+) from the first three nodes."""
    y = profile.grid.nodes
    v = profile.values
    if y.size < 3:
        raise ConfigError("boundary derivative needs at least 3 nodes")
    w0, w1, w2 = _deriv_weights_3pt(y[0], y[1], y[2], y[0])
    return float(w0 * v[0] + w1 * v[1] + w2 * v[2])


def discrete_gradient(grid, values):
    """Centered interior / one-sided boundary first-derivative samples."""
    return np.gradient(np.asarray(values, dtype=float), grid.nodes)
