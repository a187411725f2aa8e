import numpy as np
import pytest

import radstefan as rs
from radstefan.discretization import kernel_apply_gauss
from radstefan.errors import ConfigError


def test_build_grid_uniform():
    g = rs.build_grid(10.0, 100, 1.0)
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 10.0
    assert np.allclose(np.diff(g.nodes), 0.1, rtol=0, atol=1e-14)
    assert g.is_uniform


def test_build_grid_geometric():
    g = rs.build_grid(10.0, 100, 1.05)
    h = np.diff(g.nodes)
    ratios = h[1:] / h[:-1]
    assert np.allclose(ratios, 1.05, atol=1e-9)
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 10.0
    assert not g.is_uniform


def test_build_grid_validation():
    with pytest.raises(ConfigError):
        rs.build_grid(-1.0, 100, 1.0)
    with pytest.raises(ConfigError):
        rs.build_grid(10.0, 8, 1.0)
    with pytest.raises(ConfigError):
        rs.build_grid(10.0, 100, 0.9)
    with pytest.raises(ConfigError):
        rs.Grid(nodes=np.array([0.0, 1.0, 0.5] + list(range(2, 20))),
                y_max=19.0)


def test_kernel_operator_normalization_and_halfline():
    g = rs.build_grid(30.0, 300, 1.0)
    op = rs.assemble_kernel(g)
    ones = np.ones(g.nodes.size)
    assert np.max(np.abs(op.apply(ones, left_value=1.0) - 1.0)) <= 1e-8
    assert op.apply(ones)[0] == pytest.approx(0.5, abs=1e-8)
    assert op.row_sum_defect() <= 1e-8
    assert np.all(op.weights >= -1e-15)


def test_kernel_operator_exp_moment_rows():
    g = rs.build_grid(40.0, 2000, 1.0)
    op = rs.assemble_kernel(g)
    for a in (0.25, 0.5):
        v = np.exp(a * g.nodes)
        approx = op.apply(v, left_value=1.0)
        exact = rs.kernel_exp_moment(a) * v
        sel = (g.nodes >= 15.0) & (g.nodes <= 22.0)
        assert np.max(np.abs(approx - exact)[sel] / exact[sel]) <= 1e-4


def test_kernel_operator_refinement_factor():
    a = 0.25

    def err(n):
        g = rs.build_grid(40.0, n, 1.0)
        op = rs.assemble_kernel(g)
        v = np.exp(a * g.nodes)
        approx = op.apply(v, left_value=1.0)
        exact = rs.kernel_exp_moment(a) * v
        sel = (g.nodes >= 15.0) & (g.nodes <= 22.0)
        return np.max(np.abs((approx - exact) / exact)[sel])

    assert err(400) / err(800) >= 3.0


def test_general_assembly_matches_toeplitz_path():
    # the generic nonuniform routine and the Toeplitz fast path must agree
    # to roundoff on the same uniform nodes
    from radstefan.discretization import _assemble_general, _assemble_uniform
    g = rs.build_grid(12.0, 240, 1.0)
    wu = _assemble_uniform(g.nodes, 1.0)
    wg = _assemble_general(g.nodes, 1.0)
    assert np.max(np.abs(wu - wg)) <= 1e-13


def test_stretched_grid_operator_consistency():
    # nonuniform grids go through the generic path; sanity on normalization
    g = rs.build_grid(20.0, 300, 1.01)
    op = rs.assemble_kernel(g)
    assert op.row_sum_defect() <= 1e-8


def test_gauss_assembly_matches_exact():
    g = rs.build_grid(6.0, 60, 1.0)
    exact = rs.assemble_kernel(g, method="exact")
    gauss = rs.assemble_kernel(g, method="gauss")
    assert np.max(np.abs(exact.weights - gauss.weights)) <= 1e-9


def test_gauss_apply_matches_exact_operator():
    g = rs.build_grid(12.0, 300, 1.0)
    op = rs.assemble_kernel(g)
    v = (1.0 / (1.0 + g.nodes)) ** 2
    rows = np.arange(0, 301, 7)
    indep = kernel_apply_gauss(g, v, rows=rows)
    assert np.max(np.abs(indep - op.apply(v)[rows])) <= 1e-10


def test_kernel_alpha_scaling():
    # operator with alpha equals the alpha=1 operator on the scaled grid
    g2 = rs.build_grid(10.0, 200, 1.0)
    op2 = rs.assemble_kernel(g2, alpha=2.0)
    g1 = rs.build_grid(20.0, 200, 1.0)
    op1 = rs.assemble_kernel(g1, alpha=1.0)
    v = np.exp(-g1.nodes / 3.0)         # same nodal data in scaled variables
    assert np.max(np.abs(op2.apply(v) - op1.apply(v))) <= 1e-12


def test_diff_operator_exactness():
    g = rs.build_grid(5.0, 100, 1.02)
    d0 = rs.assemble_diff(g, 0.0)
    quad = g.nodes**2
    out = d0.apply(quad)
    assert np.max(np.abs(out[1:-1] - 2.0)) <= 1e-8
    const = np.full(g.nodes.size, 3.7)
    assert np.max(np.abs(d0.apply(const)[1:-1])) <= 1e-9
    lin = 2.0 * g.nodes + 1.0
    assert np.max(np.abs(d0.apply(lin)[1:-1])) <= 1e-9


def test_diff_operator_exponential_kernel_mode():
    c = 0.5
    g = rs.build_grid(5.0, 1000, 1.0)
    d = rs.assemble_diff(g, c)
    f = np.exp(c * g.nodes)
    out = d.apply(f)[1:-1] / np.exp(c * g.nodes[1:-1])
    assert np.max(np.abs(out)) <= 5e-4      # O(h^2) truncation at h = 0.005


def test_conservative_form_agrees_with_central():
    c = 0.7
    g = rs.build_grid(6.0, 1200, 1.0)
    central = rs.assemble_diff(g, c)
    flux = rs.assemble_diff(g, c, conservative=True)
    f = np.sin(g.nodes) * np.exp(-g.nodes / 4.0)
    gap = np.max(np.abs(central.apply(f)[1:-1] - flux.apply(f)[1:-1]))
    assert gap <= 5e-4                      # both O(h^2) of the same operator
    lin = 1.0 + 2.0 * g.nodes
    exact = -c * 2.0                        # (d^2 - c d) of a linear function
    # flux faces carry e^{+-ch/2}, so linears see an O(c^3 h^2 / 24) defect
    assert np.max(np.abs(flux.apply(lin)[1:-1] - exact)) <= 1e-5


def test_diff_operator_banded_matches_sparse():
    g = rs.build_grid(7.0, 50, 1.03)
    d = rs.assemble_diff(g, 0.8)
    f = np.sin(g.nodes)
    dense = d.matrix().toarray()
    ab = d.banded_template()
    rebuilt = np.zeros_like(dense)
    n1 = g.nodes.size
    for j in range(n1):
        for off, row in ((-1, 0), (0, 1), (1, 2), (2, 3)):
            i = j + off
            if 0 <= i < n1:
                rebuilt[i, j] = ab[row, j]
    assert np.max(np.abs(dense - rebuilt)) == 0.0
    assert np.max(np.abs(d.apply(f) - dense @ f)) <= 1e-12


def test_boundary_derivative():
    g = rs.build_grid(10.0, 1000, 1.0)
    p = rs.Profile(grid=g, values=1.0 - g.nodes, boundary_value=1.0)
    assert rs.boundary_derivative(p) == pytest.approx(-1.0, abs=1e-10)
    p2 = rs.Profile(grid=g, values=np.full(1001, 2.0), boundary_value=2.0)
    assert rs.boundary_derivative(p2) == 0.0
    p3 = rs.Profile(grid=g, values=np.exp(-g.nodes), boundary_value=1.0)
    assert rs.boundary_derivative(p3) == pytest.approx(-1.0, abs=1e-4)
