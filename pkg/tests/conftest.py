import pytest

import radstefan as rs


@pytest.fixture(scope="session")
def grid12():
    return rs.build_grid(12.0, 600, 1.0)


@pytest.fixture(scope="session")
def op12(grid12):
    return rs.assemble_kernel(grid12)


@pytest.fixture(scope="session")
def solid_default(grid12, op12):
    """Converged (c, T_M, alpha) = (1, 1, 1) run on the compact test grid."""
    params = rs.WaveParams(c=1.0, t_m=1.0, alpha=1.0)
    return rs.monotone_iterate(params, grid12, tol=1e-10, kernel_op=op12,
                               max_outer=4000)


@pytest.fixture(scope="session")
def grid40():
    return rs.build_grid(40.0, 1000, 1.0)


@pytest.fixture(scope="session")
def op40(grid40):
    return rs.assemble_kernel(grid40)


@pytest.fixture(scope="session")
def smalltm_pair(grid40, op40):
    """Contraction solve and the monotone solve at T_M = eps = 0.05, c = 1."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        weighted, wreport = rs.contraction_solve(0.05, 1.0, grid40,
                                                 kernel_op=op40)
    params = rs.WaveParams(c=1.0, t_m=0.05, alpha=1.0)
    mono, mreport = rs.monotone_iterate(params, grid40, tol=1e-12,
                                        kernel_op=op40)
    return weighted, wreport, mono, mreport


@pytest.fixture(scope="session")
def full_verify_report():
    return rs.run_verify()
