import numpy as np
import pytest
import scipy.io

from waveheatnet import assembly as asm
from waveheatnet import transfer as tf
from waveheatnet.network import build_paper_network


@pytest.fixture(scope="module")
def spec():
    return build_paper_network(1.0, 2.0, 3.0)


def test_dimensions(spec):
    n = 16
    assert asm.discretize(spec, n).dim == 7 * n - 2
    neu = build_paper_network(1.0, 2.0, 3.0, bc="neumann")
    assert asm.discretize(neu, n).dim == 7 * n - 1
    assert asm.discretize_wave_damped(n).dim == 4 * n + 1
    assert asm.discretize_heat_dirichlet(n, (1.0, 1.0, 1.0)).dim == 3 * (n - 1)


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_exact_dissipativity(bc):
    spec = build_paper_network(1.0, 2.0, 3.0, bc=bc)
    rng = np.random.default_rng(7)
    for n in (8, 16):
        sysn = asm.discretize(spec, n)
        for _ in range(50):
            z = rng.uniform(-1.0, 1.0, sysn.dim)
            rate = asm.dissipation_rate(sysn, z)
            nsq = float(np.sum(sysn.weights * z * z))
            assert rate <= 1e-12 * nsq
            ident = asm.heat_dissipation_identity(sysn, z)
            assert abs(rate - ident) <= 1e-12 * abs(ident)


def test_wave_damped_dissipative():
    rng = np.random.default_rng(3)
    sysn = asm.discretize_wave_damped(16)
    for _ in range(50):
        z = rng.uniform(-1.0, 1.0, sysn.dim)
        nsq = float(np.sum(sysn.weights * z * z))
        assert asm.dissipation_rate(sysn, z) <= 1e-12 * nsq


def test_neumann_null_vector():
    # constant velocity/temperature with zero stress solves A_h z = 0 exactly
    neu = build_paper_network(1.0, 2.0, 3.0, bc="neumann")
    sysn = asm.discretize(neu, 16)
    z = np.ones(sysn.dim)
    z[sysn.dof_layout["u1"]] = 0.0
    z[sysn.dof_layout["u2"]] = 0.0
    assert np.abs(sysn.generator @ z).max() == 0.0


def test_dirichlet_has_no_constant_null_vector(spec):
    sysn = asm.discretize(spec, 16)
    z = np.ones(sysn.dim)
    z[sysn.dof_layout["u1"]] = 0.0
    z[sysn.dof_layout["u2"]] = 0.0
    assert np.abs(sysn.generator @ z).max() > 0.1


def test_heat_edge_nodes_includes_traces(spec):
    sysn = asm.discretize(spec, 8)
    z = np.arange(sysn.dim, dtype=float)
    w = sysn.heat_edge_nodes(z, "w1")
    assert w.shape == (sysn.n + 1,)
    th = sysn.dof_layout["theta"]
    assert w[0] == z[th[0]] and w[-1] == z[th[1]]


def test_minimum_grid_enforced(spec):
    with pytest.raises(ValueError):
        asm.discretize(spec, 4)
    with pytest.raises(ValueError):
        asm.discretize_wave_damped(4)
    with pytest.raises(ValueError):
        asm.boundary_node("wave", 4)


@pytest.mark.parametrize("part,kwargs,bdim", [
    ("wave", {}, 3),
    ("heat", {"betas": (1.0, 2.0, 3.0)}, 3),
    ("heat_edge", {"beta": 1.5}, 2),
])
def test_lift_is_right_inverse_of_G(part, kwargs, bdim):
    node = asm.boundary_node(part, 16, **kwargs)
    assert node.boundary_dim == bdim
    assert np.allclose(node.G @ node.lift, np.eye(bdim), rtol=0, atol=1e-13)


def test_unknown_part_rejected():
    with pytest.raises(ValueError):
        asm.boundary_node("plate", 16)
    with pytest.raises(ValueError):
        asm.boundary_node("heat", 16)  # betas missing


def test_heat_edge_transfer_second_order():
    beta = 1.7
    lam = 1.0 + 0.5j
    exact = tf.heat_edge_transfer(lam, beta).entries
    errs = []
    for n in (16, 32, 64):
        node = asm.boundary_node("heat_edge", n, beta=beta)
        approx = asm.discrete_transfer_matrix(node, lam)
        errs.append(np.abs(approx - exact).max())
    for a, b in zip(errs, errs[1:]):
        assert np.log2(a / b) >= 1.8


def test_heat_network_transfer_second_order():
    betas = (1.0, 2.0, 3.0)
    lam = 2.0 + 3.0j
    exact = tf.network_transfer_P2(lam, betas).entries
    errs = []
    for n in (16, 32):
        node = asm.boundary_node("heat", n, betas=betas)
        errs.append(np.abs(asm.discrete_transfer_matrix(node, lam) - exact).max())
    assert np.log2(errs[0] / errs[1]) >= 1.8


def test_discrete_transfer_vector_matches_matrix():
    node = asm.boundary_node("heat_edge", 16, beta=1.0)
    lam = 1.0
    m = asm.discrete_transfer_matrix(node, lam)
    u = np.array([0.3, -1.1])
    assert np.allclose(asm.discrete_transfer(node, lam, u), m @ u)


def test_singular_transfer_solve_raises():
    # lam equal to a discrete interior Dirichlet eigenvalue makes the
    # constrained system singular
    n, beta = 16, 1.0
    h = 1.0 / n
    lam = -4.0 * beta / h**2 * np.sin(np.pi * h / 2.0) ** 2
    node = asm.boundary_node("heat_edge", n, beta=beta)
    with pytest.raises(asm.IllConditionedSolveError):
        asm.discrete_transfer_matrix(node, lam)


def test_matrix_market_round_trip(tmp_path, spec):
    sysn = asm.discretize(spec, 8)
    mtx, wts = asm.export_matrix_market(sysn, str(tmp_path / "gen"))
    back = scipy.io.mmread(mtx)
    assert np.allclose(back.toarray(), sysn.generator.toarray(), rtol=0, atol=0)
    w = np.loadtxt(wts)
    assert np.array_equal(w, sysn.weights)


def test_wrong_topology_rejected():
    from waveheatnet.network import EdgeKind, EdgeSpec, ExteriorBC, NetworkSpec

    bad = NetworkSpec(
        edges=(EdgeSpec(EdgeKind.WAVE, "a", "b"),),
        exterior_bc=ExteriorBC.DIRICHLET_VELOCITY,
    )
    with pytest.raises(ValueError):
        asm.discretize(bad, 16)
