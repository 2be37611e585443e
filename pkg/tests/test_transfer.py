"""Closed-form transfer functions against frozen high-precision values.

The reference numbers below were computed once with 40-digit arbitrary
precision arithmetic (mpmath) from p1 = beta*nu*coth(nu),
p2 = -beta*nu/sinh(nu), nu = sqrt(lam/beta), and frozen here.
"""

import numpy as np
import pytest

from waveheatnet import transfer as tf

# (lam, beta) -> (p1, p2), 20 significant digits
ORACLE = {
    (1.0, 1.0): (1.3130352854993313036, -0.85091812823932154513),
    (2 + 3j, 2.0): (2.7010789901948152922 + 0.87387233976780790847j,
                    -1.6384630543787229149 + 0.39036692419244992353j),
    (1e-6j, 1.0): (1.0000000000000222222 + 3.3333333333333120185e-7j,
                   -0.99999999999998055556 + 1.6666666666666460886e-7j),
    (100j, 3.0): (12.251947202432366128 + 12.238682963341091736j,
                  0.57711601431595527978 - 0.090627368742216842403j),
    (0.5 + 0.25j, 0.7): (0.8608631663516533206 + 0.076084764109324471004j,
                         -0.62173046285329477627 + 0.035387407200151647971j),
}


@pytest.mark.parametrize("lam,beta", sorted(ORACLE, key=str))
def test_heat_edge_against_oracle(lam, beta):
    p1, p2 = ORACLE[(lam, beta)]
    m = tf.heat_edge_transfer(lam, beta).entries
    assert m[0, 0] == pytest.approx(p1, rel=1e-13)
    assert m[1, 1] == pytest.approx(p1, rel=1e-13)
    assert m[0, 1] == pytest.approx(p2, rel=1e-13)
    assert m[1, 0] == pytest.approx(p2, rel=1e-13)


@pytest.mark.parametrize("beta", [0.5, 1.0, 3.0])
def test_heat_edge_at_zero_is_exact(beta):
    m = tf.heat_edge_transfer(0.0, beta).entries
    assert np.array_equal(m, beta * np.array([[1.0, -1.0], [-1.0, 1.0]]))


def test_small_frequency_branch_is_continuous():
    for beta in (0.5, 1.0, 3.0):
        at0 = tf.heat_edge_transfer(0.0, beta).entries
        near = tf.heat_edge_transfer(1e-6j, beta).entries
        assert np.abs(near - at0).max() <= 1e-3


@pytest.mark.parametrize("lam", [1e12, 1e12j, 1e12 + 1e12j])
def test_overflow_safe_at_huge_frequency(lam):
    beta = 2.0
    m = tf.heat_edge_transfer(lam, beta).entries
    assert np.all(np.isfinite(m.view(float)))
    # p1 -> beta*nu, p2 -> 0
    nu = np.sqrt(complex(lam) / beta)
    assert m[0, 0] == pytest.approx(beta * nu, rel=1e-12)
    assert abs(m[0, 1]) < 1e-300


def test_network_matches_interconnection_product():
    betas = (1.0, 2.0, 3.0)
    lam = 0.8 + 1.7j
    blocks = [tf.heat_edge_transfer(lam, b).entries for b in betas]
    big = np.zeros((6, 6), dtype=complex)
    for k, blk in enumerate(blocks):
        big[2 * k:2 * k + 2, 2 * k:2 * k + 2] = blk
    r = tf.INTERCONNECTION
    expected = r @ big @ r.T
    got = tf.network_transfer_P2(lam, betas).entries
    assert np.allclose(got, expected, rtol=1e-14, atol=0)


def test_network_symmetric_and_conjugate():
    betas = (1.0, 2.0, 3.0)
    m = tf.network_transfer_P2(1j * 17.0, betas).entries
    assert np.array_equal(m, m.T)
    mc = tf.network_transfer_P2(-1j * 17.0, betas).entries
    assert np.allclose(mc, np.conj(m), rtol=1e-15, atol=0)


def test_real_part_formula_matches_transfer_real_part():
    betas = (1.0, 2.0, 3.0)
    for s in (0.3, 1.0, 7.3, 120.0, -4.5):
        q = tf.re_P2_on_axis(s, betas).entries
        direct = np.real(tf.network_transfer_P2(1j * s, betas).entries)
        assert np.allclose(q, direct, rtol=1e-12, atol=1e-14)


def test_real_part_oracle_values():
    # Re p1(7.3 i), Re p2(7.3 i) for beta = 1.9 (frozen 20-digit values)
    q1_exact = 2.4471376297382123028
    q2_exact = -1.430093554015955389
    m = tf.re_P2_on_axis(7.3, (1.9, 1.9, 1.9)).entries
    assert m[0, 0] == pytest.approx(2 * q1_exact, rel=1e-13)
    assert m[0, 1] == pytest.approx(q2_exact, rel=1e-13)


def test_eta_positive_and_matches_eigensolver():
    betas = (1.0, 2.0, 3.0)
    for s in (0.1, 1.0, 50.0, 1e4):
        eta = tf.eta_lower_bound(s, betas)
        assert eta > 0
        m = tf.re_P2_on_axis(s, betas).entries
        assert eta == pytest.approx(float(np.linalg.eigvalsh(m)[0]), rel=1e-12)


def test_mu_and_bound():
    betas = (1.0, 1.0, 1.0)
    s = 25.0
    assert tf.mu(s, betas) > 1.0
    bound = tf.resolvent_bound_estimate(s, betas)
    assert bound == pytest.approx(tf.mu(s, betas) / tf.eta_lower_bound(s, betas))


def test_input_validation():
    with pytest.raises(ValueError):
        tf.heat_edge_transfer(-1.0, 1.0)
    with pytest.raises(ValueError):
        tf.heat_edge_transfer(1.0, -2.0)
    with pytest.raises(ValueError):
        tf.heat_edge_transfer(1.0, float("nan"))
    with pytest.raises(ValueError):
        tf.re_P2_on_axis(0.0, (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        tf.network_transfer_P2(1.0, (1.0, 2.0))


def test_heat_edge_params_frozen():
    p = tf.HeatEdgeParams(1.5)
    with pytest.raises(Exception):
        p.beta = 2.0
