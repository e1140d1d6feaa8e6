import cmath

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import annulus, close, theta_bound
from ellhyp import qseries as Q
from ellhyp.qseries import NomePair

# reference values from mpmath (qp at 30 digits)
THETA_REF = [
    (0.7 + 0.2j, 0.35 + 0.1j, 0.05223958628746128 - 0.08562632515385578j),
    (-1.3 + 0.4j, 0.5, 12.78734058888697 - 3.700770831026384j),
    (0.2 - 0.9j, -0.1 + 0.45j, 0.9731324614000437 + 0.745684922309711j),
]
QPOCH_REF = [
    (0.7 + 0.2j, 0.35 + 0.1j, 0.16414140799006458 - 0.2045070559448361j),
    (-1.3 + 0.4j, 0.5, 6.304244819372717 - 3.1123660788915783j),
    (0.2 - 0.9j, -0.1 + 0.45j, 0.7871869102456853 + 0.42068850130081054j),
]
# mpmath jtheta(1, pi u, exp(i pi tau))
THETA1_REF = [
    (0.3, 0.5j, 1.0744053196400078),
    (0.1 + 0.2j, 0.2 + 0.9j, 0.2690446202176045 + 0.6683328494757902j),
]


@pytest.mark.parametrize("z,p,ref", THETA_REF)
def test_theta_reference(z, p, ref):
    assert close(Q.theta(z, p), ref, 1e-14)


@pytest.mark.parametrize("z,p,ref", QPOCH_REF)
def test_qpoch_reference(z, p, ref):
    assert close(Q.qpoch_inf(z, p), ref, 1e-14)


@pytest.mark.parametrize("u,tau,ref", THETA1_REF)
def test_theta1_reference(u, tau, ref):
    assert close(Q.theta1_jacobi(u, tau), ref, 1e-14)
    assert close(Q.theta1_series(u, tau), ref, 1e-13)


def test_theta_vectorised():
    z = np.array([0.5, 1.5j, -0.7 + 0.1j])
    out = Q.theta(z, 0.3)
    assert out.shape == (3,)
    assert all(close(out[i], Q.theta(z[i], 0.3), 1e-15) for i in range(3))


def test_theta_zero_at_lattice():
    assert abs(Q.theta(1.0, 0.4)) == 0
    assert abs(Q.theta(0.4, 0.4)) < 1e-15


@given(annulus(0.5, 2.0), annulus(0.05, 0.6))
def test_theta_quasi_periodic(z, p):
    scale = theta_bound(p * z, p) + theta_bound(z, p) / abs(z)
    assert abs(Q.theta(p * z, p) + Q.theta(z, p) / z) <= 1e-13 * scale


@given(annulus(0.5, 2.0), annulus(0.05, 0.6))
def test_theta_inversion(z, p):
    scale = theta_bound(1 / z, p) + theta_bound(z, p) / abs(z)
    assert abs(Q.theta(1 / z, p) + Q.theta(z, p) / z) <= 1e-13 * scale


@given(annulus(0.5, 1.5), annulus(0.5, 1.5), annulus(0.5, 1.5), annulus(0.5, 1.5), annulus(0.05, 0.6))
def test_addition_formula(w, x, y, z, p):
    assert Q.check_addition_formula(w, x, y, z, p).passed


@given(st.complex_numbers(max_magnitude=1.0), st.floats(-0.5, 0.5), st.floats(0.2, 1.5))
def test_theta1_odd_and_periodic(u, re, im):
    tau = complex(re, im)
    f = lambda x: Q.theta1_jacobi(x, tau)
    p = cmath.exp(2j * cmath.pi * tau)
    # size of the product before cancellation
    bound = lambda x: abs(cmath.exp(-1j * cmath.pi * x)) * theta_bound(cmath.exp(2j * cmath.pi * x), p)
    scale = bound(u) + bound(-u) + bound(u + 1)
    assert abs(f(-u) + f(u)) <= 1e-13 * scale
    assert abs(f(u + 1) + f(u)) <= 1e-13 * scale


@given(annulus(0.3, 1.5), st.integers(0, 6))
def test_epoch_recursion(t, n):
    nome = NomePair(0.3, 0.5 + 0.1j)
    lhs = Q.epoch(t, n + 1, nome)
    rhs = Q.epoch(t, n, nome) * Q.theta(t * nome.q**n, nome.p)
    assert close(lhs, rhs, 1e-13)


def test_epoch_negative_n():
    with pytest.raises(ValueError):
        Q.epoch(0.5, -1, NomePair(0.3, 0.4))


def test_nomepair_validation_and_swap():
    n = NomePair(0.2, 0.5j)
    assert n.swapped().p == n.q and n.swapped().q == n.p
    with pytest.raises(ValueError):
        NomePair(1.2, 0.3)


def test_classify_ratio():
    p = 0.3 + 0.1j
    a, b, c = 0.7 + 0.1j, 1.1j, 0.9
    bal = Q.classify_ratio([a, b], [c, a * b / c], p)
    assert bal.balanced and bal.elliptic_residual < 1e-13
    unbal = Q.classify_ratio([a, b], [c, 1.3], p)
    assert not unbal.balanced and unbal.elliptic_residual > 1e-3
    wp = Q.classify_ratio([a, b], [1 / b, 1 / a], p)
    assert wp.well_poised


def test_addition_rejects_zero():
    with pytest.raises(ValueError):
        Q.check_addition_formula(0, 1, 1, 1, 0.3)
