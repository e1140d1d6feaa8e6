import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import annulus, close, lattice_gap
from ellhyp import gamma as G
from ellhyp.qseries import NomePair, theta

# double product summed in mpmath at 30 digits
EGAMMA_REF = [
    (0.6 + 0.3j, 0.3 + 0.1j, 0.4, 0.6298674977252817 + 2.4946814256803456j),
    (1.7 - 0.5j, 0.2, 0.1 + 0.3j, -0.6912509582517595 - 1.9714599607516075j),
    (0.05 + 0.02j, 0.5, 0.5, -0.0013892950427930703 - 0.0009233094409788743j),
]
STANDARD = G.PeriodTriple(1.0, math.sqrt(2) * cmath.exp(-0.1j), 2j)


@pytest.mark.parametrize("z,p,q,ref", EGAMMA_REF)
@pytest.mark.parametrize("fast", [True, False])
def test_egamma_reference(z, p, q, ref, fast):
    assert close(G.egamma(z, p, q, fast=fast), ref, 1e-13)


def test_egamma_nomepair_and_arrays():
    nome = NomePair(0.3, 0.4)
    z = np.array([0.5, 0.8j, 1.4 - 0.2j])
    out = G.egamma(z, nome)
    assert out.shape == (3,)
    assert close(out[2], G.egamma(1.4 - 0.2j, 0.3, 0.4), 1e-15)


def test_egamma_dedupe_matches_plain():
    z = np.exp(1j * np.linspace(0, 1, 3000)) * 0.9
    z = np.concatenate([z, z])
    a = G.egamma(z, 0.3, 0.4, dedupe=True)
    b = G.egamma(z, 0.3, 0.4, dedupe=False)
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))


def test_egamma_domain_errors():
    with pytest.raises(ValueError):
        G.egamma(0.5, 1.0, 0.3)
    with pytest.raises(ValueError):
        G.egamma(0.0, 0.3, 0.3)


@given(annulus(0.1, 5.0), annulus(0.05, 0.6), annulus(0.05, 0.6))
def test_reflection(z, p, q):
    assume(lattice_gap(z, p, q) > 1e-3)
    assert close(G.egamma(z, p, q) * G.egamma(p * q / z, p, q), 1.0, 1e-12)


@given(annulus(0.1, 5.0), annulus(0.05, 0.6), annulus(0.05, 0.6))
def test_shifts(z, p, q):
    assume(lattice_gap(z, p, q) > 1e-3)
    assert close(G.egamma(q * z, p, q), theta(z, p) * G.egamma(z, p, q), 1e-12)
    assert close(G.egamma(p * z, p, q), theta(z, q) * G.egamma(z, p, q), 1e-12)


@given(annulus(0.1, 5.0), annulus(0.05, 0.6), annulus(0.05, 0.6))
def test_pq_symmetry(z, p, q):
    assume(lattice_gap(z, p, q) > 1e-3)
    assert close(G.egamma(z, p, q), G.egamma(z, q, p), 1e-12)


@given(annulus(0.05, 0.6), annulus(0.05, 0.6))
def test_sqrt_pq(p, q):
    assert close(G.egamma(cmath.sqrt(p * q), p, q), 1.0, 1e-12)


def test_period_triple_bases():
    P = STANDARD
    assert P.standard and P.consistent()
    assert close(P.q, cmath.exp(2j * cmath.pi * P.omega1 / P.omega2), 1e-15)
    unit = G.PeriodTriple(1.0, math.sqrt(2), 3j)
    assert not unit.standard and unit.unit_circle
    assert abs(abs(unit.q) - 1) < 1e-15


@given(st.complex_numbers(max_magnitude=0.4))
def test_mod_egamma_representations_agree(u):
    assume(abs(u) > 0.05)
    a = G.mod_egamma(u, STANDARD, "product")
    b = G.mod_egamma(u, STANDARD, "modular")
    assert close(a, b, 1e-10)


@given(st.complex_numbers(max_magnitude=0.4))
def test_mod_egamma_reflection_and_swap(u):
    assume(abs(u) > 0.05)
    P = STANDARD
    assert close(G.mod_egamma(u, P) * G.mod_egamma(P.total - u, P), 1.0, 1e-12)
    assert close(G.mod_egamma(u, P), G.mod_egamma(u, P.permuted(1, 0, 2)), 1e-12)


def test_mod_egamma_unit_circle_needs_modular():
    unit = G.PeriodTriple(1.0, math.sqrt(2), 3j)
    with pytest.raises(ValueError):
        G.mod_egamma(0.1, unit, "product")
    assert np.isfinite(G.mod_egamma(0.1, unit))
    with pytest.raises(ValueError):
        G.mod_egamma(0.1, STANDARD, "neither")


@given(st.complex_numbers(max_magnitude=0.9))
def test_theta_modular_identity(u):
    assume(abs(u) > 0.05)
    w2, w3 = 1.0, 0.3 + 1.7j
    e = lambda x: cmath.exp(2j * cmath.pi * x)
    ratio = theta(e(-u / w3), e(-w2 / w3)) / theta(e(u / w2), e(w3 / w2))
    assert close(ratio, cmath.exp(1j * cmath.pi * G.b22(u, w2, w3)), 1e-10)


def test_b22_symmetric():
    assert close(G.b22(0.3 + 0.1j, 1.0, 2j), G.b22(0.3 + 0.1j, 2j, 1.0), 1e-15)


def test_hyperbolic_gamma_limit():
    # as Im(w3) grows, G(u) tends to 1 / S(u)
    w1, w2 = 1.0, 1.3 * cmath.exp(-0.4j)
    u = 0.2 + 0.05j
    P = G.PeriodTriple(w1, w2, 9j)
    assert close(1 / G.mod_egamma(u, P), G.hyperbolic_gamma(u, w1, w2), 1e-8)


@given(st.complex_numbers(max_magnitude=0.8))
def test_hyperbolic_gamma_shift(u):
    w1, w2 = 1.0, 1.3 * cmath.exp(-0.4j)
    assume(abs(u) > 0.05)
    lhs = G.hyperbolic_gamma(u + w1, w1, w2) * (1 - cmath.exp(2j * cmath.pi * u / w2))
    assert close(lhs, G.hyperbolic_gamma(u, w1, w2), 1e-12)


def test_hyperbolic_gamma_regime():
    with pytest.raises(ValueError):
        G.hyperbolic_gamma(0.1, 1.0, 2.0)
