import cmath

import numpy as np
import pytest

from conftest import close
from ellhyp import multivariate as M
from ellhyp.beta import _balanced_point, beta_rhs
from ellhyp.qseries import NomePair

NOME = NomePair(0.3, 0.4)
COUPLINGS = {
    "C_I": {}, "A_I1": {}, "A_I2": {},
    "C_II": {"tc": 0.6},
    "A_II1": {"tc": 0.4 * cmath.exp(0.3j)},
    "A_II2": {"tc": 0.6 * cmath.exp(0.3j), "sc": 0.7},
}


def _params(family, n, seed=1):
    return M.sample_root_params(np.random.default_rng(seed), family, n, NOME, **COUPLINGS[family])


@pytest.mark.parametrize("family", M.FAMILIES)
def test_n1_families(family):
    rep = M.multi_beta_check(_params(family, 1))
    assert rep.passed, rep


@pytest.mark.parametrize("family", ["C_I", "A_I2"])
def test_n2_families(family):
    rep = M.multi_beta_check(_params(family, 2))
    assert rep.passed, rep


@pytest.mark.parametrize("family", M.FAMILIES)
@pytest.mark.parametrize("n", [1, 2])
def test_sampler_respects_hypotheses(family, n):
    P = _params(family, n, seed=7)
    assert M.pole_margin_ok(P)
    lhs, rhs = P.constraint()
    assert rhs is None or close(lhs, rhs, 1e-12)


def test_C_I_n1_closed_form_is_univariate():
    P = _params("C_I", 1)
    assert close(M.closed_form(P), beta_rhs(P.t, NOME), 1e-13)
    assert M.c1_univariate_check(P).passed


def test_parameter_validation():
    with pytest.raises(ValueError):
        M.RootSystemParams("B_I", 1, NOME)
    with pytest.raises(ValueError):
        M.RootSystemParams("C_I", 3, NOME, t=(0.5,) * 10)
    with pytest.raises(ValueError):
        M.RootSystemParams("C_I", 1, NOME, t=(0.5,) * 5)
    with pytest.raises(ValueError):
        M.RootSystemParams("C_I", 1, NOME, t=(0.5,) * 6)
    P = M.RootSystemParams.build("A_I2", 1, NOME, t=[0.5], s=[0.5, 0.6, 0.7, 0.4])
    assert P.constraint() == (None, None)


def test_kernel_symmetric_under_inversion():
    P = _params("C_I", 2)
    f = M.kernel(P)
    z1, z2 = np.array([0.9 * cmath.exp(0.4j)]), np.array([cmath.exp(1.3j)])
    a = f(z1, z2)
    assert close(a[0], f(1 / z1, z2)[0], 1e-12)
    assert close(a[0], f(z2, z1)[0], 1e-12)


@pytest.fixture(scope="module")
def diejen_I():
    nome = NomePair(0.1, 0.6)
    t = _balanced_point(np.random.default_rng(0), 8, (nome.p * nome.q) ** 2, 0.3, 0.58)
    return M.DiejenParams("I", 1, t, nome)


def test_diejen_annihilates_constants(diejen_I):
    z = np.exp(1j * np.array([0.3, 1.1, 2.5]))
    assert np.all(M.vandiejen_apply(diejen_I, lambda x: np.ones_like(x), [z]) == 0)


def test_diejen_hermiticity_n1(diejen_I):
    assert M.hermiticity_admissible(diejen_I)
    rep = M.vandiejen_hermiticity(diejen_I, lambda x: x + 1 / x, lambda x: x * x + 1 / (x * x) + 0.3)
    assert rep.passed, rep
    assert abs(rep.lhs) > 1e-3  # not trivially zero


def test_diejen_validation():
    nome = NomePair(0.1, 0.6)
    with pytest.raises(ValueError, match="coupling"):
        M.DiejenParams("II", 2, (0.5,) * 8, nome)
    with pytest.raises(ValueError):
        M.DiejenParams("III", 1, (0.5,) * 8, nome)
    with pytest.raises(ValueError):
        M.DiejenParams("I", 1, (0.5,) * 7, nome)


@pytest.mark.parametrize("n", range(4))
def test_difference_operator_eigenfunctions(n):
    t5 = [0.5 * cmath.exp(0.3j), 0.6, 0.45 * cmath.exp(-1j), 0.7 * cmath.exp(0.2j), 0.55]
    assert M.dmu_diejen_check(n, 0.8 * cmath.exp(0.7j), t5, NOME).passed
