import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close
from ellhyp import beta as B
from ellhyp.gamma import PeriodTriple
from ellhyp.qseries import NomePair

NOME = NomePair(0.3, 0.4)
FREE = [0.7 * cmath.exp(0.3j), 0.75, 0.65 * cmath.exp(-1j), 0.72 * cmath.exp(0.2j), 0.68 * cmath.exp(1.1j)]
# product of Gamma(t_j t_k) over the 15 pairs, mpmath at 30 digits
BETA_REF = 682.53546887697 - 132.92796992745j


def test_closed_form_reference():
    bp = B.BetaParams.from_free(FREE, NOME)
    assert close(B.beta_rhs(bp.t, NOME), BETA_REF, 1e-13)


def test_quadrature_reference():
    bp = B.BetaParams.from_free(FREE, NOME)
    val, err = B.circle_integral(bp.t, NOME)
    assert close(val, BETA_REF, 1e-12)
    assert err < 1e-9 * abs(val)


def test_symmetric_point():
    nome = NomePair(0.5, 0.5)
    rep = B.elliptic_beta_check(B.BetaParams(((0.25) ** (1 / 6),) * 6, nome))
    assert rep.passed, rep


@settings(max_examples=8)
@given(st.integers(0, 2**32 - 1))
def test_random_admissible_points(seed):
    rng = np.random.default_rng(seed)
    rep = B.elliptic_beta_check(B.sample_beta_params(rng, NomePair(0.4, 0.35)))
    assert rep.passed, rep


def test_balance_enforced():
    with pytest.raises(ValueError):
        B.BetaParams((0.5,) * 6, NOME)
    with pytest.raises(ValueError):
        B.VParams((0.5,) * 8, NOME)


def test_inadmissible_point_is_untestable():
    bp = B.BetaParams.from_free([0.3, 0.4, 0.2j, 0.5, 0.45], NOME)
    assert abs(bp.t[5]) > 1
    assert B.elliptic_beta_check(bp).verdict == "untestable"


def test_integrand_symmetric_in_z():
    f = B.beta_integrand(B.BetaParams.from_free(FREE, NOME).t, NOME)
    z = 0.9 * cmath.exp(0.4j)
    assert close(f(z), f(1 / z), 1e-12)


@pytest.mark.parametrize("q", [0.3, 0.55])
def test_rahman_and_askey_wilson(q):
    assert B.rahman_check([0.3, 0.4j, 0.5, 0.6, 0.2 - 0.1j], q).passed
    assert B.askey_wilson_check([0.3, 0.4, 0.5j, 0.6], q).passed


def test_askey_wilson_is_rahman_limit():
    # t5 -> 0 turns the Rahman integral into the Askey-Wilson one
    a = B.rahman_check([0.3, 0.4, 0.5, 0.6, 1e-12], 0.5).lhs
    b = B.askey_wilson_check([0.3, 0.4, 0.5, 0.6], 0.5).lhs
    assert close(a, b, 1e-10)


def test_residue_identity_one_and_two_poles():
    base = [0.7 * cmath.exp(0.2j), 0.75, 0.65 * cmath.exp(-0.5j), 0.6]
    one = B.residue_identity_check(base + [1.05 * cmath.exp(0.4j)], NomePair(0.3, 0.5))
    two = B.residue_identity_check(base + [2.4 * cmath.exp(0.3j)], NomePair(0.2, 0.5))
    assert one.passed and two.passed
    assert one.meta["crossed"] == [0] and two.meta["crossed"] == [0, 1]


def test_modified_beta_unit_circle_and_standard():
    P = PeriodTriple(1.0, math.sqrt(2), 3j)
    assert B.modified_beta_check([P.total / 6] * 6, P).passed
    S = PeriodTriple(1.0, math.sqrt(2) * cmath.exp(-0.1j), 2j)
    assert B.modified_beta_check([S.total / 6] * 6, S, tol=1e-9).passed


def test_modified_beta_constraint():
    P = PeriodTriple(1.0, math.sqrt(2), 3j)
    with pytest.raises(ValueError):
        B.modified_beta_check([0.1] * 6, P)


def test_mellin_barnes_pass_or_inconclusive():
    w2 = cmath.exp(-0.3j)
    rep = B.mellin_barnes_check([0.15 * w2 * (1 + 0.1j * k) for k in range(5)], 1.0, w2)
    assert rep.verdict in ("pass", "inconclusive")


def _vpoint(seed=3):
    return B.sample_vparams(np.random.default_rng(seed), NOME)


def test_V_reduction():
    rng = np.random.default_rng(11)
    t6 = B.sample_beta_params(rng, NOME).t
    vp = B.VParams(tuple(t6) + (0.8, NOME.p * NOME.q / 0.8), NOME)
    assert B.check_V_reduction(vp).passed


@pytest.mark.parametrize("kind", ["i", "ii", "iii"])
def test_E7_transformations(kind):
    rep = B.check_E7_transform(kind, _vpoint())
    assert rep.verdict in ("pass", "untestable")
    if rep.verdict == "untestable":
        pytest.skip(rep.meta["reason"])


def test_E7_fixed_point_prefactor():
    a = [0.6, 0.7j, 0.65 * cmath.exp(0.4j)]
    a.append(NOME.p * NOME.q / np.prod(a))
    b = [0.55, 0.8 * cmath.exp(-1j), 0.6j]
    b.append(NOME.p * NOME.q / np.prod(b))
    assert close(B.E7_fixed_point_prefactor(a + b, NOME), 1.0, 1e-12)


@pytest.mark.parametrize("kind,caps", [(1, {7: 0.36}), (2, {5: 0.36, 6: 0.36})])
def test_V_contiguous(kind, caps):
    vp = B.sample_vparams(np.random.default_rng(kind), NOME, caps=caps)
    assert B.check_V_contiguous(kind, vp).passed


def test_elliptic_hypergeometric_equation():
    a, ts, z = B.sample_ehe_point(np.random.default_rng(5), NOME)
    assert B.check_ehe(a, ts, z, NOME).passed


@given(st.integers(0, 2**32 - 1))
def test_balanced_point_sampler(seed):
    rng = np.random.default_rng(seed)
    t = B._balanced_point(rng, 6, 0.12, 0.2, 0.8)
    assert close(np.prod(t), 0.12, 1e-12)
    assert np.all(np.abs(t) <= 0.8 + 1e-12) and np.all(np.abs(t) >= 0.2 - 1e-12)
