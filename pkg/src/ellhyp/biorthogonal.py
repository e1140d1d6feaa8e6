"""Biorthogonality of the rational functions ``R_n`` and ``T_n``.

The weight is the elliptic beta integrand with five free parameters and the
sixth fixed at ``pq/A``; integrals are taken over the unit circle only, so
every check first asks :func:`contour_admissible` whether that circle
separates the relevant pole sequences.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field

import numpy as np

from .beta import beta_integrand
from .gamma import PeriodTriple, egamma
from .qseries import NomePair, epoch_prod, qpoch_inf, theta
from .quadrature import ContourSpec, integrate_circle
from .report import UntestableError, VerificationReport, make_report, untestable_report
from .series import Bases, eval_R, eval_T


@dataclass(frozen=True)
class BiorthParams:
    t: tuple
    nome: NomePair
    A: complex = field(init=False)

    def __post_init__(self):
        t = tuple(complex(x) for x in self.t)
        if len(t) != 5:
            raise ValueError("need five parameters t0..t4")
        if not all(abs(x) < 1 for x in t):
            raise ValueError("need |t_m| < 1")
        A = complex(np.prod(t))
        if not abs(self.nome.p * self.nome.q) < abs(A):
            raise ValueError("need |pq| < |A|")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "A", A)

    def swapped(self) -> "BiorthParams":
        return BiorthParams(self.t, self.nome.swapped())


def _kernel_params(params: BiorthParams):
    return list(params.t) + [params.nome.p * params.nome.q / params.A]


def weight(z, params: BiorthParams):
    """``Delta(z, t)`` including the ``(q;q)(p;p)/(4 pi i)`` factor."""
    p, q = params.nome.p, params.nome.q
    c = qpoch_inf(q, q) * qpoch_inf(p, p) / (4j * np.pi)
    return c * beta_integrand(_kernel_params(params), params.nome)(np.asarray(z, dtype=complex))


def norm_constant(params: BiorthParams) -> complex:
    p, q = params.nome.p, params.nome.q
    num = np.prod([egamma(a * b, p, q) for a, b in itertools.combinations(params.t, 2)])
    den = np.prod([egamma(params.A / x, p, q) for x in params.t])
    return complex(num / den)


def h_norm(n: int, params: BiorthParams) -> complex:
    """Normalisation ``h_n(q, p)`` of the diagonal entries."""
    if n < 0:
        raise ValueError("n must be non-negative")
    t0, t1, t2, t3, t4 = params.t
    A, nome = params.A, params.nome
    p, q = nome.p, nome.q
    num = theta(A / (q * t4), p) * epoch_prod([q, q * t3 / t4, t0 * t1, t0 * t2, t1 * t2, A * t3], n, nome) * q ** (-n)
    den = theta(A * q ** (2 * n) / (t4 * q), p) * epoch_prod(
        [1 / (t3 * t4), t0 * t3, t1 * t3, t2 * t3, A / (q * t3), A / (q * t4)], n, nome)
    if den == 0:
        raise ZeroDivisionError("a denominator Pochhammer symbol vanishes")
    return complex(num / den)


def contour_admissible(n: int, l: int, m: int, k: int, params: BiorthParams) -> bool:
    """True when the unit circle separates the pole sequences for indices ``(n, l, m, k)``.

    The inner sequences ``t_j p^a q^b`` (j <= 3), ``t4 p^(a-k) q^(b-m)`` and
    ``p^(a+1-l) q^(b+1-n) / A`` with ``a, b >= 0`` must all lie strictly
    inside; their largest members sit at ``a = b = 0``.
    """
    t, p, q = params.t, params.nome.p, params.nome.q
    inner = list(t[:4]) + [t[4] * p ** (-k) * q ** (-m), p ** (1 - l) * q ** (1 - n) / params.A]
    return all(abs(x) < 1 for x in inner)


def _R2(m, k, z, params):
    """``R_{mk}(z) = R_m(z; q, p) R_k(z; p, q)``."""
    out = eval_R(m, z, params.t, params.nome)
    return out * eval_R(k, z, params.t, params.nome.swapped()) if k else out


def _T2(n, l, z, params):
    out = eval_T(n, z, params.t, params.nome)
    return out * eval_T(l, z, params.t, params.nome.swapped()) if l else out


def inner_product(n: int, l: int, m: int, k: int, params: BiorthParams, spec: ContourSpec | None = None) -> complex:
    """``\\int T_{nl} R_{mk} Delta dz/z`` over the unit circle.

    Raises :class:`UntestableError` when the circle is not an admissible
    contour for these indices.
    """
    if not contour_admissible(n, l, m, k, params):
        raise UntestableError(f"unit circle does not separate the poles for indices {(n, l, m, k)}")
    kern = beta_integrand(_kernel_params(params), params.nome)
    f = lambda z: _T2(n, l, z, params) * _R2(m, k, z, params) * kern(z)
    mean, _ = integrate_circle(f, spec or ContourSpec(nodes=32, target_rel=1e-13))
    p, q = params.nome.p, params.nome.q
    # the mean times 2 pi i, times (q;q)(p;p)/(4 pi i)
    return complex(qpoch_inf(q, q) * qpoch_inf(p, p) / 2 * mean)


def gram_matrix(params: BiorthParams, size: int = 3, spec: ContourSpec | None = None) -> np.ndarray:
    """``G[n, m] = <T_n, R_m> / N(t)`` for ``n, m < size`` (``k = l = 0``)."""
    N = norm_constant(params)
    G = np.empty((size, size), dtype=complex)
    for n in range(size):
        for m in range(size):
            G[n, m] = inner_product(n, 0, m, 0, params, spec) / N
    return G


def gram_check(params: BiorthParams, size: int = 3, spec=None, tol: float = 1e-7) -> VerificationReport:
    """Largest deviation of the normalised Gram matrix from ``diag(h_0, h_1, ...)``."""
    try:
        G = gram_matrix(params, size, spec)
    except UntestableError as exc:
        return untestable_report("biorth.gram", str(exc), tol)
    H = np.diag([h_norm(n, params) for n in range(size)])
    i, j = np.unravel_index(np.argmax(np.abs(G - H)), G.shape)
    off = np.max(np.abs(G - np.diag(np.diag(G))))
    diag = np.max(np.abs(np.diag(G) - np.diag(H)))
    meta = {"max_offdiag": float(off), "max_diag_err": float(diag), "size": size}
    # entries are already normalised by N(t); scale 1 matches the h_0 = 1 entry
    return make_report("biorth.gram", G[i, j], H[i, j], terms=[1.0], tol=tol, meta=meta)


def two_index_check(n: int, l: int, params: BiorthParams, spec=None, tol: float = 1e-7) -> VerificationReport:
    """Diagonal entry ``<T_{nl}, R_{nl}> = h_n(q,p) h_l(p,q) N(t)``; untestable off the circle."""
    id = f"biorth.two_index_{n}{l}"
    try:
        val = inner_product(n, l, n, l, params, spec)
    except UntestableError as exc:
        return untestable_report(id, str(exc), tol)
    rhs = h_norm(n, params) * h_norm(l, params.swapped()) * norm_constant(params)
    return make_report(id, val, rhs, tol=tol)


# unit-circle (additive) notation

def _e(x):
    return cmath.exp(2j * cmath.pi * x)


def r_fn(n: int, u, g, omega1, omega2, omega3) -> complex:
    """``r_n(u; w1, w2, w3)``: ``R_n`` with ``t_j = e(g_j/w2)``, ``z = e(u/w2)``, ``q = e(w1/w2)``, ``p = e(w3/w2)``."""
    w2 = complex(omega2)
    bases = Bases(_e(omega3 / w2), _e(omega1 / w2))
    return eval_R(n, _e(u / w2), [_e(x / w2) for x in g], bases)


def s_fn(n: int, u, g, omega1, omega2, omega3) -> complex:
    """``s_n(u; w1, w2, w3)``: the dual ``T_n`` in the same additive notation."""
    w2 = complex(omega2)
    bases = Bases(_e(omega3 / w2), _e(omega1 / w2))
    return eval_T(n, _e(u / w2), [_e(x / w2) for x in g], bases)


def unit_circle_products(n: int, m: int, u, g, periods: PeriodTriple):
    """``(r_nm^mod(u), s_nm^mod(u))``, products over the orderings ``(w1, w2, w3)`` and ``(w2, w1, w3)``."""
    w1, w2, w3 = periods.omegas
    r = r_fn(n, u, g, w1, w2, w3) * r_fn(m, u, g, w2, w1, w3)
    s = s_fn(n, u, g, w1, w2, w3) * s_fn(m, u, g, w2, w1, w3)
    return complex(r), complex(s)


def modular_invariance_check(n: int, u, g, periods: PeriodTriple, tol: float = 1e-10) -> VerificationReport:
    """``r_n(u; w1, w2, w3) = r_n(u; w1, -w3, w2)``."""
    w1, w2, w3 = periods.omegas
    a = r_fn(n, u, g, w1, w2, w3)
    b = r_fn(n, u, g, w1, -w3, w2)
    return make_report("biorth.modular", a, b, tol=tol, meta={"n": n})
