"""Terminating very-well-poised elliptic hypergeometric series.

The workhorse is :func:`vwp_sum`, the terminating ``_{r+1}V_r`` series
accumulated through its term ratio.  On top of it sit the Frenkel-Turaev
summation, the biorthogonal functions ``R_n``/``T_n``, their three-term
recurrence and the contiguous relations of ``_{12}V_{11}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qseries import NomePair, epoch, epoch_prod, theta, theta_prod
from .report import UntestableError, VerificationReport, make_report

TERMINATION_TOL = 1e-10
BALANCE_TOL = 1e-10


class SeriesError(ValueError):
    """A denominator of the series vanishes; ``where`` is ``(m, n)``."""

    def __init__(self, msg, where=None):
        super().__init__(msg)
        self.where = where


def find_termination(params, q, n_max: int = 200):
    """Return ``(index, N)`` of the first parameter equal to ``q^{-N}``, or ``None``."""
    q = complex(q)
    lq = -math.log(abs(q))
    for i, t in enumerate(params):
        t = complex(t)
        if t == 0:
            continue
        guess = math.log(abs(t)) / lq
        n = int(round(guess))
        if 0 <= n <= n_max and abs(t * q**n - 1) < TERMINATION_TOL:
            return i, n
    return None


@dataclass(frozen=True)
class VSeriesSpec:
    """Data of a terminating ``_{r+1}V_r(t0; t1, ..., t_{r-4}; q, p; y)``.

    ``term_index`` picks the parameter ``params[term_index] = q^{-N}``; when
    omitted it is located automatically.
    """

    t0: complex
    params: tuple
    nome: NomePair
    N: int
    y: complex = 1.0
    term_index: int | None = None
    check_balance: bool = True

    def __post_init__(self):
        params = tuple(complex(x) for x in self.params)
        object.__setattr__(self, "params", params)
        if self.N < 0:
            raise ValueError("N must be non-negative")
        q = self.nome.q
        if self.term_index is None:
            hits = [i for i, t in enumerate(params) if abs(t * q**self.N - 1) < TERMINATION_TOL]
            if not hits:
                raise ValueError(f"no parameter equals q^-{self.N}")
            object.__setattr__(self, "term_index", hits[0])
        elif abs(params[self.term_index] * q**self.N - 1) >= TERMINATION_TOL:
            raise ValueError("params[term_index] is not q^-N")
        if self.check_balance and len(params) % 2 == 1:
            r = len(params) + 4
            lhs = np.prod(params)
            rhs = self.t0 ** ((r - 5) // 2) * q ** ((r - 7) // 2)
            if abs(lhs - rhs) > BALANCE_TOL * max(abs(lhs), abs(rhs)):
                raise ValueError("parameters are not balanced")

    @property
    def r(self) -> int:
        return len(self.params) + 4


@dataclass(frozen=True)
class Bases:
    """Bases of a terminating series: ``|p| < 1`` but ``q`` unrestricted.

    Terminating sums only need finitely many theta values, so ``q`` may sit
    on or outside the unit circle (as in the unit-circle biorthogonal
    functions, where the series base is ``exp(2 pi i w2/w1)``).
    """

    p: complex
    q: complex

    def __post_init__(self):
        p, q = complex(self.p), complex(self.q)
        if not abs(p) < 1:
            raise ValueError("need |p| < 1")
        if q == 0:
            raise ValueError("need q != 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


def vwp_terms(t0, params, nome, N: int, y=1.0):
    """The ``N+1`` terms of a very-well-poised series, built by running ratio.

    Parameters may be numpy arrays (broadcast together); the result then
    has shape ``(N + 1,) + broadcast_shape``.  ``nome`` is a
    :class:`NomePair` or :class:`Bases`.
    """
    p, q = nome.p, nome.q
    t0 = np.asarray(t0, dtype=complex)
    ps = [t0] + [np.asarray(x, dtype=complex) for x in params]
    shape = np.broadcast_shapes(*(x.shape for x in ps))
    terms = np.empty((N + 1,) + shape, dtype=complex)
    c = np.ones(shape, dtype=complex)
    terms[0] = c
    if np.any(np.abs(theta(t0, p)) < 1e-300):
        raise SeriesError("theta(t0; p) vanishes", (0, 0))
    for n in range(N):
        qn = q**n
        num = theta(t0 * qn * qn * q * q, p) * q * y
        den = theta(t0 * qn * qn, p)
        if np.any(np.abs(den) < 1e-300):
            raise SeriesError(f"theta(t0 q^(2n)) vanishes at n={n}", (0, n))
        for m, tm in enumerate(ps):
            num = num * theta(tm * qn, p)
            d = theta(q * t0 / tm * qn, p)
            if np.any(np.abs(d) < 1e-300):
                raise SeriesError(f"denominator (q t0/t_{m})_n vanishes at n={n + 1}", (m, n + 1))
            den = den * d
        c = c * num / den
        terms[n + 1] = c
    return terms


def vwp_sum(t0, params, nome, N: int, y=1.0):
    """Sum of :func:`vwp_terms`; a scalar unless some parameter is an array."""
    out = np.sum(vwp_terms(t0, params, nome, N, y), axis=0)
    return complex(out) if out.ndim == 0 else out


def eval_V(spec: VSeriesSpec) -> complex:
    """Value of the terminating series described by ``spec``."""
    return vwp_sum(spec.t0, spec.params, spec.nome, spec.N, spec.y)


def vwp_direct(t0, params, nome: NomePair, N: int, y=1.0) -> complex:
    """Same sum recomputing every elliptic Pochhammer symbol (O(N^2), oracle)."""
    p, q = nome.p, nome.q
    ps = [complex(t0)] + [complex(x) for x in params]
    total = 0j
    for n in range(N + 1):
        v = theta(t0 * q ** (2 * n), p) / theta(t0, p) * (q * y) ** n
        for tm in ps:
            v *= epoch(tm, n, nome) / epoch(q * t0 / tm, n, nome)
        total += v
    return complex(total)


def _epoch_q(t, n, q, p):
    out = 1.0 + 0j
    for j in range(n):
        out *= theta(t * q**j, p)
    return out


def eval_E(t, w, q, p, N: int, y=1.0) -> complex:
    """Terminating ``_{r+1}E_r(t; w; q, p; y)`` summed up to ``n = N``.

    ``t`` holds ``t_0..t_r`` and ``w`` holds ``w_1..w_r`` (``w_0 = q`` is
    implicit).  ``q`` is passed separately from ``p`` and may lie outside
    the unit disc, which the inversion symmetry needs.
    """
    q, p = complex(q), complex(p)
    total = 0j
    for n in range(N + 1):
        v = complex(y) ** n / _epoch_q(q, n, q, p)
        for a in t:
            v *= _epoch_q(complex(a), n, q, p)
        for b in w:
            v /= _epoch_q(complex(b), n, q, p)
        total += v
    return total


def inversion_check(t, w, q, p, N: int, y=1.0, tol: float = 1e-12) -> VerificationReport:
    """``E(t; w; q, p; y) = E(1/t; 1/w; 1/q, p; y)`` on a terminating instance."""
    lhs = eval_E(t, w, q, p, N, y)
    rhs = eval_E([1 / complex(a) for a in t], [1 / complex(b) for b in w], 1 / complex(q), p, N, y)
    return make_report("series.inversion", lhs, rhs, tol=tol, meta={"N": N})


def _auto_sum(t0, params, nome: NomePair) -> complex:
    hit = find_termination(params, nome.q)
    if hit is None:
        raise UntestableError("series does not terminate")
    return vwp_sum(t0, params, nome, hit[1])


def frenkel_turaev_rhs(t0, t1, t2, t3, N: int, nome: NomePair) -> complex:
    q = nome.q
    num = epoch_prod([q * t0, q * t0 / (t1 * t2), q * t0 / (t1 * t3), q * t0 / (t2 * t3)], N, nome)
    den = epoch_prod([q * t0 / (t1 * t2 * t3), q * t0 / t1, q * t0 / t2, q * t0 / t3], N, nome)
    return complex(num / den)


def frenkel_turaev_check(t0, t1, t2, t3, t5, N: int, nome: NomePair, tol: float = 1e-12) -> VerificationReport:
    """Terminating ``_{10}V_9`` sum against its closed product (``t4 = q^{-N}``)."""
    q = nome.q
    t4 = q ** (-N)
    if abs(t1 * t2 * t3 * t4 * t5 - q * t0 * t0) > BALANCE_TOL * abs(q * t0 * t0):
        raise ValueError("balancing condition t1...t5 = q t0^2 violated")
    terms = vwp_terms(t0, [t1, t2, t3, t4, t5], nome, N)
    lhs = complex(np.sum(terms))
    rhs = frenkel_turaev_rhs(t0, t1, t2, t3, N, nome)
    return make_report("series.frenkel_turaev", lhs, rhs, terms=list(terms) + [rhs], tol=tol, meta={"N": N})


def balanced_t5(t0, t1, t2, t3, N: int, q) -> complex:
    return q * t0 * t0 / (t1 * t2 * t3 * q ** (-N))


# biorthogonal rational functions


def _R_params(n, z, t, q):
    t0, t1, t2, t3, t4 = t
    A = t0 * t1 * t2 * t3 * t4
    return t3 / t4, [q / (t0 * t4), q / (t1 * t4), q / (t2 * t4), t3 * z, t3 / z, q ** (-n), A * q ** (n - 1) / t4]


def _T_params(n, z, t, q):
    t0, t1, t2, t3, t4 = t
    A = t0 * t1 * t2 * t3 * t4
    return A * t3 / q, [A / t0, A / t1, A / t2, t3 * z, t3 / z, q ** (-n), A * q ** (n - 1) / t4]


def eval_R(n: int, z, t, nome: NomePair) -> complex:
    """``R_n(z; q, p)``, a terminating ``_{12}V_{11}`` in ``t = (t0, ..., t4)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    t0, ps = _R_params(n, np.asarray(z, dtype=complex), [complex(x) for x in t], nome.q)
    return vwp_sum(t0, ps, nome, n)


def _R_with_mag(n, z, t, nome):
    t0, ps = _R_params(n, complex(z), [complex(x) for x in t], nome.q)
    terms = vwp_terms(t0, ps, nome, n)
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


def eval_T(n: int, z, t, nome: NomePair) -> complex:
    """Dual function ``T_n(z; q, p)`` (``R_n`` after ``t4 -> pq/A``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    t0, ps = _T_params(n, np.asarray(z, dtype=complex), [complex(x) for x in t], nome.q)
    return vwp_sum(t0, ps, nome, n)


def gamma_fn(z, xi, eta, p):
    """``gamma(z) = theta(z xi, z/xi; p) / theta(z eta, z/eta; p)``."""
    return theta_prod([z * xi, z / xi], p) / theta_prod([z * eta, z / eta], p)


def equal_gamma_point(z, w0, xi, eta, p, tol: float = 1e-14, max_iter: int = 60):
    """Solve ``gamma(w) = gamma(z)`` for ``w`` by Newton iteration started at ``w0``.

    The difference of the two theta products is used so that the equation
    stays holomorphic in ``w``.  Raises ``RuntimeError`` without convergence.
    """
    z, w = complex(z), complex(w0)

    def f(x):
        a = theta_prod([x * xi, x / xi], p) * theta_prod([z * eta, z / eta], p)
        b = theta_prod([z * xi, z / xi], p) * theta_prod([x * eta, x / eta], p)
        return a - b

    for _ in range(max_iter):
        fw = f(w)
        h = 1e-7 * max(abs(w), 1.0)
        df = (f(w + h) - f(w - h)) / (2 * h)
        if df == 0:
            break
        step = fw / df
        w -= step
        if abs(step) <= tol * abs(w):
            return w
    raise RuntimeError("Newton iteration for an equal-gamma point did not converge")


def recurrence_terms(n: int, z, t, xi, eta, nome: NomePair):
    """The three terms of the recurrence for ``R_n`` at ``(n, z)`` and their magnitudes.

    Magnitudes use the absolute term sums of each ``R``, since the series
    can cancel well below the size of its terms.
    """
    p, q = nome.p, nome.q
    t0, t1, t2, t3, t4 = (complex(x) for x in t)
    A = t0 * t1 * t2 * t3 * t4
    if abs(theta_prod([xi * eta, xi / eta], p)) < 1e-12:
        raise ValueError("degenerate gauge: xi = eta^(+-1) p^k")

    def rho(x):
        num = theta_prod(
            [x, t3 / (t4 * x), q * t3 / (t4 * x), q * x / (t0 * t1), q * x / (t0 * t2), q * x / (t1 * t2),
             q * q * eta * x / A, q * q * x / (A * eta)], p)
        return num / theta_prod([q * t4 * x * x / A, q * q * t4 * x * x / A], p)

    g = lambda x: gamma_fn(x, xi, eta, p)
    gz = g(z)
    alpha = lambda k: g(q**k / t4)
    beta = lambda k: g(q ** (k - 1) * A)
    delta = theta_prod([q * q * t3 / A, q / (t0 * t4), q / (t1 * t4), q / (t2 * t4), t3 * eta, t3 / eta], p)
    Rn, mn = _R_with_mag(n, z, t, nome)
    Rp, mp = _R_with_mag(n + 1, z, t, nome)
    Rm, mm = _R_with_mag(n - 1, z, t, nome) if n >= 1 else (0j, 0.0)
    ca = (gz - alpha(n + 1)) * rho(A * q ** (n - 1) / t4)
    # rho(q^-n) vanishes at n = 0 through theta(q^0); R_{-1} = 0 then drops out
    cb = (gz - beta(n - 1)) * rho(q ** (-n))
    cc = delta * (gz - g(t3))
    terms = [ca * (Rp - Rn), cb * (Rm - Rn), cc * Rn]
    mags = [abs(ca) * (mp + mn), abs(cb) * (mm + mn), abs(cc) * mn]
    return terms, mags


def check_recurrence_R(n: int, z, t, xi, eta, nome: NomePair, tol: float = 1e-10) -> VerificationReport:
    terms, mags = recurrence_terms(n, z, t, xi, eta, nome)
    return make_report("series.recurrence_R", sum(terms), 0j, terms=mags, tol=tol, meta={"n": n})


def Vmu(z, mu, t, nome: NomePair):
    p, q = nome.p, nome.q
    t0, t1, t2, t3, t4 = t
    A = t0 * t1 * t2 * t3 * t4
    v = theta_prod([p * q * mu * z / t4, p * q * q * z / (A * mu), t4 * z / q], p)
    v *= theta_prod([tr * z for tr in t], p)
    return v / theta_prod([z * z, q * z * z], p)


def kappa_mu(mu, t, nome: NomePair):
    p, q = nome.p, nome.q
    t0, t1, t2, t3, t4 = t
    A = t0 * t1 * t2 * t3 * t4
    return theta_prod([A * mu / (q * t4), 1 / mu], p) * theta_prod([tr * t4 / q for tr in t[:4]], p)


def dmu_terms(f, z, mu, t, nome: NomePair):
    """Terms of ``D_mu f(z) = V(z)(f(qz)-f(z)) + V(1/z)(f(z/q)-f(z)) + kappa f(z)``."""
    q = nome.q
    t = [complex(x) for x in t]
    f0 = f(z)
    a = Vmu(z, mu, t, nome) * (f(q * z) - f0)
    b = Vmu(1 / z, mu, t, nome) * (f(z / q) - f0)
    c = kappa_mu(mu, t, nome) * f0
    return a, b, c


def check_dmu_R(n: int, z, t, nome: NomePair, tol: float = 1e-9) -> VerificationReport:
    """``D_mu R_n = 0`` at ``mu = q^n``."""
    a, b, c = dmu_terms(lambda x: eval_R(n, x, t, nome), complex(z), nome.q**n, t, nome)
    return make_report("series.dmu_R", a + b + c, 0j, terms=[a, b, c], tol=tol, meta={"n": n})


# contiguous relations of the terminating 12V11 series


class _Val(complex):
    """A series value remembering the absolute sum of its terms."""

    mag: float

    def __new__(cls, value, mag):
        obj = super().__new__(cls, value)
        obj.mag = float(mag)
        return obj


def _E(t0, ts, nome, coef=1.0):
    """Series value; a non-terminating series is allowed only behind a zero coefficient."""
    hit = find_termination(ts, nome.q)
    if hit is None:
        if coef == 0:
            return _Val(0j, 0.0)
        raise UntestableError("shifted series does not terminate")
    terms = vwp_terms(t0, ts, nome, hit[1])
    return _Val(np.sum(terms), np.sum(np.abs(terms)))


def E_contiguous_terms(kind, t0, ts, nome: NomePair):
    """Terms of the first (``1``), second (``2``) or combined contiguous relation.

    ``ts = (t1, ..., t7)`` with ``t1...t7 = t0^3 q^2`` and one of them equal
    to ``q^{-n}``.  Returns the terms whose sum should vanish, together with
    their magnitudes measured by the absolute term sums of each series (the
    series themselves can cancel heavily).
    """
    p, q = nome.p, nome.q
    t0 = complex(t0)
    ts = [complex(x) for x in ts]
    t1_5, t6, t7 = ts[:5], ts[5], ts[6]
    th = lambda *a: theta_prod(a, p)
    prod_th = lambda xs: theta_prod(xs, p)
    if kind in (1, "1"):
        lead = th(q * t0, q * q * t0, q * t7 / t6, t6 * t7 / (q * t0)) / th(q * t0 / t6, q * q * t0 / t6, t0 / t7, t7 / (q * t0))
        coef = lead * prod_th(t1_5) / prod_th([q * t0 / tr for tr in t1_5])
        e0 = _E(t0, ts, nome)
        e1 = _E(t0, t1_5 + [t6 / q, q * t7], nome)
        e2 = _E(q * q * t0, [q * x for x in t1_5] + [t6, q * t7], nome, coef)
        return [e0, -e1, -coef * e2], [e0.mag, e1.mag, abs(coef) * e2.mag]
    if kind in (2, "2"):
        c1 = th(t7) * prod_th([tr * t6 / (q * t0) for tr in t1_5]) / th(t6 / (q * t0), t6 / (q * q * t0), t6 / t7)
        c2 = th(t6) * prod_th([tr * t7 / (q * t0) for tr in t1_5]) / th(t7 / (q * t0), t7 / (q * q * t0), t7 / t6)
        c3 = prod_th([q * t0 / tr for tr in t1_5]) / th(q * t0, q * q * t0)
        e1 = _E(q * q * t0, [q * x for x in t1_5] + [t6, q * t7], nome, c1)
        e2 = _E(q * q * t0, [q * x for x in t1_5] + [q * t6, t7], nome, c2)
        e0 = _E(t0, ts, nome, c3)
        return [c1 * e1, c2 * e2, -c3 * e0], [abs(c1) * e1.mag, abs(c2) * e2.mag, abs(c3) * e0.mag]
    if kind == "combined":
        e0 = _E(t0, ts, nome)
        ca = th(t6, t0 / t6, q * t0 / t6) / th(q * t6 / t7, t6 / t7) * prod_th([q * t0 / (t7 * tr) for tr in t1_5])
        cb = th(t7, t0 / t7, q * t0 / t7) / th(q * t7 / t6, t7 / t6) * prod_th([q * t0 / (t6 * tr) for tr in t1_5])
        cc = th(q * t0 / (t6 * t7)) * prod_th(t1_5)
        ea = _E(t0, t1_5 + [q * t6, t7 / q], nome, ca)
        eb = _E(t0, t1_5 + [t6 / q, q * t7], nome, cb)
        terms = [ca * ea, -ca * e0, cb * eb, -cb * e0, cc * e0]
        mags = [abs(ca) * ea.mag, abs(ca) * e0.mag, abs(cb) * eb.mag, abs(cb) * e0.mag, abs(cc) * e0.mag]
        return terms, mags
    raise ValueError(f"unknown relation kind {kind!r}")


def check_E_contiguous(kind, t0, ts, nome: NomePair, tol: float = 1e-10) -> VerificationReport:
    terms, mags = E_contiguous_terms(kind, t0, ts, nome)
    total = complex(sum(terms))
    return make_report(f"series.E_contiguous_{kind}", total, 0j, terms=mags, tol=tol)


def balanced_12v11(t0, ts6, q) -> list:
    """Complete six parameters to seven with ``t1...t7 = t0^3 q^2``; last one is solved."""
    ts6 = [complex(x) for x in ts6]
    return ts6 + [t0**3 * q * q / np.prod(ts6)]
