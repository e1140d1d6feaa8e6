"""Infinite q-products, theta functions and elliptic Pochhammer symbols.

All functions accept scalars or numpy arrays for the "point" argument and
broadcast over it; bases are always scalars.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .report import VerificationReport, make_report

DEFAULT_TAIL_EPS = 1e-16


def _as_complex(x):
    arr = np.asarray(x, dtype=complex)
    return arr


def _unwrap(arr):
    return arr[()] if arr.ndim == 0 else arr


def truncation_order(base_abs: float, scale: float = 1.0, tail_eps: float = DEFAULT_TAIL_EPS) -> int:
    """Smallest N with ``scale * base_abs**N / (1 - base_abs) < tail_eps``."""
    if base_abs == 0.0:
        return 1
    if base_abs >= 1.0:
        raise ValueError(f"|base| = {base_abs} must be < 1")
    scale = max(scale, 1e-300)
    target = tail_eps * (1.0 - base_abs) / scale
    if target >= 1.0:
        return 1
    return max(1, int(math.ceil(math.log(target) / math.log(base_abs))))


@dataclass(frozen=True)
class NomePair:
    """A pair of bases ``(p, q)`` with ``|p|, |q| < 1`` and the product truncation target."""

    p: complex
    q: complex
    tail_eps: float = DEFAULT_TAIL_EPS
    order_p: int = field(init=False)
    order_q: int = field(init=False)

    def __post_init__(self):
        p, q = complex(self.p), complex(self.q)
        if not (abs(p) < 1 and abs(q) < 1):
            raise ValueError(f"bases must lie inside the unit disc, got p={p}, q={q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "order_p", truncation_order(abs(p), 1.0, self.tail_eps))
        object.__setattr__(self, "order_q", truncation_order(abs(q), 1.0, self.tail_eps))

    def swapped(self) -> "NomePair":
        return NomePair(self.q, self.p, self.tail_eps)


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    argument: complex
    nome: complex


def qpoch_inf(t, q, tail_eps: float = DEFAULT_TAIL_EPS):
    """Infinite product ``(t; q)_inf = prod_{n>=0} (1 - t q^n)``."""
    q = complex(q)
    aq = abs(q)
    if aq >= 1:
        raise ValueError(f"|q| = {aq} must be < 1")
    t = _as_complex(t)
    if aq == 0:
        return _unwrap(1.0 - t)
    tmax = float(np.max(np.abs(t))) if t.size else 0.0
    n = truncation_order(aq, max(tmax, 1e-300), tail_eps)
    powers = q ** np.arange(n)
    out = np.prod(1.0 - t[..., None] * powers, axis=-1)
    return _unwrap(out)


def theta(z, p, tail_eps: float = DEFAULT_TAIL_EPS):
    """Theta function ``theta(z; p) = (z; p)_inf (p/z; p)_inf``."""
    z = _as_complex(z)
    if np.any(z == 0):
        raise ValueError("theta is undefined at z = 0")
    return _unwrap(_as_complex(qpoch_inf(z, p, tail_eps) * qpoch_inf(p / z, p, tail_eps)))


def theta_prod(args, p, tail_eps: float = DEFAULT_TAIL_EPS):
    """``theta(a1, a2, ...; p)`` as a product over ``args``."""
    out = 1.0 + 0j
    for a in args:
        out = out * theta(a, p, tail_eps)
    return out


def theta_value(z, p) -> ThetaValue:
    return ThetaValue(complex(theta(z, p)), complex(z), complex(p))


def theta1_jacobi(u, tau, sigma=None, tail_eps: float = DEFAULT_TAIL_EPS):
    """Jacobi ``theta_1(sigma*u | tau)`` through the product form.

    With ``p = exp(2 pi i tau)`` and ``q = exp(2 pi i sigma)`` this is
    ``i p^(1/8) q^(-u/2) (p; p)_inf theta(q^u; p)``.  ``sigma`` defaults to 1,
    giving the usual ``theta_1(u | tau)`` in the normalisation where the
    period in ``u`` is 1.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"Im(tau) must be positive, got tau={tau}")
    sigma = 1.0 if sigma is None else complex(sigma)
    u = _as_complex(u)
    p = np.exp(2j * np.pi * tau)
    p8 = np.exp(2j * np.pi * tau / 8)
    qu = np.exp(2j * np.pi * sigma * u)
    qmhalf = np.exp(-1j * np.pi * sigma * u)
    return _unwrap(1j * p8 * qmhalf * qpoch_inf(p, p, tail_eps) * theta(qu, p, tail_eps))


def theta1_series(u, tau, sigma=None, kmax: int | None = None):
    """Bilateral series for ``theta_1(sigma*u | tau)``; used as an oracle."""
    tau = complex(tau)
    sigma = 1.0 if sigma is None else complex(sigma)
    u = _as_complex(u)
    if kmax is None:
        # exp(-pi Im(tau) (2k+1)^2 / 4) decays fast; 40 terms is plenty for Im(tau) >= 0.05
        kmax = 40
    k = np.arange(-kmax, kmax + 1)
    signs = (-1.0) ** k
    pw = np.exp(2j * np.pi * tau * (2 * k + 1) ** 2 / 8)
    qw = np.exp(2j * np.pi * sigma * (k[None, :] + 0.5) * u.reshape(-1, 1))
    s = -1j * np.sum(signs * pw * qw, axis=-1)
    return _unwrap(s.reshape(u.shape))


def epoch(t, n: int, nome: NomePair):
    """Elliptic Pochhammer symbol ``(t)_n = prod_{j<n} theta(t q^j; p)``."""
    if n < 0:
        raise ValueError("negative n is not supported")
    t = _as_complex(t)
    out = np.ones_like(t)
    for j in range(n):
        out = out * theta(t * nome.q**j, nome.p, nome.tail_eps)
    return _unwrap(out)


def epoch_prod(args, n: int, nome: NomePair):
    """``(a1, a2, ...)_n``."""
    out = 1.0 + 0j
    for a in args:
        out = out * epoch(a, n, nome)
    return out


def check_addition_formula(w, x, y, z, p) -> VerificationReport:
    """Residual of the three-term addition formula for theta functions."""
    for v in (w, x, y, z):
        if v == 0:
            raise ValueError("arguments must be nonzero")
    t1 = theta_prod([x * w, x / w, y * z, y / z], p)
    t2 = theta_prod([x * z, x / z, y * w, y / w], p)
    t3 = (y / w) * theta_prod([x * y, x / y, w * z, w / z], p)
    return make_report("theta.addition", t1 - t2, t3, terms=[t1, t2, t3], tol=1e-13)


def _sort_key(c):
    c = complex(c)
    return (round(c.real, 10), round(c.imag, 10))


@dataclass(frozen=True)
class RatioClass:
    balanced: bool
    well_poised: bool
    very_well_poised: bool
    elliptic_residual: float


def _ratio_h(z, t, w, p):
    num = 1.0 + 0j
    for tj, wj in zip(t, w):
        num *= theta(tj * z, p) / theta(wj * z, p)
    return num


def classify_ratio(t, w, p, samples=None, tol: float = 1e-12) -> RatioClass:
    """Classify ``h(z) = prod theta(t_j z; p) / theta(w_j z; p)``.

    Returns the balancing / well-poisedness / very-well-poisedness flags and
    the largest relative residual ``|h(pz) - h(z)| / |h(z)|`` on the sample
    points (default: three fixed points on the unit circle).
    """
    t = [complex(x) for x in t]
    w = [complex(x) for x in w]
    if len(t) != len(w):
        raise ValueError("parameter lists must have equal length")
    pt, pw = np.prod(t), np.prod(w)
    balanced = abs(pt - pw) <= tol * max(abs(pt), abs(pw), 1e-300)

    inv = sorted((1 / x for x in t), key=_sort_key)
    ws = sorted(w, key=_sort_key)
    well_poised = all(abs(a - b) <= tol * max(1.0, abs(a)) for a, b in zip(inv, ws))

    # the very-well-poised quadruple q*sqrt(t0), -q*sqrt(t0), q*sqrt(t0/p), -q*sqrt(p*t0)
    # closing the list, checked up to the sign of the square roots
    very = False
    if len(t) >= 5:
        a, b, c, d = t[-4:]
        close = lambda x, y: abs(x - y) <= 1e-10 * max(1.0, abs(x), abs(y))
        very = close(b, -a) and close(c * c * p, a * a) and close(d * d, p * a * a) and close(c * d, -a * a)

    if samples is None:
        samples = np.exp(1j * np.array([0.3, 1.7, 4.1]))
    res = 0.0
    for z in samples:
        h0 = _ratio_h(z, t, w, p)
        h1 = _ratio_h(p * z, t, w, p)
        res = max(res, abs(h1 - h0) / max(abs(h0), 1e-300))
    return RatioClass(bool(balanced), bool(well_poised), bool(very), float(res))


def total_ellipticity_residual(z, t0, ts, p) -> float:
    """Shift residual of ``h(z, t) = prod_{j=0}^{r} theta(t_j z)/theta(t0 z/t_j)``.

    ``ts`` holds ``t_1 .. t_{2k+1}`` with ``prod ts = t0**k``.  Compares
    ``h`` before and after ``t0 -> p t0``, ``t_{2k+1} -> p^k t_{2k+1}``.
    """
    ts = [complex(x) for x in ts]
    k = (len(ts) - 1) // 2

    def h(t0_, ts_):
        out = theta(t0_ * z, p) / theta(z, p)
        for tj in ts_:
            out *= theta(tj * z, p) / theta(t0_ / tj * z, p)
        return out

    a = h(t0, ts)
    b = h(p * t0, ts[:-1] + [p**k * ts[-1]])
    return float(abs(a - b) / max(abs(a), 1e-300))
