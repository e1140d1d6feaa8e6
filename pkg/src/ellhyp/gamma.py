"""Elliptic gamma functions.

``egamma`` is the standard elliptic gamma function as a truncated double
product, ``mod_egamma`` the modified version built from three periods, and
``hyperbolic_gamma`` the ratio of two q-products it degenerates to.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .qseries import DEFAULT_TAIL_EPS, NomePair, _as_complex, _unwrap, qpoch_inf, theta
from .report import PoleError, VerificationReport, make_report

POLE_TOL = 1e-10
# the log-series is only used when max(|z|, |pq/z|) is below this ratio
FAST_PATH_RATIO = 0.8
_CHUNK_ELEMS = 1 << 21
_DEDUPE_MIN = 2048


def _lattice(a: complex, b: complex, scale: float, tail_eps: float) -> np.ndarray:
    """Flattened ``a^j b^k`` with ``scale*|a^j b^k|`` above the truncation threshold."""
    aa, ab = abs(a), abs(b)
    thresh = tail_eps * (1 - aa) * (1 - ab) / max(scale, 1e-300)
    out = []
    aj = 1.0 + 0j
    j = 0
    while abs(aj) >= thresh:
        # k runs while |a^j b^k| >= thresh
        if ab == 0:
            kmax = 1
        else:
            kmax = int(math.floor(math.log(thresh / abs(aj)) / math.log(ab))) + 1 if abs(aj) >= thresh else 0
        out.append(aj * b ** np.arange(max(kmax, 1)))
        j += 1
        aj = a**j
        if aa == 0:
            break
    return np.concatenate(out)


def _egamma_product(z: np.ndarray, p: complex, q: complex, tail_eps: float) -> np.ndarray:
    if z.size == 0:
        return z.copy()
    zmax = float(np.max(np.abs(z)))
    izmax = float(np.max(1.0 / np.abs(z)))
    den = _lattice(p, q, zmax, tail_eps)
    num = p * q * _lattice(p, q, izmax * abs(p * q), tail_eps)
    flat = z.ravel()
    out = np.empty_like(flat)
    step = max(1, _CHUNK_ELEMS // max(len(den), len(num)))
    for s in range(0, flat.size, step):
        zc = flat[s : s + step, None]
        dfac = 1.0 - zc * den
        if np.min(np.abs(dfac)) < POLE_TOL:
            raise PoleError("elliptic gamma evaluated on its pole lattice")
        out[s : s + step] = np.prod(1.0 - num / zc, axis=1) / np.prod(dfac, axis=1)
    return out.reshape(z.shape)


def _egamma_logseries(z: np.ndarray, p: complex, q: complex, tail_eps: float) -> np.ndarray:
    pq = p * q
    ratio = float(np.max(np.maximum(np.abs(z), abs(pq) / np.abs(z))))
    nterms = int(math.ceil(math.log(tail_eps * (1 - ratio)) / math.log(ratio))) + 1
    n = np.arange(1, nterms + 1)
    coef = 1.0 / (n * (1 - p**n) * (1 - q**n))
    flat = z.ravel()
    out = np.empty_like(flat)
    step = max(1, _CHUNK_ELEMS // nterms)
    for s in range(0, flat.size, step):
        zc = flat[s : s + step, None]
        zn = np.cumprod(np.broadcast_to(zc, (zc.shape[0], nterms)), axis=1)
        wn = np.cumprod(np.broadcast_to(pq / zc, (zc.shape[0], nterms)), axis=1)
        out[s : s + step] = np.exp(np.sum((zn - wn) * coef, axis=1))
    return out.reshape(z.shape)


def egamma(z, p, q=None, tail_eps: float = DEFAULT_TAIL_EPS, fast: bool = True, dedupe: bool = True):
    """Standard elliptic gamma function ``Gamma(z; p, q)``.

    ``p`` may be a :class:`NomePair`, in which case ``q`` is taken from it.
    Points with ``max(|z|, |pq/z|) <= 0.8`` go through the logarithmic
    series; everything else uses the double product.  Large arrays are
    deduplicated (arguments equal to ~1e-13) before evaluation.
    """
    if isinstance(p, NomePair):
        tail_eps = p.tail_eps
        p, q = p.p, p.q
    p, q = complex(p), complex(q)
    if not (abs(p) < 1 and abs(q) < 1):
        raise ValueError("egamma needs |p|, |q| < 1")
    z = _as_complex(z)
    if np.any(z == 0):
        raise ValueError("egamma is undefined at z = 0")
    if dedupe and z.size > _DEDUPE_MIN:
        # tensor-grid kernels repeat arguments like z_i z_j many times over
        key = np.round(z.ravel() * 1e13)
        _, first, inverse = np.unique(key, return_index=True, return_inverse=True)
        vals = egamma(z.ravel()[first], p, q, tail_eps=tail_eps, fast=fast, dedupe=False)
        return _unwrap(np.asarray(vals).reshape(-1)[inverse.ravel()].reshape(z.shape))
    out = np.empty_like(z)
    if fast:
        pq = abs(p * q)
        az = np.abs(z)
        mask = np.maximum(az, pq / az) <= FAST_PATH_RATIO
    else:
        mask = np.zeros(z.shape, dtype=bool)
    if np.any(mask):
        out[mask] = _egamma_logseries(z[mask], p, q, tail_eps)
    rest = ~mask
    if np.any(rest):
        out[rest] = _egamma_product(z[rest], p, q, tail_eps)
    return _unwrap(out)


def egamma_prod(args, p, q=None, **kw):
    """``Gamma(a1, a2, ...; p, q)``."""
    out = 1.0 + 0j
    for a in args:
        out = out * egamma(a, p, q, **kw)
    return out


def egamma_pm(a, z, p, q=None):
    """``Gamma(a z^{+-1}) = Gamma(a z) Gamma(a / z)``."""
    return egamma(a * z, p, q) * egamma(a / z, p, q)


def egamma_symmetry_check(z, nome: NomePair) -> VerificationReport:
    a = egamma(z, nome.p, nome.q, fast=False)
    b = egamma(z, nome.q, nome.p, fast=False)
    return make_report("egamma.pq_symmetry", a, b, tol=1e-13)


@dataclass(frozen=True)
class PeriodTriple:
    """Quasi-periods ``(w1, w2, w3)`` and the six bases built from them."""

    omega1: complex
    omega2: complex
    omega3: complex
    q: complex = field(init=False)
    p: complex = field(init=False)
    r: complex = field(init=False)
    qt: complex = field(init=False)
    pt: complex = field(init=False)
    rt: complex = field(init=False)

    def __post_init__(self):
        w1, w2, w3 = complex(self.omega1), complex(self.omega2), complex(self.omega3)
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        object.__setattr__(self, "omega3", w3)
        for name, val in self._bases(w1, w2, w3).items():
            object.__setattr__(self, name, val)

    @staticmethod
    def _bases(w1, w2, w3):
        e = lambda x: cmath.exp(2j * cmath.pi * x)
        return {
            "q": e(w1 / w2),
            "p": e(w3 / w2),
            "r": e(w3 / w1),
            "qt": e(-w2 / w1),
            "pt": e(-w2 / w3),
            "rt": e(-w1 / w3),
        }

    @property
    def omegas(self):
        return (self.omega1, self.omega2, self.omega3)

    @property
    def total(self) -> complex:
        return self.omega1 + self.omega2 + self.omega3

    @property
    def standard(self) -> bool:
        return all(abs(getattr(self, k)) < 1 for k in ("q", "p", "r", "qt"))

    @property
    def unit_circle(self) -> bool:
        return abs(self.p) < 1 and abs(self.r) < 1 and abs(self.q) <= 1 + 1e-15 and abs(self.rt) < 1 and abs(self.pt) < 1

    def consistent(self, tol: float = 1e-15) -> bool:
        fresh = self._bases(*self.omegas)
        return all(abs(fresh[k] - getattr(self, k)) <= tol * max(1.0, abs(fresh[k])) for k in fresh)

    def permuted(self, i: int, j: int, k: int) -> "PeriodTriple":
        w = self.omegas
        return PeriodTriple(w[i], w[j], w[k])


def b22(u, w1, w2):
    """Second-order Bernoulli polynomial ``B_{2,2}(u; w1, w2)``."""
    u = _as_complex(u)
    return _unwrap(u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6 * w2) + w2 / (6 * w1) + 0.5)


def p_cubic(u, periods: PeriodTriple):
    """Cubic polynomial ``P(u)`` appearing in the modular form of ``G``."""
    w1, w2, w3 = periods.omegas
    x = _as_complex(u) - periods.total / 2
    return _unwrap(x * (x * x - (w1 * w1 + w2 * w2 + w3 * w3) / 4) / (3 * w1 * w2 * w3))


def mod_egamma(u, periods: PeriodTriple, representation: str = "auto"):
    """Modified elliptic gamma function ``G(u; w)``.

    ``representation`` selects ``"product"`` (two standard gammas, needs the
    standard regime), ``"modular"`` (one gamma with bases ``(rt, pt)``, valid
    also for ``|q| = 1``) or ``"auto"`` (product when available).
    """
    if representation == "auto":
        representation = "product" if periods.standard else "modular"
    u = _as_complex(u)
    w1, w2, w3 = periods.omegas
    if representation == "product":
        if not periods.standard:
            raise ValueError("product representation needs |p|, |q|, |r|, |qt| < 1")
        a = egamma(np.exp(2j * np.pi * u / w2), periods.p, periods.q)
        b = egamma(periods.r * np.exp(-2j * np.pi * u / w1), periods.r, periods.qt)
        return _unwrap(_as_complex(a * b))
    if representation == "modular":
        if not (abs(periods.rt) < 1 and abs(periods.pt) < 1):
            raise ValueError("modular representation needs |rt|, |pt| < 1")
        return _unwrap(
            _as_complex(np.exp(-1j * np.pi * p_cubic(u, periods)) * egamma(np.exp(-2j * np.pi * u / w3), periods.rt, periods.pt))
        )
    raise ValueError(f"unknown representation {representation!r}")


def hyperbolic_gamma(u, omega1, omega2, tail_eps: float = DEFAULT_TAIL_EPS):
    """``S(u; w1, w2) = (e^{2 pi i u/w2}; q)_inf / (e^{2 pi i u/w1} qt; qt)_inf``."""
    w1, w2 = complex(omega1), complex(omega2)
    q = cmath.exp(2j * cmath.pi * w1 / w2)
    qt = cmath.exp(-2j * cmath.pi * w2 / w1)
    if not (abs(q) < 1 and abs(qt) < 1):
        raise ValueError("hyperbolic gamma needs |q| < 1 and |qt| < 1 (Im(w1/w2) > 0)")
    u = _as_complex(u)
    num = qpoch_inf(np.exp(2j * np.pi * u / w2), q, tail_eps)
    den = qpoch_inf(np.exp(2j * np.pi * u / w1) * qt, qt, tail_eps)
    return _unwrap(_as_complex(num / den))
