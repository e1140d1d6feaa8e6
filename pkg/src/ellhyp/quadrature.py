"""Contour quadrature on circles, segments and the 2-torus, plus residue bookkeeping.

Circle integrals are normalised as ``(1/2 pi i) \\oint f(z) dz/z``, i.e. the
mean of ``f`` over the contour.  The trapezoid rule is spectrally accurate
for integrands analytic in an annulus around the circle; the error estimate
returned is the difference between the last two node counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gamma import egamma
from .qseries import NomePair, epoch, theta

# node angles are offset by this many radians so that z = +-1, +-i (where
# kernels like 1/Gamma(z^{+-2}) have removable singularities) are never hit
ANGLE_OFFSET = 1.0 / math.pi


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of nodes; ``best`` holds the last estimate."""

    def __init__(self, msg, best=None, err=None):
        super().__init__(msg)
        self.best = best
        self.err = err


@dataclass(frozen=True)
class ContourSpec:
    kind: str = "circle"
    radius: float = 1.0
    a: complex = -1.0
    b: complex = 1.0
    nodes: int = 64
    adaptive: bool = True
    target_rel: float = 1e-14
    max_nodes: int = 1 << 14

    def __post_init__(self):
        if self.kind not in ("circle", "segment", "torus2"):
            raise ValueError(f"unknown contour kind {self.kind!r}")
        n = self.nodes
        if n < 16 or n & (n - 1):
            raise ValueError("nodes must be a power of two >= 16")


def circle_nodes(n: int, radius: float = 1.0) -> np.ndarray:
    return radius * np.exp(1j * (ANGLE_OFFSET + 2 * np.pi * np.arange(n) / n))


def _converged(new, old, scale, target):
    return abs(new - old) <= target * max(abs(new), scale)


def integrate_circle(f, spec: ContourSpec | None = None, **kw):
    """Mean of ``f`` over the circle ``|z| = radius``.

    Returns ``(value, err_est)``.  In adaptive mode the node count doubles
    (reusing previous nodes) until two successive estimates agree to
    ``target_rel`` relative to ``max(|value|, mean |f|)``.
    """
    spec = spec or ContourSpec(**kw)
    n = spec.nodes
    vals = np.asarray(f(circle_nodes(n, spec.radius)), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand is not finite at the nodes")
    est = np.sum(vals) / n
    if not spec.adaptive:
        return complex(est), math.nan
    while True:
        if 2 * n > spec.max_nodes:
            raise QuadratureError(f"no convergence with {n} nodes", complex(est), math.nan)
        # the new nodes sit halfway between the old ones
        mids = spec.radius * np.exp(1j * (ANGLE_OFFSET + 2 * np.pi * (np.arange(n) + 0.5) / n))
        new = np.asarray(f(mids), dtype=complex)
        if not np.all(np.isfinite(new)):
            raise QuadratureError("integrand is not finite at the nodes")
        allv = np.empty(2 * n, dtype=complex)
        allv[0::2] = vals
        allv[1::2] = new
        vals, n = allv, 2 * n
        new_est = np.sum(vals) / n
        err = abs(new_est - est)
        scale = float(np.mean(np.abs(vals)))
        done = _converged(new_est, est, scale, spec.target_rel)
        est = new_est
        if done:
            return complex(est), float(err)


def integrate_circle_vec(f, spec: ContourSpec | None = None, center: complex = 0.0, **kw):
    """Mean over ``|z - center| = radius`` of an array-valued ``f``.

    ``f`` receives nodes of shape ``(n, 1)`` and returns ``(n, m)``; the
    result has shape ``(m,)``.  The ``dz/z`` measure is taken about the
    origin, so for ``center != 0`` the mean of ``f(z) (z - c)/z`` is
    returned, i.e. ``(1/2 pi i) \oint f(z) dz/z``.  Convergence is judged
    on the worst component.
    """
    spec = spec or ContourSpec(**kw)
    c = complex(center)

    def ev(u):
        z = (c + u)[:, None]
        v = np.asarray(f(z), dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        if c != 0:
            v = v * (u / (c + u))[:, None]
        if not np.all(np.isfinite(v)):
            raise QuadratureError("integrand is not finite at the nodes")
        return v

    n = spec.nodes
    vals = ev(circle_nodes(n, spec.radius))
    est = vals.mean(axis=0)
    if not spec.adaptive:
        return est, math.nan
    while True:
        if 2 * n > spec.max_nodes:
            raise QuadratureError(f"no convergence with {n} nodes", est, math.nan)
        mids = spec.radius * np.exp(1j * (ANGLE_OFFSET + 2 * np.pi * (np.arange(n) + 0.5) / n))
        new = ev(mids)
        vals = np.concatenate([vals, new])
        n *= 2
        new_est = vals.mean(axis=0)
        err = float(np.max(np.abs(new_est - est)))
        scale = max(float(np.max(np.abs(new_est))), float(np.mean(np.abs(vals))))
        done = err <= spec.target_rel * scale
        est = new_est
        if done:
            return est, err


def integrate_segment(f, spec: ContourSpec | None = None, **kw):
    """``\\int_a^b f(u) du`` along the straight segment by Gauss-Legendre.

    The order doubles in adaptive mode until successive values agree.
    Returns ``(value, err_est)``.
    """
    spec = spec or ContourSpec(kind="segment", **kw)
    a, b = complex(spec.a), complex(spec.b)
    half, mid = (b - a) / 2, (a + b) / 2

    def rule(n):
        x, w = np.polynomial.legendre.leggauss(n)
        vals = np.asarray(f(mid + half * x), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("integrand is not finite at the nodes")
        return half * np.sum(w * vals), float(np.sum(w * np.abs(vals)) * abs(half))

    n = spec.nodes
    est, _ = rule(n)
    if not spec.adaptive:
        return complex(est), math.nan
    cap = min(spec.max_nodes, 4096)
    while True:
        if 2 * n > cap:
            raise QuadratureError(f"no convergence with Gauss-Legendre order {n}", complex(est), math.nan)
        n *= 2
        new, scale = rule(n)
        err = abs(new - est)
        done = _converged(new, est, scale, spec.target_rel)
        est = new
        if done:
            return complex(est), float(err)


def integrate_torus2(f, spec: ContourSpec | None = None, **kw):
    """Mean of ``f(z1, z2)`` over the unit 2-torus (tensor trapezoid rule).

    ``f`` receives two broadcastable arrays.  Node counts are doubled on
    both axes together, capped at 512 per axis by default.
    """
    spec = spec or ContourSpec(kind="torus2", **kw)
    cap = min(spec.max_nodes, 512)

    def rule(n):
        z = circle_nodes(n, spec.radius)
        vals = np.asarray(f(z[:, None], z[None, :]), dtype=complex)
        vals = np.broadcast_to(vals, (n, n))
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("integrand is not finite at the nodes")
        return np.sum(vals) / (n * n), float(np.mean(np.abs(vals)))

    n = spec.nodes
    est, _ = rule(n)
    if not spec.adaptive:
        return complex(est), math.nan
    while True:
        if 2 * n > cap:
            raise QuadratureError(f"no convergence with {n}^2 nodes", complex(est), math.nan)
        n *= 2
        new, scale = rule(n)
        err = abs(new - est)
        done = _converged(new, est, scale, spec.target_rel)
        est = new
        if done:
            return complex(est), float(err)


@dataclass
class ResidueLedger:
    c0: complex
    terms: list = field(default_factory=list)
    included_n: list = field(default_factory=list)

    @property
    def total(self) -> complex:
        return self.c0 * complex(sum(self.terms)) if self.terms else 0j


def residue_correction(t, nome: NomePair, n_max: int = 64) -> ResidueLedger:
    """Residues picked up when ``t5`` (the last of five parameters) leaves the unit disc.

    Terms are collected for every ``n >= 0`` with ``|t5 q^n| > 1``.  The
    kernel is the five-parameter elliptic beta integrand with the sixth
    parameter eliminated through ``A = t1...t5``.
    """
    t1, t2, t3, t4, t5 = (complex(x) for x in t)
    p, q = nome.p, nome.q
    A = t1 * t2 * t3 * t4 * t5
    ns = [n for n in range(n_max) if abs(t5 * q**n) > 1]
    if not ns:
        return ResidueLedger(0j, [], [])
    if not abs(p * t5) < 1:
        raise ValueError("residue formula needs |p t5| < 1")
    c0 = 1.0 + 0j
    for tm in (t1, t2, t3, t4):
        c0 *= egamma(tm * t5, p, q) * egamma(tm / t5, p, q)
    c0 /= egamma(1 / t5**2, p, q) * egamma(A * t5, p, q) * egamma(A / t5, p, q)
    t0 = q / A
    ts = [t0, t1, t2, t3, t4, t5]
    terms = []
    for n in ns:
        v = q**n * theta(t5**2 * q ** (2 * n), p) / theta(t5**2, p)
        for tm in ts:
            v *= epoch(tm * t5, n, nome) / epoch(q * t5 / tm, n, nome)
        terms.append(complex(v))
    return ResidueLedger(complex(c0), terms, ns)
