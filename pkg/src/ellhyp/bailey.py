"""Integral Bailey pairs, the two Bailey lemmas and the n = 1 Fourier-Bailey inversions.

Pairs are stored as vectorised closures; a derived ``beta`` (or a lemma
output) is itself a quadrature, so checks built on lemma outputs are
nested quadratures.  All circle integrals use the mean normalisation,
so ``kappa \\int ... dz/z`` becomes ``(p;p)(q;q)/2`` times a mean.

For the inversions the forward cycle ``D`` is realised as the unit circle
plus small loops: counter-clockwise around the inner pole sequence points
lying outside the circle and clockwise around outer sequence points
inside it.  :func:`pole_census` lists those points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beta import inv_gamma_z2
from .gamma import egamma
from .qseries import NomePair, qpoch_inf
from .quadrature import ContourSpec, QuadratureError, integrate_circle_vec
from .report import UntestableError, VerificationReport, make_report, untestable_report

INNER = ContourSpec(nodes=32, target_rel=1e-13, max_nodes=1024)
OUTER = ContourSpec(nodes=32, target_rel=1e-12, max_nodes=512)
DEFAULT_SAMPLES = (np.exp(0.7j), np.exp(1.9j), np.exp(-2.6j))


def _kappa(nome: NomePair) -> complex:
    return qpoch_inf(nome.p, nome.p) * qpoch_inf(nome.q, nome.q) / 2


def _G(nome, x):
    return egamma(x, nome.p, nome.q)


def _Gpm(nome, a, z):
    """``Gamma(a z^{+-})``."""
    return _G(nome, a * z) * _G(nome, a / z)


def bailey_kernel(t, w, z, nome: NomePair):
    """``Gamma(t w^{+-} z^{+-})``."""
    return _Gpm(nome, t * w, z) * _Gpm(nome, t / w, z)


def _flat(fn):
    """Lift a closure on 1-d arrays to arbitrary shapes and scalars."""

    def g(x, *args):
        arr = np.asarray(x, dtype=complex)
        out = np.asarray(fn(arr.ravel(), *args), dtype=complex).reshape(arr.shape)
        return complex(out) if out.ndim == 0 else out

    return g


@dataclass
class BaileyPair:
    """``beta(w, t) = kappa \\int Gamma(t w^{+-} z^{+-}) alpha(z, t) dz/z``.

    ``alpha`` and ``beta`` take ``(array, t)``.  With ``verify=True`` the
    relation is checked on :data:`DEFAULT_SAMPLES` and a ``ValueError`` is
    raised if it fails by more than ``1e-9``.
    """

    alpha: object
    beta: object
    t: complex
    nome: NomePair
    verify: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.t = complex(self.t)
        if self.verify:
            rep = pair_check(self, tol=1e-9)
            if not rep.passed:
                raise ValueError(f"not a Bailey pair: {rep}")

    @classmethod
    def from_alpha(cls, alpha, t, nome: NomePair, spec: ContourSpec | None = None) -> "BaileyPair":
        return cls(alpha, derive_beta(alpha, t, nome, spec), t, nome)


def derive_beta(alpha, t, nome: NomePair, spec: ContourSpec | None = None):
    """``beta`` as a quadrature closure of the defining relation."""
    t = complex(t)
    if not abs(t) < 1:
        raise UntestableError("need |t| < 1 for the unit circle to separate the kernel poles")
    spec = spec or INNER
    k = _kappa(nome)

    def beta(w, tt=None):
        f = lambda z: bailey_kernel(t, w[None, :], z, nome) * alpha(z, t)
        val, _ = integrate_circle_vec(f, spec)
        return k * val

    return _flat(beta)


def pair_check(pair: BaileyPair, ws=DEFAULT_SAMPLES, spec=None, tol: float = 1e-7, id: str = "bailey.pair") -> VerificationReport:
    """Defining relation of ``pair`` at the sample points ``ws``."""
    ws = np.asarray(ws, dtype=complex)
    try:
        lhs = np.atleast_1d(pair.beta(ws, pair.t))
        rhs = np.atleast_1d(derive_beta(pair.alpha, pair.t, pair.nome, spec)(ws))
    except (UntestableError, QuadratureError) as exc:
        return untestable_report(id, str(exc), tol)
    i = int(np.argmax(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs))))
    err = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs))
    return make_report(id, lhs[i], rhs[i], tol=tol, meta={"samples": len(ws), "max_rel": float(err.max())})


def unit_alpha(z, t):
    return np.ones_like(np.asarray(z, dtype=complex))


def seed_pair(params, t, nome: NomePair) -> BaileyPair:
    """Closed-form pair from the elliptic beta integral.

    ``alpha = prod Gamma(t_j z^{+-}) / Gamma(z^{+-2})`` for four parameters
    with ``t^2 t_1 t_2 t_3 t_4 = pq``; ``beta`` is the product evaluation.
    """
    ts = [complex(x) for x in params]
    t = complex(t)
    if len(ts) != 4:
        raise ValueError("need four parameters")
    if abs(t * t * np.prod(ts) - nome.p * nome.q) > 1e-12 * abs(nome.p * nome.q):
        raise ValueError("need t^2 t1 t2 t3 t4 = pq")

    def alpha(z, tt=None):
        out = inv_gamma_z2(z, nome)
        for a in ts:
            out = out * _Gpm(nome, a, z)
        return out

    const = _G(nome, t * t)
    for i in range(4):
        for j in range(i + 1, 4):
            const = const * _G(nome, ts[i] * ts[j])

    def beta(w, tt=None):
        out = const
        for a in ts:
            out = out * _Gpm(nome, t * a, w)
        return out

    return BaileyPair(alpha, beta, t, nome)


def _need(cond, msg):
    if not cond:
        raise UntestableError(msg)


def lemma1_step(pair: BaileyPair, s, u, spec: ContourSpec | None = None) -> BaileyPair:
    """First lemma: a new pair with respect to ``s t``."""
    nome, t = pair.nome, pair.t
    s, u = complex(s), complex(u)
    pq = nome.p * nome.q
    _need(max(abs(s), abs(u), abs(t), abs(s * t), abs(t * u)) < 1, "parameters must lie in the unit disc")
    _need(abs(pq) < abs(t * t * s * s * u), "need |pq| < |t^2 s^2 u|")
    _need(abs(pq) < abs(t * s * s * u), "need |pq| < |t s^2 u|")
    spec = spec or OUTER
    k = _kappa(nome)
    pref = k * _G(nome, t * t * s * s) / (_G(nome, s * s) * _G(nome, t * t))

    def alpha(w, tt=None):
        return _Gpm(nome, t * u, w) / _Gpm(nome, t * s * s * u, w) * pair.alpha(w, t)

    def beta(w, tt=None):
        def f(x):
            b = pair.beta(x[:, 0], t)[:, None]
            ker = _Gpm(nome, s * w[None, :], x) * _Gpm(nome, s / w[None, :], x)
            ker = ker * _Gpm(nome, u, x) * inv_gamma_z2(x, nome) / _Gpm(nome, t * t * s * s * u, x)
            return ker * b

        val, _ = integrate_circle_vec(f, spec)
        return pref * _Gpm(nome, t * t * s * u, w) / _Gpm(nome, s * u, w) * val

    return BaileyPair(_flat(alpha), _flat(beta), s * t, nome)


def lemma2_step(pair: BaileyPair, s, u, spec: ContourSpec | None = None) -> BaileyPair:
    """Second lemma: from a pair with respect to ``s t`` to one with respect to ``t``."""
    nome = pair.nome
    s, u = complex(s), complex(u)
    t = pair.t / s
    pq = nome.p * nome.q
    _need(max(abs(s), abs(t), abs(t * u), abs(t * t * s * u)) < 1, "parameters must lie in the unit disc")
    _need(abs(pq) < abs(s * u), "need |pq| < |s u|")
    _need(abs(pq) < abs(t * s * s * u), "need |pq| < |t s^2 u|")
    spec = spec or OUTER
    k = _kappa(nome)
    pref = k * _G(nome, s * s * t * t) / (_G(nome, s * s) * _G(nome, t * t))

    def alpha(w, tt=None):
        def f(x):
            a = pair.alpha(x[:, 0], pair.t)[:, None]
            ker = _Gpm(nome, t * t * s * u, x) * _Gpm(nome, s * w[None, :], x) * _Gpm(nome, s / w[None, :], x)
            return ker / _Gpm(nome, s * u, x) * a

        val, _ = integrate_circle_vec(f, spec)
        return pref * _Gpm(nome, u, w) * inv_gamma_z2(w, nome) / _Gpm(nome, t * t * s * s * u, w) * val

    def beta(w, tt=None):
        return _Gpm(nome, t * u, w) / _Gpm(nome, t * s * s * u, w) * pair.beta(w, pair.t)

    return BaileyPair(_flat(alpha), _flat(beta), t, nome)


# Fourier-Bailey transforms at n = 1


@dataclass
class PoleCensus:
    """Kernel poles of the forward transform on the wrong side of the unit circle.

    ``enclose`` are inner-sequence points with modulus > 1 that the cycle
    must wrap; ``exclude`` are outer-sequence points inside the circle.
    Entries are ``(label, i, j)`` meaning ``t^{-1} w^{+-} p^i q^j`` or
    ``t w^{+-} p^{-i} q^{-j}``.
    """

    enclose: list
    exclude: list
    min_gap: float

    def as_dict(self):
        return {"enclose": [list(x) for x in self.enclose], "exclude": [list(x) for x in self.exclude],
                "min_gap": self.min_gap}


def pole_census(t, nome: NomePair, depth: int = 12) -> PoleCensus:
    """Crossed poles of ``Gamma(t^{-1} w^{+-} z^{+-})`` for ``|w| = 1`` (moduli do not depend on ``w``)."""
    t = complex(t)
    p, q = abs(nome.p), abs(nome.q)
    enc, exc, gaps = [], [], []
    for i in range(depth):
        for j in range(depth):
            r_in = p**i * q**j / abs(t)
            r_out = abs(t) / (p**i * q**j)
            gaps += [abs(r_in - 1), abs(r_out - 1)]
            if r_in > 1:
                enc.append(("inner", i, j))
            if r_out < 1:
                exc.append(("outer", i, j))
    return PoleCensus(enc, exc, float(min(gaps)))


def _loop_points(t, w, nome, census):
    """Centres of the loops for one ``w``: ``(+1 list, -1 list, all other singular points)``."""
    p, q = nome.p, nome.q
    plus = [wv / t * p**i * q**j for (_, i, j) in census.enclose for wv in (w, 1 / w)]
    minus = [t * wv / (p**i * q**j) for (_, i, j) in census.exclude for wv in (w, 1 / w)]
    others = []
    for i in range(4):
        for j in range(4):
            for wv in (w, 1 / w):
                a, b = wv / t * p**i * q**j, t * wv / (p**i * q**j)
                if ("inner", i, j) not in census.enclose:
                    others.append(a)
                if ("outer", i, j) not in census.exclude:
                    others.append(b)
    return plus, minus, others


def _clusters(points, sign, blockers, eps_cap=0.1):
    """Group same-sign points into loops ``(centre, radius, sign)`` avoiding ``blockers``."""
    loops = []
    pts = list(points)
    while pts:
        group = [pts.pop(0)]
        changed = True
        while changed:
            changed = False
            for x in list(pts):
                if min(abs(x - g) for g in group) < 2 * eps_cap:
                    group.append(x)
                    pts.remove(x)
                    changed = True
        c = sum(group) / len(group)
        spread = max(abs(g - c) for g in group)
        gap = min((abs(b - c) for b in blockers), default=1.0)
        r = spread + min(eps_cap, 0.4 * (gap - spread))
        if not r > spread or gap - r < 1e-3:
            raise UntestableError("crossed poles too close to other singularities for a small loop")
        loops.append((c, r, sign))
    return loops


def _cycle_integral(F, t, w, nome, census, spec=None):
    """``(1/2 pi i) \\int_D F(z) dz/z`` for the cycle ``D`` built from the census."""
    spec = spec or INNER
    base, _ = integrate_circle_vec(lambda z: F(z), spec)
    total = base[0]
    plus, minus, others = _loop_points(t, w, nome, census)
    loops = _clusters(plus, 1, minus + others) + _clusters(minus, -1, plus + others)
    for c, r, sign in loops:
        ls = ContourSpec(nodes=32, radius=r, target_rel=1e-13, max_nodes=1024)
        val, _ = integrate_circle_vec(lambda z: F(z), ls, center=c)
        total += sign * val[0]
    return total, len(loops)


def _forward_kernel(t, w, z, nome, kind):
    ti = 1 / t
    k = bailey_kernel(ti, w, z, nome) * inv_gamma_z2(z, nome)
    if kind == "AA":
        return k / _G(nome, ti * ti)
    return k / (_G(nome, t * t) * _G(nome, ti * ti))


def _inverse_kernel(t, w, x, nome, kind):
    k = bailey_kernel(t, x, w, nome) * inv_gamma_z2(w, nome)
    return k / _G(nome, t * t) if kind == "AA" else k


def forward_transform(f, t, nome: NomePair, ws, kind: str = "AA", census: PoleCensus | None = None):
    """``f_hat(w)`` at the points ``ws`` (all on the unit circle) for the (A,A) or (A,C) transform."""
    t = complex(t)
    census = census or pole_census(t, nome)
    k = _kappa(nome)
    out = []
    for w in np.atleast_1d(np.asarray(ws, dtype=complex)):
        F = lambda z, w=w: _forward_kernel(t, w, z, nome, kind) * f(z)
        val, _ = _cycle_integral(F, t, w, nome, census)
        out.append(k * val)
    return np.array(out)


def inverse_transform(fhat_on, t, nome: NomePair, xs, kind: str = "AA", spec: ContourSpec | None = None):
    """``f(x) = kappa \\int_T K(w, x; t) f_hat(w) dw/w``; ``fhat_on`` maps an array of ``w`` to values."""
    t = complex(t)
    xs = np.atleast_1d(np.asarray(xs, dtype=complex))

    def F(w):
        vals = np.asarray(fhat_on(w[:, 0]))[:, None]
        return _inverse_kernel(t, w, xs[None, :], nome, kind) * vals

    val, _ = integrate_circle_vec(F, spec or ContourSpec(nodes=32, target_rel=1e-11, max_nodes=512))
    return _kappa(nome) * val


def _inversion_check(kind, test_f, t, nome, xs, tol):
    id = f"bailey.inversion_{kind}"
    t = complex(t)
    census = pole_census(t, nome)
    meta = {"census": census.as_dict(), "cycle": "unit circle plus loops"}
    if not abs(t) < 1:
        return make_report(id, math.nan, math.nan, tol=tol, verdict="inconclusive",
                           meta={**meta, "reason": "the inverse over the unit circle needs |t| < 1"})
    if census.min_gap < 1e-3:
        return make_report(id, math.nan, math.nan, tol=tol, verdict="inconclusive",
                           meta={**meta, "reason": "a pole ring sits on the unit circle"})
    xs = np.asarray(xs, dtype=complex)
    try:
        back = inverse_transform(lambda w: forward_transform(test_f, t, nome, w, kind, census), t, nome, xs, kind)
    except (UntestableError, QuadratureError) as exc:
        return make_report(id, math.nan, math.nan, tol=tol, verdict="inconclusive", meta={**meta, "reason": str(exc)})
    orig = np.asarray(test_f(xs), dtype=complex) * np.ones(len(xs))
    err = np.abs(back - orig)
    i = int(np.argmax(err))
    return make_report(id, back[i], orig[i], terms=[back[i], orig[i], 1e-300], tol=tol,
                       meta={**meta, "max_abs": float(err.max())})


def inversion_check_AA(test_f, t, nome: NomePair, xs=DEFAULT_SAMPLES, tol: float = 1e-6) -> VerificationReport:
    """Round trip of the (A,A) transform at ``n = 1``: forward with ``t^{-1}``, inverse with ``t``."""
    return _inversion_check("AA", test_f, t, nome, xs, tol)


def inversion_check_AC(test_f, t, nome: NomePair, xs=DEFAULT_SAMPLES, tol: float = 1e-6) -> VerificationReport:
    """Round trip of the (A,C) transform at ``n = 1``."""
    return _inversion_check("AC", test_f, t, nome, xs, tol)


def corollary_check(params, t, nome: NomePair, ws=DEFAULT_SAMPLES, tol: float = 1e-7) -> VerificationReport:
    """Forward (A,C) transform of the closed-form ``f_A`` against ``prod Gamma(t_j w^{+-})``.

    ``f_hat(w) = prod_{j<=4} Gamma(t_j w^{+-})`` makes the inverse integrand
    the six-parameter beta kernel with ``t x^{+-}`` completing the set, so
    ``f_A`` is a product; the forward transform must return ``f_hat``.
    """
    ts = [complex(x) for x in params]
    t = complex(t)
    if abs(t * t * np.prod(ts) - nome.p * nome.q) > 1e-12 * abs(nome.p * nome.q):
        raise ValueError("need t^2 t1 t2 t3 t4 = pq")
    const = _G(nome, t * t)
    for i in range(4):
        for j in range(i + 1, 4):
            const = const * _G(nome, ts[i] * ts[j])

    def fA(z):
        out = const
        for a in ts:
            out = out * _Gpm(nome, t * a, z)
        return out

    ws = np.asarray(ws, dtype=complex)
    try:
        got = forward_transform(fA, t, nome, ws, "AC")
    except UntestableError as exc:
        return untestable_report("bailey.corollary_AC", str(exc), tol)
    want = np.ones(len(ws), dtype=complex)
    for a in ts:
        want = want * _Gpm(nome, a, ws)
    err = np.abs(got - want) / np.abs(want)
    i = int(np.argmax(err))
    return make_report("bailey.corollary_AC", got[i], want[i], tol=tol, meta={"census": pole_census(t, nome).as_dict()})


def seed_lemma1_vparams(params, t, s, u, w, nome: NomePair):
    """V-function parameters of the integral in ``beta'(w)`` for the seed pair.

    The first lemma on :func:`seed_pair` equates two V-functions; this
    returns the eight parameters ``(s w, s/w, u, t t_1..t t_4, pq/(t^2 s^2 u))``
    of the left side, whose product is ``p^2 q^2``.
    """
    from .beta import VParams

    t, s, u, w = (complex(x) for x in (t, s, u, w))
    pq = nome.p * nome.q
    vals = [s * w, s / w, u] + [t * complex(a) for a in params] + [pq / (t * t * s * s * u)]
    return VParams(tuple(vals), nome)
