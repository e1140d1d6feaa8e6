"""Univariate elliptic beta integrals and the function ``V(t)``.

Every check here compares a contour quadrature against a closed form (or
against another quadrature) and returns a :class:`VerificationReport`.
Integrals over the unit circle are normalised so that
``kappa * \\oint f(z) dz/z = (q;q)(p;p)/2 * mean(f)``.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .gamma import PeriodTriple, egamma, egamma_prod, hyperbolic_gamma, mod_egamma
from .qseries import NomePair, qpoch_inf, theta, theta_prod
from .quadrature import ContourSpec, QuadratureError, integrate_circle, integrate_segment, residue_correction
from .report import UntestableError, VerificationReport, make_report, untestable_report

POLE_MARGIN = 0.02
BALANCE_TOL = 1e-12


def _prod(xs):
    out = 1.0 + 0j
    for x in xs:
        out *= x
    return out


def _check_margin(t, margin=POLE_MARGIN):
    bad = [abs(x) for x in t if abs(x) >= 1 - margin]
    if bad:
        raise UntestableError(f"parameter modulus {max(bad):.4f} too close to (or beyond) the unit circle")


@dataclass(frozen=True)
class BetaParams:
    """Six parameters with ``t1...t6 = pq``."""

    t: tuple
    nome: NomePair

    def __post_init__(self):
        t = tuple(complex(x) for x in self.t)
        if len(t) != 6:
            raise ValueError("need six parameters")
        pq = self.nome.p * self.nome.q
        if abs(_prod(t) - pq) > BALANCE_TOL * abs(pq):
            raise ValueError("balancing t1...t6 = pq violated")
        object.__setattr__(self, "t", t)

    @classmethod
    def from_free(cls, t5, nome: NomePair) -> "BetaParams":
        """Solve the sixth parameter from the balancing condition."""
        t5 = [complex(x) for x in t5]
        return cls(tuple(t5) + (nome.p * nome.q / _prod(t5),), nome)


@dataclass(frozen=True)
class VParams:
    """Eight parameters with ``t1...t8 = p^2 q^2``."""

    t: tuple
    nome: NomePair

    def __post_init__(self):
        t = tuple(complex(x) for x in self.t)
        if len(t) != 8:
            raise ValueError("need eight parameters")
        pq2 = (self.nome.p * self.nome.q) ** 2
        if abs(_prod(t) - pq2) > BALANCE_TOL * abs(pq2):
            raise ValueError("balancing t1...t8 = p^2 q^2 violated")
        object.__setattr__(self, "t", t)

    @classmethod
    def from_free(cls, t7, nome: NomePair) -> "VParams":
        t7 = [complex(x) for x in t7]
        return cls(tuple(t7) + ((nome.p * nome.q) ** 2 / _prod(t7),), nome)

    @property
    def standard(self) -> bool:
        return all(abs(x) < 1 for x in self.t)

    def replace(self, **shifts) -> "VParams":
        """Copy with ``t<k>=value`` overrides (1-based), skipping re-validation of balance."""
        t = list(self.t)
        for key, val in shifts.items():
            t[int(key[1:]) - 1] = complex(val)
        return VParams(tuple(t), self.nome)


def inv_gamma_z2(z, nome: NomePair):
    """``1 / (Gamma(z^2) Gamma(z^-2)) = theta(z^-2; p) theta(z^2; q)``."""
    z2 = z * z
    return theta(1 / z2, nome.p) * theta(z2, nome.q)


def beta_integrand(t, nome: NomePair):
    """``z -> prod Gamma(t_k z^{+-}) / Gamma(z^{+-2})`` as a vectorised closure."""
    t = [complex(x) for x in t]
    p, q = nome.p, nome.q

    def f(z):
        v = inv_gamma_z2(z, nome)
        for tk in t:
            v = v * egamma(tk * z, p, q) * egamma(tk / z, p, q)
        return v

    return f


def circle_integral(t, nome: NomePair, spec: ContourSpec | None = None):
    """``kappa * \\oint prod Gamma(t z^{+-}) / Gamma(z^{+-2}) dz/z`` on the unit circle.

    Returns ``(value, err_est)``.
    """
    spec = spec or ContourSpec(nodes=32)
    _check_margin(t)
    mean, err = integrate_circle(beta_integrand(t, nome), spec)
    c = qpoch_inf(nome.q, nome.q) * qpoch_inf(nome.p, nome.p) / 2
    return complex(c * mean), float(abs(c) * err) if not math.isnan(err) else err


def beta_rhs(t, nome: NomePair) -> complex:
    return complex(_prod(egamma(a * b, nome.p, nome.q) for a, b in itertools.combinations(t, 2)))


def elliptic_beta_check(params: BetaParams, spec: ContourSpec | None = None, tol: float = 1e-9) -> VerificationReport:
    """Quadrature of the standard elliptic beta integral against its product evaluation."""
    try:
        lhs, err = circle_integral(params.t, params.nome, spec)
    except UntestableError as exc:
        return untestable_report("beta.elliptic", str(exc), tol)
    rhs = beta_rhs(params.t, params.nome)
    return make_report("beta.elliptic", lhs, rhs, tol=tol, meta={"err_est": err})


def rahman_check(t, q, spec: ContourSpec | None = None, tol: float = 1e-10) -> VerificationReport:
    """The ``p -> 0`` limit: Rahman's q-beta integral with five parameters."""
    t = [complex(x) for x in t]
    if len(t) != 5:
        raise ValueError("need five parameters")
    _check_margin(t)
    A = _prod(t)
    qp = lambda x: qpoch_inf(x, q)

    def f(z):
        v = qp(z * z) * qp(1 / (z * z)) * qp(A * z) * qp(A / z)
        for tm in t:
            v = v / (qp(tm * z) * qp(tm / z))
        return v

    mean, err = integrate_circle(f, spec or ContourSpec(nodes=32))
    lhs = qpoch_inf(q, q) / 2 * mean
    rhs = _prod(qp(A / tm) for tm in t) / _prod(qp(a * b) for a, b in itertools.combinations(t, 2))
    return make_report("beta.rahman", lhs, rhs, tol=tol)


def askey_wilson_check(t, q, spec: ContourSpec | None = None, tol: float = 1e-10) -> VerificationReport:
    """The Askey-Wilson integral with four parameters."""
    t = [complex(x) for x in t]
    if len(t) != 4:
        raise ValueError("need four parameters")
    _check_margin(t)
    qp = lambda x: qpoch_inf(x, q)

    def f(z):
        v = qp(z * z) * qp(1 / (z * z))
        for tm in t:
            v = v / (qp(tm * z) * qp(tm / z))
        return v

    mean, err = integrate_circle(f, spec or ContourSpec(nodes=32))
    lhs = qpoch_inf(q, q) / 2 * mean
    rhs = qp(_prod(t)) / _prod(qp(a * b) for a, b in itertools.combinations(t, 2))
    return make_report("beta.askey_wilson", lhs, rhs, tol=tol)


def qpoch_ratio(omega1, omega2) -> complex:
    """``(q;q)_inf / (qt;qt)_inf`` continued analytically through the eta modular law.

    Finite for real ``omega1/omega2`` (``|q| = 1``), where both products diverge.
    """
    tau = complex(omega1) / complex(omega2)
    e = lambda x: cmath.exp(2j * cmath.pi * x)
    return e(-tau / 24 - 1 / (24 * tau)) / cmath.sqrt(-1j * tau)


def modified_beta_check(g, periods: PeriodTriple, spec: ContourSpec | None = None, tol: float = 1e-8) -> VerificationReport:
    """Segment quadrature of the modified elliptic beta integral against its product side."""
    g = [complex(x) for x in g]
    if len(g) != 6:
        raise ValueError("need six parameters")
    w1, w2, w3 = periods.omegas
    if abs(sum(g) - periods.total) > 1e-12 * max(1.0, abs(periods.total)):
        raise ValueError("constraint sum(g) = w1 + w2 + w3 violated")
    if any((x / w3).imag >= 0 for x in g):
        raise UntestableError("need Im(g_j / w3) < 0 for every j")
    if not ((w3 / w1).imag > 0 and (w3 / w2).imag > 0 and (w1 / w2).imag >= -1e-15):
        raise UntestableError("period triple outside the admissible regime")
    G = lambda u: mod_egamma(u, periods)

    def f(u):
        v = 1 / (G(2 * u) * G(-2 * u))
        for gj in g:
            v = v * G(gj + u) * G(gj - u)
        return v / w2

    spec = spec or ContourSpec(kind="segment", a=-w3 / 2, b=w3 / 2, nodes=32, target_rel=1e-13)
    integral, err = integrate_segment(f, spec)
    kt = -qpoch_inf(periods.p, periods.p) * qpoch_inf(periods.r, periods.r) / 2 * qpoch_ratio(w1, w2)
    lhs = kt * integral
    rhs = _prod(G(a + b) for a, b in itertools.combinations(g, 2))
    return make_report("beta.modified", lhs, rhs, tol=tol, meta={"unit_q": abs(abs(periods.q) - 1) < 1e-12})


def mellin_barnes_check(g, omega1, omega2, T_cut: float = 4.0, tol: float = 1e-5) -> VerificationReport:
    """Hyperbolic limit: the integral over the line ``i w2 R`` truncated at ``|x| <= T_cut``.

    The tail beyond the cut is estimated from the exponential decay of the
    integrand between ``T_cut/2`` and ``T_cut``; the verdict is
    ``inconclusive`` when that estimate exceeds the tolerance (or the
    integrand overflows) and the residual does not already pass.
    """
    g = [complex(x) for x in g]
    w1, w2 = complex(omega1), complex(omega2)
    if len(g) != 5:
        raise ValueError("need five parameters")
    A = sum(g)
    if any((x / w2).real <= 0 for x in g):
        raise ValueError("need Re(g_j / w2) > 0")
    if not ((A - w1) / w2).real < 1:
        raise ValueError("need Re((A - w1) / w2) < 1")
    S = lambda u: hyperbolic_gamma(u, w1, w2)

    def f(x):
        u = 1j * w2 * np.asarray(x)
        v = S(2 * u) * S(-2 * u) * S(A + u) * S(A - u)
        for gj in g:
            v = v / (S(gj + u) * S(gj - u))
        return 1j * v

    q = cmath.exp(2j * cmath.pi * w1 / w2)
    qt = cmath.exp(-2j * cmath.pi * w2 / w1)
    rhs = -2 * qpoch_inf(qt, qt) / qpoch_inf(q, q)
    rhs *= _prod(S(A - x) for x in g) / _prod(S(a + b) for a, b in itertools.combinations(g, 2))
    meta = {"T_cut": T_cut}
    with np.errstate(all="ignore"):
        try:
            lhs, err = integrate_segment(f, a=-T_cut, b=T_cut, nodes=64, target_rel=1e-12)
        except QuadratureError as exc:
            meta["reason"] = str(exc)
            return make_report("beta.mellin_barnes", complex(math.nan, math.nan), rhs, tol=tol, meta=meta, verdict="inconclusive")
        ends = np.abs(f(np.array([-T_cut, T_cut, -T_cut / 2, T_cut / 2])))
    if np.all(np.isfinite(ends)) and ends[2] > 0 and ends[3] > 0:
        rate = math.log(max(ends[2], ends[3]) / max(ends[0], ends[1], 1e-300)) / (T_cut / 2)
        tail = (ends[0] + ends[1]) / max(rate, 1e-3)
    else:
        tail = math.inf
    meta["tail_estimate"] = float(tail)
    rep = make_report("beta.mellin_barnes", lhs, rhs, tol=tol, meta=meta)
    if rep.verdict == "fail" and tail / max(abs(rhs), 1e-300) > tol:
        rep.verdict = "inconclusive"
    return rep


# the function V(t) and its transformations


def eval_Vfn(params: VParams, spec: ContourSpec | None = None) -> complex:
    """``V(t)`` by unit-circle quadrature (all ``|t_j| < 1``)."""
    if not params.standard:
        raise UntestableError("V(t) on the unit circle needs all |t_j| < 1")
    return circle_integral(params.t, params.nome, spec)[0]


def _G(nome, *args):
    return complex(egamma_prod(args, nome.p, nome.q))


def check_V_reduction(params: VParams, spec=None, tol: float = 1e-9) -> VerificationReport:
    """``V`` at ``t7 t8 = pq`` equals the elliptic beta product over ``t1..t6``."""
    t, nome = params.t, params.nome
    if abs(t[6] * t[7] - nome.p * nome.q) > 1e-12:
        raise ValueError("need t7 t8 = pq")
    lhs = eval_Vfn(params, spec)
    return make_report("beta.V_reduction", lhs, beta_rhs(t[:6], nome), tol=tol)


def _branch_try(id, candidates, tol, meta):
    """Run ``(label, thunk)`` candidates; keep the first pass, else the best residual."""
    reps = []
    for label, thunk in candidates:
        try:
            rep = thunk()
        except UntestableError as exc:
            reps.append(untestable_report(id, str(exc), tol, {"branch": label}))
            continue
        rep.meta["branch"] = label
        reps.append(rep)
        if rep.passed:
            break
    tested = [r for r in reps if r.verdict != "untestable"]
    if not tested:
        out = reps[0]
    else:
        out = next((r for r in tested if r.passed), min(tested, key=lambda r: r.rel_residual))
    out.meta.update(meta)
    return out


def check_E7_transform(kind: str, params: VParams, spec=None, tol: float = 1e-8) -> VerificationReport:
    """Transformation (i), (ii) or (iii) of ``V``, prefactors as displayed.

    Square roots use the principal branch first and then the opposite one;
    the branch that was used is recorded in ``meta["branch"]``.  A
    transformed point leaving the unit disc yields an ``untestable`` report.
    """
    t, nome = list(params.t), params.nome
    p, q = nome.p, nome.q
    id = f"beta.E7_{kind}"
    lhs_cache = {}

    def lhs():
        if "v" not in lhs_cache:
            lhs_cache["v"] = eval_Vfn(params, spec)
        return lhs_cache["v"]

    def run(s, pref):
        sp = VParams(tuple(s), nome)
        if not sp.standard:
            raise UntestableError("transformed parameters leave the unit disc")
        a = lhs()
        b = pref * eval_Vfn(sp, spec)
        return make_report(id, a, b, tol=tol)

    if kind == "i":
        eps0 = cmath.sqrt(t[0] * t[1] * t[2] * t[3] / (p * q))
        pref = _prod(_G(nome, t[j] * t[k], t[j + 4] * t[k + 4]) for j, k in itertools.combinations(range(4), 2))
        cands = []
        for label, e in (("principal", eps0), ("opposite", -eps0)):
            s = [x / e for x in t[:4]] + [x * e for x in t[4:]]
            cands.append((label, lambda s=s: run(s, pref)))
        return _branch_try(id, cands, tol, {"epsilon": eps0})
    if kind == "ii":
        rT, rU = cmath.sqrt(_prod(t[:4])), cmath.sqrt(_prod(t[4:]))
        pref = _prod(_G(nome, t[j] * t[k + 4]) for j in range(4) for k in range(4))
        cands = []
        # mixed branches break balancing, so the two square roots flip together
        for label, sg in (("principal", 1), ("opposite", -1)):
            s = [sg * rT / x for x in t[:4]] + [sg * rU / x for x in t[4:]]
            cands.append((label, lambda s=s: run(s, pref)))
        return _branch_try(id, cands, tol, {})
    if kind == "iii":
        r = cmath.sqrt(p * q)
        pref = _prod(_G(nome, a * b) for a, b in itertools.combinations(t, 2))
        cands = []
        for label, sg in (("principal", 1), ("opposite", -1)):
            s = [sg * r / x for x in t]
            cands.append((label, lambda s=s: run(s, pref)))
        return _branch_try(id, cands, tol, {})
    raise ValueError(f"unknown transformation {kind!r}")


def E7_fixed_point_prefactor(t, nome: NomePair) -> complex:
    """Prefactor of transformation (i); equals 1 when ``t1 t2 t3 t4 = pq``."""
    return _prod(_G(nome, t[j] * t[k], t[j + 4] * t[k + 4]) for j, k in itertools.combinations(range(4), 2))


def _shift(t, **kw):
    t = list(t)
    for key, val in kw.items():
        t[int(key[1:]) - 1] = val
    return tuple(t)


def V_contiguous_terms(kind: int, params: VParams, spec=None):
    """Terms ``[L1, -L2, -R]`` of the first or second contiguous relation for ``V``."""
    t, nome = params.t, params.nome
    p, q = nome.p, nome.q
    t6, t7, t8 = t[5], t[6], t[7]
    th = lambda *a: theta_prod(a, p)
    V = lambda tt: eval_Vfn(VParams(tt, nome), spec)
    if kind == 1:
        a = t7 * th(t8 * t7 / q, t8 / (q * t7))
        b = t6 * th(t8 * t6 / q, t8 / (q * t6))
        c = t7 * th(t6 * t7, t6 / t7)
        va = V(_shift(t, t6=q * t6, t8=t8 / q)) if a != 0 else 0j
        vb = V(_shift(t, t7=q * t7, t8=t8 / q)) if b != 0 else 0j
        v0 = V(t) if c != 0 else 0j
        return [a * va, -b * vb, -c * v0]
    if kind == 2:
        P6 = _prod(th(t6 * tk / q) for tk in t[:5])
        P7 = _prod(th(t7 * tk / q) for tk in t[:5])
        P8 = _prod(th(t8 * tk) for tk in t[:5])
        a = t6 * th(t7 / (q * t8)) * P6
        b = t7 * th(t6 / (q * t8)) * P7
        c = t6 * th(t7 / t6) * P8
        va = V(_shift(t, t6=t6 / q, t8=q * t8)) if a != 0 else 0j
        vb = V(_shift(t, t7=t7 / q, t8=q * t8)) if b != 0 else 0j
        v0 = V(t) if c != 0 else 0j
        return [a * va, -b * vb, -c * v0]
    raise ValueError(f"unknown relation kind {kind!r}")


def check_V_contiguous(kind: int, params: VParams, spec=None, tol: float = 1e-8) -> VerificationReport:
    try:
        terms = V_contiguous_terms(kind, params, spec)
    except UntestableError as exc:
        return untestable_report(f"beta.V_contiguous_{kind}", str(exc), tol)
    return make_report(f"beta.V_contiguous_{kind}", sum(terms), 0j, terms=terms, tol=tol)


def eval_U(t, nome: NomePair, spec=None) -> complex:
    """``U(t) = V(t) / prod_{k<=7} Gamma(t_k t8, t_k / t8)``."""
    t = tuple(complex(x) for x in t)
    d = _prod(_G(nome, tk * t[7], tk / t[7]) for tk in t[:7])
    return eval_Vfn(VParams(t, nome), spec) / d


def ehe_terms(a, ts, z, nome: NomePair, spec=None):
    """The three terms of the elliptic hypergeometric equation applied to ``U``."""
    p, q = nome.p, nome.q
    a, z = complex(a), complex(z)
    ts = [complex(x) for x in ts]
    if len(ts) != 5:
        raise ValueError("need five parameters t1..t5")
    t8 = (p * q) ** 2 / (a * a * _prod(ts))
    th = lambda *x: theta_prod(x, p)
    for zz in (z, q * z, z / q):
        if not all(abs(x) < 1 - POLE_MARGIN for x in ts + [a * zz, a / zz, t8]):
            raise UntestableError("a shifted point leaves the unit disc")
    f = lambda zz: eval_U(ts + [a * zz, a / zz, t8], nome, spec)
    f0, fq, fm = f(z), f(q * z), f(z / q)
    c1 = th(a * z / (q * t8), a * t8 * z, t8 / (a * z)) / th(z * z, 1 / (q * z * z))
    c1 *= _prod(th(a * tk / (q * z)) for tk in ts)
    c2 = th(a / (q * t8 * z), a * t8 / z, t8 * z / a) / th(1 / (z * z), z * z / q)
    c2 *= _prod(th(a * tk * z / q) for tk in ts)
    c3 = th(a * a / q) * _prod(th(tk * t8) for tk in ts)
    return [c1 * (fq - f0), c2 * (fm - f0), c3 * f0]


def check_ehe(a, ts, z, nome: NomePair, spec=None, tol: float = 1e-7) -> VerificationReport:
    try:
        terms = ehe_terms(a, ts, z, nome, spec)
    except UntestableError as exc:
        return untestable_report("beta.ehe", str(exc), tol)
    return make_report("beta.ehe", sum(terms), 0j, terms=terms, tol=tol)


def residue_identity_check(t, nome: NomePair, spec=None, tol: float = 1e-8) -> VerificationReport:
    """Product side vs unit-circle integral plus the residues of the crossed poles.

    ``t`` holds ``t1..t5``; ``t5`` may sit outside the unit circle with
    ``|p t5| < 1``.  The sixth parameter is ``pq / (t1...t5)``.
    """
    t = [complex(x) for x in t]
    if len(t) != 5:
        raise ValueError("need five parameters")
    p, q = nome.p, nome.q
    A = _prod(t)
    if not all(abs(x) < 1 for x in t[:4]):
        raise ValueError("need |t_m| < 1 for m <= 4")
    if not abs(p * t[4]) < 1:
        raise ValueError("need |p t5| < 1")
    if not abs(p * q) < abs(A):
        raise ValueError("need |pq| < |A|")
    t6 = p * q / A
    full = t + [t6]
    ledger = residue_correction(t, nome)
    # the kernel on the unit circle is the same; only t5 may exceed the margin
    _check_margin(t[:4] + [t6])
    if abs(abs(t[4]) - 1) < POLE_MARGIN:
        raise UntestableError("t5 too close to the unit circle")
    mean, err = integrate_circle(beta_integrand(full, nome), spec or ContourSpec(nodes=32))
    integral = qpoch_inf(q, q) * qpoch_inf(p, p) / 2 * mean
    lhs = integral + ledger.total
    rhs = beta_rhs(full, nome)
    meta = {"crossed": list(ledger.included_n)}
    return make_report("beta.residue", lhs, rhs, terms=[integral, ledger.total, rhs], tol=tol, meta=meta)


def balanced_moduli(rng, n: int, target: float, lo: float, hi: float, max_tries: int = 10000) -> np.ndarray:
    """``n`` moduli in ``[lo, hi]`` with product ``target``.

    Log-moduli are drawn uniformly in the largest window symmetric about
    ``log(target)/n`` that fits inside ``[log lo, log hi]``, then projected
    onto the balancing hyperplane; draws leaving the window are rejected.
    """
    c = math.log(target) / n
    w = min(c - math.log(lo), math.log(hi) - c)
    if w <= 0:
        raise ValueError(f"no balanced point with moduli in [{lo}, {hi}]")
    for _ in range(max_tries):
        d = rng.uniform(-w, w, n)
        d -= d.mean()
        if np.all(np.abs(d) < w):
            return np.exp(c + d)
    raise RuntimeError("no admissible parameter point found")


def _balanced_point(rng, n, target: complex, lo, hi, caps=None):
    """Balanced complex point; ``caps`` maps indices to tighter upper moduli."""
    caps = dict(caps or {})
    mods = np.empty(n)
    for i, cap in caps.items():
        if cap <= lo:
            raise ValueError(f"cap {cap} is below the lower modulus bound {lo}")
        mods[i] = math.exp(rng.uniform(math.log(lo), math.log(min(cap, hi))))
    free = [i for i in range(n) if i not in caps]
    rest = abs(target) / np.prod(mods[list(caps)]) if caps else abs(target)
    mods[free] = balanced_moduli(rng, len(free), rest, lo, hi)
    phases = rng.uniform(-math.pi, math.pi, n)
    phases[-1] = cmath.phase(target) - phases[:-1].sum()
    return mods * np.exp(1j * phases)


def sample_vparams(rng, nome: NomePair, lo: float = 0.2, hi: float = 0.75, accept=None, caps=None,
                   max_tries: int = 10000) -> VParams:
    """A random balanced point with moduli in ``[lo, hi]``, filtered by ``accept``.

    ``caps`` maps 0-based indices to smaller upper bounds on the modulus,
    e.g. ``{7: 0.9 * abs(q)}`` so that ``t8 / q`` stays inside the disc.
    """
    pq2 = (nome.p * nome.q) ** 2
    for cap in (caps or {}).values():
        if cap <= lo:
            raise ValueError(f"cap {cap} is below the lower modulus bound {lo}")
    for _ in range(max_tries):
        try:
            t = _balanced_point(rng, 8, pq2, lo, hi, caps)
        except ValueError:
            continue
        vp = VParams.from_free(t[:7], nome)
        if accept is None or accept(vp):
            return vp
    raise RuntimeError("no admissible parameter point found")


def sample_beta_params(rng, nome: NomePair, lo: float = 0.2, hi: float = 0.8) -> BetaParams:
    t = _balanced_point(rng, 6, nome.p * nome.q, lo, hi)
    return BetaParams.from_free(t[:5], nome)


def sample_ehe_point(rng, nome: NomePair, lo: float = 0.2, hi: float = 0.85):
    """Random ``(a, (t1..t5), z)`` with ``|z| = 1`` keeping ``a z^{+-1} q^{+-1}`` inside the disc.

    ``|a|`` is bounded below so that the remaining six moduli can balance
    with a centre safely below ``hi``.
    """
    q = abs(nome.q)
    a_min = max(lo, abs(nome.p * nome.q) / (0.97 * hi) ** 3)
    if a_min >= 0.9 * q:
        raise ValueError("no admissible point: |pq| too large for the requested window")
    a = math.exp(rng.uniform(math.log(a_min), math.log(0.9 * q))) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
    t = _balanced_point(rng, 6, (nome.p * nome.q) ** 2 / (a * a), lo, hi)
    z = cmath.exp(1j * rng.uniform(0.2, math.pi - 0.2))
    return a, [complex(x) for x in t[:5]], z
