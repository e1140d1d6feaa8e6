"""Multiple elliptic beta integrals on the root systems C_n and A_n, n = 1, 2.

Kernels are vectorised over the quadrature grid.  For the A_n families the
last variable is eliminated through ``z_1 ... z_{n+1} = 1`` so that the
integral runs over ``n`` free torus variables.  Factors of the form
``1 / Gamma(x, 1/x)`` are written as ``theta(1/x; p) theta(x; q)``, which is
finite on the diagonal ``z_i = z_j`` of a tensor grid.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .gamma import egamma
from .qseries import NomePair, qpoch_inf, theta, theta_prod
from .quadrature import ContourSpec, integrate_circle, integrate_torus2
from .report import UntestableError, VerificationReport, make_report, untestable_report

FAMILIES = ("C_I", "C_II", "A_I1", "A_I2", "A_II1", "A_II2")
CONSTRAINT_TOL = 1e-12


def _prod(xs):
    out = 1.0 + 0j
    for x in xs:
        out = out * x
    return out


@dataclass(frozen=True)
class RootSystemParams:
    """Parameters of one multiple beta integral.

    ``t`` and ``s`` are the parameter lists of the family; ``tc`` and
    ``sc`` are the coupling parameters ``t`` and ``s`` of the type II
    integrals.  Use :meth:`build` to solve the constrained parameter.
    """

    family: str
    n: int
    nome: NomePair
    t: tuple = ()
    s: tuple = ()
    tc: complex | None = None
    sc: complex | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n not in (1, 2):
            raise ValueError("only n = 1 and n = 2 are supported")
        object.__setattr__(self, "t", tuple(complex(x) for x in self.t))
        object.__setattr__(self, "s", tuple(complex(x) for x in self.s))
        counts = _COUNTS[self.family](self.n)
        if (len(self.t), len(self.s)) != counts:
            raise ValueError(f"{self.family} at n={self.n} needs (len t, len s) = {counts}")
        lhs, rhs = self.constraint()
        if rhs is not None and abs(lhs - rhs) > CONSTRAINT_TOL * abs(rhs):
            raise ValueError(f"{self.family} balancing condition violated")

    def constraint(self):
        """``(value, target)`` of the balancing condition (``target`` None if there is none)."""
        pq = self.nome.p * self.nome.q
        n, t, s = self.n, self.t, self.s
        f = self.family
        if f == "C_I":
            return _prod(t), pq
        if f == "C_II":
            return self.tc ** (2 * n - 2) * _prod(t), pq
        if f == "A_I1":
            return _prod(s) * _prod(t), pq
        if f == "A_I2":
            return None, None
        if f == "A_II1":
            return self.tc ** (n - 1) * _prod(t) * _prod(s), pq
        return (self.tc * self.sc) ** (n - 1) * _prod(t) * _prod(s), pq

    @classmethod
    def build(cls, family, n, nome, t=(), s=(), tc=None, sc=None):
        """Construct with the last entry of ``s`` (or of ``t`` for C_I, C_II) solved from balancing."""
        t, s = [complex(x) for x in t], [complex(x) for x in s]
        pq = nome.p * nome.q
        if family == "C_I":
            t.append(pq / _prod(t))
        elif family == "C_II":
            t.append(pq / (tc ** (2 * n - 2) * _prod(t)))
        elif family == "A_I1":
            s.append(pq / (_prod(s) * _prod(t)))
        elif family == "A_II1":
            s.append(pq / (tc ** (n - 1) * _prod(t) * _prod(s)))
        elif family == "A_II2":
            s.append(pq / ((tc * sc) ** (n - 1) * _prod(t) * _prod(s)))
        return cls(family, n, nome, tuple(t), tuple(s), tc, sc)


_COUNTS = {
    "C_I": lambda n: (2 * n + 4, 0),
    "C_II": lambda n: (6, 0),
    "A_I1": lambda n: (n + 2, n + 2),
    "A_I2": lambda n: (n, n + 3),
    "A_II1": lambda n: (n + 1, 4),
    "A_II2": lambda n: (3, 3),
}


def pole_margin_ok(params: RootSystemParams, margin: float = 0.0) -> bool:
    """Parameter conditions that keep every inner pole sequence inside the torus."""
    bound = 1 - margin
    pq = abs(params.nome.p * params.nome.q)
    mods = [abs(x) for x in params.t + params.s]
    mods += [abs(x) for x in (params.tc, params.sc) if x is not None]
    if not all(m < bound for m in mods):
        return False
    if params.family == "A_I2":
        S = _prod(params.s)
        return all(pq < abs(tk * S) for tk in params.t)
    return True


# kernels


def _inv_gamma_pair(x, nome):
    """``1 / (Gamma(x) Gamma(1/x))``."""
    return theta(1 / x, nome.p) * theta(x, nome.q)


def _G(x, nome):
    return egamma(x, nome.p, nome.q)


def _pm_product(params_list, z, nome):
    out = 1.0
    for a in params_list:
        out = out * _G(a * z, nome) * _G(a / z, nome)
    return out


def _variables(params, z):
    """Full variable list; for the A families the last one is fixed by the product constraint."""
    if params.family.startswith("A"):
        return list(z) + [1 / _prod(z)]
    return list(z)


def kernel(params: RootSystemParams):
    """Vectorised integrand of the family (without the ``kappa`` normalisation)."""
    nome, fam = params.nome, params.family
    t, s, tc, sc = params.t, params.s, params.tc, params.sc

    def c_kernel(*z):
        out = 1.0
        for zj in z:
            out = out * _pm_product(t, zj, nome) * _inv_gamma_pair(zj * zj, nome)
        for zi, zj in itertools.combinations(z, 2):
            cross = _inv_gamma_pair(zi * zj, nome) * _inv_gamma_pair(zi / zj, nome)
            if fam == "C_II":
                for x in (zi * zj, zi / zj, zj / zi, 1 / (zi * zj)):
                    cross = cross * _G(tc * x, nome)
            out = out * cross
        return out

    def a_kernel(*z):
        zs = _variables(params, z)
        out = 1.0
        for zi, zj in itertools.combinations(zs, 2):
            out = out * _inv_gamma_pair(zi / zj, nome)
            if fam == "A_I2":
                out = out * _G(_prod(s) / (zi * zj), nome)
            elif fam == "A_II1":
                out = out * _G(tc * zi * zj, nome)
            elif fam == "A_II2":
                out = out * _G(tc * zi * zj, nome) * _G(sc / (zi * zj), nome)
        for zj in zs:
            if fam == "A_I1":
                for sm, tm in zip(s, t):
                    out = out * _G(sm * zj, nome) * _G(tm / zj, nome)
            elif fam == "A_I2":
                S = _prod(s)
                for tk in t:
                    out = out * _G(tk * zj, nome) / _G(S * tk / zj, nome)
                for sm in s:
                    out = out * _G(sm / zj, nome)
            elif fam == "A_II1":
                for tk in t:
                    out = out * _G(tk / zj, nome)
                for si in s:
                    out = out * _G(si * zj, nome)
            else:
                for tk, sk in zip(t, s):
                    out = out * _G(tk * zj, nome) * _G(sk / zj, nome)
        return out

    return c_kernel if fam.startswith("C") else a_kernel


def kappa(params: RootSystemParams) -> float:
    """Normalisation turning the torus mean into ``kappa_n \\int ... dz/z``."""
    p, q, n = params.nome.p, params.nome.q, params.n
    base = (qpoch_inf(p, p) * qpoch_inf(q, q)) ** n
    if params.family.startswith("C"):
        return base / (2**n * math.factorial(n))
    return base / math.factorial(n + 1)


def closed_form(params: RootSystemParams) -> complex:
    """Product side of the family's evaluation formula."""
    nome, n, fam = params.nome, params.n, params.family
    t, s, tc, sc = params.t, params.s, params.tc, params.sc
    G = lambda *xs: _prod(complex(_G(x, nome)) for x in xs)
    pairs = itertools.combinations
    if fam == "C_I":
        return G(*(a * b for a, b in pairs(t, 2)))
    if fam == "C_II":
        out = 1.0 + 0j
        for j in range(1, n + 1):
            out *= G(tc**j) / G(tc) * G(*(tc ** (j - 1) * a * b for a, b in pairs(t, 2)))
        return out
    if fam == "A_I1":
        S, T = _prod(s), _prod(t)
        return G(*(S / x for x in s)) * G(*(T / x for x in t)) * G(*(a * b for a in s for b in t))
    if fam == "A_I2":
        S = _prod(s)
        out = _prod(G(tk * sm) / G(S * tk / sm) for tk in t for sm in s)
        return out * G(*(S / (a * b) for a, b in pairs(s, 2)))
    if fam == "A_II1":
        A = _prod(t)
        common = G(*(tk * si for tk in t for si in s)) * G(*(tc * a * b for a, b in pairs(t, 2)))
        if n % 2:
            h = (n + 1) // 2
            return G(tc**h, A) / G(tc**h * A) * common * G(*(tc ** ((n - 1) // 2) * a * b for a, b in pairs(s, 2)))
        h = n // 2
        return G(A) * common * _prod(G(tc**h * si) / G(tc**h * A * si) for si in s)
    # A_II2
    if n % 2:
        h = (n + 1) // 2
        out = G(tc**h, sc**h)
        out *= G(*(tc ** (h - 1) * a * b for a, b in pairs(t, 2)), *(sc ** (h - 1) * a * b for a, b in pairs(s, 2)))
        for j in range(1, h + 1):
            out *= G(*((tc * sc) ** (j - 1) * ti * sk for ti in t for sk in s))
        for j in range(1, (n - 1) // 2 + 1):
            out *= G((tc * sc) ** j)
            out *= G(*(tc ** (j - 1) * sc**j * a * b for a, b in pairs(t, 2)))
            out *= G(*(tc**j * sc ** (j - 1) * a * b for a, b in pairs(s, 2)))
        return out
    h = n // 2
    out = G(*(tc**h * ti for ti in t), *(sc**h * si for si in s))
    out *= G(tc ** (h - 1) * _prod(t), sc ** (h - 1) * _prod(s))
    for j in range(1, h + 1):
        out *= G((tc * sc) ** j)
        out *= G(*((tc * sc) ** (j - 1) * ti * sk for ti in t for sk in s))
        out *= G(*(tc ** (j - 1) * sc**j * a * b for a, b in pairs(t, 2)))
        out *= G(*(tc**j * sc ** (j - 1) * a * b for a, b in pairs(s, 2)))
    return out


# rotation of the second torus axis; keeps z1 = z2^{+-1} off the tensor grid
# (the torus mean is invariant under it)
STAGGER = complex(math.cos(1 / math.sqrt(2)), math.sin(1 / math.sqrt(2)))


def torus_integral(f, n: int, spec: ContourSpec | None = None):
    """Mean of ``f`` over ``T^n`` for ``n`` in ``(1, 2)``; returns ``(value, err)``."""
    if n == 1:
        return integrate_circle(f, spec or ContourSpec(nodes=32, target_rel=1e-13))
    g = lambda z1, z2: f(z1, STAGGER * z2)
    return integrate_torus2(g, spec or ContourSpec(kind="torus2", nodes=32, target_rel=1e-12))


def eval_V_multi(params: RootSystemParams, spec: ContourSpec | None = None) -> complex:
    """``kappa_n \\int kernel dz/z`` by torus quadrature, without any closed form."""
    if not pole_margin_ok(params):
        raise UntestableError("parameters violate the pole conditions of the evaluation")
    mean, _ = torus_integral(kernel(params), params.n, spec)
    return complex(kappa(params) * mean)


def multi_beta_check(params: RootSystemParams, spec: ContourSpec | None = None, tol: float | None = None) -> VerificationReport:
    """Torus quadrature of a multiple beta integral against its product formula."""
    if tol is None:
        tol = 1e-8 if params.n == 1 else 1e-6
    id = f"multi.{params.family}.n{params.n}"
    try:
        lhs = eval_V_multi(params, spec)
    except UntestableError as exc:
        return untestable_report(id, str(exc), tol)
    rhs = closed_form(params)
    return make_report(id, lhs, rhs, tol=tol, meta={"family": params.family, "n": params.n})


# van Diejen type operators


@dataclass(frozen=True)
class DiejenParams:
    """Parameters of the type I (``2n+6`` values) or type II (8 values and coupling ``tc``) operator."""

    family: str
    n: int
    t: tuple
    nome: NomePair
    tc: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(complex(x) for x in self.t))
        if self.family not in ("I", "II"):
            raise ValueError("family must be 'I' or 'II'")
        if self.family == "II" and self.tc is None:
            raise ValueError("type II needs the coupling parameter tc")
        need = 2 * self.n + 6 if self.family == "I" else 8
        if len(self.t) != need:
            raise ValueError(f"type {self.family} at n={self.n} needs {need} parameters")
        target = (self.nome.p * self.nome.q) ** 2
        val = _prod(self.t) * (self.tc ** (2 * self.n - 2) if self.family == "II" else 1)
        if abs(val - target) > CONSTRAINT_TOL * abs(target):
            raise ValueError("balancing condition violated")


def _A_coeff(params: DiejenParams, z, j):
    p = params.nome.p
    q = params.nome.q
    zj = z[j]
    out = _prod(theta(tm * zj, p) for tm in params.t) / theta_prod([zj * zj, q * zj * zj], p)
    for k, zk in enumerate(z):
        if k == j:
            continue
        if params.family == "II":
            out = out * theta_prod([params.tc * zj * zk, params.tc * zj / zk], p) / theta_prod([zj * zk, zj / zk], p)
        else:
            out = out / theta_prod([zj * zk, zj / zk], p)
    return out


def vandiejen_apply(params: DiejenParams, f, z):
    """``(D f)(z) = sum_j A_j(z)(f(.., q z_j, ..) - f(z)) + A_j(1/z)(f(.., z_j/q, ..) - f(z))``.

    ``z`` is a sequence of ``n`` scalars or broadcastable arrays; ``f``
    takes ``n`` positional arguments.
    """
    z = [np.asarray(x, dtype=complex) for x in z]
    if len(z) != params.n:
        raise ValueError(f"need {params.n} variables")
    q = params.nome.q
    f0 = f(*z)
    out = 0.0
    zinv = [1 / x for x in z]
    for j in range(params.n):
        up = list(z)
        up[j] = q * z[j]
        dn = list(z)
        dn[j] = z[j] / q
        out = out + _A_coeff(params, z, j) * (f(*up) - f0) + _A_coeff(params, zinv, j) * (f(*dn) - f0)
    return out


def diejen_weight(params: DiejenParams):
    """Weight ``Delta^I`` or ``Delta^II`` as a vectorised function of the torus variables."""
    nome = params.nome
    t, tc = params.t, params.tc

    def w(*z):
        out = 1.0
        for zj in z:
            out = out * _pm_product(t, zj, nome) * _inv_gamma_pair(zj * zj, nome)
        for zi, zj in itertools.combinations(z, 2):
            cross = _inv_gamma_pair(zi * zj, nome) * _inv_gamma_pair(zi / zj, nome)
            if params.family == "II":
                for x in (zi * zj, zi / zj, zj / zi, 1 / (zi * zj)):
                    cross = cross * _G(tc * x, nome)
            out = out * cross
        return out

    return w


def hermiticity_admissible(params: DiejenParams) -> bool:
    """Pole rings of the weight stay outside the annulus ``|q| <= |z| <= 1/|q|``."""
    q = abs(params.nome.q)
    mods = [abs(x) for x in params.t] + ([abs(params.tc)] if params.tc is not None else [])
    return all(m < q for m in mods)


def vandiejen_hermiticity(params: DiejenParams, phi, psi, spec: ContourSpec | None = None, tol: float | None = None) -> VerificationReport:
    """``<phi, D psi> - <D phi, psi>`` under the operator's own weight."""
    if tol is None:
        tol = 1e-8 if params.n == 1 else 1e-6
    id = f"multi.diejen_{params.family}.n{params.n}"
    if not hermiticity_admissible(params):
        return untestable_report(id, "parameters too large for the q-shifted contour", tol)
    w = diejen_weight(params)
    c = (qpoch_inf(params.nome.p, params.nome.p) * qpoch_inf(params.nome.q, params.nome.q)) ** params.n
    c /= 2**params.n * math.factorial(params.n)
    left = lambda *z: w(*z) * phi(*z) * vandiejen_apply(params, psi, z)
    right = lambda *z: w(*z) * vandiejen_apply(params, phi, z) * psi(*z)
    a = c * torus_integral(left, params.n, spec)[0]
    b = c * torus_integral(right, params.n, spec)[0]
    return make_report(id, a, b, tol=tol)


def dmu_as_diejen(t5, mu, nome: NomePair) -> DiejenParams:
    """The type I, ``n = 1`` operator whose shift part is ``D_mu - kappa_mu``.

    Parameters ``t0..t4`` are completed by ``pq mu/t4``, ``p q^2/(A mu)`` and ``t4/q``.
    """
    t = [complex(x) for x in t5]
    p, q = nome.p, nome.q
    A = _prod(t)
    return DiejenParams("I", 1, tuple(t + [p * q * mu / t[4], p * q * q / (A * mu), t[4] / q]), nome)


def sample_root_params(rng, family: str, n: int, nome: NomePair, lo: float = 0.3, hi: float = 0.9,
                       tc=None, sc=None) -> RootSystemParams:
    """Random admissible parameters; the balanced families use the projection sampler of :mod:`beta`."""
    from .beta import _balanced_point

    nt, ns = _COUNTS[family](n)
    pq = nome.p * nome.q
    if family == "A_I2":
        # |pq| < |t_k S| with S a product of ns moduli raises the floor
        lo = max(lo, 1.05 * abs(pq) ** (1 / (ns + 1)))
        if lo >= hi:
            raise ValueError("no admissible A_I2 point for this nome and window")
        for _ in range(1000):
            mods = np.exp(rng.uniform(math.log(lo), math.log(hi), nt + ns))
            x = mods * np.exp(1j * rng.uniform(-math.pi, math.pi, nt + ns))
            rp = RootSystemParams(family, n, nome, tuple(x[:nt]), tuple(x[nt:]))
            if pole_margin_ok(rp, margin=0.02):
                return rp
        raise RuntimeError("no admissible parameter point found")
    coupling = {"C_I": 1, "A_I1": 1, "C_II": tc ** (2 * n - 2) if tc is not None else None,
                "A_II1": tc ** (n - 1) if tc is not None else None,
                "A_II2": (tc * sc) ** (n - 1) if tc is not None and sc is not None else None}[family]
    if coupling is None:
        raise ValueError(f"{family} needs its coupling parameters")
    x = _balanced_point(rng, nt + ns, pq / coupling, lo, hi)
    if ns:
        return RootSystemParams.build(family, n, nome, t=x[:nt], s=x[nt:-1], tc=tc, sc=sc)
    return RootSystemParams.build(family, n, nome, t=x[:-1], tc=tc, sc=sc)


def dmu_diejen_check(n: int, z, t5, nome: NomePair, tol: float = 1e-9) -> VerificationReport:
    """``(D + kappa_mu) R_n = 0`` at ``mu = q^n`` with ``D`` the one-variable type I operator."""
    from .series import eval_R, kappa_mu

    mu = nome.q**n
    P = dmu_as_diejen(t5, mu, nome)
    f = lambda x: eval_R(n, x, t5, nome)
    shift = complex(vandiejen_apply(P, f, [complex(z)]))
    diag = complex(kappa_mu(mu, t5, nome) * f(complex(z)))
    return make_report("multi.dmu_diejen", shift + diag, 0j, terms=[shift, diag], tol=tol, meta={"n": n})


def c1_univariate_check(params: RootSystemParams, tol: float = 1e-12) -> VerificationReport:
    """``C_I`` at ``n = 1`` against the one-variable elliptic beta quadrature."""
    from .beta import circle_integral

    if params.family != "C_I" or params.n != 1:
        raise ValueError("needs C_I parameters with n = 1")
    try:
        multi = eval_V_multi(params)
        uni, _ = circle_integral(list(params.t), params.nome)
    except UntestableError as exc:
        return untestable_report("multi.C_I_vs_univariate", str(exc), tol)
    return make_report("multi.C_I_vs_univariate", multi, uni, tol=tol)
