"""Suite registry, configuration and report serialisation.

A suite is a function of a :class:`SuiteContext` returning a list of
:class:`VerificationReport`.  Every random draw goes through the context's
generator, seeded from ``(seed, crc32(suite id))``, so a given seed fixes
every sampled parameter point regardless of which other suites run.
"""
from __future__ import annotations

import cmath
import csv
import io
import json
import math
import re
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

import numpy as np

from . import __version__
from . import bailey, beta, biorthogonal, gamma, multivariate, qseries, series
from .qseries import DEFAULT_TAIL_EPS, NomePair
from .quadrature import ContourSpec, integrate_circle, integrate_segment, integrate_torus2
from .report import UntestableError, VerificationReport, combine_reports, make_report, untestable_report

# tolerances below this cannot be met by the truncated products
TOL_FLOOR = 10 * DEFAULT_TAIL_EPS
CSV_FIELDS = ("suite", "instance", "id", "verdict", "lhs", "rhs", "abs_residual", "rel_residual",
              "tolerance", "wall_time", "meta")


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit status 2."""


@dataclass
class SuiteConfig:
    suites: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    nodes: dict = field(default_factory=dict)
    seed: int = 0
    out: str | None = None
    format: str = "json"
    timestamps: bool = False
    workers: int = 1
    points: dict = field(default_factory=dict)

    def validate(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite id(s): {', '.join(unknown)}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        for key, tol in self.tolerances.items():
            if not tol >= TOL_FLOOR:
                raise ConfigError(f"tolerance {tol:g} for {key!r} is below the truncation floor {TOL_FLOOR:g}")
        for key, n in self.nodes.items():
            if n < 16 or n & (n - 1):
                raise ConfigError(f"node count {n} for {key!r} must be a power of two >= 16")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self


@dataclass
class SuiteContext:
    suite: str
    config: SuiteConfig
    rng: np.random.Generator

    def _lookup(self, table, check_id):
        # most specific key wins: exact check id, then its prefixes, then suite id, then "*"
        parts = check_id.split(".")
        for k in range(len(parts), 0, -1):
            key = ".".join(parts[:k])
            if key in table:
                return table[key]
        return table.get(self.suite, table.get("*"))

    def tol(self, check_id: str, default: float) -> float:
        val = self._lookup(self.config.tolerances, check_id)
        return default if val is None else val

    def point(self, key: str):
        """User-supplied complex parameter list for ``key``, or None."""
        return self.config.points.get(key)

    def spec(self, check_id: str, default: ContourSpec | None = None, **kw) -> ContourSpec | None:
        n = self._lookup(self.config.nodes, check_id)
        if n is None:
            return default
        base = default or ContourSpec(**kw)
        return ContourSpec(kind=base.kind, radius=base.radius, a=base.a, b=base.b, nodes=n,
                           adaptive=base.adaptive, target_rel=base.target_rel, max_nodes=max(base.max_nodes, n))


@dataclass(frozen=True)
class Suite:
    id: str
    description: str
    run: Callable


SUITES: dict[str, Suite] = {}


def suite(id: str, description: str):
    def deco(fn):
        SUITES[id] = Suite(id, description, fn)
        return fn

    return deco


def _rc(rng, lo, hi):
    """Random complex number with modulus log-uniform in ``[lo, hi]``."""
    return math.exp(rng.uniform(math.log(lo), math.log(hi))) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))


def _retol(rep, tol):
    """Re-grade a report against ``tol``."""
    if rep.verdict in ("pass", "fail"):
        rep.verdict = "pass" if rep.rel_residual <= tol else "fail"
    rep.tolerance = tol
    return rep


def _pooled(id, reports, tol):
    rep = combine_reports(id, reports, tol)
    rel = [-1.0 if math.isnan(r.rel_residual) else r.rel_residual for r in reports]
    rep.meta = {"instances": len(reports), "worst_instance": int(np.argmax(rel))}
    return rep


# suites; each group of checks is also exposed for the acceptance tests


def theta_group(ctx: SuiteContext, samples: int = 100):
    rng = ctx.rng
    quasi, odd, per, add = [], [], [], []
    tol = ctx.tol("theta", 1e-13)
    for _ in range(samples):
        p = _rc(rng, 0.05, 0.6)
        z = _rc(rng, 0.5, 1.5)
        a, b = qseries.theta(p * z, p), -qseries.theta(z, p) / z
        quasi.append(make_report("theta.quasi_periodicity", a, b, tol=tol))
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.15, 1.5))
        u = complex(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3))
        f = lambda x: qseries.theta1_jacobi(x, tau)
        odd.append(make_report("theta1.odd", f(-u), -f(u), tol=tol))
        per.append(make_report("theta1.periodic", f(u + 1), -f(u), tol=tol))
        w, x, y, zz = (_rc(rng, 0.5, 1.5) for _ in range(4))
        add.append(_retol(qseries.check_addition_formula(w, x, y, zz, p), tol))
    return [_pooled("theta.quasi_periodicity", quasi, tol), _pooled("theta1.odd", odd, tol),
            _pooled("theta1.periodic", per, tol), _pooled("theta.addition", add, tol)]


@suite("core-qseries", "theta functions, q-products and elliptic Pochhammer symbols")
def _core(ctx):
    out = theta_group(ctx)
    tol = ctx.tol("theta1.series", 1e-12)
    out.append(make_report("theta1.series", qseries.theta1_jacobi(0.3, 0.5j), qseries.theta1_series(0.3, 0.5j), tol=tol))
    p = 0.4 + 0.1j
    a, b = _rc(ctx.rng, 0.5, 1.5), _rc(ctx.rng, 0.5, 1.5)
    c = _rc(ctx.rng, 0.5, 1.5)
    cls = qseries.classify_ratio([a, b], [c, a * b / c], p)
    out.append(make_report("theta.balanced_ellipticity", cls.elliptic_residual, 0.0, terms=[1.0],
                           tol=ctx.tol("theta.balanced_ellipticity", 1e-13)))
    return out


def gamma_group(ctx: SuiteContext, samples: int = 100):
    rng = ctx.rng
    tol = ctx.tol("egamma", 1e-12)
    groups = {k: [] for k in ("reflection", "q_shift", "p_shift", "pq_symmetry", "sqrt_pq")}
    for _ in range(samples):
        p, q = _rc(rng, 0.05, 0.6), _rc(rng, 0.05, 0.6)
        z = _rc(rng, 0.1, 5.0)
        G = lambda x, a=p, b=q: gamma.egamma(x, a, b)
        groups["reflection"].append(make_report("egamma.reflection", G(z) * G(p * q / z), 1.0, tol=tol))
        groups["q_shift"].append(make_report("egamma.q_shift", G(q * z), qseries.theta(z, p) * G(z), tol=tol))
        groups["p_shift"].append(make_report("egamma.p_shift", G(p * z), qseries.theta(z, q) * G(z), tol=tol))
        groups["pq_symmetry"].append(make_report("egamma.pq_symmetry", G(z), gamma.egamma(z, q, p), tol=tol))
        groups["sqrt_pq"].append(make_report("egamma.sqrt_pq", G(cmath.sqrt(p * q)), 1.0, tol=tol))
    out = [_pooled(f"egamma.{k}", v, tol) for k, v in groups.items()]
    per = gamma.PeriodTriple(1.0, math.sqrt(2) * cmath.exp(-0.1j), 2j)
    u = 0.3
    out.append(make_report("mod_egamma.representations", gamma.mod_egamma(u, per, "product"),
                           gamma.mod_egamma(u, per, "modular"), tol=ctx.tol("mod_egamma.representations", 1e-10)))
    a = 0.21 + 0.13j
    out.append(make_report("mod_egamma.reflection", gamma.mod_egamma(a, per) * gamma.mod_egamma(per.total - a, per), 1.0,
                           tol=ctx.tol("mod_egamma.reflection", 1e-12)))
    out.append(make_report("mod_egamma.swap", gamma.mod_egamma(a, per), gamma.mod_egamma(a, per.permuted(1, 0, 2)),
                           tol=ctx.tol("mod_egamma.swap", 1e-12)))
    return out


@suite("elliptic-gamma", "elliptic gamma function, modified elliptic gamma and hyperbolic gamma")
def _gamma(ctx):
    out = gamma_group(ctx)
    w2, w3 = 1.0, 0.3 + 1.7j
    u = 0.23 + 0.1j
    e = lambda x: cmath.exp(2j * cmath.pi * x)
    ratio = qseries.theta(e(-u / w3), e(-w2 / w3)) / qseries.theta(e(u / w2), e(w3 / w2))
    out.append(make_report("theta.modular", ratio, cmath.exp(1j * cmath.pi * gamma.b22(u, w2, w3)),
                           tol=ctx.tol("theta.modular", 1e-11)))
    w1, w2 = 1.0, 1.3 * cmath.exp(-0.4j)
    per = gamma.PeriodTriple(w1, w2, 9j)
    out.append(make_report("hyperbolic.limit", 1 / gamma.mod_egamma(0.2 + 0.05j, per),
                           gamma.hyperbolic_gamma(0.2 + 0.05j, w1, w2), tol=ctx.tol("hyperbolic.limit", 1e-8)))
    return out


def frenkel_turaev_group(ctx: SuiteContext, per_order: int = 20, nome=NomePair(0.4, 0.5)):
    rng = ctx.rng
    tol = ctx.tol("series.frenkel_turaev", 1e-12)
    out = []
    for N in range(9):
        reps = []
        for _ in range(per_order):
            t0, t1, t2, t3 = (_rc(rng, 0.3, 0.9) for _ in range(4))
            t5 = series.balanced_t5(t0, t1, t2, t3, N, nome.q)
            reps.append(series.frenkel_turaev_check(t0, t1, t2, t3, t5, N, nome, tol=tol))
        rep = _pooled(f"series.frenkel_turaev.N{N}", reps, tol)
        rep.meta["N"] = N
        out.append(rep)
    user = ctx.point("series.frenkel_turaev.t")
    if user is not None:
        try:
            t0, t1, t2, t3, N = user
            if N.imag != 0 or N.real != int(N.real) or N.real < 0:
                raise ValueError("the fifth entry must be a non-negative integer order")
            N = int(N.real)
            rep = series.frenkel_turaev_check(t0, t1, t2, t3, series.balanced_t5(t0, t1, t2, t3, N, nome.q), N, nome, tol=tol)
        except ValueError as exc:
            rep = untestable_report("series.frenkel_turaev.user", str(exc), tol)
        rep.id = "series.frenkel_turaev.user"
        out.append(rep)
    return out


def contiguous_12v11_group(ctx: SuiteContext, nome=NomePair(0.4, 0.5)):
    rng = ctx.rng
    tol = ctx.tol("series.E_contiguous", 1e-10)
    out = []
    for n in range(4):
        for kind in (1, 2, "combined"):
            if kind == 2 and n == 0:
                # a terminator among t1..t5 leaves a shifted series non-terminating; use t7 = 1
                t0 = _rc(rng, 0.3, 0.9)
                ts5 = [_rc(rng, 0.3, 0.9) for _ in range(5)]
                ts = ts5 + [t0**3 * nome.q**2 / np.prod(ts5), 1.0]
            else:
                t0 = _rc(rng, 0.3, 0.9)
                ts = series.balanced_12v11(t0, [nome.q ** (-n)] + [_rc(rng, 0.3, 0.9) for _ in range(5)], nome.q)
            rep = series.check_E_contiguous(kind, t0, ts, nome, tol=tol)
            rep.id = f"series.E_contiguous_{kind}.n{n}"
            out.append(rep)
    return out


def recurrence_group(ctx: SuiteContext, nome=NomePair(0.4, 0.5)):
    rng = ctx.rng
    tol = ctx.tol("series.recurrence_R", 1e-10)
    t = [_rc(rng, 0.3, 0.8) for _ in range(5)]
    z = _rc(rng, 0.9, 1.1)
    out = []
    for label, (xi, eta) in (("gauge1", (0.7 + 0.2j, 1.3 - 0.4j)), ("gauge2", (0.5j, 0.9))):
        for n in range(4):
            rep = series.check_recurrence_R(n, z, t, xi, eta, nome, tol=tol)
            rep.id = f"series.recurrence_R.{label}.n{n}"
            out.append(rep)
    return out


@suite("series", "terminating very-well-poised series, Frenkel-Turaev sum, recurrences and contiguous relations")
def _series(ctx):
    out = frenkel_turaev_group(ctx) + contiguous_12v11_group(ctx) + recurrence_group(ctx)
    nome = NomePair(0.4, 0.5)
    t = [0.3 + 0.1j, 0.27, 0.5j, nome.q**-2, 0.45 - 0.1j]
    w = [0.6, 0.7 - 0.2j, 0.35]
    w.append(np.prod(t) / (nome.q * np.prod(w)))
    out.append(series.inversion_check(t, w, nome.q, nome.p, 2, tol=ctx.tol("series.inversion", 1e-12)))
    return out


@suite("quadrature", "circle, segment and torus rules and the residue-corrected beta integral")
def _quad(ctx):
    out = []
    a = 0.7 * cmath.exp(0.3j)
    # mean of 1/(1 - a/z) over the unit circle is 1
    val, _ = integrate_circle(lambda z: 1 / (1 - a / z), ctx.spec("quadrature.circle", ContourSpec(nodes=16)))
    out.append(make_report("quadrature.circle", val, 1.0, tol=ctx.tol("quadrature.circle", 1e-13)))
    val, _ = integrate_segment(lambda u: np.exp(1j * u), ctx.spec("quadrature.segment", ContourSpec(kind="segment", a=0, b=2, nodes=16)))
    out.append(make_report("quadrature.segment", val, (cmath.exp(2j) - 1) / 1j, tol=ctx.tol("quadrature.segment", 1e-13)))
    val, _ = integrate_torus2(lambda z1, z2: 1 / ((1 - a / z1) * (1 - a / z2)) + z1 / z2,
                              ctx.spec("quadrature.torus", ContourSpec(kind="torus2", nodes=16)))
    out.append(make_report("quadrature.torus", val, 1.0, tol=ctx.tol("quadrature.torus", 1e-13)))
    out += residue_group(ctx)
    return out


def residue_group(ctx: SuiteContext):
    tol = ctx.tol("beta.residue", 1e-8)
    base = [0.7 * cmath.exp(0.2j), 0.75, 0.65 * cmath.exp(-0.5j), 0.6]
    one = beta.residue_identity_check(base + [1.05 * cmath.exp(0.4j)], NomePair(0.3, 0.5), tol=tol)
    one.id = "beta.residue.one_pole"
    two = beta.residue_identity_check(base + [2.4 * cmath.exp(0.3j)], NomePair(0.2, 0.5), tol=tol)
    two.id = "beta.residue.two_poles"
    return [one, two]


def elliptic_beta_group(ctx: SuiteContext, count: int = 10, nome=NomePair(0.4, 0.35)):
    tol = ctx.tol("beta.elliptic", 1e-9)
    spec = ctx.spec("beta.elliptic")
    sym = (nome.p * nome.q) ** (1 / 6)
    out = [beta.elliptic_beta_check(beta.BetaParams((sym,) * 6, nome), spec, tol=tol)]
    out[0].id = "beta.elliptic.symmetric"
    for i in range(count):
        rep = beta.elliptic_beta_check(beta.sample_beta_params(ctx.rng, nome), spec, tol=tol)
        rep.id = f"beta.elliptic.random{i}"
        out.append(rep)
    user = ctx.point("beta.elliptic.t")
    if user is not None:
        pn = ctx.point("beta.elliptic.nome") or [nome.p, nome.q]
        try:
            bp = beta.BetaParams.from_free(user, NomePair(*pn))
            rep = beta.elliptic_beta_check(bp, spec, tol=tol)
        except (ValueError, UntestableError) as exc:
            rep = untestable_report("beta.elliptic.user", str(exc), tol)
        rep.id = "beta.elliptic.user"
        out.append(rep)
    return out


def degenerations_group(ctx: SuiteContext, count: int = 5):
    rng = ctx.rng
    out = []
    for i in range(count):
        q = rng.uniform(0.2, 0.6)
        r = beta.rahman_check([_rc(rng, 0.2, 0.7) for _ in range(5)], q, tol=ctx.tol("beta.rahman", 1e-10))
        r.id = f"beta.rahman.{i}"
        a = beta.askey_wilson_check([_rc(rng, 0.2, 0.7) for _ in range(4)], q, tol=ctx.tol("beta.askey_wilson", 1e-10))
        a.id = f"beta.askey_wilson.{i}"
        out += [r, a]
    return out


def modified_beta_group(ctx: SuiteContext):
    per = gamma.PeriodTriple(1.0, math.sqrt(2), 3j)
    rng = ctx.rng
    # points with Im(g/w3) < 0 and sum(g) = w1 + w2 + w3
    g = [complex(rng.uniform(0.05, 0.35), rng.uniform(0.3, 0.6)) for _ in range(5)]
    g.append(per.total - sum(g))
    unit = beta.modified_beta_check(g, per, tol=ctx.tol("beta.modified", 1e-8))
    unit.id = "beta.modified.unit_q"
    std = gamma.PeriodTriple(1.0, math.sqrt(2) * cmath.exp(-0.1j), 2j)
    gs = [std.total / 6] * 6
    cross = beta.modified_beta_check(gs, std, tol=ctx.tol("beta.modified", 1e-9))
    cross.id = "beta.modified.standard"
    return [unit, cross]


def _sample_checked(rng, sampler, check, want, tries=200):
    """Draw points until ``want`` of them give a testable report."""
    out = []
    for _ in range(tries):
        rep = check(sampler())
        if rep.verdict != "untestable":
            out.append(rep)
            if len(out) == want:
                break
    return out


def vfunction_group(ctx: SuiteContext, count: int = 5, nome=NomePair(0.3, 0.4)):
    rng = ctx.rng
    spec = ctx.spec("beta.V")
    out = []
    t6 = beta.sample_beta_params(rng, nome).t
    t7 = _rc(rng, 0.6, 0.9)
    vp = beta.VParams(tuple(t6) + (t7, nome.p * nome.q / t7), nome)
    out.append(beta.check_V_reduction(vp, spec, tol=ctx.tol("beta.V_reduction", 1e-9)))
    for kind in ("i", "ii", "iii"):
        tol = ctx.tol(f"beta.E7_{kind}", 1e-8)
        reps = _sample_checked(rng, lambda: beta.sample_vparams(rng, nome),
                               lambda v, k=kind, tl=tol: beta.check_E7_transform(k, v, spec, tol=tl), count)
        for i, r in enumerate(reps):
            r.id = f"beta.E7_{kind}.{i}"
        out += reps
    # t1 t2 t3 t4 = pq makes the prefactor of (i) trivial
    a = [_rc(rng, 0.5, 0.8) for _ in range(3)]
    a.append(nome.p * nome.q / np.prod(a))
    b = [_rc(rng, 0.5, 0.8) for _ in range(3)]
    b.append(nome.p * nome.q / np.prod(b))
    out.append(make_report("beta.E7_fixed_point", beta.E7_fixed_point_prefactor(a + b, nome), 1.0,
                           tol=ctx.tol("beta.E7_fixed_point", 1e-10)))
    return out


def contiguous_V_group(ctx: SuiteContext, count: int = 3, nome=NomePair(0.3, 0.4)):
    rng = ctx.rng
    spec = ctx.spec("beta.V")
    q = abs(nome.q)
    out = []
    for kind, caps in ((1, {7: 0.9 * q}), (2, {5: 0.9 * q, 6: 0.9 * q})):
        tol = ctx.tol(f"beta.V_contiguous_{kind}", 1e-7)
        for i in range(count):
            rep = beta.check_V_contiguous(kind, beta.sample_vparams(rng, nome, caps=caps), spec, tol=tol)
            rep.id = f"beta.V_contiguous_{kind}.{i}"
            out.append(rep)
    tol = ctx.tol("beta.ehe", 1e-7)
    for i in range(count):
        a, ts, z = beta.sample_ehe_point(rng, nome)
        rep = beta.check_ehe(a, ts, z, nome, spec, tol=tol)
        rep.id = f"beta.ehe.{i}"
        out.append(rep)
    return out


def mellin_barnes_group(ctx: SuiteContext):
    w1, w2 = 1.0, cmath.exp(-0.3j)
    g = [0.15 * w2 * (1 + 0.1j * k) for k in range(5)]
    return [beta.mellin_barnes_check(g, w1, w2, tol=ctx.tol("beta.mellin_barnes", 1e-5))]


@suite("beta-univariate", "elliptic beta integral, its degenerations, the V-function and its relations")
def _beta(ctx):
    return (elliptic_beta_group(ctx) + degenerations_group(ctx) + residue_group(ctx) + modified_beta_group(ctx)
            + vfunction_group(ctx) + contiguous_V_group(ctx) + mellin_barnes_group(ctx))


def gram_group(ctx: SuiteContext):
    nome = NomePair(0.02, 0.6)
    params = biorthogonal.BiorthParams(
        (0.6, 0.65 * cmath.exp(0.3j), 0.7 * cmath.exp(-0.5j), 0.55 * cmath.exp(1j), 0.3 * cmath.exp(0.2j)), nome)
    return [biorthogonal.gram_check(params, 3, ctx.spec("biorth.gram"), tol=ctx.tol("biorth.gram", 1e-7))]


@suite("biorthogonal", "biorthogonal rational functions, recurrence and two-index biorthogonality")
def _biorth(ctx):
    out = gram_group(ctx)
    per = gamma.PeriodTriple(1.0, math.sqrt(2) * cmath.exp(-0.1j), 2j)
    g = [0.1 + 0.05j, 0.2 - 0.1j, 0.15 + 0.2j, 0.3, 0.12 - 0.03j]
    out.append(biorthogonal.modular_invariance_check(2, 0.23 + 0.1j, g, per, tol=ctx.tol("biorth.modular", 1e-10)))
    nome = NomePair(0.3, 0.4)
    t = [0.5 * cmath.exp(0.3j), 0.6, 0.45 * cmath.exp(-1j), 0.7 * cmath.exp(0.2j), 0.55]
    for n in range(4):
        rep = series.check_dmu_R(n, 0.8 * cmath.exp(0.7j), t, nome, tol=ctx.tol("series.dmu_R", 1e-9))
        rep.id = f"series.dmu_R.n{n}"
        out.append(rep)
    return out


MULTI_NOME = NomePair(0.3, 0.4)
MULTI_COUPLINGS = {
    "C_I": {}, "A_I1": {}, "A_I2": {},
    "C_II": {"tc": 0.6},
    "A_II1": {"tc": 0.4 * cmath.exp(0.3j)},
    "A_II2": {"tc": 0.6 * cmath.exp(0.3j), "sc": 0.7},
}


def multivariate_group(ctx: SuiteContext, n2_families=("C_I", "C_II", "A_II1", "A_II2")):
    rng = ctx.rng
    nome = MULTI_NOME
    out = [multivariate.c1_univariate_check(multivariate.sample_root_params(rng, "C_I", 1, nome),
                                            tol=ctx.tol("multi.C_I_vs_univariate", 1e-12))]
    for fam in ("A_I1", "A_I2", "A_II1", "A_II2"):
        p = multivariate.sample_root_params(rng, fam, 1, nome, **MULTI_COUPLINGS[fam])
        out.append(multivariate.multi_beta_check(p, ctx.spec(f"multi.{fam}.n1"), tol=ctx.tol(f"multi.{fam}.n1", 1e-8)))
    for fam in n2_families:
        p = multivariate.sample_root_params(rng, fam, 2, nome, **MULTI_COUPLINGS[fam])
        out.append(multivariate.multi_beta_check(p, ctx.spec(f"multi.{fam}.n2"), tol=ctx.tol(f"multi.{fam}.n2", 1e-6)))
    return out


def diejen_group(ctx: SuiteContext):
    rng = ctx.rng
    out = []
    nome = NomePair(0.1, 0.6)
    t = beta._balanced_point(rng, 8, (nome.p * nome.q) ** 2, 0.3, 0.58)
    P1 = multivariate.DiejenParams("I", 1, t, nome)
    z = np.exp(1j * np.array([0.3, 1.1, 2.5]))
    d1 = multivariate.vandiejen_apply(P1, lambda x: np.ones_like(x), [z])
    out.append(make_report("multi.diejen_constant", float(np.max(np.abs(d1))), 0.0, terms=[1.0], tol=0.0))
    out.append(multivariate.vandiejen_hermiticity(P1, lambda x: x + 1 / x, lambda x: x * x + 1 / (x * x) + 0.3,
                                                  tol=ctx.tol("multi.diejen_I.n1", 1e-8)))
    nome2 = NomePair(0.05, 0.6)
    tc = 0.5
    t8 = beta._balanced_point(rng, 8, (nome2.p * nome2.q) ** 2 / tc**2, 0.3, 0.58)
    P2 = multivariate.DiejenParams("II", 2, t8, nome2, tc=tc)
    phi = lambda a, b: (a + 1 / a) * (b + 1 / b)
    psi = lambda a, b: a + 1 / a + b + 1 / b + 0.1
    out.append(multivariate.vandiejen_hermiticity(P2, phi, psi, ctx.spec("multi.diejen_II.n2"),
                                                  tol=ctx.tol("multi.diejen_II.n2", 1e-6)))
    nome3 = NomePair(0.3, 0.4)
    t5 = [0.5 * cmath.exp(0.3j), 0.6, 0.45 * cmath.exp(-1j), 0.7 * cmath.exp(0.2j), 0.55]
    for n in range(4):
        rep = multivariate.dmu_diejen_check(n, 0.8 * cmath.exp(0.7j), t5, nome3, tol=ctx.tol("multi.dmu_diejen", 1e-9))
        rep.id = f"multi.dmu_diejen.n{n}"
        out.append(rep)
    return out


@suite("multivariate", "root-system beta integrals at n = 1, 2 and van Diejen type operators")
def _multi(ctx):
    return multivariate_group(ctx, ("C_I", "C_II", "A_I1", "A_I2", "A_II1", "A_II2")) + diejen_group(ctx)


BAILEY_NOME = NomePair(0.3, 0.3)


def bailey_lemma_group(ctx: SuiteContext):
    nome = BAILEY_NOME
    t, s, u = 0.6, 0.8 * cmath.exp(0.3j), 0.7 * cmath.exp(-0.5j)
    seed = bailey.BaileyPair.from_alpha(bailey.unit_alpha, t, nome)
    one = bailey.lemma1_step(seed, s, u)
    r1 = bailey.pair_check(one, tol=ctx.tol("bailey.lemma1", 1e-7), id="bailey.lemma1")
    two = bailey.lemma2_step(one, s, u)
    r2 = bailey.pair_check(two, tol=ctx.tol("bailey.roundtrip", 1e-6), id="bailey.roundtrip")
    return [r1, r2]


def bailey_inversion_group(ctx: SuiteContext):
    nome = BAILEY_NOME
    t = 0.5 * cmath.exp(0.2j)
    tol = ctx.tol("bailey.inversion", 1e-6)
    out = []
    for label, f in (("const", lambda z: np.ones_like(z)), ("sym", lambda z: z + 1 / z)):
        for rep in (bailey.inversion_check_AA(f, t, nome, tol=tol), bailey.inversion_check_AC(f, t, nome, tol=tol)):
            rep.id = f"{rep.id}.{label}"
            out.append(rep)
    tt = 0.8 * cmath.exp(0.2j)
    ts = [0.6 * cmath.exp(0.3j), 0.7 * cmath.exp(-0.4j), 0.65 * cmath.exp(1.1j)]
    ts.append(nome.p * nome.q / (tt * tt * np.prod(ts)))
    out.append(bailey.corollary_check(ts, tt, nome, tol=ctx.tol("bailey.corollary_AC", 1e-7)))
    return out


@suite("bailey", "integral Bailey lemmas and the n = 1 Fourier-Bailey inversions")
def _bailey(ctx):
    out = bailey_lemma_group(ctx)
    nome = BAILEY_NOME
    t, s, u = 0.6, 0.8 * cmath.exp(0.3j), 0.7 * cmath.exp(-0.5j)
    ts = [0.7 * cmath.exp(0.4j), 0.75 * cmath.exp(-0.3j), 0.7 * cmath.exp(1.2j)]
    ts.append(nome.p * nome.q / (t * t * np.prod(ts)))
    seed = bailey.seed_pair(ts, t, nome)
    out.append(bailey.pair_check(bailey.lemma1_step(seed, s, u), tol=ctx.tol("bailey.seed_lemma1", 1e-7), id="bailey.seed_lemma1"))
    vp = bailey.seed_lemma1_vparams(ts, t, s, u, np.exp(0.7j), nome)
    out.append(beta.check_E7_transform("i", vp, tol=ctx.tol("beta.E7_i", 1e-7)))
    return out + bailey_inversion_group(ctx)


# running and reporting


def _rng(seed: int, suite_id: str) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, zlib.crc32(suite_id.encode())])


def make_context(suite_id: str, config: SuiteConfig | None = None) -> SuiteContext:
    """The context a suite sees when run under ``config`` (default: seed 0, no overrides)."""
    config = config or SuiteConfig(suites=[suite_id])
    return SuiteContext(suite_id, config, _rng(config.seed, suite_id))


def _run_one(config: SuiteConfig, sid: str):
    ctx = make_context(sid, config)
    out = []
    t0 = time.perf_counter()
    with np.errstate(all="ignore"):
        reports = SUITES[sid].run(ctx)
    dt = time.perf_counter() - t0
    for i, rep in enumerate(reports):
        rep.wall_time = dt / max(len(reports), 1) if config.timestamps else 0.0
        out.append((sid, i, rep))
    return out


def run_suites(config: SuiteConfig):
    """Run the configured suites; returns ``[(suite id, instance index, report), ...]`` sorted by suite id."""
    config.validate()
    ids = sorted(set(config.suites))
    if config.workers > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(lambda s: _run_one(config, s), ids))
    else:
        chunks = [_run_one(config, s) for s in ids]
    return [row for chunk in chunks for row in chunk]


def exit_status(rows) -> int:
    return 1 if any(rep.verdict == "fail" for _, _, rep in rows) else 0


def _num(x):
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _num(x.real), "im": _num(x.imag)}
    x = float(x)
    return None if math.isnan(x) else (repr(x) if math.isinf(x) else x)


def _plain(obj):
    """JSON-safe copy of report metadata."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, complex, np.complexfloating)):
        return _num(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def report_record(suite_id, instance, rep: VerificationReport, timestamps: bool = False) -> dict:
    return {
        "suite": suite_id,
        "instance": instance,
        "id": rep.id,
        "verdict": rep.verdict,
        "lhs": _num(complex(rep.lhs)),
        "rhs": _num(complex(rep.rhs)),
        "abs_residual": _num(rep.abs_residual),
        "rel_residual": _num(rep.rel_residual),
        "tolerance": _num(rep.tolerance),
        "wall_time": _num(rep.wall_time) if timestamps else None,
        "meta": _plain(rep.meta),
    }


def _fnum(v):
    if v is None:
        return math.nan
    if isinstance(v, str):
        return float(v)
    return float(v)


def record_to_report(rec: dict) -> VerificationReport:
    cx = lambda d: complex(_fnum(d["re"]), _fnum(d["im"]))
    wt = rec.get("wall_time")
    return VerificationReport(rec["id"], cx(rec["lhs"]), cx(rec["rhs"]), _fnum(rec["abs_residual"]),
                              _fnum(rec["rel_residual"]), rec["verdict"], _fnum(rec["tolerance"]),
                              dict(rec.get("meta") or {}), 0.0 if wt is None else float(wt))


def render_json(rows, config: SuiteConfig) -> str:
    started = datetime.now(timezone.utc).isoformat(timespec="seconds") if config.timestamps else None
    doc = {
        "meta": {"seed": config.seed, "version": __version__, "started": started},
        "results": [report_record(s, i, r, config.timestamps) for s, i, r in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse_json(text: str):
    """Inverse of :func:`render_json`: ``(meta, [(suite, instance, report), ...])``."""
    doc = json.loads(text)
    rows = [(r["suite"], r["instance"], record_to_report(r)) for r in doc["results"]]
    return doc["meta"], rows


def format_complex(z: complex) -> str:
    """``"re+imi"`` with round-trip float reprs, e.g. ``"1.5-0.25i"``."""
    z = complex(z)
    im = repr(z.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{z.real!r}{sign}{im}i"


def parse_complex(text: str) -> complex:
    """Parse ``"a+bi"``, ``"a"`` or ``"bi"`` (also accepts Python's ``j``)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s[-1] in "ij":
        body = s[:-1]
        # split at the last sign that is not part of an exponent
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                re_part, im_part = body[:k], body[k:]
                return complex(float(re_part), float(im_part + ("1" if im_part in "+-" else "")))
        return complex(0.0, float(body + ("1" if body in ("", "+", "-") else "")))
    return complex(float(s), 0.0)


def render_csv(rows, config: SuiteConfig) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for s, i, rep in rows:
        rec = report_record(s, i, rep, config.timestamps)
        w.writerow([s, i, rep.id, rep.verdict, format_complex(rep.lhs), format_complex(rep.rhs),
                    repr(float(rep.abs_residual)), repr(float(rep.rel_residual)), repr(float(rep.tolerance)),
                    "" if rec["wall_time"] is None else repr(rec["wall_time"]),
                    json.dumps(rec["meta"], sort_keys=True)])
    return buf.getvalue()


def emit_report(rows, config: SuiteConfig, path: str | None = None) -> str:
    """Render in ``config.format`` and write to ``path`` (or ``config.out``) if given."""
    text = render_json(rows, config) if config.format == "json" else render_csv(rows, config)
    path = path or config.out
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# parameter files


def parse_param_file(text: str) -> dict:
    """Parse the ``key = value`` parameter format into a dict of strings.

    Grammar, one entry per line::

        line    := key "=" value | comment | blank
        key     := name ("." name)*
        comment := "#" anything

    Recognised keys: ``suites`` (comma separated ids), ``seed``, ``format``,
    ``out``, ``workers``, ``tol.<id>``, ``nodes.<id>`` and ``point.<check>.<name>``.
    Point values are comma separated complex literals such as
    ``0.3+0.1i, -0.2i, 0.5``.  Currently read: ``point.beta.elliptic.t``
    (five free parameters), ``point.beta.elliptic.nome`` (``p, q``) and
    ``point.series.frenkel_turaev.t`` (``t0, t1, t2, t3, N``).
    A repeated key is an error.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (x.strip() for x in line.split("=", 1))
        if not re.fullmatch(r"[A-Za-z_][\w\-]*(\.[\w\-*]+)*", key):
            raise ConfigError(f"line {lineno}: bad key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def config_from_params(params: dict, base: SuiteConfig | None = None) -> SuiteConfig:
    cfg = base or SuiteConfig()
    try:
        for key, val in params.items():
            if key == "suites":
                cfg.suites = [s.strip() for s in val.split(",") if s.strip()]
            elif key == "seed":
                cfg.seed = int(val)
            elif key == "format":
                cfg.format = val
            elif key == "out":
                cfg.out = val
            elif key == "workers":
                cfg.workers = int(val)
            elif key.startswith("tol."):
                cfg.tolerances[key[4:]] = float(val)
            elif key.startswith("nodes."):
                cfg.nodes[key[6:]] = int(val)
            elif key.startswith("point."):
                cfg.points[key[6:]] = [parse_complex(v) for v in val.split(",")]
            else:
                raise ConfigError(f"unknown key {key!r}")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return cfg
