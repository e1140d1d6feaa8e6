import cmath
import math
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def annulus(lo, hi):
    """Strategy for complex numbers with modulus in ``[lo, hi]``."""
    return st.builds(lambda r, a: r * cmath.exp(1j * a),
                     st.floats(lo, hi), st.floats(-math.pi, math.pi))


def close(a, b, tol):
    a, b = complex(a), complex(b)
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


def lattice_gap(z, p, q, depth=25):
    """Relative distance from ``z`` to the points ``p^j q^k`` (any integers ``|j|, |k| < depth``)."""
    z, p, q = complex(z), complex(p), complex(q)
    best = math.inf
    for j in range(-depth, depth):
        for k in range(-depth, depth):
            w = p**j * q**k
            if 1e-8 < abs(w) < 1e8:
                best = min(best, abs(z - w) / abs(z))
    return best


def theta_bound(z, p):
    """Upper bound ``theta(-|z|; |p|) >= |theta(z; p)|``; the natural scale for rounding errors."""
    from ellhyp.qseries import theta
    return abs(theta(-abs(z), abs(p)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
    missing = [n for n in range(1, 16) if n not in results]
    if missing:
        terminalreporter.write_line(f"criteria not run or errored before reporting: {missing}")
