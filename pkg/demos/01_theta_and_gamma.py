"""Theta functions and the elliptic gamma function, by example.

Run: python demos/01_theta_and_gamma.py
"""
import cmath

from ellhyp.gamma import PeriodTriple, egamma, mod_egamma
from ellhyp.qseries import theta, theta1_jacobi, theta1_series

p, q = 0.3 + 0.1j, 0.45
z = 0.8 * cmath.exp(0.6j)

# theta(z; p) = (z; p)(p/z; p) changes by -1/z under z -> p z
print("theta(z)            ", theta(z, p))
print("theta(p z) * (-z)   ", -z * theta(p * z, p))

# the product form of Jacobi's theta_1 agrees with its bilateral series
tau = 0.2 + 0.8j
print("theta_1 product     ", theta1_jacobi(0.3, tau))
print("theta_1 series      ", theta1_series(0.3, tau))

# Gamma(q z) = theta(z; p) Gamma(z): the gamma function solves a first-order q-difference equation
print("Gamma(q z)          ", egamma(q * z, p, q))
print("theta(z;p) Gamma(z) ", theta(z, p) * egamma(z, p, q))

# reflection: Gamma(z) Gamma(pq/z) = 1
print("reflection          ", egamma(z, p, q) * egamma(p * q / z, p, q))

# the modified gamma G(u) has two representations; only the modular one survives |q| = 1
per = PeriodTriple(1.0, 2**0.5 * cmath.exp(-0.1j), 2j)
u = 0.21 + 0.13j
print("G(u) product        ", mod_egamma(u, per, "product"))
print("G(u) modular        ", mod_egamma(u, per, "modular"))
unit = PeriodTriple(1.0, 2**0.5, 3j)
print("|q| on unit circle  ", abs(unit.q), " G(u) =", mod_egamma(u, unit))
