"""Biorthogonal rational functions: the Gram matrix is diagonal.

``R_n`` and ``T_m`` are terminating very-well-poised series in ``z``.
Paired against the elliptic beta weight on the unit circle they are
biorthogonal, and the diagonal is the explicit normalisation ``h_n``.

Run: python demos/03_biorthogonal_functions.py
"""
import cmath

import numpy as np

from ellhyp.biorthogonal import BiorthParams, gram_matrix, h_norm
from ellhyp.qseries import NomePair

params = BiorthParams((0.6, 0.65 * cmath.exp(0.3j), 0.7 * cmath.exp(-0.5j), 0.55 * cmath.exp(1j),
                       0.3 * cmath.exp(0.2j)), NomePair(0.02, 0.6))
G = gram_matrix(params, 3)
np.set_printoptions(precision=3, linewidth=120)
print("normalised Gram matrix:\n", G)
print("h_n:", [complex(np.round(h_norm(n, params), 12)) for n in range(3)])
print("largest off-diagonal entry:", np.max(np.abs(G - np.diag(np.diag(G)))))
