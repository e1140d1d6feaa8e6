"""Building new integral Bailey pairs from the trivial one.

Start from alpha = 1, whose beta is defined by a contour integral, apply
the first lemma, then the second, and check the defining relation of each
new pair at three points on the unit circle.

Run: python demos/04_bailey_lemma.py   (a few seconds)
"""
import cmath

from ellhyp.bailey import BaileyPair, lemma1_step, lemma2_step, pair_check, unit_alpha
from ellhyp.qseries import NomePair

nome = NomePair(0.3, 0.3)
s, u = 0.8 * cmath.exp(0.3j), 0.7 * cmath.exp(-0.5j)
pair = BaileyPair.from_alpha(unit_alpha, 0.6, nome)
print("start:      t =", pair.t, pair_check(pair))
one = lemma1_step(pair, s, u)
print("lemma 1:    t =", one.t, pair_check(one, id="bailey.lemma1"))
two = lemma2_step(one, s, u)
print("lemma 2:    t =", two.t, pair_check(two, id="bailey.lemma2"))
