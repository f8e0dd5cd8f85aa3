"""
Generalized Hartogs triangles
=============================

H_q = {|w|^q < |z| < 1}. Its kernel is a series of weighted kernels of the
punctured disk, and for rational q = a/b it sums to a rational function of
s = z conj(zeta) and t = w conj(eta).
"""

from fractions import Fraction

import numpy as np

from bergman_hartogs import closed_forms as cf
from bergman_hartogs.errors import ConvergenceError
from bergman_hartogs.hartogs import TruncationPolicy, hartogs_kernel
from bergman_hartogs.weights import BaseDomain, HartogsSpec, NegLogAbs

s, t = 0.5 + 0.2j, 0.15 - 0.1j

# The series: the fibre over z is a disk of radius |z|^(1/q), i.e. the weight
# phi = -(1/q) log|z|.
for q in (Fraction(1), Fraction(2), Fraction(3, 2), Fraction(5, 3)):
    spec = HartogsSpec(BaseDomain.PUNCTURED_UNIT_DISK, NegLogAbs(1 / q))
    rep = hartogs_kernel(spec, s, t)
    closed = cf.hartogs_triangle(q, s, t)
    print(f"q={q!s:>4}  series {rep.value:.12f} ({rep.terms_used} terms)  closed {closed:.12f}"
          f"  rel diff {abs(rep.value - closed) / abs(closed):.1e}")

# How fast does the series settle? Cap the degree and look at the partial sums.
spec = HartogsSpec(BaseDomain.PUNCTURED_UNIT_DISK, NegLogAbs(Fraction(2, 3)))
exact = cf.hartogs_triangle(Fraction(3, 2), s, t)
for d in (2, 5, 10, 20, 40):
    try:
        v = hartogs_kernel(spec, s, t, TruncationPolicy(max_total_degree=d)).value
    except ConvergenceError as exc:  # still carries the partial sum
        v = exc.report.value
    print(f"degree <= {d:>2}: error {abs(v - exact) / abs(exact):.2e}")

# Writing alpha = (k a + r + 1) b / a, the older closed form assumes the
# fractional part of alpha is b(r+1)/a. That only holds while b(r+1) < a,
# so it agrees with the series for q = 2 or q = 1/3 but not for q = 3/2.
for q in (Fraction(2), Fraction(1, 3), Fraction(3, 2), Fraction(5, 3)):
    old, new = cf.hartogs_triangle_printed(q, s, t), cf.hartogs_triangle(q, s, t)
    print(f"q={q!s:>4}: older form off by {abs(old - new) / abs(new):.1e}")

# The kernel is Hermitian and positive on the diagonal.
rng = np.random.default_rng(0)
z = 0.8 * np.sqrt(rng.random(5)) * np.exp(2j * np.pi * rng.random(5))
w = 0.9 * np.abs(z) ** (2 / 3) * rng.random(5)
print("diagonal values:", np.round(cf.hartogs_triangle(Fraction(3, 2), np.abs(z) ** 2, np.abs(w) ** 2).real, 4))
