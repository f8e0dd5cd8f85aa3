"""
Reproducing property by Monte Carlo
===================================

f(P) = integral over D of K(P, Q) f(Q) dV(Q) for holomorphic, square
integrable f. Here D is the Hartogs triangle H_1 (the kernel is unbounded
near z = 0 but square integrable) and the unit ball of C^2.
"""

import numpy as np

from bergman_hartogs import closed_forms as cf
from bergman_hartogs.suites import BALL2, H1
from bergman_hartogs.verify import check_reproducing, mc_integrate

tri = lambda z, w, ze, et: cf.hartogs_triangle(1, z * np.conj(ze), w * np.conj(et))
ball = lambda z, w, ze, et: cf.ball_kernel(2, z * np.conj(ze) + w * np.conj(et))
funcs = {"1": lambda z, w: np.ones_like(np.asarray(z, dtype=complex)), "w": lambda z, w: w, "zw": lambda z, w: z * w}

for name, dom, kern, pt in (("H_1", H1, tri, (0.6 + 0.2j, -0.3 + 0.1j)), ("ball", BALL2, ball, (0.4, 0.3))):
    for fname, f in funcs.items():
        rep = check_reproducing(kern, dom, f, pt, 400_000, seed=11)
        est, target = rep.detail["estimate"], rep.detail["target"]
        print(f"{name:>4} f={fname:<2}  target {complex(target):.4f}  MC {est:.4f} +- {rep.detail['stderr']:.4f}")

# Shards use independent streams spawned from the seed, so the thread count
# does not change a single bit of the result.
f = lambda z, w: np.abs(z * w) ** 2
a = mc_integrate(H1, f, 200_000, seed=5, jobs=1)
b = mc_integrate(H1, f, 200_000, seed=5, jobs=4)
print("jobs=1 vs jobs=4 identical:", a == b, a.mean)
