"""
The constants C(p; n)
=====================

C(p; n) is the integral of |w^n|^2 over the unit l^p ball of C^N. The
series coefficient of w^n is 1/C(p; n). Monte Carlo on the simplex picture
of the ball checks the gamma-function formula.
"""

import math

from bergman_hartogs.hartogs import c_norm_constant
from bergman_hartogs.verify import check_c_constant

print(f"{'p':>4} {'n':>10} {'C(p;n)':>12} {'MC':>12} {'z':>6}")
for p in (1, 1.5, 2, 3, math.inf):
    for n in [(0,), (2,), (1, 0), (1, 2), (0, 1, 2)]:
        rep = check_c_constant(p, n, 200_000, seed=3)
        print(f"{p:>4g} {str(n):>10} {c_norm_constant(p, n):12.6f} {rep.detail['estimate']:12.6f} {rep.detail['z_score']:6.2f}")

# The plain rejection sampler is unbiased but noisy for small p: the l^1
# ball fills a tiny part of the polydisc in C^3.
for sampler in ("simplex", "box"):
    rep = check_c_constant(1, (1, 0, 0), 200_000, seed=3, sampler=sampler)
    print(f"p=1, n=(1,0,0), {sampler:>7}: rel err {rep.max_rel_err:.3f}, stderr {rep.detail['stderr']:.2e}")
