"""
The domains D_q and their polydisc-fibre inflation
==================================================

D_q = {|z|^2 + |w|^(2q) < 1} in C^2 and D^inf_q = {|z|^2 + ||w||_inf^(2q) < 1}
in C^3. Both are Hartogs domains over the disk with fibre radius
(1 - |z|^2)^(1/(2q)).
"""

import math

import numpy as np

from bergman_hartogs import closed_forms as cf
from bergman_hartogs.hartogs import hartogs_kernel
from bergman_hartogs.suites import fibre_points
from bergman_hartogs.weights import BaseDomain, HartogsSpec, NegLogOneMinusSq

rng = np.random.default_rng(1)

print("D_q: series vs closed form")
for q in (0.5, 1.0, 2.0, 3.0):
    spec = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(1 / (2 * q)))
    s, t = fibre_points(q, 1)(rng)
    a, b = hartogs_kernel(spec, s, t).value, cf.bergman_dq(q, s, t)
    print(f"  q={q:g}: {abs(a - b) / abs(b):.1e}")

# q = 1 is the unit ball of C^2.
s, t = 0.3 - 0.1j, 0.2 + 0.2j
print("D_1 vs ball kernel:", abs(cf.bergman_dq(1, s, t) - 2 / (math.pi**2 * (1 - s - t) ** 3)))

# With two fibre coordinates and the sup norm the fibre is a bidisc. The
# series has coefficients (n1+1)(n2+1)/pi^2 and sums to a closed form that
# is symmetric in t1, t2.
print("\nD^inf_q: series vs closed form, and the older closed form")
for q in (0.5, 1.0, 2.0):
    spec = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(1 / (2 * q)), N=2, p=math.inf)
    ratios = []
    for _ in range(5):
        s, t1, t2 = fibre_points(q, 2)(rng)
        series = hartogs_kernel(spec, s, [t1, t2]).value
        closed = cf.dinfty_q(q, s, t1, t2)
        ratios.append(abs(cf.dinfty_q_printed(q, s, t1, t2) / closed))
    print(f"  q={q:g}: last series/closed diff {abs(series - closed) / abs(closed):.1e};"
          f" older/closed ratio ranges {min(ratios):.2f}..{max(ratios):.2f}")

# At t = 0 only the n = (0, 0) term survives; the older form at q/2 is
# off by exactly pi^2 there, and by a point-dependent factor elsewhere.
s = 0.4
print("\nolder(q/2)/closed(q) at t=0:", cf.dinfty_q_printed(0.5, s, 0, 0) / cf.dinfty_q(1.0, s, 0, 0), "pi^2 =", math.pi**2)
print("                 at t!=0:", abs(cf.dinfty_q_printed(0.5, s, 0.2, 0.1) / cf.dinfty_q(1.0, s, 0.2, 0.1)))
