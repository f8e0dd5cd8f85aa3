"""
Inflating the fibre dimension
=============================

For l^2 fibres the kernel with an N-dimensional fibre is the (N-1)-st
derivative in t of the kernel with a one-dimensional fibre, divided by
pi^(N-1). On the coefficient stream c_n(s) this is a shift and a
factorial weight.
"""

import math

from bergman_hartogs.closed_forms import ball_kernel
from bergman_hartogs.hartogs import coefficient_stream, hartogs_kernel, inflate_series
from bergman_hartogs.weights import BaseDomain, Constant, HartogsSpec, NegLogOneMinusSq

s, t = 0.25 - 0.1j, 0.3 + 0.2j

# The unit ball of C^2 as a Hartogs domain over the disk, inflated to C^3 and C^4.
ball2 = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(0.5))
stream = coefficient_stream(ball2, s, log=True)
for N in (1, 2, 3):
    v = inflate_series(stream, N, t, log=True).value
    print(f"N={N}: inflated {v:.10f}  ball of C^{N + 1} {ball_kernel(N + 1, s + t):.10f}")

# Disk times a ball of radius R = exp(-c): the product of the two kernels.
c = 0.3
R2 = math.exp(-2 * c)
stream = coefficient_stream(HartogsSpec(BaseDomain.UNIT_DISK, Constant(c)), s, log=True)
product = 1 / (math.pi * (1 - s) ** 2) * 2 * R2 / (math.pi**2 * (R2 - t) ** 3)
print("disk x ball:", inflate_series(stream, 2, t, log=True).value, product)

# The same kernel summed over all multi-indices n = (n1, n2) instead.
spec = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(1.0), N=2, p=2)
a = hartogs_kernel(spec, s, 0.1, method="inflation")
b = hartogs_kernel(spec, s, 0.1)
print(f"inflation {a.value:.12f} ({a.terms_used} terms)   multi-index {b.value:.12f} ({b.terms_used} terms)")
