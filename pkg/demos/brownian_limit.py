"""From lattice walks to Brownian motion with the ghost-free determinant.

Two Brownian motions start at 0 and 1 and run for unit time, merging at
their first meeting.  The merged particle's density at 0 is a 2x2
determinant of Gaussian densities and distribution functions.  Rescaled
checkerboard walks approach it, and the two patterns together carry
total mass one.
"""
import math

from ghostcoal import BrownianKernels, HeirBox, heir_box_probability, heir_mass
from ghostcoal.ghostfree import normal_cdf, scaled_lattice_heir_density

B = BrownianKernels(1.0)
target = heir_mass((0.0, 1.0), {2}, (0.0,), B)
closed = normal_cdf(-1.0) / math.sqrt(2 * math.pi) + math.exp(-0.5) / math.sqrt(2 * math.pi) / 2
print(f"Brownian heir density at 0: {target:.10f} (closed form {closed:.10f})")

for N in (64, 256, 1024, 4096):
    d = scaled_lattice_heir_density((0, 1), {2}, (0,), N)
    print(f"  N={N:5d} steps: {d:.10f}  relative error {abs(d - target) / target:.2e}")

line = (-math.inf, math.inf)
merged, e1 = heir_box_probability((0.0, 1.0), {2}, HeirBox((line,)), B, full_output=True)
apart, e2 = heir_box_probability((0.0, 1.0), (), HeirBox((line, line), ordered=True), B,
                                 full_output=True)
print(f"P(merged) = {merged:.9f}, P(apart) = {apart:.9f}, total {merged + apart:.12f}")
print(f"quadrature error estimate {e1 + e2:.1e}")
