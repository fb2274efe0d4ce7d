"""
Haar-random orthonormal bases and their quartic functional
==========================================================

Rotating one eigenspace by a Haar-random unitary produces a random
orthonormal basis.  The functional of interest is the sum of fourth-power
norms over the basis.  For Haar rotations its mean lands a hair under the
dimension benchmark (2k+1)/(2 pi): the exact finite-N mean carries a factor
N/(N+1).  Individual matrix entries, scaled by sqrt(N), approach a complex
Gaussian, whose fourth moment equals 2.
"""

import numpy as np

from spherelab import entry_moment, gaussian_limit_check, monte_carlo_lambda4

# Monte Carlo over Haar bases at a moderate degree.  Every trial draws its
# own generator from the master seed, so the per-trial values are bitwise
# stable no matter how many trials run.
k = 32
res = monte_carlo_lambda4(k, trials=100, seed=0)
n = 2 * k + 1
print("degree %d, %d Haar trials" % (k, res.trials))
print("mean quartic functional  %.8f +- %.8f" % (res.mean, res.stderr))
print("benchmark (2k+1)/(2 pi)  %.8f" % res.benchmark)
print("ratio                    %.6f +- %.6f" % (res.ratio, res.ratio_stderr))
print("finite-N prediction      %.6f  (N/(N+1), N = %d)" % (n / (n + 1), n))
print()

# Entry moments at small N, where the exact values are rational.
m2, s2 = entry_moment(2, "|u|^2", samples=2000, seed=1, return_stderr=True)
m4, s4 = entry_moment(2, "|u|^4", samples=2000, seed=2, return_stderr=True)
print("2x2 entry moments: E|u|^2 = %.4f +- %.4f (exact 1/2)" % (m2, s2))
print("                   E|u|^4 = %.4f +- %.4f (exact 1/3)" % (m4, s4))
print()

# The Gaussian limit at N = 65: scaled second moment 1, fourth moment 2.
report = gaussian_limit_check(32, samples=20000, seed=7)
print("N = 65 scaled entry moments from %d samples" % report.samples)
print("E|sqrt(N) u|^2 = %.5f +- %.5f (target 1)" % (report.second_moment, report.second_stderr))
print("E|sqrt(N) u|^4 = %.5f +- %.5f (target 2)" % (report.fourth_moment, report.fourth_stderr))
print("moment distance from the Gaussian limit: %.5f" % report.distance)
