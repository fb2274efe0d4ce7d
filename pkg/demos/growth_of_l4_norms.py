"""
Growth laws for L^4 norms of the standard basis
===============================================

Two growth rates matter for the standard basis {Y_km}.  The average of the
fourth-power norms over one eigenspace grows like log k, so no orthonormal
basis of spherical harmonics can have uniformly bounded L^4 norms.  At the
same time the individual extremes follow clean power laws: the equatorial
beam Q_k = Y_kk grows like k^(1/8) in L^4 and the zonal element Z_k = Y_k0
grows like k^(1/2) in sup norm.  Both rates are printed below from direct
quadrature, then fitted on a doubling sweep.
"""

import math

from spherelab import average_l4_experiment, scaling_experiment, scaling_target

# Eigenspace averages against log k.  The ratio column should settle into a
# narrow band while the raw averages keep climbing.
ks = [8, 16, 32, 64, 128, 256]
res = average_l4_experiment(ks)
print("%6s %14s %16s" % ("degree", "A_k", "A_k / log k"))
for row in res.rows:
    print("%6d %14.8f %16.8f" % (row["k"], row["a_k"], row["a_k_over_log_k"]))
low, high = res.ratio_band
print("strictly increasing:", res.strictly_increasing)
print("ratio band [%.6f, %.6f], spread %.3f" % (low, high, res.band_spread))
print()

# Power-law fits.  Each family has a predicted exponent; the fit reports the
# measured slope and the log-residual scatter around the line.
sweeps = [
    ("highest_weight", 4.0),
    ("highest_weight", 8.0),
    ("zonal", math.inf),
]
print("%16s %6s %10s %10s %10s" % ("family", "q", "slope", "target", "rms"))
for family, q in sweeps:
    fit = scaling_experiment(family, q, (16, 32, 64, 128, 256))
    print(
        "%16s %6s %10.4f %10.4f %10.2e"
        % (family, q, fit.exponent, scaling_target(family, q), fit.residual_rms)
    )
