"""
Pointwise envelope of the quartic eigenspace sum
================================================

The colatitude profile of the quartic sum (sum over m of |Y_km|^4)^(1/4)
peaks near the poles and decays toward the equator.  A two-branch envelope
captures it for every degree: flat at sqrt(k) inside polar distance 1/k,
then k^(1/4) r^(-1/4) log(kr)^(1/4) outside.  The measured-to-envelope
ratio should stay inside one fixed band for all degrees; this script prints
the ratio along the colatitude and its per-degree sup.
"""

import numpy as np

from spherelab import ell_p_profile, pointwise_envelope, pointwise_envelope_experiment

# Profile of the ratio for one degree across polar distances.
k = 64
rs = np.array([0.001, 0.005, 0.02, 1.0 / k, 0.1, 0.3, 0.7, 1.2, np.pi / 2])
print("degree %d: envelope ratio along the colatitude" % k)
print("%10s %14s %14s %10s" % ("r", "quartic sum", "envelope", "ratio"))
for r in sorted(rs):
    val = float(ell_p_profile(k, np.array([np.cos(r)]), 4)[0])
    env = pointwise_envelope(k, float(r))
    print("%10.4f %14.6f %14.6f %10.4f" % (r, val, env, val / env))
print()

# The sup over r for each degree in a doubling sweep.  The band spread is
# the max sup divided by the min sup; a spread near 1 means the envelope
# tracks the true profile with a uniform constant.
res = pointwise_envelope_experiment([8, 16, 32, 64, 128, 256])
print("%6s %12s %12s %12s" % ("degree", "sup ratio", "argmax r", "pole ratio"))
for row in res.rows:
    print(
        "%6d %12.6f %12.6f %12.6f"
        % (row["k"], row["sup_ratio"], row["argmax_r"], row["pole_ratio"])
    )
print("band spread over the sweep: %.4f" % res.band_spread)
