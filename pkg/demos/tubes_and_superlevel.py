"""
Tube concentration and superlevel sets
======================================

A beam concentrates in a k^(-1/2) tube around its great circle: the mass it
keeps inside that tube tends to erf(1) as the degree grows, by the Gaussian
cross-section limit.  The zonal element, peaked at the poles instead, keeps
almost nothing there.  Two scale-invariant functionals quantify how any
eigenspace member spreads: the tube-concentration ratio (quartic norm
against the largest arc mass) and the scaled measure of quartic-sum
superlevel sets.  Both stay bounded across the sweep.
"""

import math

from spherelab import (
    GreatCircle,
    beam_field,
    build_grid,
    superlevel_experiment,
    tube_mass,
    tube_ratio_experiment,
    zonal_field,
)

# Tube mass at the natural width for beams and the zonal comparison.
target = math.erf(1.0)
equator = GreatCircle([0.0, 0.0, 1.0])
print("tube mass at width k^(-1/2) around the equator (limit erf(1) = %.4f)" % target)
print("%6s %12s %12s" % ("degree", "beam", "zonal"))
for k in (16, 64, 256):
    grid = build_grid(k, oversample=2.0)
    beam = tube_mass(beam_field(k, [0, 0, 1], grid), equator, k**-0.5)
    zonal = tube_mass(zonal_field(k, grid), equator, k**-0.5)
    print("%6d %12.6f %12.6f" % (k, beam, zonal))
print()

# The tube-concentration ratio across whole eigenspaces.  The worst member
# at each degree stays well under 1.
res = tube_ratio_experiment([8, 16, 32, 64])
worst = {}
for row in res.rows:
    k = row["k"]
    if k not in worst or row["ratio"] > worst[k]["ratio"]:
        worst[k] = row
print("worst tube-concentration ratio per degree")
print("%6s %14s %10s %14s %10s" % ("degree", "member", "L4 norm", "sup arc mass", "ratio"))
for k in sorted(worst):
    row = worst[k]
    print(
        "%6d %14s %10.5f %14.6f %10.4f"
        % (k, row["label"], row["l4"], row["sup_arc_mass"], row["ratio"])
    )
print("max ratio over the sweep: %.4f" % res.max_ratio)
print()

# Superlevel sets of the quartic sum at threshold C sqrt(lambda).  The
# scaled measure decays once C clears the bulk level of the profile.
res = superlevel_experiment([16, 64, 256], c_grid=(0.25, 0.5, 1.0))
print("%6s %8s %12s %14s %16s" % ("degree", "C", "threshold", "measure", "scaled measure"))
for row in res.rows:
    print(
        "%6d %8.2f %12.4f %14.6f %16.6f"
        % (row["k"], row["c"], row["threshold"], row["measure"], row["scaled_measure"])
    )
