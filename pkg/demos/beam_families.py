"""
Gaussian beam families and orthonormalization retention
=======================================================

A beam is the highest-weight harmonic rebuilt around an arbitrary great
circle.  Two beams overlap by cos(alpha/2)^(2k) where alpha is the angle
between their axes, so families of well-separated beams are almost
orthogonal already.  The question is how many beams fit before symmetric
orthonormalization starts eating their L^4 mass.  This script prints the
overlap law, a packing table, and a retention sweep.
"""

import math

import numpy as np

from spherelab import (
    BeamFamily,
    beam_experiment,
    beam_overlap,
    orthonormalize,
    packing_bound,
    place_separated_axes,
)

# The overlap law, checked directly at a few axis angles.
k = 24
print("overlap of two degree-%d beams vs the axis angle" % k)
print("%10s %16s %16s" % ("alpha", "|overlap|", "cos^(2k)(a/2)"))
for alpha in (0.2, 0.5, math.pi / 4, 1.2):
    axis2 = [math.sin(alpha), 0.0, math.cos(alpha)]
    got = abs(beam_overlap(k, [0, 0, 1], axis2))
    law = math.cos(alpha / 2) ** (2 * k)
    print("%10.4f %16.10f %16.10f" % (alpha, got, law))
print()

# How many separated axes fit at each separation angle.
print("%12s %14s %16s" % ("separation", "packing bound", "axes placed"))
for delta in (0.8, 0.5, 0.35, 0.25):
    bound = packing_bound(delta)
    axes = place_separated_axes(min(bound // 2, 24), delta)
    print("%12.2f %14d %16d" % (delta, bound, len(axes)))
print()

# Retention of L^4 mass through symmetric orthonormalization, for a family
# of five beams at one separation.
k = 48
fam = BeamFamily.build(k, place_separated_axes(5, 0.5))
basis, report = orthonormalize(fam)
print("five beams at degree %d, separation %.2f" % (k, fam.delta))
print("gram condition number  %.4f" % report.gram_condition)
print("min / mean retention   %.6f / %.6f" % (report.min_retention, report.mean_retention))
print()

# The sweep: beam count from the packing bound, separations descending.
rows = beam_experiment(64, deltas=(0.5, 0.35, 0.25), seed=0)
print("%4s %4s %7s %10s %10s %12s %12s" % ("k", "J", "delta", "min ret", "mean ret", "gram cond", "sum L4^4"))
for row in rows:
    print(
        "%4d %4d %7.2f %10.6f %10.6f %12.4f %12.6f"
        % (row["k"], row["J"], row["delta"], row["min_ret"], row["mean_ret"],
           row["gram_cond"], row["sum_l4"])
    )
