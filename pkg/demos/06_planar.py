# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # A square box
#
# For a product state phi(x) chi(y) on the unit square, the free kernel
# factorizes.  Each region of the plane cut by the square's edge lines
# then has a probability that is a product of one-dimensional masses:
# the square A, four strips B sharing an edge with it, and four corner
# quadrants C.

# +
import numpy as np

from shortescape import make_initial_state, planar_scan

_, w = make_initial_state("kinked-sine", mesh_size=1024)
scan = planar_scan(w, w, np.geomspace(1e-6, 1e-4, 5))
for r in scan.reports:
    print(f"dt={r.dt:.1e}: p_B={r.p_B:.3e} p_C={r.p_C:.3e} "
          f"partition error {r.partition_error:+.1e}")
# -

# A strip needs escape across one edge line, a quadrant across two, so
# the quadrant exponent is twice the strip exponent.

print("p_B exponent:", round(scan.fit_B.exponent, 3), " p_C exponent:", round(scan.fit_C.exponent, 3))

# With a smooth factor in y, the y-strips become much rarer than the
# x-strips.

_, smooth = make_initial_state("smooth-bump", mesh_size=1024)
mixed = planar_scan(w, smooth, np.geomspace(1e-6, 1e-4, 5))
print("x-strips:", round(mixed.fit_B_x.exponent, 3), " y-strips:", round(mixed.fit_B_y.exponent, 3))
