# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Escape beyond an offset
#
# How much probability reaches x > delta, well past the boundary layer?
# ``offset_scan`` evaluates the full (dt, delta) grid and flags rows with
# delta < 10 sqrt(dt).

# +
import numpy as np

from shortescape import make_initial_state, offset_scan, scan_exponent

_, jump = make_initial_state("uniform-jump", mesh_size=64)
_, kinked = make_initial_state("kinked-sine", mesh_size=2048)
# -

# For a jump, each edge radiates a density dt / (4 pi d^2), so the mass
# beyond distance delta is dt / (4 pi delta) from the near edge plus the
# same from the far edge at distance 1 + delta.

rows = offset_scan(jump, [1e-6], np.geomspace(0.05, 0.8, 6))
for r in rows:
    two_edge = 1e-6 / (4 * np.pi) * (1 / r.delta + 1 / (1 + r.delta))
    print(f"delta={r.delta:.3f}: {r.probability:.4e}  two-edge law {two_edge:.4e}")
print("fitted delta exponent:", round(scan_exponent(rows, "delta").exponent, 3))
print("dt exponent at delta=0.5:",
      round(scan_exponent(offset_scan(jump, np.geomspace(1e-6, 1e-4, 4), [0.5]), "dt").exponent, 3))

# A kink radiates more weakly, with density ~ dt^3 / d^4, so the mass
# beyond delta falls like dt^3 / delta^3.

rows = offset_scan(kinked, np.geomspace(1e-7, 1e-5, 4), [0.5])
print("kink dt exponent at delta=0.5:", round(scan_exponent(rows, "dt").exponent, 3))
rows = offset_scan(kinked, [1e-6], np.geomspace(0.1, 0.8, 5))
print("kink delta exponent at dt=1e-6:", round(scan_exponent(rows, "delta").exponent, 3))
