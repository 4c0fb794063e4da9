# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Propagating compactly supported data
#
# An initial state is sampled on a mesh and read as a piecewise-linear
# function.  The free propagator then acts exactly: each endpoint jump
# and each change of slope contributes one Fresnel tail.  This notebook
# compares the result with a closed-form Gaussian and with brute-force
# quadrature, and shows how the two kernel conventions relate.

# +
import numpy as np

from shortescape import make_initial_state, propagate_oracle, propagate_values
# -

# A unit Gaussian is sampled on a wide span so that its truncation is
# invisible.  Under the standard kernel exp(-i p^2 t) it spreads as
# sigma^2 -> sigma^2 + i t.

# +
state, w = make_initial_state("gaussian", parameters={"sigma": 1.0, "center": 0.0},
                              mesh_size=2048)
t = 0.05
x = np.linspace(-3, 3, 7)
s2 = 1 + 1j * t
exact = (2 * np.pi) ** -0.25 * np.sqrt(1 / s2) * np.exp(-x ** 2 / (4 * s2))
got = propagate_values(w, t, "standard", x)
print("max |psi - exact| =", np.max(np.abs(got - exact)))
# -

# The remaining difference is the interpolation error of 2048 samples,
# not the propagator.  Against a brute-force integral of the same
# piecewise-linear data the agreement is at round-off.

_, kinked = make_initial_state("kinked-sine", mesh_size=64)
for xi in (-0.5, 0.02, 1.0):
    a = propagate_values(kinked, 1e-3, "paper", [xi])[0]
    b = propagate_oracle(kinked, 1e-3, "paper", xi)
    print(f"x = {xi:5}: |fast - brute force| = {abs(a - b):.1e}")

# The default kernel is (pi i dt)^(-1/2) exp(-i (x-y)^2 / dt), which
# corresponds to H = p^2 / 4.  The usual H = p^2 kernel at time t gives
# the same density as the default kernel at 4t.

xs = np.linspace(-2, 1, 31)
a = np.abs(propagate_values(kinked, 4e-3, "paper", xs)) ** 2
b = np.abs(propagate_values(kinked, 1e-3, "standard", xs)) ** 2
print("max density difference, paper(4t) vs standard(t):", np.max(np.abs(a - b)))

# A state with a jump radiates: far from the support each edge leaves a
# density of about dt / (4 pi d^2), and the two edges interfere.

_, jump = make_initial_state("uniform-jump", mesh_size=64)
xs = np.linspace(1.5, 1.5001, 2001)
mean = np.mean(np.abs(propagate_values(jump, 1e-5, "paper", xs)) ** 2)
print(f"fringe-averaged density at x=1.5: {mean:.3e}",
      f"(two-edge estimate {1e-5 / (4 * np.pi) * (1 / 1.5**2 + 1 / 2.5**2):.3e})")
