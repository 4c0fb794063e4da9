# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # How fast does a particle leave its box?
#
# Take a normalized state supported on [-1, 0] and let it evolve freely
# for a short time dt.  The escape probability is the mass found outside
# the box.  How it grows with dt depends on how the state meets the
# boundary.

# +
import numpy as np

from shortescape import (
    analytic_linear_escape,
    escape_probability,
    fit_power_law,
    make_initial_state,
    moment_stats,
    survival_deficit,
)

dts = np.geomspace(1e-6, 1e-4, 5)
# -

# ## Three boundary types
#
# ``uniform-jump`` is discontinuous at the edges, ``kinked-sine`` is
# continuous with a slope break, and ``smooth-bump`` vanishes with its
# derivative.

for family in ("uniform-jump", "kinked-sine", "smooth-bump"):
    _, w = make_initial_state(family, mesh_size=1024)
    probs = [escape_probability(w, dt).probability for dt in dts]
    fit = fit_power_law(list(zip(dts, probs)))
    print(f"{family:13s} escape at dt=1e-4: {probs[-1]:.3e}   exponent {fit.exponent:.3f}")

# A jump leaks like sqrt(dt).  A kink leaks like dt**1.5, not linearly:
# near each edge the state looks like a ramp psi' x, and a ramp spreads
# into a boundary layer of width sqrt(dt) with amplitude psi' sqrt(dt).
# The closed-form linear law dt (|psi'(0)|^2 + |psi'(-1)|^2) / pi is
# therefore far too large at small dt:

st, w = make_initial_state("kinked-sine", mesh_size=1024)
bd = st.boundary_data
for dt in (1e-6, 1e-4):
    p = escape_probability(w, dt).probability
    lin = analytic_linear_escape(bd["dpsi_right"], bd["dpsi_left"], dt)
    print(f"dt={dt:g}: measured {p:.3e}, linear law {lin:.3e}, ratio {p / lin:.4f}")

# ## Survival
#
# The survival deficit 1 - |<psi0|psi(t)>|^2 counts every change of the
# state, not only mass that left.  For a smooth state it grows like
# t^2 times the energy variance.

state, g = make_initial_state("gaussian", parameters={"sigma": 1.0, "center": 0.0},
                              mesh_size=2048)
var = moment_stats(state).variance_H
for t in (1e-4, 1e-3, 1e-2):
    print(f"t={t:g}: deficit / t^2 = {survival_deficit(g, t, 'standard') / t**2:.5f}"
          f"   (variance of H: {var:.5f})")
