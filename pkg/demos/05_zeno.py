# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Watching the box
#
# Split a time T into N steps.  After each step, measure whether the
# particle is still in the box; if it is, the state collapses onto the
# box and is renormalized.  If each step lost mass like c dt^q, the total
# detection would be about N c (T/N)^q.

# +
import numpy as np

from shortescape import ZenoSpec, make_initial_state, run_zeno, zeno_bound
# -

# The simple bound makes the stakes clear: q = 2 vanishes as N grows,
# q = 1 does not depend on N at all.

for n in (10, 100, 1000):
    print(f"N={n:5d}: q=2 -> {zeno_bound(1, 2, 1, n):.4f}   q=1 -> {zeno_bound(1, 1, 1, n):.1f}")

# A kinked state is watched here with N = 5, 10 and 20 over T = 1e-3.

state = make_initial_state("kinked-sine", mesh_size=256)[0]
for n in (5, 10, 20):
    run = run_zeno(ZenoSpec(1e-3, n, state, mesh_size=256))
    p = np.array(run.per_step_escape)
    print(f"N={n:3d}: total detection {run.total_detection:.4e}; "
          f"p_last / p_first = {p[-1] / p[0]:.2f}")

# The per-step escape rises after the first step.  Free evolution
# lifts the edge value of a kinked state to about psi' sqrt(dt), and the
# collapse keeps it, so the measured state gains a jump at the edge.
# Jumps leak faster than kinks, and each further step grows the jump.
# Total detection falls with N, but slowly.
