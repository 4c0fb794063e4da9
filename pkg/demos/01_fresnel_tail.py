# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # The Fresnel tail
#
# Everything in this package rests on one special function,
#
#     T(w) = integral from w to infinity of exp(-i u^2) du.
#
# A piecewise-linear wave function propagated by the free kernel is a sum
# of such tails, one per node.  This notebook checks the function against
# mpmath and shows its two regimes.

# +
import mpmath as mp
import numpy as np

from shortescape import fresnel_tail, panel_moment
from shortescape.fresnel import tail_scalar

mp.mp.dps = 30
# -

# mpmath writes the tail through the complementary error function.

# +
c = mp.sqrt(mp.pi) / 2 * mp.exp(-1j * mp.pi / 4)


def reference(w):
    return complex(c * mp.erfc(mp.exp(1j * mp.pi / 4) * w))


ws = np.linspace(-12, 12, 2001)
err = max(abs(tail_scalar(w) - reference(w)) for w in ws)
print(f"max |T - mpmath| on [-12, 12]: {err:.1e}")
# -

# Near zero the tail is a table lookup plus a short Taylor step.  Far out
# it decays like exp(-i w^2) / (2 i w); for negative arguments the
# integrand is even, so T(-w) = 2 T(0) - T(w).

# +
t0 = tail_scalar(0.0)
print("T(0)          =", t0, " (sqrt(pi)/2 e^{-i pi/4} =", complex(c), ")")
for w in (10.0, 100.0):
    lead = np.exp(-1j * w * w) / (2j * w)
    print(f"T({w:g}) / leading term = {tail_scalar(w) / lead:.8f}")
print("T(-5) - (2 T(0) - T(5)) =", abs(tail_scalar(-5.0) - (2 * t0 - tail_scalar(5.0))))
# -

# The Cornu spiral overshoots: |T| peaks near w = -1.5255 at 1.17066
# times sqrt(pi), above the value sqrt(pi) reached at minus infinity.

grid = np.linspace(-3, 0, 30001)
mags = np.abs([tail_scalar(w) for w in grid])
k = int(np.argmax(mags))
print(f"max |T| / sqrt(pi) = {mags[k] / np.sqrt(np.pi):.5f} at w = {grid[k]:.4f}")

# The public wrappers work in physical units: ``fresnel_tail(xi, lam)``
# integrates exp(-i lam u^2) from xi, and ``panel_moment`` gives the
# zeroth and first moments over a panel.  Both are exact, so a panel
# integral of exp(-i lam u^2) u over [a, b] needs no quadrature.

lam = 50.0
print("fresnel_tail(0.1, 50) =", fresnel_tail(0.1, lam))
print("panel moments on [0.1, 0.3]:", panel_moment(0.1, 0.3, lam, 0), panel_moment(0.1, 0.3, lam, 1))
