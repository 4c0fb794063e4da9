"""Separable states on a square: region probabilities by factorization.

The free kernel in two dimensions is the product of two one-dimensional
kernels, so a product state ``phi(x) chi(y)`` evolves as a product and
every region bounded by the lines of the square has a probability that
is a product of one-dimensional masses.  Regions:

* ``A``: the square itself,
* ``B``: the four strips sharing an edge with it,
* ``C``: the four corner quadrants.
"""

from dataclasses import dataclass, field

from .escape import escape_probability, fit_power_law, inside_probability
from .propagator import as_convention
from .wavefunc import InitialState, SampledWaveFunction, make_initial_state

__all__ = ["AxisMasses", "PlanarRegionReport", "axis_masses", "planar_regions",
           "planar_scan", "PlanarScan"]


@dataclass(frozen=True)
class AxisMasses:
    """One-dimensional masses after time ``dt``: inside, beyond right, beyond left."""

    inside: float
    right: float
    left: float
    est_error: float = 0.0

    @property
    def outside(self):
        return self.right + self.left

    @property
    def total(self):
        return self.inside + self.right + self.left


@dataclass(frozen=True)
class PlanarRegionReport:
    dt: float
    p_A: float
    p_B: float
    p_C: float
    breakdown: dict = field(default_factory=dict)

    @property
    def partition_error(self):
        return self.p_A + self.p_B + self.p_C - 1


def _sampled(state, mesh_size):
    if isinstance(state, InitialState):
        return make_initial_state(state.family, state.support, state.parameters,
                                  mesh_size)[1]
    if isinstance(state, str):
        return make_initial_state(state, mesh_size=mesh_size)[1]
    if isinstance(state, SampledWaveFunction):
        return state
    # only separable data phi(x) chi(y) is supported
    raise TypeError(
        f"expected a one-dimensional factor, got {type(state).__name__}")


def axis_masses(w, dt, convention="paper"):
    esc = escape_probability(w, dt, 0.0, "both-rays", convention)
    return AxisMasses(inside_probability(w, dt, convention),
                      esc.parts["right"][0], esc.parts["left"][0], esc.est_error)


def planar_regions(state_x, state_y, dt, convention="paper", mesh_size=2048):
    """Region probabilities for ``phi(x) chi(y)`` after free evolution ``dt``.

    Parameters
    ----------
    state_x, state_y : InitialState, str or SampledWaveFunction
        The two factors.  A family name is built on the default support.
    dt : float
    convention : KernelConvention or str
    mesh_size : int
        Sampling size when a factor has to be built.

    Returns
    -------
    PlanarRegionReport
        ``breakdown`` holds each strip and quadrant, keyed like
        ``"B:x+"`` (strip beyond the right edge in ``x``) or ``"C:x+y-"``.

    Raises
    ------
    TypeError
        If a factor is not one-dimensional data (non-separable request).
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    convention = as_convention(convention)
    wx = _sampled(state_x, mesh_size)
    mx = axis_masses(wx, dt, convention)
    if state_y is state_x:
        my = mx
    else:
        my = axis_masses(_sampled(state_y, mesh_size), dt, convention)
    out = {"+": "right", "-": "left"}
    parts = {}
    for s, side in out.items():
        parts[f"B:x{s}"] = getattr(mx, side) * my.inside
        parts[f"B:y{s}"] = mx.inside * getattr(my, side)
        for t, side_y in out.items():
            parts[f"C:x{s}y{t}"] = getattr(mx, side) * getattr(my, side_y)
    p_B = sum(v for k, v in parts.items() if k.startswith("B"))
    p_C = sum(v for k, v in parts.items() if k.startswith("C"))
    parts["axis_x"] = mx
    parts["axis_y"] = my
    return PlanarRegionReport(float(dt), mx.inside * my.inside, p_B, p_C, parts)


@dataclass(frozen=True)
class PlanarScan:
    reports: tuple
    fit_B: object
    fit_C: object
    fit_B_x: object
    fit_B_y: object


def planar_scan(state_x, state_y, dts, convention="paper", mesh_size=2048):
    """Sweep ``planar_regions`` over ``dts`` and fit the region exponents."""
    dts = sorted(float(d) for d in dts)
    wx = _sampled(state_x, mesh_size)
    wy = wx if state_y is state_x else _sampled(state_y, mesh_size)
    if len(dts) == 0 or dts[0] <= 0:
        raise ValueError("dts must be nonempty and positive")
    reports = tuple(planar_regions(wx, wy, dt, convention) for dt in dts)

    def fit(key):
        pts = [(r.dt, key(r)) for r in reports]
        if all(v > 0 for _, v in pts) and len(pts) >= 4:
            return fit_power_law(pts)
        return None

    return PlanarScan(
        reports,
        fit(lambda r: r.p_B),
        fit(lambda r: r.p_C),
        fit(lambda r: r.breakdown["B:x+"] + r.breakdown["B:x-"]),
        fit(lambda r: r.breakdown["B:y+"] + r.breakdown["B:y-"]),
    )
