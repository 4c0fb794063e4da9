"""Escape and survival probabilities, energy moments and power-law fits."""

from dataclasses import dataclass, field

import numpy as np

from .propagator import _sources, as_convention, kernel_parameters, propagate_values
from .wavefunc import SampledWaveFunction

__all__ = [
    "REGIONS",
    "BOUNDARY_LAYER_FACTOR",
    "EscapeResult",
    "MomentStats",
    "PowerLawFit",
    "TailTooLargeError",
    "DivergentMomentError",
    "ray_escape",
    "escape_difference",
    "escape_probability",
    "edge_density",
    "analytic_linear_escape",
    "inside_probability",
    "survival_deficit",
    "moment_stats",
    "fit_power_law",
    "offset_scan",
    "scan_exponent",
]

REGIONS = ("right-ray", "left-ray", "both-rays")

#: offsets closer than this many sqrt(dt) to the edge are flagged
BOUNDARY_LAYER_FACTOR = 10.0

_GL8 = np.polynomial.legendre.leggauss(8)
_GL5 = np.polynomial.legendre.leggauss(5)
_MAX_DOUBLINGS = 20
# jumps smaller than this fraction of the peak value are not chirp-resolved
JUMP_RESOLVE_FRACTION = 1e-8
# absolute target for the unintegrated tail beyond the cutoff
TAIL_ABS = 1e-9
# unresolved jump-jump interference allowed, and the panel budget for it
FRINGE_TOL = 1e-6
MAX_FRINGE_PANELS = 100_000


class TailTooLargeError(RuntimeError):
    """The analytic tail bound beyond the cutoff stayed above 1% of the result."""


class DivergentMomentError(ValueError):
    """<H^2> does not exist for a state with a boundary jump or kink."""


@dataclass(frozen=True)
class EscapeResult:
    dt: float
    delta: float
    region: str
    probability: float
    est_error: float
    convention: str = "paper"
    boundary_layer: bool = False
    parts: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class MomentStats:
    mean_H: float
    mean_H2: float
    variance_H: float


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    r_squared: float
    points: tuple

    def __call__(self, x):
        return self.prefactor * np.asarray(x, float) ** self.exponent


def _mirror(w):
    return SampledWaveFunction(-w.nodes[::-1], w.values[::-1])


def _panels(edge, start, stop, scale, fringe=None):
    """Panel edges on [start, stop] for a region beyond ``edge``.

    ``scale`` is the boundary-layer width ``1/sqrt(lam)`` (``sqrt(dt)``
    under the ``"paper"`` convention).  Panels are ``scale/10`` wide within
    ``10 scale`` of the edge, then grow like ``0.15 d``, capped at
    ``0.02 max(1, d)``.  ``fringe = (h, reach)`` further caps widths at
    ``h`` out to distance ``reach`` to resolve interference between jumps.
    """
    layer = BOUNDARY_LAYER_FACTOR * scale
    fine = scale / 10
    h_fringe, reach = fringe if fringe else (np.inf, -np.inf)
    out = [start]
    x = start
    while x < stop:
        d = x - edge
        h = fine if d < layer else max(fine, 0.15 * (d - layer))
        h = min(h, 0.02 * max(1.0, d))
        if d < reach:
            h = min(h, h_fringe)
        x = min(x + h, stop)
        out.append(x)
    return np.array(out)


def _integrate_density(w, dt, convention, edges):
    # 8-point Gauss-Legendre per panel with an embedded 5-point estimate
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    p8 = (mid + half * _GL8[0]).ravel()
    p5 = (mid + half * _GL5[0]).ravel()
    vals = np.abs(propagate_values(w, dt, convention, np.concatenate([p8, p5]))) ** 2
    n8 = p8.size
    i8 = (half * _GL8[1] * vals[:n8].reshape(-1, 8)).sum(axis=1)
    i5 = (half * _GL5[1] * vals[n8:].reshape(-1, 5)).sum(axis=1)
    return float(i8.sum()), float(np.abs(i8 - i5).sum()), p8, vals[:n8]


class _FarField:
    """Source data and far-field estimates for one ray."""

    def __init__(self, w, dt, convention, edge):
        pref, lam, _ = kernel_parameters(dt, convention)
        y, jump, kink = _sources(w)
        self.c2 = abs(pref) ** 2
        self.lam = lam
        self.scale = 1 / np.sqrt(lam)
        self.edge = edge
        big = np.abs(jump) > JUMP_RESOLVE_FRACTION * np.max(np.abs(w.values))
        self.jump_at = y[big]
        self.jump2 = np.abs(jump[big]) ** 2
        amp = np.abs(jump[big])
        gap = np.abs(self.jump_at[:, None] - self.jump_at[None, :])
        pair = np.triu(np.ones(gap.shape, bool), 1)
        # sum over jump pairs of |J_i J_j| / |y_i - y_j|
        self.cross = float(np.sum((amp[:, None] * amp[None, :] / np.where(pair, gap, 1))[pair]))
        self.sum_j = np.abs(jump).sum()
        self.sum_k = np.abs(kink).sum()

    def fringe(self):
        # fringes between two jumps have wavenumber 2 lam (y1 - y2); resolve
        # them while the unresolved cross term could exceed FRINGE_TOL
        if self.jump_at.size < 2:
            return None
        span = self.jump_at.max() - self.jump_at.min()
        h = 4.0 / (2 * self.lam * span)
        reach = self.c2 * self.sum_j ** 2 / (2 * self.lam ** 2 * FRINGE_TOL)
        return h, min(reach, MAX_FRINGE_PANELS * h)

    def jump_tail(self, distance):
        # fringe-averaged |psi|^2 ~ c2 sum |J|^2 / (4 lam^2 u^2) beyond the cutoff
        u = distance + self.edge - self.jump_at
        return float(self.c2 / (4 * self.lam ** 2) * np.sum(self.jump2 / u))

    def rest_bound(self, distance):
        # the parts decaying faster than 1/d^2, including the oscillating
        # interference between jumps, whose tail integral is ~ 1/(2 lam gap d^2)
        return 1.2 * self.c2 * (
            (self.sum_j * self.sum_k + self.cross) / (4 * self.lam ** 3 * distance ** 2)
            + self.sum_k ** 2 / (48 * self.lam ** 4 * distance ** 3))

    def rest(self, points, density):
        bound = self.rest_bound(points[-1] - self.edge)
        if self.jump_at.size:
            return bound
        # no jumps: the far field decays at least like 1/d^2
        d = points - self.edge
        far = d >= 0.8 * d[-1]
        return min(bound, 2 * float(np.max(density[far] * d[far] ** 2)) / d[-1])


def ray_escape(w, dt, delta=0.0, convention="paper", side="right", edge=None):
    """Probability beyond ``edge + delta`` (right) or ``edge - delta`` (left).

    The density is integrated out to a cutoff that doubles until what lies
    beyond is below ``min(1e-3 p, TAIL_ABS)``.  The 1/d^2 far field of
    boundary jumps is added analytically; faster-decaying parts only enter
    the error.

    Returns ``(probability, est_error)``.  ``edge`` defaults to the last
    (first) node of ``w``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if side == "left":
        w = _mirror(w)
        edge = None if edge is None else -edge
    elif side != "right":
        raise ValueError(f"unknown side {side!r}")
    if edge is None:
        edge = w.nodes[-1]
    far = _FarField(w, dt, convention, edge)
    fringe = far.fringe()
    start = edge + delta
    reach = max(10.0, 50 * far.scale)
    edges = _panels(edge, start, edge + max(reach, 2 * delta), far.scale, fringe)
    prob, err, pts, dens = _integrate_density(w, dt, convention, edges)
    for _ in range(_MAX_DOUBLINGS):
        distance = edges[-1] - edge
        jt = far.jump_tail(distance)
        rest = far.rest(pts, dens)
        if rest <= min(1e-3 * (prob + jt), TAIL_ABS):
            break
        more = _panels(edge, edges[-1], edge + 2 * distance, far.scale, fringe)
        p, e, pts, dens = _integrate_density(w, dt, convention, more)
        prob += p
        err += e
        edges = more
    else:
        distance = edges[-1] - edge
        jt = far.jump_tail(distance)
        rest = far.rest(pts, dens)
    total = prob + jt
    if rest > 1e-2 * total and rest > TAIL_ABS:
        raise TailTooLargeError(
            f"tail bound {rest:.3e} exceeds 1% of escape {total:.3e}")
    # the leading far-field form is good to O(1 / (lam d^2))
    tail_err = rest + jt * 4 / (far.lam * distance ** 2)
    length = edges[-1] - start
    amp = _amplitude_error(w, dt, convention)
    return total, err + tail_err + 2 * amp * np.sqrt(total * length)


def _amplitude_error(w, dt, convention):
    # each Fresnel tail is good to ~1e-14 in units of 1/sqrt(lam)
    pref, lam, _ = kernel_parameters(dt, convention)
    _, jump, kink = _sources(w)
    return 1e-14 * abs(pref) * (np.abs(jump).sum() / np.sqrt(lam)
                                + np.abs(kink).sum() / lam)


def escape_difference(w, ref, dt, convention="paper", side="right"):
    """Escape of ``w`` minus escape of ``ref`` into one ray, without cancellation.

    Both states must share nodes.  The integrand
    ``|psi_w|^2 - |psi_ref|^2 = Re[(psi_w - psi_ref) conj(psi_w + psi_ref)]``
    uses the propagated difference state directly, so a small difference
    is not lost against two nearly equal probabilities.

    Returns
    -------
    float
    """
    if not np.array_equal(w.nodes, ref.nodes):
        raise ValueError("states must share nodes")
    if side == "left":
        w, ref = _mirror(w), _mirror(ref)
    elif side != "right":
        raise ValueError(f"unknown side {side!r}")
    diff = SampledWaveFunction(w.nodes, w.values - ref.values)
    both = SampledWaveFunction(w.nodes, w.values + ref.values)
    edge = w.nodes[-1]
    far = _FarField(w, dt, convention, edge)
    edges = _panels(edge, edge, edge + max(10.0, 50 * far.scale), far.scale, far.fringe())
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    pts = (mid + half * _GL8[0]).ravel()
    vals = np.real(propagate_values(diff, dt, convention, pts)
                   * np.conj(propagate_values(both, dt, convention, pts)))
    return float(np.sum(half * _GL8[1] * vals.reshape(-1, 8)))


def escape_probability(w, dt, delta=0.0, region="both-rays", convention="paper",
                       support=None):
    """Escape probability of ``w`` into the ray(s) beyond ``delta`` of its support.

    Parameters
    ----------
    w : SampledWaveFunction
        Initial data; its first and last nodes are the support endpoints
        unless ``support`` is given.
    dt : float
    delta : float
        Offset from the endpoint; 0 means the whole ray.
    region : {"right-ray", "left-ray", "both-rays"}
    convention : KernelConvention or str
    support : SupportInterval, optional

    Returns
    -------
    EscapeResult
    """
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}")
    convention = as_convention(convention)
    right_edge = None if support is None else support.right
    left_edge = None if support is None else support.left
    parts = {}
    if region in ("right-ray", "both-rays"):
        parts["right"] = ray_escape(w, dt, delta, convention, "right", right_edge)
    if region in ("left-ray", "both-rays"):
        parts["left"] = ray_escape(w, dt, delta, convention, "left", left_edge)
    prob = sum(p for p, _ in parts.values())
    err = sum(e for _, e in parts.values())
    flagged = 0 < delta < BOUNDARY_LAYER_FACTOR * np.sqrt(dt)
    return EscapeResult(float(dt), float(delta), region, prob, err,
                        convention.tag, flagged, parts)


def edge_density(w, dt, delta, convention="paper"):
    """Density ``|psi(right_endpoint + delta, dt)|^2``."""
    return float(np.abs(propagate_values(w, dt, convention, [w.nodes[-1] + delta])[0]) ** 2)


def analytic_linear_escape(dpsi_right, dpsi_left, dt):
    """Closed-form linear escape law ``dt (|dpsi_right|^2 + |dpsi_left|^2) / pi``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return dt * (abs(dpsi_right) ** 2 + abs(dpsi_left) ** 2) / np.pi


def _inside_rule(w, t, gl_order, convention="paper"):
    # Gauss-Legendre points on the input panels, cells no wider than sqrt(t)/2.
    # Endpoint jumps radiate chirps of local wavenumber 2 lam d back over the
    # support; when the state has real jumps the cells also keep k L <= 1.5.
    x, wts = np.polynomial.legendre.leggauss(gl_order)
    target = np.sqrt(t) / 2
    nodes = w.nodes
    _, lam, _ = kernel_parameters(t, convention)
    y, jump, _ = _sources(w)
    big = np.abs(jump) > JUMP_RESOLVE_FRACTION * np.max(np.abs(w.values))
    jump_at = y[big]
    pts, weights = [], []
    for a, b in zip(nodes[:-1], nodes[1:]):
        cells = int(np.ceil((b - a) / target))
        if jump_at.size:
            reach = max(np.max(np.abs(jump_at - a)), np.max(np.abs(jump_at - b)))
            cells = max(cells, int(np.ceil(2 * lam * reach * (b - a) / 1.5)))
        e = np.linspace(a, b, cells + 1)
        m = 0.5 * (e[1:] + e[:-1])[:, None]
        h = 0.5 * np.diff(e)[:, None]
        pts.append((m + h * x).ravel())
        weights.append((h * wts).ravel())
    return np.concatenate(pts), np.concatenate(weights)


def inside_probability(w, t, convention="paper", gl_order=4):
    """Mass of the propagated state on the sampled span ``[nodes[0], nodes[-1]]``."""
    if not t > 0:
        raise ValueError("t must be positive")
    pts, weights = _inside_rule(w, t, gl_order, convention)
    psi = propagate_values(w, t, convention, pts)
    return float(np.sum(weights * np.abs(psi) ** 2))


def survival_deficit(w, t, convention="standard", gl_order=4):
    """``1 - |<psi0|psi(t)>|^2`` for normalized ``w``.

    Evaluated as the squared norm of the part of ``psi(t)`` orthogonal to
    ``psi0``: inside the sampled span by Gauss-Legendre on the input
    panels (subdivided to ``sqrt(t)/2``), outside it by the escape
    integrals.  This never subtracts from 1.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    pts, weights = _inside_rule(w, t, gl_order, convention)
    psi = propagate_values(w, t, convention, pts)
    w0 = w(pts)
    overlap = np.sum(weights * w0.conj() * psi)
    inside = float(np.sum(weights * np.abs(psi - overlap * w0) ** 2))
    outside = escape_probability(w, t, 0.0, "both-rays", convention)
    return inside + outside.probability


def moment_stats(state, grid_size=1 << 15):
    """Mean and variance of ``H = p^2`` for a smooth initial state.

    Uses the spectral derivative of a fine uniform sampling of the analytic
    state.  States with a boundary jump or kink are refused because
    ``<H^2>`` diverges for them.
    """
    bd = state.boundary_data
    scale = max(1.0, max((abs(v) for v in bd.values()), default=0.0))
    tol = 1e-8 * scale
    for key in ("jump_left", "jump_right", "dpsi_left", "dpsi_right"):
        if abs(bd.get(key, 0.0)) > tol:
            raise DivergentMomentError(
                f"{state.family}: nonzero {key}; <H^2> diverges")
    lo, hi = state.span
    pad = hi - lo
    x = np.linspace(lo - pad, hi + pad, grid_size, endpoint=False)
    dx = x[1] - x[0]
    amp = np.fft.fft(state(x))
    k = 2 * np.pi * np.fft.fftfreq(grid_size, dx)
    weight = np.abs(amp) ** 2
    total = weight.sum()
    mean_h = float((k ** 2 * weight).sum() / total)
    mean_h2 = float((k ** 4 * weight).sum() / total)
    return MomentStats(mean_h, mean_h2, mean_h2 - mean_h ** 2)


def fit_power_law(points):
    """Least-squares line through ``(log x, log y)``.

    Parameters
    ----------
    points : sequence of (x, y)
        At least four points with distinct positive abscissas and positive
        values.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
        raise ValueError("need at least four (x, y) pairs")
    if np.any(pts <= 0):
        raise ValueError("power-law fit needs positive abscissas and values")
    if np.unique(pts[:, 0]).size != pts.shape[0]:
        raise ValueError("abscissas must be distinct")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    spread = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 if spread == 0 else max(0.0, 1 - np.sum(resid ** 2) / spread)
    return PowerLawFit(float(slope), float(np.exp(intercept)), float(r2),
                       tuple(map(tuple, pts)))


def offset_scan(w, dts, deltas, convention="paper"):
    """Escape beyond ``right_endpoint + delta`` on the full (dt, delta) grid.

    Rows with ``delta < 10 sqrt(dt)`` are flagged as inside the boundary
    layer.  Results are ordered by ``(dt, delta)``.
    """
    dts = sorted(float(d) for d in dts)
    deltas = sorted(float(d) for d in deltas)
    if any(d <= 0 for d in dts) or any(d <= 0 for d in deltas):
        raise ValueError("offset scan needs positive dt and delta values")
    return [escape_probability(w, dt, delta, "right-ray", convention)
            for dt in dts for delta in deltas]


def scan_exponent(results, along):
    """Fit the escape probability of ``results`` against ``dt`` or ``delta``."""
    return fit_power_law([(getattr(r, along), r.probability) for r in results])
