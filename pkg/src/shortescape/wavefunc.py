"""Wave-function containers, supports and the built-in initial states."""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FAMILIES",
    "SupportInterval",
    "InitialState",
    "SampledWaveFunction",
    "graded_mesh",
    "make_initial_state",
    "norm_squared",
]

FAMILIES = ("kinked-sine", "uniform-jump", "smooth-bump", "gaussian", "custom-samples")

GRADING_RATIO = 0.9
MIN_PANEL_FRACTION = 1e-6


@dataclass(frozen=True)
class SupportInterval:
    left: float = -1.0
    right: float = 0.0

    def __post_init__(self):
        if not self.left < self.right:
            raise ValueError(f"empty support ({self.left}, {self.right})")

    @property
    def width(self):
        return self.right - self.left

    def contains(self, x):
        x = np.asarray(x)
        return (x > self.left) & (x < self.right)


@dataclass(frozen=True, eq=False)
class SampledWaveFunction:
    """Piecewise-linear complex function on ``nodes``, zero outside them."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        values = np.array(self.values, dtype=complex)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("need at least two nodes")
        if nodes.shape != values.shape:
            raise ValueError("nodes and values differ in length")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        nodes.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        re = np.interp(x, self.nodes, self.values.real, left=0.0, right=0.0)
        im = np.interp(x, self.nodes, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def __len__(self):
        return self.nodes.size

    @property
    def slopes(self):
        return np.diff(self.values) / np.diff(self.nodes)

    def scaled(self, c):
        return SampledWaveFunction(self.nodes, c * self.values)

    def shifted(self, s):
        return SampledWaveFunction(self.nodes + s, self.values)

    def is_real(self):
        return not np.any(self.values.imag)


def norm_squared(w):
    """Exact ``int |w|^2`` for the piecewise-linear interpretation."""
    a = w.values[:-1]
    b = w.values[1:]
    h = np.diff(w.nodes)
    per_panel = h * (abs(a) ** 2 + (a * b.conj()).real + abs(b) ** 2) / 3
    return float(per_panel.sum())


def graded_mesh(left, right, size, ratio=GRADING_RATIO,
                min_fraction=MIN_PANEL_FRACTION):
    """Nodes on ``[left, right]`` refined geometrically toward both ends.

    Panels start at ``min_fraction * (right - left)`` at each endpoint and
    grow by ``1/ratio`` until they reach a uniform interior spacing, which
    is chosen so that the mesh has ``size`` nodes (to within one).
    """
    if size < 64:
        # too few nodes for the geometric layers
        return np.linspace(left, right, size)
    width = right - left
    grow = 1.0 / ratio
    hmin = max(min_fraction * width, width / (size - 1) * ratio ** (size // 4))

    def layer(h_uniform):
        widths = [hmin]
        while widths[-1] * grow < h_uniform:
            widths.append(widths[-1] * grow)
        return np.array(widths)

    lo, hi = hmin, width
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        lay = layer(mid)
        rest = width - 2 * lay.sum()
        if rest <= 0:
            hi = mid
        elif 2 * lay.size + np.ceil(rest / mid) > size - 1:
            lo = mid
        else:
            hi = mid
    lay = layer(hi)
    rest = width - 2 * lay.sum()
    n_mid = max(int(np.ceil(rest / hi)), 1)
    steps = np.concatenate([lay, np.full(n_mid, rest / n_mid), lay[::-1]])
    nodes = left + np.concatenate([[0.0], np.cumsum(steps)])
    # mirror the right layer from the right end so rounding cannot pile up there
    k = lay.size
    nodes[-k - 1:] = right - np.concatenate([np.cumsum(lay[::-1])[::-1], [0.0]])
    return nodes


@dataclass(frozen=True, eq=False)
class InitialState:
    """A normalized initial wave function with its boundary data.

    ``boundary_data`` holds the one-sided interior derivatives
    ``dpsi_left``/``dpsi_right`` and the boundary values ``jump_left``/
    ``jump_right`` at the support endpoints.  It is empty for the
    Gaussian without a support.
    """

    family: str
    support: SupportInterval = None
    parameters: dict = field(default_factory=dict)
    boundary_data: dict = field(default_factory=dict)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = self.parameters
        if self.family == "gaussian":
            sigma, c = p["sigma"], p["center"]
            amp = p["amplitude"] * np.exp(-((x - c) ** 2) / (4 * sigma ** 2))
            if self.support is not None:
                amp = np.where(self.support.contains(x), amp, 0.0)
            return amp + 0j
        if self.family == "custom-samples":
            return SampledWaveFunction(p["nodes"], p["values"])(x) * p["scale"]
        s = self.support
        u = (x - s.left) / s.width
        inside = s.contains(x)
        if self.family == "kinked-sine":
            val = np.sqrt(2 / s.width) * np.sin(np.pi * (x - s.right) / s.width)
        elif self.family == "uniform-jump":
            val = np.full(x.shape, 1 / np.sqrt(s.width))
        else:
            val = np.sqrt(8 / (3 * s.width)) * np.sin(np.pi * u) ** 2
        return np.where(inside, val, 0.0) + 0j

    @property
    def is_smooth(self):
        """True when value and derivative vanish at the support ends.

        A truncated Gaussian counts as smooth when its truncation jump is
        below 1e-9 (tail mass of order 1e-18).
        """
        if self.family == "smooth-bump":
            return True
        if self.family == "gaussian":
            return self.support is None or max(
                abs(self.boundary_data.get("jump_left", 0)),
                abs(self.boundary_data.get("jump_right", 0))) < 1e-9
        return False

    @property
    def span(self):
        """Interval carrying the sampled state."""
        if self.support is not None:
            return self.support.left, self.support.right
        p = self.parameters
        half = p.get("span_sigmas", 10.0) * p["sigma"]
        return p["center"] - half, p["center"] + half


def _finite_difference_ends(nodes, values):
    # three-point one-sided derivatives on a nonuniform mesh
    def one_sided(x, f):
        h1, h2 = x[1] - x[0], x[2] - x[0]
        return (-(h1 + h2) / (h1 * h2) * f[0] + h2 / (h1 * (h2 - h1)) * f[1]
                - h1 / (h2 * (h2 - h1)) * f[2])

    d_left = one_sided(nodes[:3], values[:3])
    d_right = -one_sided(-nodes[::-1][:3], values[::-1][:3])
    return d_left, d_right


def make_initial_state(family, support=None, parameters=None, mesh_size=2048):
    """Build a normalized initial state and its piecewise-linear sampling.

    Parameters
    ----------
    family : str
        One of ``FAMILIES``.
    support : SupportInterval or tuple, optional
        Defaults to ``(-1, 0)`` for the compact families.  For the Gaussian
        a support truncates the tails.
    parameters : dict, optional
        ``sigma`` and ``center`` for the Gaussian; ``nodes`` and ``values``
        for custom samples.
    mesh_size : int
        Number of sampling nodes, at least 16.

    Returns
    -------
    state : InitialState
    sampled : SampledWaveFunction
        Rescaled to unit norm under the piecewise-linear interpretation.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if mesh_size < 16:
        raise ValueError("mesh_size must be at least 16")
    params = dict(parameters or {})
    if isinstance(support, tuple):
        support = SupportInterval(*support)

    if family == "gaussian":
        sigma = float(params.setdefault("sigma", 1.0))
        params.setdefault("center", 0.0)
        if not sigma > 0 or not np.isfinite(sigma):
            raise ValueError("gaussian width sigma must be positive")
        params["amplitude"] = (2 * np.pi * sigma ** 2) ** -0.25
        state = InitialState(family, support, params)
        lo, hi = state.span
        if support is None:
            nodes = np.linspace(lo, hi, mesh_size)
        else:
            nodes = graded_mesh(lo, hi, mesh_size)
        values = state(nodes)
        if support is not None:
            # keep the truncation jump: the end nodes carry the inside limit
            c, s = params["center"], params["sigma"]
            values[[0, -1]] = params["amplitude"] * np.exp(
                -((nodes[[0, -1]] - c) ** 2) / (4 * s ** 2))
            mass = norm_squared(SampledWaveFunction(nodes, values))
            if not mass > 0:
                raise ValueError("gaussian has no mass on the support")
            params["amplitude"] /= np.sqrt(mass)
            values /= np.sqrt(mass)
            bd = {"jump_left": values[0], "jump_right": values[-1]}
            bd["dpsi_left"] = -(nodes[0] - c) / (2 * s ** 2) * values[0]
            bd["dpsi_right"] = -(nodes[-1] - c) / (2 * s ** 2) * values[-1]
            state = InitialState(family, support, params, bd)
        sampled = SampledWaveFunction(nodes, values)
        return state, sampled.scaled(1 / np.sqrt(norm_squared(sampled)))

    if family == "custom-samples":
        nodes = np.asarray(params.get("nodes"), dtype=float)
        values = np.asarray(params.get("values"), dtype=complex)
        raw = SampledWaveFunction(nodes, values)
        mass = norm_squared(raw)
        if not mass > 0 or not np.isfinite(mass):
            raise ValueError("custom samples are not normalizable")
        scale = 1 / np.sqrt(mass)
        support = SupportInterval(nodes[0], nodes[-1])
        d_left, d_right = _finite_difference_ends(nodes, values * scale)
        bd = {"dpsi_left": d_left, "dpsi_right": d_right,
              "jump_left": values[0] * scale, "jump_right": values[-1] * scale}
        params.update(nodes=nodes, values=values, scale=scale)
        return InitialState(family, support, params, bd), raw.scaled(scale)

    support = support or SupportInterval()
    w = support.width
    if family == "kinked-sine":
        slope = np.sqrt(2 / w) * np.pi / w
        bd = {"dpsi_left": -slope, "dpsi_right": slope,
              "jump_left": 0.0, "jump_right": 0.0}
    elif family == "uniform-jump":
        bd = {"dpsi_left": 0.0, "dpsi_right": 0.0,
              "jump_left": 1 / np.sqrt(w), "jump_right": 1 / np.sqrt(w)}
    else:
        bd = {"dpsi_left": 0.0, "dpsi_right": 0.0,
              "jump_left": 0.0, "jump_right": 0.0}
    state = InitialState(family, support, params, bd)
    nodes = graded_mesh(support.left, support.right, mesh_size)
    values = state(nodes)
    if family == "uniform-jump":
        values[[0, -1]] = 1 / np.sqrt(w)
    sampled = SampledWaveFunction(nodes, values)
    return state, sampled.scaled(1 / np.sqrt(norm_squared(sampled)))
