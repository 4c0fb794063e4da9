"""Repeated projective position measurements on the initial support.

Each step propagates freely for ``T/N``, records the probability found
outside the support, then collapses onto the support and renormalizes.
"""

from dataclasses import dataclass, field

import numpy as np

from .escape import escape_probability
from .propagator import as_convention, propagate_values
from .wavefunc import SampledWaveFunction, make_initial_state, norm_squared

__all__ = ["ZenoSpec", "ZenoRun", "MeshResolutionError", "measure_step", "run_zeno",
           "zeno_bound"]

#: nodes required within sqrt(dt) of each support endpoint
MIN_LAYER_NODES = 4
MAX_MESH_SIZE = 16384


class MeshResolutionError(RuntimeError):
    """The mesh cannot resolve the boundary layer of one measurement step."""


@dataclass(frozen=True)
class ZenoSpec:
    total_time: float
    steps: int
    state: object  # InitialState, family name or SampledWaveFunction
    convention: object = "paper"
    mesh_size: int = 512

    def __post_init__(self):
        if not self.total_time > 0:
            raise ValueError("total_time must be positive")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")

    @property
    def dt(self):
        return self.total_time / self.steps


@dataclass(frozen=True)
class ZenoRun:
    per_step_escape: tuple
    total_detection: float
    final_state_norm: float
    resample_drift: tuple = field(default=(), compare=False)

    @property
    def steps(self):
        return len(self.per_step_escape)


def _layer_nodes(nodes, dt):
    root = np.sqrt(dt)
    return min(np.count_nonzero(nodes - nodes[0] < root),
               np.count_nonzero(nodes[-1] - nodes < root))


def _resolved(spec):
    state = spec.state
    if isinstance(state, str):
        state = make_initial_state(state, mesh_size=16)[0]
    if isinstance(state, SampledWaveFunction):
        w, state = state, None
    else:
        w = make_initial_state(state.family, state.support, state.parameters,
                               spec.mesh_size)[1]
    dt = spec.dt
    size = len(w)
    while _layer_nodes(w.nodes, dt) < MIN_LAYER_NODES:
        if state is None or state.family == "custom-samples" or size >= MAX_MESH_SIZE:
            raise MeshResolutionError(
                f"mesh of {len(w)} nodes does not resolve sqrt(dt)={np.sqrt(dt):.2e}")
        size *= 2
        w = make_initial_state(state.family, state.support, state.parameters, size)[1]
    return w


def measure_step(w, dt, convention="paper"):
    """Evolve ``w`` for ``dt``, measure, and collapse onto its span.

    Returns
    -------
    post : SampledWaveFunction
        Normalized state on the same nodes.
    p : float
        Probability found outside the span.
    inside_norm : float
        Squared norm of the restricted state before renormalization.
    """
    p = escape_probability(w, dt, 0.0, "both-rays", convention).probability
    inside = SampledWaveFunction(w.nodes, propagate_values(w, dt, convention, w.nodes))
    norm = norm_squared(inside)
    if not norm > 1e-300:
        raise FloatingPointError("all probability escaped; cannot renormalize")
    return inside.scaled(1 / np.sqrt(norm)), p, norm


def run_zeno(spec):
    """Simulate ``spec.steps`` measurements spread over ``spec.total_time``.

    Returns
    -------
    ZenoRun
        ``per_step_escape[i]`` is the probability found outside the support
        at measurement ``i`` given survival so far; ``resample_drift[i]``
        is the difference between the renormalization factor of the
        resampled state and ``1 - p_i``, i.e. the interpolation error.
    """
    convention = as_convention(spec.convention)
    w = _resolved(spec)
    escapes, drift = [], []
    survive = 1.0
    norm = 1.0
    for _ in range(spec.steps):
        w, p, norm = measure_step(w, spec.dt, convention)
        escapes.append(p)
        drift.append(norm - (1 - p))
        survive *= 1 - p
    return ZenoRun(tuple(escapes), 1 - survive, norm, tuple(drift))


def zeno_bound(c, q, total_time, steps):
    """Total detection ``N c (T/N)^q`` under a per-step law ``p = c dt^q``."""
    if c < 0 or not q > 0:
        raise ValueError("need c >= 0 and q > 0")
    return steps * c * (total_time / steps) ** q
