"""Short-time escape of compactly supported wave functions.

Free Schrodinger propagation of piecewise-linear data with exact Fresnel
moments, escape and survival probabilities, offset scans, repeated
measurement runs and separable square-support regions.
"""

from .escape import (
    DivergentMomentError,
    EscapeResult,
    MomentStats,
    PowerLawFit,
    TailTooLargeError,
    analytic_linear_escape,
    edge_density,
    escape_probability,
    fit_power_law,
    inside_probability,
    moment_stats,
    offset_scan,
    ray_escape,
    scan_exponent,
    survival_deficit,
)
from .fresnel import FresnelTail, fresnel_tail, panel_moment, scaled_tail
from .planar import PlanarRegionReport, planar_regions, planar_scan
from .propagator import (
    PAPER,
    STANDARD,
    KernelConvention,
    OracleConvergenceError,
    PropagationResult,
    propagate,
    propagate_oracle,
    propagate_values,
)
from .wavefunc import (
    FAMILIES,
    InitialState,
    SampledWaveFunction,
    SupportInterval,
    graded_mesh,
    make_initial_state,
    norm_squared,
)
from .zeno import MeshResolutionError, ZenoRun, ZenoSpec, run_zeno, zeno_bound

__version__ = "0.1.0"
