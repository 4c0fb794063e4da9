"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (printed in the ``acceptance``
section of the pytest summary) before asserting, so every criterion
reports its measured numbers whether or not it holds.
"""

import json
import time

import numpy as np
import pytest

from shortescape import (
    SampledWaveFunction,
    ZenoSpec,
    escape_probability,
    fit_power_law,
    make_initial_state,
    moment_stats,
    offset_scan,
    panel_moment,
    planar_scan,
    propagate_oracle,
    propagate_values,
    run_zeno,
    scan_exponent,
    survival_deficit,
)
from shortescape.cli import main as cli_main
from shortescape.escape import escape_difference, inside_probability

BUILT_IN = ["kinked-sine", "uniform-jump", "smooth-bump", "gaussian"]


def within(value, target, tol):
    return abs(value - target) <= tol


def record(report, number, title, checks, elapsed, budget=None):
    """Log one line; ``checks`` maps a label to (ok, text)."""
    timing_ok = budget is None or elapsed < budget
    ok = all(c for c, _ in checks.values()) and timing_ok
    parts = [f"{k}: {t} [{'ok' if c else 'FAIL'}]" for k, (c, t) in checks.items()]
    if budget is not None:
        parts.append(f"runtime {elapsed:.0f}s < {budget}s [{'ok' if timing_ok else 'FAIL'}]")
    report(f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): " + "; ".join(parts))
    return ok


def test_criterion_1_linear_law(report):
    start = time.perf_counter()
    st, w = make_initial_state("kinked-sine", mesh_size=2048)
    dts = np.geomspace(1e-6, 1e-4, 12)
    probs = [escape_probability(w, dt, 0.0, "both-rays", "paper").probability for dt in dts]
    fit = fit_power_law(list(zip(dts, probs)))
    bd = st.boundary_data
    law = (abs(bd["dpsi_right"]) ** 2 + abs(bd["dpsi_left"]) ** 2) / np.pi
    ratio = probs[0] / dts[0] / law
    ok = record(report, 1, "linear law and prefactor", {
        "exponent": (within(fit.exponent, 1.0, 0.03), f"{fit.exponent:.4f} vs 1.00+-0.03"),
        "prefactor ratio at dt=1e-6": (within(ratio, 1.0, 0.03), f"{ratio:.4g} vs 1.00+-0.03"),
    }, time.perf_counter() - start, 60)
    assert ok


def test_criterion_2_quadratic_law(report):
    start = time.perf_counter()
    st, w = make_initial_state("gaussian", parameters={"sigma": 1.0, "center": 0.0},
                               mesh_size=2048)
    ts = np.geomspace(1e-4, 1e-2, 5)
    fit = fit_power_law([(t, survival_deficit(w, t, "standard")) for t in ts])
    variance = moment_stats(st).variance_H
    ok = record(report, 2, "quadratic law", {
        "exponent": (within(fit.exponent, 2.0, 0.05), f"{fit.exponent:.4f} vs 2.00+-0.05"),
        "coefficient": (within(fit.prefactor / 0.125, 1.0, 0.05),
                        f"{fit.prefactor:.5f} vs 0.125+-5% (variance_H {variance:.6f})"),
    }, time.perf_counter() - start, 30)
    assert ok


def test_criterion_3_jump_scalings(report):
    start = time.perf_counter()
    _, w = make_initial_state("uniform-jump", mesh_size=64)
    dt_rows = offset_scan(w, np.geomspace(1e-6, 1e-4, 5), [0.5])
    delta_rows = offset_scan(w, [1e-6], np.geomspace(0.05, 0.8, 6))
    e_dt = scan_exponent(dt_rows, "dt").exponent
    e_delta = scan_exponent(delta_rows, "delta").exponent
    ok = record(report, 3, "jump-state scalings", {
        "dt exponent at delta=0.5": (within(e_dt, 1.0, 0.05), f"{e_dt:.4f} vs 1+-0.05"),
        "delta exponent at dt=1e-6": (within(e_delta, -2.0, 0.1), f"{e_delta:.4f} vs -2+-0.1"),
    }, time.perf_counter() - start, 60)
    assert ok


def test_criterion_4_kink_offset_scalings(report):
    start = time.perf_counter()
    _, w = make_initial_state("kinked-sine", mesh_size=2048)
    dt_rows = offset_scan(w, np.geomspace(1e-7, 1e-5, 5), [0.5])
    delta_rows = offset_scan(w, [1e-6], np.geomspace(0.1, 0.8, 5))
    e_dt = scan_exponent(dt_rows, "dt").exponent
    e_delta = scan_exponent(delta_rows, "delta").exponent
    ok = record(report, 4, "kink-state offset scalings", {
        "dt exponent at delta=0.5": (within(e_dt, 3.0, 0.1), f"{e_dt:.4f} vs 3+-0.1"),
        "delta exponent at dt=1e-6": (within(e_delta, -4.0, 0.2), f"{e_delta:.4f} vs -4+-0.2"),
    }, time.perf_counter() - start, 60)
    assert ok


def test_criterion_5_zeno_contrast(report):
    start = time.perf_counter()
    gauss = make_initial_state("gaussian", (-1.0, 0.0), {"sigma": 0.05, "center": -0.5},
                               mesh_size=512)[0]
    kinked = make_initial_state("kinked-sine", mesh_size=512)[0]

    def totals(state):
        return [run_zeno(ZenoSpec(0.01, n, state, mesh_size=512)).total_detection
                for n in (50, 100)]

    g50, g100 = totals(gauss)
    k50, k100 = totals(kinked)
    rg, rk = g100 / g50, k100 / k50
    ok = record(report, 5, "Zeno contrast", {
        "interior gaussian N=100/N=50": (within(rg, 0.5, 0.15),
                                         f"{rg:.4f} ({g100:.3e}/{g50:.3e}) vs 0.5+-0.15"),
        "kinked-sine N=100/N=50": (abs(rk - 1) < 0.2,
                                   f"{rk:.4f} ({k100:.3e}/{k50:.3e}) change < 20%"),
    }, time.perf_counter() - start, 300)
    assert ok


def test_criterion_6_planar_regions(report):
    start = time.perf_counter()
    _, w = make_initial_state("kinked-sine", mesh_size=2048)
    scan = planar_scan(w, w, np.geomspace(1e-6, 1e-4, 8))
    worst = max(abs(r.partition_error) for r in scan.reports)
    ok = record(report, 6, "planar regions", {
        "p_B exponent": (within(scan.fit_B.exponent, 1.0, 0.05),
                         f"{scan.fit_B.exponent:.4f} vs 1+-0.05"),
        "p_C exponent": (within(scan.fit_C.exponent, 2.0, 0.1),
                         f"{scan.fit_C.exponent:.4f} vs 2+-0.1"),
        "partition": (worst <= 2e-6, f"max |p_A+p_B+p_C-1| = {worst:.2e} <= 2e-6"),
    }, time.perf_counter() - start, 60)
    assert ok


def test_criterion_7_oracle_equivalence(report, frozen):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for k in range(50):
        family = BUILT_IN[k % 4]
        _, w = make_initial_state(family, mesh_size=int(rng.choice([32, 64, 128])))
        convention = ("paper", "standard")[k % 2]
        dt = float(10 ** rng.uniform(-5, -1))
        lo, hi = w.nodes[0], w.nodes[-1]
        x = float(rng.uniform(lo - 0.5, hi + 0.5))
        fast = propagate_values(w, dt, convention, [x])[0]
        slow = propagate_oracle(w, dt, convention, x)
        worst = max(worst, abs(fast - slow))
    panel_worst = 0.0
    for p in frozen["random_panels"]:
        got = panel_moment(p["a"], p["b"], p["lam"], 0)
        panel_worst = max(panel_worst, abs(got - complex(*p["value"])))
    ok = record(report, 7, "oracle equivalence", {
        "50 propagation samples": (worst <= 1e-8, f"max |diff| = {worst:.2e} <= 1e-8"),
        "100 Fresnel panels": (panel_worst <= 1e-10, f"max |diff| = {panel_worst:.2e} <= 1e-10"),
    }, time.perf_counter() - start, 300)
    assert ok


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    a = np.where(u > 0, np.exp(-1 / np.maximum(u, 1e-300)), 0.0)
    b = np.where(u < 1, np.exp(-1 / np.maximum(1 - u, 1e-300)), 0.0)
    return a / (a + b)


def test_criterion_8_structural_invariants(report):
    start = time.perf_counter()
    worst_norm, worst_at = 0.0, ""
    for family in BUILT_IN:
        _, w = make_initial_state(family, mesh_size=2048)
        for convention in ("paper", "standard"):
            for dt in (1e-6, 1e-4, 1e-2, 1.0):
                esc = escape_probability(w, dt, 0.0, "both-rays", convention).probability
                dev = abs(inside_probability(w, dt, convention) + esc - 1)
                if dev > worst_norm:
                    worst_norm, worst_at = dev, f"{family}/{convention}/dt={dt:g}"

    worst_rescale = 0.0
    for family in BUILT_IN:
        _, w = make_initial_state(family, mesh_size=256)
        x = np.linspace(w.nodes[0] - 1, w.nodes[-1] + 1, 41)
        for t in (1e-6, 1e-3, 0.1):
            a = np.abs(propagate_values(w, 4 * t, "paper", x)) ** 2
            b = np.abs(propagate_values(w, t, "standard", x)) ** 2
            worst_rescale = max(worst_rescale, float(np.max(np.abs(a - b))))

    # right-ray escape with and without the left boundary, the latter
    # removed by a smooth cutoff that leaves the right half untouched
    _, w = make_initial_state("kinked-sine", mesh_size=2048)
    ref = SampledWaveFunction(w.nodes, w.values * _smoothstep((w.nodes + 0.75) / 0.5))
    pts = [(dt, abs(escape_difference(w, ref, dt))) for dt in np.geomspace(1e-5, 1e-3, 5)]
    cross = fit_power_law(pts)

    ok = record(report, 8, "structural invariants", {
        "unitarity": (worst_norm <= 1e-6, f"max |norm-1| = {worst_norm:.2e} ({worst_at}) <= 1e-6"),
        "convention rescale": (worst_rescale <= 1e-8, f"max diff = {worst_rescale:.2e} <= 1e-8"),
        "left-boundary cross-talk exponent": (cross.exponent >= 1.4,
                                              f"{cross.exponent:.3f} >= 1.4 (r2 {cross.r_squared:.2f})"),
    }, time.perf_counter() - start, 120)
    assert ok


def test_criterion_9_determinism(report, tmp_path):
    common = ["--dt-min", "1e-6", "--dt-max", "1e-4", "--points", "4", "--mesh-size", "256"]
    runs = {
        "escape-scan": ["escape-scan", "--state", "kinked-sine", *common],
        "offset-scan": ["offset-scan", "--state", "uniform-jump", *common,
                        "--delta-min", "0.1", "--delta-max", "0.8", "--delta-points", "4"],
        "zeno": ["zeno", "--state", "kinked-sine", "--T", "0.001", "--N", "2,4",
                 "--mesh-size", "128"],
        "planar": ["planar", "--state-x", "kinked-sine", "--state-y", "smooth-bump", *common],
        "escape-scan json": ["escape-scan", "--state", "uniform-jump", *common,
                             "--format", "json"],
    }
    checks = {}
    for name, args in runs.items():
        outs = []
        for k in range(2):
            path = tmp_path / f"{name.replace(' ', '_')}_{k}.out"
            assert cli_main([*args, "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        checks[name] = (outs[0] == outs[1], "identical" if outs[0] == outs[1] else "differ")
    # fit re-reads a stored report
    source = tmp_path / "escape-scan_0.out"
    fits = []
    for k in range(2):
        path = tmp_path / f"fit_{k}.out"
        assert cli_main(["fit", "--input", str(source), "--out", str(path)]) == 0
        fits.append(path.read_bytes())
    checks["fit"] = (fits[0] == fits[1], "identical" if fits[0] == fits[1] else "differ")
    json.loads((tmp_path / "escape-scan_json_0.out").read_text())
    ok = record(report, 9, "determinism", checks, 0.0)
    assert ok
