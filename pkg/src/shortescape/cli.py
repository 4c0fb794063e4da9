"""Command-line driver for escape sweeps, offset scans, Zeno runs and fits.

Every report starts with ``#`` lines holding the resolved configuration,
followed by the records (CSV header row plus rows, or a JSON document),
and ends with a fitted summary.  Numbers carry 12 significant digits.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 I/O failure.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .escape import (
    DivergentMomentError,
    TailTooLargeError,
    analytic_linear_escape,
    escape_probability,
    fit_power_law,
    offset_scan,
)
from .planar import planar_scan
from .propagator import OracleConvergenceError
from .wavefunc import FAMILIES, make_initial_state
from .zeno import MeshResolutionError, ZenoSpec, run_zeno

__all__ = ["main", "build_parser", "ConfigError"]

DIGITS = 12

# defaults applied after command line and config file are merged
DEFAULTS = {
    "state": "kinked-sine",
    "state_x": "kinked-sine",
    "state_y": "kinked-sine",
    "convention": "paper",
    "dt_min": 1e-6,
    "dt_max": 1e-4,
    "points": 8,
    "delta": 0.0,
    "delta_min": 0.05,
    "delta_max": 0.8,
    "delta_points": 6,
    "mesh_size": 2048,
    "format": "csv",
    "sigma": None,
    "center": None,
    "support": None,
    "T": 0.01,
    "N": "25,50,100",
    "x_col": "dt",
    "y_col": "escape_total",
}

NUMERICAL_ERRORS = (TailTooLargeError, DivergentMomentError, OracleConvergenceError,
                    MeshResolutionError, FloatingPointError, ArithmeticError)


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), f".{DIGITS}g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(format(v, f".{DIGITS}g")) if math.isfinite(v) else None
    return v


def _common(p, *, state=True, sweep=True):
    if state:
        p.add_argument("--state", choices=FAMILIES)
        p.add_argument("--sigma", type=float, help="gaussian width")
        p.add_argument("--center", type=float, help="gaussian center")
        p.add_argument("--support", help="support as 'left,right'")
    p.add_argument("--convention", choices=("paper", "standard"))
    if sweep:
        p.add_argument("--dt-min", type=float)
        p.add_argument("--dt-max", type=float)
        p.add_argument("--points", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--mesh-size", type=int)
    p.add_argument("--out", help="report path (standard output when omitted)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--config", help="key=value file; command-line flags win")


def build_parser():
    parser = _Parser(prog="shortescape", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("escape-scan", help="escape probability against dt")
    _common(p)

    p = sub.add_parser("offset-scan", help="escape beyond an offset, dt by delta grid")
    _common(p)
    p.add_argument("--delta-min", type=float)
    p.add_argument("--delta-max", type=float)
    p.add_argument("--delta-points", type=int)

    p = sub.add_parser("zeno", help="repeated measurements on the support")
    _common(p, sweep=False)
    p.add_argument("--T", type=float, help="total time")
    p.add_argument("--N", help="comma-separated step counts")

    p = sub.add_parser("planar", help="square-support region probabilities")
    _common(p, state=False)
    p.add_argument("--state-x", choices=FAMILIES)
    p.add_argument("--state-y", choices=FAMILIES)

    p = sub.add_parser("fit", help="power-law fit of a stored report")
    p.add_argument("--input", help="CSV report to read")
    p.add_argument("--x-col")
    p.add_argument("--y-col")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--config")
    return parser


def _read_config(path, known):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for number, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
        out[key] = value
    return out


def _resolve(args, parser):
    """Merge flags over the config file over defaults; validate."""
    cfg = {k: v for k, v in vars(args).items() if k not in ("config",)}
    known = set(cfg) - {"command"}
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        types = {a.dest: a.type for a in sub._actions}
        for key, raw in _read_config(args.config, known).items():
            if cfg[key] is None:
                conv = types.get(key) or str
                try:
                    cfg[key] = conv(raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    for key in known:
        if cfg[key] is None and key in DEFAULTS:
            cfg[key] = DEFAULTS[key]
    if "points" in cfg and cfg["points"] < 1:
        raise ConfigError("--points must be at least 1")
    if "dt_min" in cfg:
        if not 0 < cfg["dt_min"] <= cfg["dt_max"]:
            raise ConfigError("need 0 < dt-min <= dt-max")
    if cfg.get("delta") is not None and cfg["delta"] < 0:
        raise ConfigError("--delta must be nonnegative")
    if cfg.get("mesh_size") is not None and cfg["mesh_size"] < 16:
        raise ConfigError("--mesh-size must be at least 16")
    if "delta_points" in cfg:
        if cfg["delta_points"] < 1 or not 0 < cfg["delta_min"] <= cfg["delta_max"]:
            raise ConfigError("bad delta range")
    if "T" in cfg and not cfg["T"] > 0:
        raise ConfigError("--T must be positive")
    return cfg


def _dts(cfg):
    return np.geomspace(cfg["dt_min"], cfg["dt_max"], cfg["points"])


def _state(cfg, family):
    support = None
    if cfg.get("support"):
        try:
            left, right = (float(v) for v in cfg["support"].split(","))
        except ValueError as exc:
            raise ConfigError("--support must be 'left,right'") from exc
        support = (left, right)
    params = {}
    if family == "gaussian":
        # without an explicit choice, the interior Gaussian on (-1, 0)
        params = {"sigma": cfg.get("sigma") or 0.05,
                  "center": -0.5 if cfg.get("center") is None else cfg["center"]}
        if support is None and cfg.get("sigma") is None:
            support = (-1.0, 0.0)
    elif family == "custom-samples":
        raise ConfigError("custom-samples cannot be built from the command line")
    try:
        return make_initial_state(family, support, params, cfg["mesh_size"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fit_summary(prefix, points):
    pts = [(x, y) for x, y in points if x > 0 and y > 0]
    if len(pts) < 4:
        return {f"{prefix}_exponent": float("nan")}
    fit = fit_power_law(pts)
    return {f"{prefix}_exponent": fit.exponent, f"{prefix}_prefactor": fit.prefactor,
            f"{prefix}_r_squared": fit.r_squared}


def cmd_escape_scan(cfg):
    state, w = _state(cfg, cfg["state"])
    bd = state.boundary_data
    rows = []
    for dt in _dts(cfg):
        res = escape_probability(w, dt, cfg["delta"], "both-rays", cfg["convention"])
        pred = analytic_linear_escape(bd.get("dpsi_right", 0.0), bd.get("dpsi_left", 0.0), dt)
        rows.append({
            "dt": dt,
            "escape_right": res.parts["right"][0],
            "escape_left": res.parts["left"][0],
            "escape_total": res.probability,
            "analytic_prediction": pred,
            "ratio": res.probability / pred if pred > 0 else float("nan"),
            "est_error": res.est_error,
        })
    summary = _fit_summary("dt", [(r["dt"], r["escape_total"]) for r in rows])
    return rows, summary


def cmd_offset_scan(cfg):
    state, w = _state(cfg, cfg["state"])
    deltas = np.geomspace(cfg["delta_min"], cfg["delta_max"], cfg["delta_points"])
    table = offset_scan(w, _dts(cfg), deltas, cfg["convention"])
    rows = [{"dt": r.dt, "delta": r.delta, "escape_right": r.probability,
             "est_error": r.est_error, "boundary_layer": r.boundary_layer} for r in table]
    summary = {}
    for dt in sorted({r["dt"] for r in rows}):
        pts = [(r["delta"], r["escape_right"]) for r in rows if r["dt"] == dt]
        summary.update(_fit_summary(f"delta_at_dt={_fmt(dt)}", pts))
    for delta in sorted({r["delta"] for r in rows}):
        pts = [(r["dt"], r["escape_right"]) for r in rows if r["delta"] == delta]
        summary.update(_fit_summary(f"dt_at_delta={_fmt(delta)}", pts))
    return rows, summary


def cmd_zeno(cfg):
    try:
        steps = sorted({int(v) for v in str(cfg["N"]).split(",") if v.strip()})
    except ValueError as exc:
        raise ConfigError("--N must be comma-separated integers") from exc
    if not steps or steps[0] < 1:
        raise ConfigError("--N values must be positive")
    mesh = cfg.get("mesh_size") or 512
    state, _ = _state(dict(cfg, mesh_size=16), cfg["state"])
    rows = []
    for n in steps:
        run = run_zeno(ZenoSpec(cfg["T"], n, state, cfg["convention"], mesh))
        rows.append({"N": n, "dt": cfg["T"] / n,
                     "total_detection": run.total_detection,
                     "first_step_escape": run.per_step_escape[0],
                     "last_step_escape": run.per_step_escape[-1],
                     "final_state_norm": run.final_state_norm})
    summary = _fit_summary("N", [(r["N"], r["total_detection"]) for r in rows])
    for a, b in zip(rows, rows[1:]):
        summary[f"ratio_N={b['N']}/N={a['N']}"] = b["total_detection"] / a["total_detection"]
    return rows, summary


def cmd_planar(cfg):
    wx = _state(cfg, cfg["state_x"])[1]
    wy = wx if cfg["state_y"] == cfg["state_x"] else _state(cfg, cfg["state_y"])[1]
    scan = planar_scan(wx, wy, _dts(cfg), cfg["convention"])
    rows = []
    for r in scan.reports:
        b = r.breakdown
        rows.append({"dt": r.dt, "p_A": r.p_A, "p_B": r.p_B, "p_C": r.p_C,
                     "p_B_x": b["B:x+"] + b["B:x-"], "p_B_y": b["B:y+"] + b["B:y-"],
                     "partition_error": r.partition_error})
    summary = {}
    for key in ("p_B", "p_C", "p_B_x", "p_B_y"):
        summary.update(_fit_summary(key, [(r["dt"], r[key]) for r in rows]))
    return rows, summary


def cmd_fit(cfg):
    if not cfg.get("input"):
        raise ConfigError("--input is required")
    try:
        with open(cfg["input"], encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {cfg['input']}: {exc}") from exc
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.DictReader(body)
    cols = reader.fieldnames or []
    for col in (cfg["x_col"], cfg["y_col"]):
        if col not in cols:
            raise ConfigError(f"column {col!r} not in {cols}")
    try:
        pts = [(float(r[cfg["x_col"]]), float(r[cfg["y_col"]])) for r in reader]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric data in {cfg['input']}") from exc
    try:
        fit = fit_power_law(pts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [{"x": x, "y": y, "model": fit(x)} for x, y in fit.points]
    summary = {"exponent": fit.exponent, "prefactor": fit.prefactor,
               "r_squared": fit.r_squared}
    print(f"exponent {_fmt(fit.exponent)} prefactor {_fmt(fit.prefactor)} "
          f"r_squared {_fmt(fit.r_squared)}")
    return rows, summary


COMMANDS = {
    "escape-scan": cmd_escape_scan,
    "offset-scan": cmd_offset_scan,
    "zeno": cmd_zeno,
    "planar": cmd_planar,
    "fit": cmd_fit,
}


def render(cfg, rows, summary):
    """Report text for ``rows`` and ``summary`` in ``cfg['format']``."""
    header = [f"# shortescape {cfg['command']}"]
    header += [f"# {k} = {_fmt(v)}" for k, v in sorted(cfg.items())
               if k not in ("command", "out")]
    if cfg.get("format") == "json":
        doc = {"config": {k: _json_value(v) for k, v in sorted(cfg.items())
                          if k not in ("command", "out")},
               "records": [{k: _json_value(v) for k, v in r.items()} for r in rows],
               "summary": {k: _json_value(v) for k, v in summary.items()}}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write("\n".join(header) + "\n")
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for r in rows:
            writer.writerow([_fmt(v) for v in r.values()])
    for k, v in summary.items():
        buf.write(f"# summary {k} = {_fmt(v)}\n")
    return buf.getvalue()


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve(args, parser)
        rows, summary = COMMANDS[cfg["command"]](cfg)
        text = render(cfg, rows, summary)
    except ConfigError as exc:
        print(f"shortescape: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"shortescape: I/O error: {exc}", file=sys.stderr)
        return 4
    except NUMERICAL_ERRORS as exc:
        print(f"shortescape: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"shortescape: configuration error: {exc}", file=sys.stderr)
        return 2
    out = cfg.get("out")
    try:
        if out:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"shortescape: I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
