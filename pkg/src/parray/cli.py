"""Command-line entry point: ``parray {pattern,montecarlo,groundsweep,optimize}``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical or
solver error.  ``PARRAY_LOG`` sets the log level (default WARNING).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .array_solver import far_field, solve_currents
from .config import SCHEMA_VERSION, ScenarioConfig, load_config
from .errors import AccuracyError, ConfigError, ParrayError
from .ga_optimizer import compare_designs, evolve
from .metrics import MAX_GRID_STEP, pattern_metrics
from .uncertainty import (GroundSweepSpec, binned_means, evaluate, run_monte_carlo,
                          sweep_ground_params)

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL = 0, 2, 3, 4
DB_FLOOR = -300.0

log = logging.getLogger("parray")


def fmt(x) -> str:
    """Nine significant digits; the one float format used in every output."""
    return f"{x:.9g}"


def _clean(obj):
    """Round floats to nine significant digits; NaN becomes null."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        return float(fmt(obj))
    if isinstance(obj, np.floating):
        return _clean(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), indent=1, allow_nan=False) + "\n"


def _write(path: Path, text: str):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def cmd_pattern(cfg: ScenarioConfig, out: Path, threads: int):
    geom = cfg.geometry
    pat = far_field(geom, solve_currents(geom), cfg.grid_deg, cfg.grid_deg)
    power = np.maximum(pat.power_db, DB_FLOOR)
    _write(out, dumps_json({
        "schema_version": SCHEMA_VERSION,
        "command": "pattern",
        "theta_deg": pat.theta_grid,
        "phi_deg": pat.phi_grid,
        "power_db": power,
        "metrics": pattern_metrics(pat).as_dict(),
    }))


def cmd_montecarlo(cfg: ScenarioConfig, out: Path, threads: int):
    mc = cfg.montecarlo
    if mc is None:
        raise ConfigError("montecarlo: block required for this command")
    base = cfg.geometry
    d0, beam0, _ = evaluate(base, (90.0, 0.0), cfg.grid_deg, cfg.grid_deg)
    intended = mc.intended_beam or (beam0.theta, beam0.phi)
    records = run_monte_carlo(base, mc.spec, intended, cfg.grid_deg, cfg.grid_deg, workers=threads)
    header = ["trial", "mean_position_error_m", "orientation_spread_deg",
              "directivity_db", "beam_error_deg", "status"]
    rows = [(r.trial, r.mean_position_error, r.orientation_spread, r.directivity_db,
             r.beam_error_deg, r.status) for r in records]
    text = _csv(header, rows)
    ok = [r for r in records if r.ok]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "montecarlo",
        "trials": len(records),
        "failed": len(records) - len(ok),
        "unperturbed_directivity_db": d0,
        "intended_beam_deg": list(intended),
        "mean_directivity_db": float(np.mean([r.directivity_db for r in ok])) if ok else None,
        "mean_beam_error_deg": float(np.mean([r.beam_error_deg for r in ok])) if ok else None,
        "by_position_error_m": binned_means(records, mc.position_bin_edges_m),
        "by_orientation_spread_deg": binned_means(records, mc.spread_bin_edges_deg,
                                                  key=lambda r: r.orientation_spread),
    }
    _write(out, text)
    _write(summary_path(out), dumps_json(summary))


def summary_path(out: Path) -> Path:
    return out.with_name(out.name + ".summary.json")


def cmd_groundsweep(cfg: ScenarioConfig, out: Path, threads: int):
    if cfg.groundsweep is None:
        raise ConfigError("groundsweep: block required for this command")
    eps, sig, beam = cfg.groundsweep
    spec = GroundSweepSpec(eps, sig, cfg.geometry)
    rows = sweep_ground_params(spec, beam, cfg.grid_deg, cfg.grid_deg, workers=threads)
    _write(out, _csv(["epsilon_r", "sigma_s_per_m", "directivity_db", "beam_error_deg"],
                     [(r.epsilon_r, r.sigma, r.directivity_db, r.beam_error_deg) for r in rows]))


def cmd_optimize(cfg: ScenarioConfig, out: Path, threads: int):
    op = cfg.optimize
    if op is None:
        raise ConfigError("optimize: block required for this command")
    scene = replace(op.scene, theta_res=cfg.grid_deg, phi_res=cfg.grid_deg)
    result = evolve(replace(op.ga, workers=threads), op.objective, scene)
    start = scene.template_design()
    lam = cfg.geometry.wavelength
    report = compare_designs(result.best, start, scene)
    best_wl = result.best.in_wavelengths(lam)
    _write(out, dumps_json({
        "schema_version": SCHEMA_VERSION,
        "command": "optimize",
        "best_design": {
            "spacings_m": result.best.spacings,
            "spacings_wl": best_wl.spacings,
            "lengths_m": result.best.lengths,
            "lengths_wl": best_wl.lengths,
        },
        "best_fitness": result.best_fitness,
        "evaluations": result.evaluations,
        "trace": [{"generation": g.generation, "best_fitness": g.best_fitness,
                   "mean_fitness": g.mean_fitness} for g in result.trace],
        "comparison": {
            "optimized": report["a"].as_dict(),
            "starting_design": report["b"].as_dict(),
            "lone_driven": report["lone_driven"].as_dict(),
        },
    }))


COMMANDS = {
    "pattern": cmd_pattern,
    "montecarlo": cmd_montecarlo,
    "groundsweep": cmd_groundsweep,
    "optimize": cmd_optimize,
}


def check_grid(step: float):
    if abs(180.0 / step - round(180.0 / step)) > 1e-9 or step > MAX_GRID_STEP:
        raise ConfigError(f"grid_deg: {step:g} must divide 180 and be at most {MAX_GRID_STEP:g}")


def _log_level():
    name = os.environ.get("PARRAY_LOG", "WARNING").upper()
    return name if isinstance(logging.getLevelName(name), int) else "WARNING"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parray", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path, help="YAML or JSON scenario file")
    p.add_argument("--out", required=True, type=Path, help="output file")
    p.add_argument("--threads", type=int, default=1, help="worker threads (0 = auto)")
    p.add_argument("--grid-deg", type=float, default=None,
                   help="pattern grid step in degrees (overrides the config)")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=_log_level(),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 0:
            raise ConfigError("--threads must be >= 0")
        cfg = load_config(args.config)
        if args.grid_deg is not None:
            if not args.grid_deg > 0:
                raise ConfigError("--grid-deg must be positive")
            cfg = replace(cfg, grid_deg=args.grid_deg)
        check_grid(cfg.grid_deg)
        COMMANDS[args.command](cfg, args.out, args.threads)
    except (ConfigError, AccuracyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ParrayError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
