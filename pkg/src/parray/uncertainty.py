"""Monte Carlo pose-error studies and ground-parameter sweeps.

Every trial draws from its own generator seeded with ``(seed, trial)``, so a
record depends only on the spec and its index, never on scheduling.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .array_solver import ArrayGeometry, GroundModel, far_field, solve_currents
from .errors import GeometryError, ModelValidityError, ParrayError
from .metrics import beam_direction, angular_distance, directivity

MAX_REDRAWS = 100
MAX_FAILURE_FRACTION = 0.10
POSITION_LIMIT_WL = 0.2
ORIENTATION_LIMIT_DEG = 10.0


@dataclass(frozen=True)
class PerturbationSpec:
    position_error_max: float = 0.0        # m, per axis (x and y)
    orientation_error_max: float = 0.0     # deg, polar tilt offset
    target_elements: tuple[int, ...] = ()
    trials: int = 1
    seed: int = 0
    allow_out_of_range: bool = False

    def __post_init__(self):
        object.__setattr__(self, "target_elements", tuple(int(i) for i in self.target_elements))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.position_error_max < 0 or self.orientation_error_max < 0:
            raise ValueError("error bounds must be non-negative")

    def validate(self, base: ArrayGeometry):
        n = len(base.elements)
        bad = [i for i in self.target_elements if not 0 <= i < n]
        if bad:
            raise GeometryError(f"target elements {bad} out of range for {n} elements")
        if self.allow_out_of_range:
            return
        if self.position_error_max > POSITION_LIMIT_WL * base.wavelength + 1e-12:
            raise ValueError(f"position_error_max exceeds {POSITION_LIMIT_WL} wavelengths")
        if self.orientation_error_max > ORIENTATION_LIMIT_DEG:
            raise ValueError(f"orientation_error_max exceeds {ORIENTATION_LIMIT_DEG} deg")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    offsets: tuple[tuple[float, float, float], ...]   # (dx m, dy m, signed tilt deg) per target
    mean_position_error: float
    orientation_spread: float
    directivity_db: float = math.nan
    beam_error_deg: float = math.nan
    beam_theta_deg: float = math.nan
    beam_phi_deg: float = math.nan
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _draw(base: ArrayGeometry, spec: PerturbationSpec, trial_index: int):
    rng = np.random.default_rng([spec.seed, trial_index])
    pmax, omax = spec.position_error_max, spec.orientation_error_max
    last_err = None
    for _ in range(MAX_REDRAWS):
        els = list(base.elements)
        offsets = []
        for i in spec.target_elements:
            dx, dy = rng.uniform(-1.0, 1.0, 2) * pmax
            tilt = rng.uniform(-1.0, 1.0) * omax
            az = rng.uniform(0.0, 360.0)
            e = els[i]
            polar = abs(tilt)
            tilt_az = 0.0 if polar == 0.0 else (az + (180.0 if tilt < 0 else 0.0)) % 360.0
            x, y, z = e.position
            els[i] = e.with_changes(position=(x + dx, y + dy, z), tilt=(polar, tilt_az))
            offsets.append((float(dx), float(dy), float(tilt)))
        try:
            return base.replace(elements=tuple(els)), tuple(offsets)
        except GeometryError as exc:
            last_err = exc
    raise GeometryError(f"trial {trial_index}: no valid draw in {MAX_REDRAWS} attempts ({last_err})")


def perturb_geometry(base: ArrayGeometry, spec: PerturbationSpec, trial_index: int) -> ArrayGeometry:
    """Randomly displaced/tilted copy of ``base``; deterministic in (seed, trial_index)."""
    spec.validate(base)
    return _draw(base, spec, trial_index)[0]


def evaluate(geom: ArrayGeometry, intended_beam, theta_res=1.0, phi_res=1.0):
    """(directivity dB, beam direction, beam error deg) of one geometry."""
    sol = solve_currents(geom)
    pat = far_field(geom, sol, theta_res, phi_res)
    beam = beam_direction(pat)
    return directivity(pat), beam, angular_distance(beam, intended_beam)


def _run_trial(base, spec, intended_beam, index, theta_res, phi_res):
    try:
        geom, offsets = _draw(base, spec, index)
    except ParrayError as exc:
        return TrialRecord(index, (), math.nan, math.nan, status=f"failed: {exc}")
    mags = [math.hypot(dx, dy) for dx, dy, _ in offsets]
    tilts = [t for _, _, t in offsets]
    mpe = float(np.mean(mags)) if mags else 0.0
    spread = float(np.std(tilts)) if tilts else 0.0
    try:
        d, beam, err = evaluate(geom, intended_beam, theta_res, phi_res)
    except ParrayError as exc:
        return TrialRecord(index, offsets, mpe, spread, status=f"failed: {exc}")
    return TrialRecord(index, offsets, mpe, spread, d, err, beam.theta, beam.phi)


def run_monte_carlo(base: ArrayGeometry, spec: PerturbationSpec, intended_beam,
                    theta_res: float = 1.0, phi_res: float = 1.0, workers: int = 1) -> list[TrialRecord]:
    """Perturb, solve and measure ``spec.trials`` times; records ordered by trial."""
    spec.validate(base)

    def one(i):
        return _run_trial(base, spec, intended_beam, i, theta_res, phi_res)

    if workers == 1:
        records = [one(i) for i in range(spec.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers or None) as pool:
            records = list(pool.map(one, range(spec.trials)))
    failed = sum(not r.ok for r in records)
    if failed > MAX_FAILURE_FRACTION * len(records):
        raise ModelValidityError(
            f"{failed} of {len(records)} trials failed; first: "
            f"{next(r.status for r in records if not r.ok)}")
    return records


def binned_means(records, edges, key=lambda r: r.mean_position_error):
    """Mean directivity / beam error of successful trials per bin of ``key``."""
    rows = []
    ok = [r for r in records if r.ok]
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = [r for r in ok if lo <= key(r) < hi]
        d = np.array([r.directivity_db for r in sel])
        e = np.array([r.beam_error_deg for r in sel])
        n = len(sel)
        rows.append({
            "bin_lo": float(lo), "bin_hi": float(hi), "n": n,
            "mean_directivity_db": float(d.mean()) if n else None,
            "se_directivity_db": float(d.std(ddof=1) / math.sqrt(n)) if n > 1 else None,
            "mean_beam_error_deg": float(e.mean()) if n else None,
        })
    return rows


@dataclass(frozen=True)
class GroundSweepSpec:
    epsilon_r_values: tuple[float, ...]
    sigma_values: tuple[float, ...]
    geometry: ArrayGeometry = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "epsilon_r_values", tuple(float(v) for v in self.epsilon_r_values))
        object.__setattr__(self, "sigma_values", tuple(float(v) for v in self.sigma_values))
        if any(v < 1 for v in self.epsilon_r_values) or any(v < 0 for v in self.sigma_values):
            raise ValueError("sweep needs epsilon_r >= 1 and sigma >= 0")
        if not self.epsilon_r_values or not self.sigma_values:
            raise ValueError("sweep lists must be non-empty")


@dataclass(frozen=True)
class GroundSweepRow:
    epsilon_r: float
    sigma: float
    directivity_db: float
    beam_error_deg: float
    beam_theta_deg: float
    beam_phi_deg: float


def sweep_ground_params(spec: GroundSweepSpec, intended_beam=(90.0, 0.0),
                        theta_res: float = 1.0, phi_res: float = 1.0,
                        workers: int = 1) -> list[GroundSweepRow]:
    """Cartesian sweep over (epsilon_r, sigma); rows in epsilon-major order."""
    grid = list(itertools.product(spec.epsilon_r_values, spec.sigma_values))

    def one(point):
        er, sg = point
        geom = spec.geometry.replace(ground=GroundModel.homogeneous(er, sg))
        d, beam, err = evaluate(geom, intended_beam, theta_res, phi_res)
        return GroundSweepRow(er, sg, d, err, beam.theta, beam.phi)

    if workers == 1:
        return [one(p) for p in grid]
    with ThreadPoolExecutor(max_workers=workers or None) as pool:
        return list(pool.map(one, grid))
