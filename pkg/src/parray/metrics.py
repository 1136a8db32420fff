"""Figures of merit of a sampled radiation pattern.

All angles in and out are degrees (polar theta, azimuth phi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .array_solver import RadiationPattern
from .errors import AccuracyError, ContractError

MAX_GRID_STEP = 5.0
PLATEAU_DB = 0.01
PLATEAU_WIDTH = 10.0


class BeamDirection(NamedTuple):
    theta: float
    phi: float
    ambiguous: bool = False


@dataclass(frozen=True)
class PatternMetrics:
    directivity_db: float
    beam_azimuth_deg: float
    beam_elevation_deg: float
    beamwidth_az_deg: float
    side_lobe_level_db: float | None
    beam_ambiguous: bool = False

    def as_dict(self):
        return {
            "directivity_db": self.directivity_db,
            "beam_azimuth_deg": self.beam_azimuth_deg,
            "beam_elevation_deg": self.beam_elevation_deg,
            "beamwidth_az_deg": self.beamwidth_az_deg,
            "side_lobe_level_db": self.side_lobe_level_db,
        }


def _sin_weights(theta_deg):
    """Weights w_i with sum_i w_i f_i = integral of (piecewise-linear f) sin(theta)."""
    t = np.radians(theta_deg)
    a, b = t[:-1], t[1:]
    h = b - a
    left = np.cos(a) - (np.sin(b) - np.sin(a)) / h     # hat centred on a
    right = (np.sin(b) - np.sin(a)) / h - np.cos(b)    # hat centred on b
    w = np.zeros_like(t)
    w[:-1] += left
    w[1:] += right
    return w


def _phi_weights(phi_deg):
    p = np.radians(phi_deg)
    w = np.zeros_like(p)
    h = np.diff(p)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def directivity(pat: RadiationPattern) -> float:
    """Peak directivity in dBi, 4 pi over the integrated normalised intensity."""
    if pat.theta_step > MAX_GRID_STEP or pat.phi_step > MAX_GRID_STEP:
        raise AccuracyError(
            f"grid steps ({pat.theta_step:g}, {pat.phi_step:g}) deg exceed {MAX_GRID_STEP:g} deg")
    wt = _sin_weights(pat.theta_grid)
    wp = _phi_weights(pat.phi_grid)
    total = float(wt @ pat.intensity @ wp)
    return 10.0 * math.log10(4.0 * math.pi / total)


def _parabolic_offset(ym, y0, yp):
    den = ym - 2.0 * y0 + yp
    if den >= 0:
        return 0.0
    return float(np.clip(0.5 * (ym - yp) / den, -0.5, 0.5))


def _plateau_width(row_db, idx, step, circular):
    n = len(row_db)
    count = 1
    for direction in (-1, 1):
        j = idx
        for _ in range(n - 1):
            j = j + direction
            if circular:
                j %= n
            elif not 0 <= j < n:
                break
            if j == idx or row_db[j] < -PLATEAU_DB:
                break
            count += 1
        if count >= n:
            break
    return min(count, n) * step


def beam_direction(pat: RadiationPattern) -> BeamDirection:
    """Main-beam direction refined by parabolic interpolation.

    Ties go to the smallest phi, then the smallest theta.  ``ambiguous`` is
    set when the peak is a plateau (within 0.01 dB) wider than 10 deg.
    """
    db = pat.power_db[:, :-1]   # drop the duplicated phi = +180 column
    flat = int(np.argmax(db.T))  # phi-major order implements the tie-break
    jp, it = divmod(flat, db.shape[0])
    nphi = db.shape[1]
    theta = float(pat.theta_grid[it])
    phi = float(pat.phi_grid[jp])
    if 0 < it < db.shape[0] - 1:
        theta += pat.theta_step * _parabolic_offset(db[it - 1, jp], db[it, jp], db[it + 1, jp])
    phi += pat.phi_step * _parabolic_offset(db[it, (jp - 1) % nphi], db[it, jp], db[it, (jp + 1) % nphi])
    if phi >= 180.0:
        phi -= 360.0
    wide_phi = _plateau_width(db[it], jp, pat.phi_step, True) > PLATEAU_WIDTH
    wide_theta = _plateau_width(db[:, jp], it, pat.theta_step, False) > PLATEAU_WIDTH
    return BeamDirection(theta, phi, wide_phi or wide_theta)


def _unit(theta, phi):
    t, p = math.radians(theta), math.radians(phi)
    return np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])


def angular_distance(a, b) -> float:
    """Great-circle angle (deg) between two (theta, phi) directions."""
    u, v = _unit(*a[:2]), _unit(*b[:2])
    return math.degrees(math.atan2(np.linalg.norm(np.cross(u, v)), float(u @ v)))


def beam_direction_error(pat: RadiationPattern, intended) -> float:
    return angular_distance(beam_direction(pat), intended)


def _azimuth_cut(pat, theta):
    it = int(np.argmin(np.abs(pat.theta_grid - theta)))
    return pat.power_db[it, :-1]


def beamwidth_az(pat: RadiationPattern, beam: BeamDirection | None = None) -> float:
    """-3 dB width of the azimuth cut through the main beam."""
    beam = beam or beam_direction(pat)
    row = _azimuth_cut(pat, beam.theta)
    row = row - row.max()
    n = len(row)
    jp = int(np.argmax(row))
    if np.all(row >= -3.0):
        return 360.0
    edges = []
    for direction in (-1, 1):
        j = jp
        while row[(j + direction) % n] >= -3.0:
            j += direction
        a, b = row[j % n], row[(j + direction) % n]
        frac = (a + 3.0) / (a - b)
        edges.append((j + direction * frac - jp) * pat.phi_step)
    return float(edges[1] - edges[0])


def side_lobe_level(pat: RadiationPattern, beam: BeamDirection | None = None) -> float | None:
    """Highest lobe outside the main beam on the azimuth cut, in dB (<= 0).

    The main beam spans the contiguous samples above -3 dB around the peak,
    extended outward to the first local minimum on each side.  Returns None
    when nothing outside the main beam is a local maximum.
    """
    beam = beam or beam_direction(pat)
    row = _azimuth_cut(pat, beam.theta)
    row = row - row.max()
    n = len(row)
    jp = int(np.argmax(row))
    in_main = np.zeros(n, dtype=bool)
    in_main[jp] = True
    for direction in (-1, 1):
        j = jp
        for _ in range(n):
            nxt = (j + direction) % n
            if in_main[nxt]:
                break
            if row[nxt] >= -3.0 or row[nxt] <= row[j % n]:
                in_main[nxt] = True
                j = nxt
            else:
                break
    if in_main.all():
        return None
    best = None
    for j in np.flatnonzero(~in_main):
        left, right = row[(j - 1) % n], row[(j + 1) % n]
        if row[j] >= left and row[j] >= right and (row[j] > left or row[j] > right):
            best = row[j] if best is None else max(best, row[j])
    if best is None:
        return None
    return float(min(best, 0.0))


def _field_db_at(pat: RadiationPattern, direction) -> float:
    mag2 = np.abs(pat.e_theta) ** 2 + np.abs(pat.e_phi) ** 2
    theta, phi = direction[:2]
    phi = (phi + 180.0) % 360.0 - 180.0
    interp = RegularGridInterpolator((pat.theta_grid, pat.phi_grid), mag2)
    val = float(interp([[theta, phi]])[0])
    return 10.0 * math.log10(val)


def relative_gain(pat: RadiationPattern, ref: RadiationPattern, direction) -> float:
    """Gain of ``pat`` over ``ref`` in ``direction`` at equal input power (dB)."""
    if pat.input_power is None or ref.input_power is None:
        raise ContractError("relative gain needs patterns computed from a solved drive (input power)")
    if not (pat.input_power > 0 and ref.input_power > 0):
        raise ContractError("input power must be positive")
    def level(p):
        return (_field_db_at(p, direction) + 20.0 * math.log10(abs(p.drive_voltage))
                - 10.0 * math.log10(p.input_power))
    return level(pat) - level(ref)


def pattern_metrics(pat: RadiationPattern) -> PatternMetrics:
    beam = beam_direction(pat)
    return PatternMetrics(
        directivity_db=directivity(pat),
        beam_azimuth_deg=beam.phi,
        beam_elevation_deg=beam.theta,
        beamwidth_az_deg=beamwidth_az(pat, beam),
        side_lobe_level_db=side_lobe_level(pat, beam),
        beam_ambiguous=beam.ambiguous,
    )
