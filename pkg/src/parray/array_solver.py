"""Impedance-matrix solve and far-field synthesis for parasitic arrays.

Ground is modelled by image elements.  In the impedance matrix every image
is weighted by the vertical-polarisation Fresnel coefficient at normal
incidence; in the far field the reflected ray gets the exact per-direction
Fresnel coefficients (two-ray model).  Over ground the pattern covers the
upper half-space only, since nothing below the interface reaches the far
zone of an observer in air.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .em_core import (C0, EPS0, ETA0, ComplexImpedance, Role, WireElement,
                      check_length_band, induced_emf_kernel)
from .errors import GeometryError, ModelValidityError, NumericalError

COND_LIMIT = 1e12


class GroundKind(enum.Enum):
    FREE_SPACE = "free_space"
    HOMOGENEOUS = "homogeneous"


@dataclass(frozen=True)
class GroundModel:
    kind: GroundKind = GroundKind.FREE_SPACE
    epsilon_r: float = 1.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind is GroundKind.HOMOGENEOUS:
            if not self.epsilon_r >= 1.0:
                raise GeometryError(f"ground epsilon_r must be >= 1, got {self.epsilon_r}")
            if not self.sigma >= 0.0:
                raise GeometryError(f"ground sigma must be >= 0, got {self.sigma}")

    @classmethod
    def free_space(cls) -> "GroundModel":
        return cls(GroundKind.FREE_SPACE)

    @classmethod
    def homogeneous(cls, epsilon_r: float, sigma: float) -> "GroundModel":
        return cls(GroundKind.HOMOGENEOUS, float(epsilon_r), float(sigma))

    @property
    def is_free_space(self) -> bool:
        return self.kind is GroundKind.FREE_SPACE

    def complex_permittivity(self, frequency: float) -> complex:
        omega = 2 * math.pi * frequency
        return complex(self.epsilon_r, -self.sigma / (omega * EPS0))


def fresnel_coefficients(eps_c: complex, theta_i):
    """Fresnel (vertical, horizontal) reflection coefficients.

    ``theta_i`` is the incidence angle from the surface normal in radians.
    Vertical tends to +1 and horizontal to -1 for a perfect conductor.
    """
    theta_i = np.asarray(theta_i, dtype=float)
    if abs(eps_c - 1.0) < 1e-12:
        # no interface; the grazing limit would otherwise be 0/0
        zero = np.zeros(theta_i.shape, dtype=complex)
        return zero, zero.copy()
    ct = np.cos(theta_i)
    root = np.sqrt(eps_c - np.sin(theta_i) ** 2 + 0j)
    gv = (eps_c * ct - root) / (eps_c * ct + root)
    gh = (ct - root) / (ct + root)
    return gv, gh


@dataclass(frozen=True)
class ArrayGeometry:
    """Elements, frequency and ground of one scene.

    Element ``position[2]`` is measured from the scene reference; over
    ground the physical centre height is ``position[2] +
    element_height_above_ground``.
    """
    elements: tuple[WireElement, ...]
    wavelength: float
    frequency: float
    ground: GroundModel = field(default_factory=GroundModel.free_space)
    element_height_above_ground: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise GeometryError("geometry has no elements")
        n_driven = sum(e.role is Role.DRIVEN for e in self.elements)
        if n_driven != 1:
            raise GeometryError(f"exactly one driven element required, found {n_driven}")
        if not (self.wavelength > 0 and self.frequency > 0):
            raise GeometryError("wavelength and frequency must be positive")
        if abs(self.wavelength * self.frequency / C0 - 1.0) > 1e-3:
            raise GeometryError(
                f"wavelength {self.wavelength} m inconsistent with frequency {self.frequency} Hz")
        pos = np.array([e.position for e in self.elements])
        for i in range(len(self.elements)):
            for j in range(i + 1, len(self.elements)):
                a, b = self.elements[i], self.elements[j]
                d = math.hypot(*(pos[j, :2] - pos[i, :2]))
                s = abs(pos[j, 2] - pos[i, 2])
                if d <= 2 * max(a.radius, b.radius) and s < a.half_length + b.half_length:
                    raise GeometryError(f"elements {i} and {j} are closer than a wire diameter")
        if not self.ground.is_free_space:
            for i, e in enumerate(self.elements):
                bottom = e.position[2] + self.element_height_above_ground \
                    - e.half_length * e.axis[2]
                if bottom <= 0:
                    raise GeometryError(f"element {i} reaches into the ground (lowest point {bottom:g} m)")

    @classmethod
    def from_frequency(cls, elements, frequency, ground=None, height=0.0):
        return cls(tuple(elements), C0 / frequency, frequency,
                   ground or GroundModel.free_space(), height)

    @property
    def k(self) -> float:
        return 2 * math.pi / self.wavelength

    @property
    def driven_index(self) -> int:
        return next(i for i, e in enumerate(self.elements) if e.role is Role.DRIVEN)

    def world_positions(self) -> np.ndarray:
        pos = np.array([e.position for e in self.elements], dtype=float)
        if not self.ground.is_free_space:
            pos[:, 2] += self.element_height_above_ground
        return pos

    def axes(self) -> np.ndarray:
        return np.array([e.axis for e in self.elements])

    def replace(self, **kw) -> "ArrayGeometry":
        return replace(self, **kw)


@dataclass
class CurrentSolution:
    currents: np.ndarray          # terminal currents, A
    drive_voltage: complex
    input_impedance: ComplexImpedance
    unit_currents: np.ndarray     # response to a 1 V drive
    driven_index: int
    matrix: np.ndarray

    @property
    def input_power(self) -> float:
        i_d = self.currents[self.driven_index]
        return 0.5 * float((self.drive_voltage * np.conj(i_d)).real)

    def residual(self) -> float:
        v = np.zeros(len(self.currents), dtype=complex)
        v[self.driven_index] = self.drive_voltage
        r = self.matrix @ self.currents - v
        scale = np.abs(self.matrix).max() * np.abs(self.currents).max()
        return float(np.abs(r).max() / scale)


@dataclass
class RadiationPattern:
    """Far field on a (theta, phi) grid.

    ``e_theta``/``e_phi`` are the fields for a 1 V drive; the normalised
    intensity therefore never depends on the drive.  ``drive_voltage`` and
    ``input_power`` give the absolute level.
    """
    theta_grid: np.ndarray        # deg, increasing
    phi_grid: np.ndarray          # deg, increasing, -180..180 inclusive
    e_theta: np.ndarray           # complex, V per volt of drive (times distance)
    e_phi: np.ndarray
    input_power: float | None = None  # W; None for synthetic patterns
    drive_voltage: complex = 1.0

    def __post_init__(self):
        self.theta_grid = np.asarray(self.theta_grid, dtype=float)
        self.phi_grid = np.asarray(self.phi_grid, dtype=float)
        if np.any(np.diff(self.theta_grid) <= 0) or np.any(np.diff(self.phi_grid) <= 0):
            raise GeometryError("pattern grids must be strictly increasing")
        intensity = np.abs(self.e_theta) ** 2 + np.abs(self.e_phi) ** 2
        peak = intensity.max()
        if not peak > 0 or not np.isfinite(peak):
            raise NumericalError("degenerate pattern: zero total field everywhere")
        self.intensity = intensity / peak

    @classmethod
    def from_magnitude(cls, theta_grid, phi_grid, magnitude):
        """Synthetic pattern from a real field magnitude (no power reference)."""
        mag = np.asarray(magnitude, dtype=complex)
        return cls(theta_grid, phi_grid, mag, np.zeros_like(mag), None)

    @property
    def complex_field(self) -> np.ndarray:
        """Absolute theta component at the actual drive."""
        return self.drive_voltage * self.e_theta

    @property
    def power_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.intensity)

    @property
    def theta_step(self) -> float:
        return float(self.theta_grid[1] - self.theta_grid[0])

    @property
    def phi_step(self) -> float:
        return float(self.phi_grid[1] - self.phi_grid[0])


def _pair_geometry(pos, axes, lengths, radii, ii, jj, image=False):
    """Horizontal separation, stagger and polarisation factor for index pairs."""
    pj = pos[jj].copy()
    aj = axes[jj].copy()
    if image:
        pj[:, 2] = -pj[:, 2]
        aj[:, :2] = -aj[:, :2]
    d = np.hypot(pj[:, 0] - pos[ii, 0], pj[:, 1] - pos[ii, 1])
    s = pj[:, 2] - pos[ii, 2]
    cosg = np.clip(np.einsum("ij,ij->i", axes[ii], aj), -1.0, 1.0)
    cosg = np.where(np.arccos(cosg) < 1e-6, 1.0, cosg)
    d = np.maximum(d, 0.5 * (radii[ii] + radii[jj]))
    return d, s, cosg


def assemble_impedance_matrix(geom: ArrayGeometry) -> np.ndarray:
    """Symmetric N x N terminal impedance matrix (ohms, complex)."""
    els = geom.elements
    n = len(els)
    lam = geom.wavelength
    for i, e in enumerate(els):
        check_length_band(e.length, lam, label=f"element {i}")
    k = geom.k
    pos = geom.world_positions()
    axes = geom.axes()
    lengths = np.array([e.length for e in els])
    radii = np.array([e.radius for e in els])
    ii, jj = np.triu_indices(n)
    d, s, cosg = _pair_geometry(pos, axes, lengths, radii, ii, jj)
    # on-wire self term uses the surface of the wire
    d = np.where(ii == jj, radii[ii], d)
    zm = induced_emf_kernel(lengths[ii], lengths[jj], d, s, k) * cosg
    if not geom.ground.is_free_space:
        gamma0 = fresnel_coefficients(geom.ground.complex_permittivity(geom.frequency), 0.0)[0]
        di, si, ci = _pair_geometry(pos, axes, lengths, radii, ii, jj, image=True)
        zm = zm + gamma0 * induced_emf_kernel(lengths[ii], lengths[jj], di, si, k) * ci
    sin_kh = np.sin(k * 0.5 * lengths)
    zt = zm / (sin_kh[ii] * sin_kh[jj])
    z = np.empty((n, n), dtype=complex)
    z[ii, jj] = zt
    z[jj, ii] = zt
    return z


def solve_currents(geom: ArrayGeometry, drive_voltage: complex = 1.0,
                   matrix: np.ndarray | None = None) -> CurrentSolution:
    """Currents with the driven element fed by ``drive_voltage``, others shorted.

    ``matrix`` may be given to solve a modified system (e.g. a detuned
    parasitic); by default it is assembled from ``geom``.
    """
    z = assemble_impedance_matrix(geom) if matrix is None else np.asarray(matrix, dtype=complex)
    n = z.shape[0]
    drv = geom.driven_index
    cond = np.linalg.cond(z)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        pos = geom.world_positions()
        dist = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1) + np.eye(n) * 1e300
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        raise NumericalError(
            f"impedance matrix ill-conditioned (cond={cond:.3g}); "
            f"elements {min(i, j)} and {max(i, j)} are nearly degenerate")
    e = np.zeros(n, dtype=complex)
    e[drv] = 1.0
    unit = np.linalg.solve(z, e)
    v = complex(drive_voltage)
    currents = unit * v
    zin = ComplexImpedance.from_complex(1.0 / unit[drv])
    return CurrentSolution(currents, v, zin, unit, drv, z)


def _grid(theta_res, phi_res, theta_max):
    for res, span, name in ((theta_res, 180.0, "theta"), (phi_res, 360.0, "phi")):
        if not res > 0 or abs(span / res - round(span / res)) > 1e-9:
            raise ModelValidityError(f"{name} resolution {res} does not divide {span:g} deg")
    nt = int(round(theta_max / theta_res))
    npp = int(round(360.0 / phi_res))
    theta = np.arange(nt + 1) * theta_res
    phi = np.arange(npp + 1) * phi_res - 180.0
    return theta, phi


def _element_fields(k, h, axis, rel_pos, st, ct, cp, sp, ath, aph):
    """theta/phi far-field components of one sinusoidal dipole (I_m = 1)."""
    kh = k * h
    if axis[0] == 0.0 and axis[1] == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            ft = np.where(st > 1e-12, (np.cos(kh * ct) - math.cos(kh)) / st, 0.0)
        eth = np.broadcast_to(ft[:, None], ath.shape) * np.sign(axis[2])
        eph = None
    else:
        cpsi = axis[0] * ath + axis[1] * aph + axis[2] * ct[:, None]
        s2 = 1.0 - cpsi ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            coef = np.where(s2 > 1e-14, (np.cos(kh * cpsi) - math.cos(kh)) / s2, 0.5 * kh * math.sin(kh))
        u_th = axis[0] * ct[:, None] * cp[None, :] + axis[1] * ct[:, None] * sp[None, :] - axis[2] * st[:, None]
        u_ph = -axis[0] * sp[None, :] + axis[1] * cp[None, :]
        eth = -coef * u_th
        eph = -coef * u_ph
    phase = np.exp(1j * k * (rel_pos[0] * ath + rel_pos[1] * aph + rel_pos[2] * ct[:, None]))
    return eth * phase, (None if eph is None else eph * phase)


def far_field(geom: ArrayGeometry, sol: CurrentSolution, theta_res: float = 1.0,
              phi_res: float = 1.0) -> RadiationPattern:
    """Sampled far field of the solved array.

    Over ground the reflected ray of every element is added with the
    per-direction Fresnel coefficients and the grid stops at the horizon.
    """
    over_ground = not geom.ground.is_free_space
    theta, phi = _grid(theta_res, phi_res, 90.0 if over_ground else 180.0)
    t, p = np.radians(theta), np.radians(phi)
    st, ct, cp, sp = np.sin(t), np.cos(t), np.cos(p), np.sin(p)
    # exact zeros at the cardinal angles keep mirrored grids bit-symmetric
    st[np.isclose(theta, 180.0)] = 0.0
    ct[np.isclose(theta, 90.0)] = 0.0
    sp[np.isclose(np.abs(phi), 180.0)] = 0.0
    ath = st[:, None] * cp[None, :]
    aph = st[:, None] * sp[None, :]
    k = geom.k
    pos = geom.world_positions()
    ref = pos[geom.driven_index]
    axes = geom.axes()
    i_max = np.array([sol.unit_currents[i] / math.sin(k * e.half_length)
                      for i, e in enumerate(geom.elements)])

    def accumulate(positions, axes_, out_th, out_ph):
        for i, e in enumerate(geom.elements):
            eth, eph = _element_fields(k, e.half_length, axes_[i], positions[i] - ref,
                                       st, ct, cp, sp, ath, aph)
            out_th += i_max[i] * eth
            if eph is not None:
                out_ph += i_max[i] * eph

    shape = (len(theta), len(phi))
    e_th = np.zeros(shape, dtype=complex)
    e_ph = np.zeros(shape, dtype=complex)
    accumulate(pos, axes, e_th, e_ph)
    if over_ground:
        img_pos = pos.copy()
        img_pos[:, 2] = -img_pos[:, 2]
        img_axes = axes.copy()
        img_axes[:, :2] = -img_axes[:, :2]
        r_th = np.zeros(shape, dtype=complex)
        r_ph = np.zeros(shape, dtype=complex)
        accumulate(img_pos, img_axes, r_th, r_ph)
        gv, gh = fresnel_coefficients(geom.ground.complex_permittivity(geom.frequency), t)
        e_th += gv[:, None] * r_th
        e_ph -= gh[:, None] * r_ph
    # j eta / (2 pi) per unit drive voltage; the pattern shape never sees the drive
    scale = 1j * ETA0 / (2 * math.pi)
    return RadiationPattern(theta, phi, scale * e_th, scale * e_ph, sol.input_power,
                            sol.drive_voltage)


def two_element_gain_closed_form(d: float, elem_lengths: tuple[float, float], radius: float,
                                 wavelength: float, phi, z22_scale: float = 1.0,
                                 variant: str = "current_ratio"):
    """Field gain of a driven + shorted pair relative to the lone driven dipole.

    ``d`` is the signed offset of the parasitic along the phi = 0 axis
    (negative puts it behind the driven element).  ``variant="as_printed"``
    uses |Z11/Z22| as the magnitude of the second term instead of the
    induced-current ratio |Z21/Z22|.  Impedances are current-maximum
    referred; ``z22_scale`` inflates Z22 to detune the parasitic.
    """
    l1, l2 = elem_lengths
    k = 2 * math.pi / wavelength
    for length in elem_lengths:
        check_length_band(length, wavelength)
    if abs(d) <= 2 * radius:
        raise GeometryError("elements overlap")
    z11 = complex(induced_emf_kernel(l1, l1, radius, 0.0, k))
    z22 = complex(induced_emf_kernel(l2, l2, radius, 0.0, k)) * z22_scale
    z12 = complex(induced_emf_kernel(l1, l2, abs(d), 0.0, k))
    r11 = z11.real
    tau_m = math.atan2(z12.imag, z12.real)
    tau_2 = math.atan2(z22.imag, z22.real)
    first = math.sqrt(r11 / (r11 - abs(z12 ** 2 / z22) * math.cos(2 * tau_m - tau_2)))
    mag = abs(z12 / z22) if variant == "current_ratio" else abs(z11 / z22)
    xi = math.pi + tau_m - tau_2 + k * d * np.cos(np.radians(phi))
    return first * np.abs(1.0 + mag * np.exp(1j * xi))
