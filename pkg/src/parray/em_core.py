"""Thin-wire element impedances by the induced-EMF method.

Every element carries the sinusoidal current ``I_m sin(k (h - |z|))``.  The
field of one element is integrated against the current of the other; with
the substitution ``u = k (R -/+ t)`` each of the twelve resulting integrals
collapses to a difference of ``Ci(u) - j Si(u)``, so no quadrature is needed
for parallel (possibly staggered) dipoles of unequal length.  The self
impedance is the same integral evaluated on the wire surface.

Impedances returned by the public functions are referred to the feed
terminals (centre of each dipole).  ``*_at_maximum`` variants keep the
current-maximum reference used in textbook tables.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, ModelValidityError
from .specfun import cosine_integral, exp_integral_cs, sine_integral

__all__ = [
    "ETA0", "C0", "EPS0", "Role", "ComplexImpedance", "WireElement",
    "sine_integral", "cosine_integral", "self_impedance", "mutual_impedance",
    "mutual_impedance_at_maximum", "induced_emf_kernel", "check_length_band",
]

C0 = 299_792_458.0
MU0 = 4e-7 * math.pi
EPS0 = 1.0 / (MU0 * C0 ** 2)
ETA0 = MU0 * C0

MIN_LENGTH_FRAC = 0.05
MAX_LENGTH_FRAC = 0.75
THIN_WIRE_RATIO = 20.0
PARALLEL_TOL_RAD = 1e-6


class Role(enum.Enum):
    DRIVEN = "driven"
    PARASITIC = "parasitic"


@dataclass(frozen=True)
class ComplexImpedance:
    resistance: float
    reactance: float

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexImpedance":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.resistance, self.reactance)

    @property
    def magnitude(self) -> float:
        return math.hypot(self.resistance, self.reactance)

    @property
    def phase(self) -> float:
        """Phase angle in radians."""
        return math.atan2(self.reactance, self.resistance)

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class WireElement:
    """A straight centre-fed wire.

    ``position`` is the centre (feed point) in metres, ``tilt`` is
    ``(polar offset from +z, azimuth of the tilt plane)`` in degrees.
    """
    position: tuple[float, float, float]
    length: float
    radius: float
    tilt: tuple[float, float] = (0.0, 0.0)
    role: Role = Role.PARASITIC
    axis: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pos = tuple(float(v) for v in self.position)
        if len(pos) != 3 or not all(math.isfinite(v) for v in pos):
            raise GeometryError(f"position must be 3 finite numbers, got {self.position!r}")
        object.__setattr__(self, "position", pos)
        tilt = (float(self.tilt[0]), float(self.tilt[1]))
        object.__setattr__(self, "tilt", tilt)
        if not self.length > 0:
            raise GeometryError(f"length must be positive, got {self.length}")
        if not self.radius > 0:
            raise GeometryError(f"radius must be positive, got {self.radius}")
        if not self.radius < self.length / THIN_WIRE_RATIO:
            raise ModelValidityError(
                f"radius {self.radius:g} m is not thin for length {self.length:g} m "
                f"(need radius < length/{THIN_WIRE_RATIO:g})")
        if not 0.0 <= tilt[0] < 90.0:
            raise GeometryError(f"tilt polar offset must lie in [0, 90) deg, got {tilt[0]}")
        th, ph = math.radians(tilt[0]), math.radians(tilt[1])
        axis = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
        object.__setattr__(self, "axis", axis)

    @property
    def half_length(self) -> float:
        return 0.5 * self.length

    def with_changes(self, **kw) -> "WireElement":
        args = dict(position=self.position, length=self.length, radius=self.radius,
                    tilt=self.tilt, role=self.role)
        args.update(kw)
        return WireElement(**args)


def check_length_band(length, wavelength, label="element"):
    frac = length / wavelength
    if not MIN_LENGTH_FRAC < frac < MAX_LENGTH_FRAC:
        raise ModelValidityError(
            f"{label}: length {frac:.4f} wavelengths outside the sinusoidal-current "
            f"validity band ({MIN_LENGTH_FRAC}, {MAX_LENGTH_FRAC})")


def _terms(k, c, sigma, lo, hi, d):
    """Integral of exp(-jk R_c)/R_c * exp(j sigma k z) dz over [lo, hi].

    R_c = sqrt(d^2 + (z - c)^2).  Closed form via E(u) = Ci(u) - j Si(u).
    """
    def u_of(t):
        r = np.hypot(d, t)
        if sigma > 0:
            # k (R - t), computed without cancellation for t > 0
            return k * np.where(t > 0, d * d / (r + t), r - t)
        return k * np.where(t < 0, d * d / (r - t), r + t)

    e_hi = exp_integral_cs(u_of(hi - c))
    e_lo = exp_integral_cs(u_of(lo - c))
    phase = np.exp(1j * sigma * k * c)
    if sigma > 0:
        return -phase * (e_hi - e_lo)
    return phase * (e_hi - e_lo)


def induced_emf_kernel(l1, l2, d, s, k):
    """Mutual impedance of parallel dipoles referred to current maxima.

    Parameters are broadcastable arrays: lengths ``l1``, ``l2`` (m),
    horizontal separation ``d`` (m, > 0), vertical offset ``s`` of the centre
    of dipole 2 relative to dipole 1 (m) and wavenumber ``k`` (rad/m).
    """
    l1, l2, d, s = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (l1, l2, d, s)))
    h1, h2 = 0.5 * l1, 0.5 * l2
    lo, mid, hi = s - h2, s, s + h2
    ep_lo = np.exp(1j * k * (h2 - s))
    ep_hi = np.exp(1j * k * (h2 + s))
    total = np.zeros(l1.shape, dtype=complex)
    for c, w in ((h1, 1.0), (-h1, 1.0), (np.zeros_like(h1), -2.0 * np.cos(k * h1))):
        part = (ep_lo * _terms(k, c, +1, lo, mid, d)
                - _terms(k, c, -1, lo, mid, d) / ep_lo
                + ep_hi * _terms(k, c, -1, mid, hi, d)
                - _terms(k, c, +1, mid, hi, d) / ep_hi)
        total = total + w * part
    return ETA0 / (8.0 * math.pi) * total


def _canonical(a: WireElement, b: WireElement):
    key_a = (a.length, a.radius, a.position, a.tilt)
    key_b = (b.length, b.radius, b.position, b.tilt)
    return (b, a) if key_b < key_a else (a, b)


def _pair_terms(a: WireElement, b: WireElement):
    """Horizontal separation, stagger and polarisation factor of a pair."""
    dx = b.position[0] - a.position[0]
    dy = b.position[1] - a.position[1]
    d = math.hypot(dx, dy)
    s = b.position[2] - a.position[2]
    cosg = float(np.clip(np.dot(a.axis, b.axis), -1.0, 1.0))
    if math.acos(cosg) < PARALLEL_TOL_RAD:
        cosg = 1.0
    return d, s, cosg


def _check_overlap(a: WireElement, b: WireElement, d: float, s: float):
    if d <= a.radius + b.radius and abs(s) < a.half_length + b.half_length:
        raise GeometryError(
            f"wires at {a.position} and {b.position} overlap "
            f"(horizontal separation {d:g} m <= sum of radii)")


def mutual_impedance_at_maximum(a: WireElement, b: WireElement, wavelength: float) -> complex:
    """Z_ab referred to the current maxima of both elements."""
    a, b = _canonical(a, b)
    check_length_band(a.length, wavelength)
    check_length_band(b.length, wavelength)
    d, s, cosg = _pair_terms(a, b)
    _check_overlap(a, b, d, s)
    k = 2 * math.pi / wavelength
    d_eff = max(d, 0.5 * (a.radius + b.radius))
    z = complex(induced_emf_kernel(a.length, b.length, d_eff, s, k))
    return z * cosg


def mutual_impedance(a: WireElement, b: WireElement, wavelength: float) -> ComplexImpedance:
    """Terminal mutual impedance of two elements in free space.

    Non-parallel pairs are approximated by the parallel pair with the same
    centres, scaled by the cosine of the angle between the wire axes.
    """
    a, b = _canonical(a, b)
    k = 2 * math.pi / wavelength
    zm = mutual_impedance_at_maximum(a, b, wavelength)
    scale = math.sin(k * a.half_length) * math.sin(k * b.half_length)
    return ComplexImpedance.from_complex(zm / scale)


def self_impedance(elem: WireElement, wavelength: float) -> ComplexImpedance:
    """Input impedance of an isolated centre-fed dipole in free space."""
    check_length_band(elem.length, wavelength)
    k = 2 * math.pi / wavelength
    zm = complex(induced_emf_kernel(elem.length, elem.length, elem.radius, 0.0, k))
    return ComplexImpedance.from_complex(zm / math.sin(k * elem.half_length) ** 2)
