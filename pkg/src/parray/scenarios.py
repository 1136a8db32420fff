"""Reference geometries at the 40 MHz operating point.

UGV-mounted monopoles are represented by equivalent dipoles of twice the
monopole height.  Over ground the dipole centres sit at ``FEED_HEIGHT_WL``
wavelengths, which puts the lower tip of the 0.52 wavelength driven element
about half a metre above the surface.
"""
from __future__ import annotations

from .array_solver import ArrayGeometry, GroundModel
from .em_core import C0, Role, WireElement

FREQUENCY_HZ = 40e6
WAVELENGTH_M = C0 / FREQUENCY_HZ          # 7.49 m

# monopole heights in wavelengths
DRIVEN_HEIGHT_WL = 0.26
# 3-element reference: endpoints of the parasitic height band
REFLECTOR_HEIGHT_WL = 0.26
DIRECTOR_HEIGHT_WL = 0.21
# 5-element baseline: free-space directivity optimum at the fixed spacings
# (scripts/design_baseline.py)
YAGI5_REFLECTOR_HEIGHT_WL = 0.2395
YAGI5_DIRECTOR_HEIGHT_WL = 0.2065
WIRE_DIAMETER_WL = 4e-2

REFLECTOR_SPACING_WL = 0.25
DIRECTOR_SPACING_WL = 0.31
FEED_HEIGHT_WL = 0.33

DRY_GROUND = GroundModel.homogeneous(4.0, 1e-3)
CONCRETE = GroundModel.homogeneous(4.5, 0.01)


def parasitic_yagi(n_directors: int = 3, ground: GroundModel | None = None,
                   frequency: float = FREQUENCY_HZ,
                   reflector_spacing_wl: float = REFLECTOR_SPACING_WL,
                   director_spacing_wl: float = DIRECTOR_SPACING_WL,
                   feed_height_wl: float = FEED_HEIGHT_WL,
                   reflector_height_wl: float = REFLECTOR_HEIGHT_WL,
                   director_height_wl: float = DIRECTOR_HEIGHT_WL) -> ArrayGeometry:
    """Reflector, driven element and ``n_directors`` directors along +x.

    Element order is reflector, driven, directors (nearest first).
    """
    lam = C0 / frequency
    radius = 0.5 * WIRE_DIAMETER_WL * lam
    els = [
        WireElement((-reflector_spacing_wl * lam, 0.0, 0.0), 2 * reflector_height_wl * lam, radius),
        WireElement((0.0, 0.0, 0.0), 2 * DRIVEN_HEIGHT_WL * lam, radius, role=Role.DRIVEN),
    ]
    for i in range(n_directors):
        els.append(WireElement(((i + 1) * director_spacing_wl * lam, 0.0, 0.0),
                               2 * director_height_wl * lam, radius))
    return ArrayGeometry(tuple(els), lam, frequency, ground or GroundModel.free_space(),
                         feed_height_wl * lam)


def baseline_yagi(ground: GroundModel | None = None) -> ArrayGeometry:
    """The 5-element free-space design (1 reflector, 3 directors)."""
    return parasitic_yagi(3, ground, reflector_height_wl=YAGI5_REFLECTOR_HEIGHT_WL,
                          director_height_wl=YAGI5_DIRECTOR_HEIGHT_WL)


def three_element(ground: GroundModel | None = None) -> ArrayGeometry:
    return parasitic_yagi(1, ground)


def lone_driven(geom: ArrayGeometry) -> ArrayGeometry:
    """The driven element of ``geom`` on its own (reference antenna)."""
    return geom.replace(elements=(geom.elements[geom.driven_index],))
