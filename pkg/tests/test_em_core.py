import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import emf_quad
from parray.em_core import (ComplexImpedance, Role, WireElement, induced_emf_kernel,
                            mutual_impedance, mutual_impedance_at_maximum, self_impedance)
from parray.errors import GeometryError, ModelValidityError

LAM = 1.0
K = 2 * math.pi / LAM

# frozen from emf_quad (adaptive quadrature of the induced field)
Z_SELF_HALF_WAVE = complex(73.0790, 42.4770)     # radius 1e-4 wavelengths
Z_MUTUAL_QUARTER = complex(40.7581, -28.3294)    # d = 0.25 wavelengths


def dipole(x=0.0, length=0.5, radius=1e-4, z=0.0, tilt=(0.0, 0.0), role=Role.PARASITIC):
    return WireElement((x, 0.0, z), length, radius, tilt, role)


def test_half_wave_self_impedance():
    z = self_impedance(dipole(), LAM)
    assert abs(z.resistance - 73.1) <= 1.0
    assert abs(z.reactance - 42.5) <= 3.0
    assert abs(z.value - Z_SELF_HALF_WAVE) < 1e-3


def test_quarter_wave_mutual_impedance():
    z = mutual_impedance(dipole(), dipole(0.25), LAM)
    assert abs(z.value - complex(40.9, -28.3)) <= 1.5
    assert abs(z.value - Z_MUTUAL_QUARTER) < 1e-3


@pytest.mark.parametrize("l1,l2,d,s", [
    (0.5, 0.5, 0.25, 0.0),
    (0.52, 0.42, 0.31, 0.0),
    (0.45, 0.6, 0.1, 0.2),
    (0.3, 0.5, 0.7, -0.35),
    (0.5, 0.5, 0.01, 0.0),
])
def test_kernel_against_quadrature(l1, l2, d, s):
    z = complex(induced_emf_kernel(l1, l2, d, s, K))
    ref = emf_quad(l1, l2, d, s, LAM)
    assert abs(z - ref) < 1e-6 * max(1.0, abs(ref))


@given(st.floats(0.2, 0.7), st.floats(0.2, 0.7), st.floats(0.05, 2.0), st.floats(-0.5, 0.5))
def test_kernel_reciprocal(l1, l2, d, s):
    a = complex(induced_emf_kernel(l1, l2, d, s, K))
    b = complex(induced_emf_kernel(l2, l1, d, -s, K))
    assert abs(a - b) < 1e-9 * max(1.0, abs(a))


def test_mutual_impedance_is_exactly_symmetric():
    a = dipole(0.0, 0.48, tilt=(3.0, 40.0))
    b = dipole(0.31, 0.41, z=0.05)
    assert mutual_impedance(a, b, LAM) == mutual_impedance(b, a, LAM)


def test_far_mutual_impedance_decays():
    near = abs(mutual_impedance(dipole(), dipole(1.0), LAM).value)
    far = abs(mutual_impedance(dipole(), dipole(8.0), LAM).value)
    assert far < near / 4


def test_half_wave_terminal_equals_maximum_reference():
    a, b = dipole(), dipole(0.3)
    assert abs(mutual_impedance(a, b, LAM).value - mutual_impedance_at_maximum(a, b, LAM)) < 1e-12


def test_tilt_scales_by_cosine():
    a = dipole()
    b = dipole(0.3)
    tilted = dipole(0.3, tilt=(10.0, 90.0))
    ratio = mutual_impedance(a, tilted, LAM).value / mutual_impedance(a, b, LAM).value
    assert abs(ratio - math.cos(math.radians(10.0))) < 1e-12


def test_thick_wire_rejected():
    with pytest.raises(ModelValidityError):
        WireElement((0, 0, 0), 0.5, 0.03)


@pytest.mark.parametrize("length", [0.02, 0.9])
def test_length_outside_sinusoidal_band(length):
    with pytest.raises(ModelValidityError):
        self_impedance(dipole(length=length, radius=1e-4), LAM)


def test_overlapping_wires_rejected():
    with pytest.raises(GeometryError):
        mutual_impedance(dipole(), dipole(1e-4), LAM)


def test_element_validation():
    with pytest.raises(GeometryError):
        WireElement((0, 0), 0.5, 1e-3)
    with pytest.raises(GeometryError):
        WireElement((0, 0, 0), 0.5, 1e-3, tilt=(95.0, 0.0))


def test_complex_impedance_roundtrip():
    z = ComplexImpedance.from_complex(3 - 4j)
    assert z.magnitude == 5.0
    assert complex(z) == 3 - 4j
    assert math.isclose(z.phase, math.atan2(-4, 3))


def test_resonance_below_half_wave_for_thick_wire():
    lengths = np.linspace(0.41, 0.50, 91)
    x = [self_impedance(dipole(length=v, radius=0.02), LAM).reactance for v in lengths]
    crossing = lengths[np.argmax(np.array(x) > 0)]
    assert 0.44 < crossing < 0.47
