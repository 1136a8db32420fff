"""Independent reference computations used to freeze expected values.

Nothing here imports the code under test; everything is brute-force
quadrature with scipy.
"""
import math

import numpy as np
from scipy import integrate

ETA0 = 4e-7 * math.pi * 299_792_458.0


def si_quad(x):
    return integrate.quad(lambda t: math.sin(t) / t if t else 1.0, 0.0, x, limit=400)[0]


def ci_quad(x):
    # Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt
    g = 0.5772156649015329
    val = integrate.quad(lambda t: (math.cos(t) - 1.0) / t if t else 0.0, 0.0, x, limit=400)[0]
    return g + math.log(x) + val


def emf_quad(l1, l2, d, s, wavelength=1.0):
    """Mutual impedance (current-maximum reference) by direct quadrature.

    Field of a sinusoidal dipole on its axis-parallel line at distance d,
    integrated against the sinusoidal current of the second dipole.
    """
    k = 2 * math.pi / wavelength
    h1, h2 = l1 / 2, l2 / 2

    def ez(z):
        r1 = math.hypot(d, z - h1)
        r2 = math.hypot(d, z + h1)
        r0 = math.hypot(d, z)
        return (np.exp(-1j * k * r1) / r1 + np.exp(-1j * k * r2) / r2
                - 2 * math.cos(k * h1) * np.exp(-1j * k * r0) / r0)

    def integrand(z, part):
        v = 1j * ETA0 / (4 * math.pi) * ez(z) * math.sin(k * (h2 - abs(z - s)))
        return v.real if part == 0 else v.imag

    pts = sorted({s - h2, s, s + h2, h1, -h1, 0.0})
    pts = [p for p in pts if s - h2 < p < s + h2]
    re = integrate.quad(integrand, s - h2, s + h2, args=(0,), points=pts or None, limit=800, epsabs=1e-10)[0]
    im = integrate.quad(integrand, s - h2, s + h2, args=(1,), points=pts or None, limit=800, epsabs=1e-10)[0]
    return complex(re, im)


def dipole_pattern_directivity(length_frac):
    """Directivity of an isolated dipole from its analytic pattern."""
    kh = math.pi * length_frac

    def f(th):
        st = math.sin(th)
        if st < 1e-12:
            return 0.0
        return ((math.cos(kh * math.cos(th)) - math.cos(kh)) / st) ** 2 * st

    peak = max(((math.cos(kh * math.cos(t)) - math.cos(kh)) / math.sin(t)) ** 2
               for t in np.linspace(1e-3, math.pi - 1e-3, 20001))
    integral = integrate.quad(f, 0, math.pi, limit=400)[0] * 2 * math.pi
    return 4 * math.pi * peak / integral


def great_circle_deg(t1, p1, t2, p2):
    """Angle between two directions via the unit-vector dot product."""
    def vec(t, p):
        t, p = math.radians(t), math.radians(p)
        return np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)])
    c = float(np.clip(vec(t1, p1) @ vec(t2, p2), -1, 1))
    return math.degrees(math.acos(c))
