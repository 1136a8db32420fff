"""Sine and cosine integrals, vectorised over numpy arrays.

Power series below ``SWITCH`` and the continued fraction for E1(ix) above
it, the same split used by most numerical libraries.
"""
import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
SWITCH = 4.0
_SERIES_TERMS = 32
_CF_EPS = 1e-16
_CF_MAXITER = 400


def _series(x):
    """Si and Ci from their Maclaurin series (x > 0, x < SWITCH)."""
    x2 = x * x
    # Si term: (-1)^n x^(2n+1) / (2n+1)!, divided by (2n+1)
    t = x.copy()
    si = x.copy()
    # Ci term: (-1)^n x^(2n) / (2n)!, divided by 2n, n >= 1
    c = -0.5 * x2
    ci = c / 2.0
    for n in range(1, _SERIES_TERMS):
        t = -t * x2 / ((2 * n) * (2 * n + 1))
        si = si + t / (2 * n + 1)
        c = -c * x2 / ((2 * n + 1) * (2 * n + 2))
        ci = ci + c / (2 * n + 2)
    with np.errstate(divide="ignore"):
        ci = ci + EULER_GAMMA + np.log(x)
    return si, ci


def _continued_fraction(x):
    """Si and Ci from the modified Lentz evaluation of E1(ix)."""
    b = 1.0 + 1j * x
    c = np.full(x.shape, 1e300, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, _CF_MAXITER):
        a = -float(i * i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            break
    h = (np.cos(x) - 1j * np.sin(x)) * h
    return np.pi / 2 + h.imag, -h.real


def sici(x):
    """Return ``(Si(x), Ci(x))`` for ``x > 0`` (array or scalar)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    si = np.empty_like(x)
    ci = np.empty_like(x)
    small = x < SWITCH
    if np.any(small):
        si[small], ci[small] = _series(x[small])
    if np.any(~small):
        si[~small], ci[~small] = _continued_fraction(x[~small])
    if scalar:
        return float(si[0]), float(ci[0])
    return si, ci


def sine_integral(x):
    """Si(x) = integral of sin(t)/t from 0 to x. Odd in x."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("sine_integral requires finite input")
    ax = np.abs(x)
    out = np.zeros_like(ax)
    nz = ax > 0
    if np.any(nz):
        out[nz] = sici(ax[nz])[0]
    out = np.copysign(out, x)
    return float(out) if out.ndim == 0 else out


def cosine_integral(x):
    """Ci(x) = -integral of cos(t)/t from x to infinity, for x > 0."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("cosine_integral is defined for finite x > 0 only")
    out = sici(x)[1]
    return float(out) if np.ndim(out) == 0 else out


def exp_integral_cs(u):
    """E(u) = Ci(u) - j Si(u), the antiderivative of exp(-ju)/u.

    Used by the induced-EMF kernel; ``u`` must be strictly positive.
    """
    si, ci = sici(u)
    return ci - 1j * si
