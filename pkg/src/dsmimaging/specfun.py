"""Zeroth-order cylindrical functions of real argument and the 2D Helmholtz kernel.

J0 and Y0 use two regimes:

* ``x < SERIES_CUTOFF``: ascending power series (Y0 through the harmonic-number
  form of the Neumann series);
* beyond: Hankel's asymptotic expansion with a fixed number of terms, so the
  result is a smooth function of ``x`` (finite differences stay meaningful).

Both regimes are accurate to about 1e-11 absolute at the crossover, and to
rounding level far from it.
"""

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
SERIES_CUTOFF = 12.0
_SERIES_TERMS = 80
_ASYMPTOTIC_TERMS = 24  # terms keep shrinking up to k ~ 2x, i.e. 24 at the cutoff


def _as_checked_array(x, allow_zero):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    if allow_zero:
        if np.any(arr < 0):
            raise DomainError("argument must be >= 0")
    elif np.any(arr <= 0):
        raise DomainError("argument must be > 0 (Y0 is singular at the origin)")
    return arr


def _series(x):
    """Return (J0, Y0) from the ascending series; Y0 is nan at x == 0."""
    q = -0.25 * x * x
    term = np.ones_like(x)
    sj = np.ones_like(x)
    sy = np.zeros_like(x)
    harmonic = 0.0
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        harmonic += 1.0 / k
        sj = sj + term
        sy = sy - harmonic * term
    with np.errstate(divide="ignore", invalid="ignore"):
        y = (2.0 / np.pi) * ((np.log(0.5 * x) + EULER_GAMMA) * sj + sy)
    return sj, y


def _asymptotic(x):
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = term * (-(2 * k - 1) ** 2) / (8.0 * k * x)
        # terms alternate between the P and Q sums: P gets even k, Q odd k,
        # each with the sign pattern (-1)^floor(k/2)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q = q + sign * term
        else:
            p = p + sign * term
    chi = x - 0.25 * np.pi
    amp = np.sqrt(2.0 / (np.pi * x))
    j = amp * (p * np.cos(chi) - q * np.sin(chi))
    y = amp * (p * np.sin(chi) + q * np.cos(chi))
    return j, y


def _j0_y0(x):
    j = np.empty_like(x)
    y = np.empty_like(x)
    small = x < SERIES_CUTOFF
    if np.any(small):
        j[small], y[small] = _series(x[small])
    if np.any(~small):
        j[~small], y[~small] = _asymptotic(x[~small])
    return j, y


def _scalar_or_array(out, like):
    return float(out) if np.ndim(like) == 0 else out


def bessel_j0(x):
    """Bessel function of the first kind, order zero, for real ``x >= 0``."""
    arr = _as_checked_array(x, allow_zero=True)
    j, _ = _j0_y0(np.atleast_1d(arr))
    return _scalar_or_array(j.reshape(arr.shape), x)


def bessel_y0(x):
    """Neumann function of order zero, for real ``x > 0``."""
    arr = _as_checked_array(x, allow_zero=False)
    _, y = _j0_y0(np.atleast_1d(arr))
    return _scalar_or_array(y.reshape(arr.shape), x)


def hankel1_0(x):
    """H0^(1)(x) = J0(x) + i Y0(x) for real ``x > 0``."""
    arr = _as_checked_array(x, allow_zero=False)
    j, y = _j0_y0(np.atleast_1d(arr))
    out = (j + 1j * y).reshape(arr.shape)
    return complex(out) if np.ndim(x) == 0 else out


def green2d(z, x, k0):
    """Fundamental solution -(i/4) H0^(1)(k0 |z - x|) of the 2D Helmholtz equation.

    ``z`` and ``x`` are points (last axis of length 2) and broadcast against
    each other. Coincident points raise :class:`DomainError`.
    """
    if not (np.isfinite(k0) and k0 > 0):
        raise DomainError(f"wavenumber must be positive, got {k0}")
    diff = np.asarray(z, dtype=float) - np.asarray(x, dtype=float)
    dist = np.hypot(diff[..., 0], diff[..., 1])
    if np.any(dist == 0):
        raise DomainError("green2d is singular at coincident points")
    j, y = _j0_y0(np.atleast_1d(k0 * dist))
    out = (0.25 * (y - 1j * j)).reshape(dist.shape)
    return complex(out) if out.ndim == 0 else out
