"""Indicator maps over an imaging grid.

Data-driven maps (DSM, DSMA, KM/NKM) take an :class:`~dsmimaging.forward.MsrMatrix`;
the closed-form maps (PSI1, PSI2, PSI3) take the true scene and show what the
data-driven maps converge to for many sensors and incidences.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateDataError, DomainError
from .scene import make_direction_set
from .specfun import bessel_j0, green2d


class Algorithm(str, Enum):
    DSM = "DSM"
    DSMA = "DSMA"
    KM = "KM"
    NKM = "NKM"
    PSI1 = "PSI1"
    PSI2 = "PSI2"
    PSI3 = "PSI3"
    EXACT = "EXACT"

    def __str__(self):
        return self.value


@dataclass
class IndicatorMap:
    grid: object
    values: np.ndarray
    algorithm: Algorithm
    raw: np.ndarray = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)
        if self.raw is not None:
            self.raw = np.asarray(self.raw, dtype=float).reshape(self.grid.shape)
        if not np.all(np.isfinite(self.values)):
            raise DomainError(f"{self.algorithm} map has non-finite values")

    @property
    def normalized(self):
        return self.algorithm is not Algorithm.KM

    def argmax_point(self):
        row, col = np.unravel_index(np.argmax(self.values), self.values.shape)
        return self.grid.point_at(row, col)


@dataclass(frozen=True)
class SteeringVectors:
    w1: np.ndarray  # Phi(x_n, z), length N
    w2: np.ndarray  # exp(i k0 d_l . z), length L


def steering_vectors(z, sensors, incidents, k0):
    z = np.asarray(z, dtype=float)
    w1 = green2d(sensors.positions, z, k0)
    w2 = np.exp(1j * k0 * incidents.directions @ z)
    return SteeringVectors(np.atleast_1d(w1), w2)


def inner_product_gamma(msr_column, z, sensors, k0, mask=None):
    """Plain discrete sum  sum_n u(x_n) conj(Phi(z, x_n))  over measured sensors."""
    col = np.asarray(msr_column, dtype=complex)
    if mask is not None:
        col = np.where(mask, col, 0.0)
    phi = np.atleast_1d(green2d(z, sensors.positions, k0))
    return complex(np.sum(col * np.conj(phi)))


def _normalize(raw, name):
    peak = raw.max()
    if not peak > 0:
        raise DegenerateDataError(f"{name} map is identically zero; cannot normalize")
    return raw / peak


def _green_matrix(grid, sensors, k0):
    """Phi(z_p, x_n) for all grid points, with points too close to a sensor excluded.

    Returns (G, valid) where G has zero rows for excluded points.
    """
    pts = grid.points()
    diff = pts[:, None, :] - sensors.positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    valid = dist.min(axis=1) >= grid.h / 10
    g = np.zeros(dist.shape, dtype=complex)
    g[valid] = green2d(pts[valid, None, :], sensors.positions[None, :, :], k0)
    return g, valid


def _base_metadata(msr, grid, valid):
    meta = {
        "L": len(msr.incidents),
        "N": len(msr.sensors),
        "noise_seed": msr.meta.get("noise_seed"),
        "scene": msr.meta.get("scene"),
    }
    excluded = np.count_nonzero(~valid)
    if excluded:
        meta["excluded_points"] = excluded
    return meta


def _projections(msr, grid, k0):
    """U[p, l] = <u^s(., d_l), Phi(z_p, .)> and the per-column Green norms squared."""
    g, valid = _green_matrix(grid, msr.sensors, k0)
    u = np.conj(g) @ msr.values
    gnorm2 = (np.abs(g) ** 2) @ msr.mask.astype(float)
    return u, gnorm2, valid


def _holder_columns(msr, grid, k0, columns):
    u, gnorm2, valid = _projections(msr, grid, k0)
    unorm = np.sqrt(np.sum(np.abs(msr.values) ** 2, axis=0))
    out = np.zeros((u.shape[0], len(columns)))
    for j, l in enumerate(columns):
        if not unorm[l] > 0:
            raise DegenerateDataError(f"MSR column {l} has zero norm over measured sensors")
        denom = unorm[l] * np.sqrt(gnorm2[valid, l])
        out[valid, j] = np.abs(u[valid, l]) / denom
    return out, valid


def dsm_single(msr, l, grid, k0):
    """Direct sampling indicator for incidence ``l`` (0-based).

    The Cauchy-Schwarz normalized value is kept in ``raw``; ``values`` is
    rescaled to a grid maximum of 1.
    """
    if not 0 <= l < len(msr.incidents):
        raise DomainError(f"incidence index {l} out of range")
    holder, valid = _holder_columns(msr, grid, k0, [l])
    raw = holder[:, 0]
    meta = _base_metadata(msr, grid, valid)
    meta.update(incidence=l, holder_max=float(raw.max()))
    return IndicatorMap(grid, _normalize(raw, "DSM"), Algorithm.DSM, raw=raw, metadata=meta)


def dsm_multi(msr, grid, k0):
    """Pointwise maximum of the single-incidence indicators over all incidences."""
    cols = range(len(msr.incidents))
    holder, valid = _holder_columns(msr, grid, k0, cols)
    raw = holder.max(axis=1)
    meta = _base_metadata(msr, grid, valid)
    meta["holder_max"] = float(raw.max())
    return IndicatorMap(grid, _normalize(raw, "DSM"), Algorithm.DSM, raw=raw, metadata=meta)


def dsma(msr, grid, k0):
    """Alternative DSM: phase-compensate each incidence by e^{-i k0 d_l.z}, sum, take modulus."""
    if not np.any(msr.values):
        raise DegenerateDataError("MSR is identically zero")
    u, _, valid = _projections(msr, grid, k0)
    phase = np.exp(-1j * k0 * grid.points() @ msr.incidents.directions.T)
    raw = np.abs(np.sum(phase * u, axis=1))
    raw[~valid] = 0.0
    meta = _base_metadata(msr, grid, valid)
    return IndicatorMap(grid, _normalize(raw, "DSMA"), Algorithm.DSMA, raw=raw, metadata=meta)


def kirchhoff(msr, grid, k0, normalized=True):
    """Kirchhoff migration |conj(W1)^T K conj(W2)|, optionally divided by its grid maximum."""
    w1, valid = _green_matrix(grid, msr.sensors, k0)  # Phi symmetric: Phi(x_n, z) = Phi(z, x_n)
    w2 = np.exp(1j * k0 * grid.points() @ msr.incidents.directions.T)
    raw = np.abs(np.einsum("pn,nl,pl->p", np.conj(w1), msr.values, np.conj(w2)))
    meta = _base_metadata(msr, grid, valid)
    if not normalized:
        return IndicatorMap(grid, raw, Algorithm.KM, raw=raw, metadata=meta)
    return IndicatorMap(grid, _normalize(raw, "NKM"), Algorithm.NKM, raw=raw, metadata=meta)


# -- closed-form maps -------------------------------------------------------


def _bessel_terms(scene, grid):
    if not scene.inhomogeneities:
        raise DegenerateDataError("closed-form maps need at least one inhomogeneity")
    pts = grid.points()
    r = scene.centers
    diff = pts[:, None, :] - r[None, :, :]
    j = bessel_j0(scene.background.k0 * np.hypot(diff[..., 0], diff[..., 1]))
    weight = scene.radii**2 * (scene.permittivities - scene.background.eps0)
    return j, weight


def psi1_map(scene, d, grid):
    """|sum_m alpha_m^2 (eps_m - eps0) e^{i k0 d.r_m} J0(k0|z - r_m|)|, normalized."""
    j, weight = _bessel_terms(scene, grid)
    phase = np.exp(1j * scene.background.k0 * scene.centers @ np.asarray(d, dtype=float))
    raw = np.abs(j @ (weight * phase))
    meta = {"scene": scene.fingerprint(), "direction": tuple(map(float, d))}
    return IndicatorMap(grid, _normalize(raw, "PSI1"), Algorithm.PSI1, raw=raw, metadata=meta)


def psi2_map(scene, grid):
    """|sum_m alpha_m^2 (eps_m - eps0) J0(k0|z - r_m|)^2|, normalized."""
    j, weight = _bessel_terms(scene, grid)
    raw = np.abs((j**2) @ weight)
    meta = {"scene": scene.fingerprint()}
    return IndicatorMap(grid, _normalize(raw, "PSI2"), Algorithm.PSI2, raw=raw, metadata=meta)


def psi3_map(scene, grid):
    """Kirchhoff limit; the same expression as :func:`psi2_map`."""
    m = psi2_map(scene, grid)
    m.algorithm = Algorithm.PSI3
    return m


def plane_wave_bessel_check(count, r, z, k0):
    """|mean_l e^{i k0 d_l.(r - z)} - J0(k0|r - z|)| for ``count`` evenly spaced directions."""
    d = make_direction_set(count).directions
    diff = np.asarray(r, dtype=float) - np.asarray(z, dtype=float)
    avg = np.mean(np.exp(1j * k0 * d @ diff))
    return abs(avg - bessel_j0(k0 * math.hypot(*diff)))


def kernel_first_sidelobe():
    """First sidelobe heights of the |J0| and J0^2 kernels and its argument.

    The sidelobe is the first extremum of J0 after its first zero (near 3.83).
    """
    res = minimize_scalar(bessel_j0, bounds=(2.5, 5.5), method="bounded", options={"xatol": 1e-10})
    height = abs(float(res.fun))
    return {"argument": float(res.x), "abs_j0": height, "j0_squared": height**2}
