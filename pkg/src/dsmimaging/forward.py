"""Multistatic response (MSR) data: small-scatterer model, Mie oracle, noise, CSV I/O."""

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import h1vp, hankel1, jv, jvp

from .errors import DomainError, NumericalError, ParseError
from .scene import IncidentSet, SensorArray
from .specfun import green2d

PROVENANCES = ("asymptotic", "mie", "external")
SCALINGS = ("published", "physical")


@dataclass(frozen=True)
class MsrMatrix:
    """N x L scattered field u^s(x_n, d_l), receivers by rows.

    Masked-out entries (``mask`` false) are stored as exact zeros.
    """

    values: np.ndarray
    sensors: SensorArray
    incidents: IncidentSet
    mask: np.ndarray = None
    provenance: str = "asymptotic"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        n, l = len(self.sensors), len(self.incidents)
        if vals.shape != (n, l):
            raise DomainError(f"MSR shape {vals.shape} does not match {n} sensors x {l} incidences")
        mask = np.ones((n, l), dtype=bool) if self.mask is None else np.array(self.mask, dtype=bool)
        if mask.shape != vals.shape:
            raise DomainError("mask shape does not match MSR values")
        if self.provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {self.provenance!r}")
        vals[~mask] = 0.0
        vals.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "mask", mask)

    @property
    def shape(self):
        return self.values.shape

    def column(self, l):
        return self.values[:, l]

    def restrict(self, columns):
        """Keep only the incidences listed in ``columns``."""
        cols = list(columns)
        return replace(
            self,
            values=self.values[:, cols],
            mask=self.mask[:, cols],
            incidents=self.incidents.subset(cols),
        )

    def scaled(self, factor):
        return replace(self, values=self.values * factor)


def published_prefactor(background):
    """Constant k0^2 (1+i) / (4 sqrt(k0 pi)) / sqrt(eps0 mu0) of the small-scatterer formula."""
    k0 = background.k0
    return k0**2 * (1 + 1j) / (4 * math.sqrt(k0 * math.pi)) / math.sqrt(background.eps0 * background.mu0)


def _weights(scene, scaling):
    """Per-scatterer complex amplitude multiplying e^{i k0 d.r_m} Phi(r_m, x)."""
    bg = scene.background
    alpha = scene.radii
    area = np.array([inc.shape_area_factor for inc in scene.inhomogeneities])
    contrast = scene.permittivities - bg.eps0
    if scaling == "published":
        return published_prefactor(bg) * alpha**2 * contrast * area
    if scaling == "physical":
        # Born term of u^s = k0^2 int (eps_r - 1) G u^i with G = -Phi
        return -(bg.k0**2) * (contrast / bg.eps0) * area * alpha**2
    raise DomainError(f"unknown scaling {scaling!r}; expected one of {SCALINGS}")


def _fields(scene, points, directions, scaling):
    """Vectorized small-scatterer field, shape (len(points), len(directions))."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    dirs = np.asarray(directions, dtype=float).reshape(-1, 2)
    out = np.zeros((len(pts), len(dirs)), dtype=complex)
    if not scene.inhomogeneities:
        return out
    k0 = scene.background.k0
    r = scene.centers
    w = _weights(scene, scaling)
    phase = np.exp(1j * k0 * dirs @ r.T)  # (L, M)
    for m in range(len(r)):
        g = green2d(r[m], pts, k0)  # (N,)
        out += np.outer(g, w[m] * phase[:, m])
    return out


def asymptotic_scattered_field(scene, x, d, scaling="published"):
    """Leading-order scattered field of well-separated small disks at ``x``.

    ``scaling="published"`` uses the published constant verbatim; ``"physical"``
    uses the dimensionally consistent Born coefficient ``k0^2 (eps_r - 1)``.
    The two differ by a constant complex factor, so normalized maps agree.
    """
    x = np.asarray(x, dtype=float)
    for m, c in enumerate(scene.centers, 1):
        if np.array_equal(c, x):
            raise DomainError(f"observation point coincides with the center of inhomogeneity {m}")
    return complex(_fields(scene, x, d, scaling)[0, 0])


def assemble_msr(scene, sensors, incidents, scaling="published"):
    for m, c in enumerate(scene.centers, 1):
        hit = np.flatnonzero(np.all(sensors.positions == c, axis=1))
        if hit.size:
            raise DomainError(f"sensor {hit[0] + 1} coincides with inhomogeneity {m} (all columns)")
    vals = _fields(scene, sensors.positions, incidents.directions, scaling)
    return MsrMatrix(vals, sensors, incidents, provenance="asymptotic", meta={"scaling": scaling})


def mie_coefficients(radius, eps_r, k0, truncation):
    """Scattering coefficients a_n, n = -T..T, of a dielectric cylinder under TM illumination."""
    if truncation < 1:
        raise DomainError("truncation must be >= 1")
    n = np.arange(-truncation, truncation + 1)
    m = math.sqrt(eps_r)
    x = k0 * radius
    num = m * jvp(n, m * x) * jv(n, x) - jvp(n, x) * jv(n, m * x)
    den = jv(n, m * x) * h1vp(n, x) - m * jvp(n, m * x) * hankel1(n, x)
    with np.errstate(all="ignore"):
        a = num / den
    if not np.all(np.isfinite(a)):
        raise NumericalError("non-finite Mie coefficients; lower the truncation order")
    return n, a


def default_truncation(radius, k0):
    return int(math.ceil(k0 * radius)) + 15


def mie_cylinder_scattered_field(radius, eps_r, center, k0, x, d, truncation=None):
    """Exact scattered field of a homogeneous circular cylinder (TM, plane wave e^{i k0 d.x}).

    ``x`` may be a single point or an (N, 2) array.
    """
    if truncation is None:
        truncation = default_truncation(radius, k0)
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 2)
    c = np.asarray(center, dtype=float)
    rel = pts - c
    rho = np.hypot(rel[:, 0], rel[:, 1])
    if np.any(rho <= radius):
        raise DomainError("observation point lies inside the cylinder")
    d = np.asarray(d, dtype=float)
    phi = np.arctan2(rel[:, 1], rel[:, 0])
    phi0 = math.atan2(d[1], d[0])
    n, a = mie_coefficients(radius, eps_r, k0, truncation)
    terms = (1j**n * a)[None, :] * hankel1(n[None, :], k0 * rho[:, None])
    terms = terms * np.exp(1j * n[None, :] * (phi[:, None] - phi0))
    u = np.exp(1j * k0 * d @ c) * terms.sum(axis=1)
    if not np.all(np.isfinite(u)):
        raise NumericalError("non-finite Mie field")
    return complex(u[0]) if single else u


def assemble_mie_msr(scene, sensors, incidents, truncation=None):
    """Superpose single-cylinder Mie fields (no inter-cylinder coupling)."""
    bg = scene.background
    vals = np.zeros((len(sensors), len(incidents)), dtype=complex)
    for inc in scene.inhomogeneities:
        for l, d in enumerate(incidents.directions):
            vals[:, l] += mie_cylinder_scattered_field(
                inc.radius, inc.eps / bg.eps0, inc.center, bg.k0, sensors.positions, d, truncation
            )
    return MsrMatrix(vals, sensors, incidents, provenance="mie")


def add_awgn(msr, snr_db, seed):
    """Add circular complex white Gaussian noise at the requested SNR.

    Signal power is the mean |u|^2 over measured entries; the noise variance
    per entry is that power divided by 10^(snr_db/10). ``snr_db=inf``
    disables noise. Draws are taken in row-major order over measured entries.
    """
    if not msr.mask.any():
        raise DomainError("cannot add noise to a fully masked MSR")
    if math.isinf(snr_db) and snr_db > 0:
        return msr
    measured = msr.values[msr.mask]
    power = np.mean(np.abs(measured) ** 2)
    sigma2 = power / 10 ** (snr_db / 10)
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((measured.size, 2))
    noise = math.sqrt(sigma2 / 2) * (draws[:, 0] + 1j * draws[:, 1])
    vals = msr.values.copy()
    vals[msr.mask] = measured + noise
    meta = dict(msr.meta, snr_db=snr_db, noise_seed=seed)
    return replace(msr, values=vals, meta=meta)


# -- CSV exchange -----------------------------------------------------------

_MAGIC = "# dsm-msr v1"


def msr_to_csv(msr):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    buf.write(_MAGIC + "\n")
    n, l = msr.shape
    buf.write(f"# N,{n}\n# L,{l}\n# provenance,{msr.provenance}\n")
    for i, (x, y) in enumerate(msr.sensors.positions, 1):
        buf.write(f"# sensor,{i},{float(x)!r},{float(y)!r}\n")
    for j, (dx, dy) in enumerate(msr.incidents.directions, 1):
        buf.write(f"# incident,{j},{float(dx)!r},{float(dy)!r}\n")
    w.writerow(["n", "l", "re", "im", "mask"])
    for i in range(n):
        for j in range(l):
            v = msr.values[i, j]
            w.writerow([i + 1, j + 1, repr(float(v.real)), repr(float(v.imag)), int(msr.mask[i, j])])
    return buf.getvalue()


def msr_from_csv(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != _MAGIC:
        raise ParseError("missing MSR header", line=1)
    header = {}
    sensors, incidents = [], []
    body_start = None
    for lineno, line in enumerate(lines[1:], 2):
        if line.startswith("#"):
            parts = [p.strip() for p in line[1:].split(",")]
            try:
                if parts[0] == "sensor":
                    sensors.append((float(parts[2]), float(parts[3])))
                elif parts[0] == "incident":
                    incidents.append((float(parts[2]), float(parts[3])))
                else:
                    header[parts[0]] = parts[1]
            except (IndexError, ValueError) as exc:
                raise ParseError(f"bad header row: {exc}", line=lineno) from None
        else:
            body_start = lineno
            break
    if body_start is None:
        raise ParseError("no data section")
    n, l = int(header["N"]), int(header["L"])
    if len(sensors) != n or len(incidents) != l:
        raise ParseError("sensor/incident rows do not match N/L")
    vals = np.zeros((n, l), dtype=complex)
    mask = np.zeros((n, l), dtype=bool)
    seen = np.zeros((n, l), dtype=bool)
    rows = csv.reader(lines[body_start - 1 :])  # first row is the column header
    next(rows)
    for lineno, row in enumerate(rows, body_start + 1):
        if not row:
            continue
        try:
            i, j = int(row[0]) - 1, int(row[1]) - 1
            if not (0 <= i < n and 0 <= j < l):
                raise ValueError(f"index ({i + 1}, {j + 1}) out of range")
            vals[i, j] = complex(float(row[2]), float(row[3]))
            mask[i, j] = bool(int(row[4]))
        except (IndexError, ValueError) as exc:
            raise ParseError(f"bad data row: {exc}", line=lineno) from None
        seen[i, j] = True
    if not seen.all():
        raise ParseError("data rows do not cover the full N x L index set")
    return MsrMatrix(
        vals,
        SensorArray(np.array(sensors)),
        IncidentSet(np.array(incidents)),
        mask=mask,
        provenance=header.get("provenance", "external"),
    )
