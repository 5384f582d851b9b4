"""Reader for the Institut Fresnel 2D experimental data files (``*.exp``).

The files are whitespace-separated text, one measurement per line. Which
column holds what is configurable through a schema mapping field names to
0-based column positions; :data:`DEFAULT_SCHEMA` is the layout
transmitter, receiver, frequency (GHz), Re/Im total field, Re/Im incident field.
Lines whose first token is not numeric (headers, comments) are skipped and
counted.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataIntegrityError, EmptySelectionError, ParseError
from .forward import MsrMatrix
from .scene import EPS0, MU0, IncidentSet, SensorArray

FIELDS = (
    "transmitter",
    "receiver",
    "frequency",
    "total_re",
    "total_im",
    "incident_re",
    "incident_im",
)
DEFAULT_SCHEMA = {name: i for i, name in enumerate(FIELDS)}
_ALIASES = {
    "tx": "transmitter",
    "rx": "receiver",
    "freq": "frequency",
    "tot_re": "total_re",
    "tot_im": "total_im",
    "inc_re": "incident_re",
    "inc_im": "incident_im",
}


@dataclass(frozen=True)
class FresnelRecord:
    transmitter: int
    receiver: int
    frequency: float  # GHz
    total_field: complex
    incident_field: complex

    def __post_init__(self):
        if self.transmitter < 1 or self.receiver < 1:
            raise DataIntegrityError("transmitter and receiver indices start at 1")
        if not self.frequency > 0:
            raise DataIntegrityError(f"frequency must be positive, got {self.frequency}")

    @property
    def scattered_field(self):
        return self.total_field - self.incident_field


@dataclass
class FresnelRecords:
    """Parsed records plus the line numbers that were skipped as non-data."""

    records: list
    skipped_lines: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]


def parse_schema(spec):
    """Parse ``"tx=0,rx=1,freq=2,..."`` into a schema dict."""
    if spec is None or spec == "" or spec == "default":
        return dict(DEFAULT_SCHEMA)
    schema = {}
    for part in spec.split(","):
        try:
            key, col = part.split("=")
            key = _ALIASES.get(key.strip(), key.strip())
            schema[key] = int(col)
        except ValueError:
            raise ParseError(f"bad schema entry {part!r}; expected name=column") from None
    missing = set(FIELDS) - set(schema)
    unknown = set(schema) - set(FIELDS)
    if missing or unknown:
        raise ParseError(f"schema missing {sorted(missing)} / unknown {sorted(unknown)}")
    return schema


def _is_numeric(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_fresnel(stream, schema=None, frequency=None, rel_tol=1e-6):
    """Parse a Fresnel data stream.

    ``stream`` is a string or any iterable of lines. When ``frequency`` (GHz)
    is given, only rows at that frequency are kept.
    """
    schema = dict(DEFAULT_SCHEMA) if schema is None else schema
    lines = stream.splitlines() if isinstance(stream, str) else stream
    width = max(schema.values()) + 1
    records, skipped = [], []
    for lineno, line in enumerate(lines, 1):
        tokens = line.split()
        if not tokens:
            continue
        if not _is_numeric(tokens[0]):
            skipped.append(lineno)
            continue
        if len(tokens) < width:
            raise ParseError(f"expected at least {width} columns, found {len(tokens)}", line=lineno)
        try:
            vals = {name: float(tokens[col]) for name, col in schema.items()}
        except ValueError as exc:
            raise ParseError(f"malformed number ({exc})", line=lineno) from None
        tx, rx = vals["transmitter"], vals["receiver"]
        if tx != int(tx) or rx != int(rx):
            raise ParseError("transmitter/receiver indices must be integers", line=lineno)
        if frequency is not None and not math.isclose(vals["frequency"], frequency, rel_tol=rel_tol):
            continue
        try:
            rec = FresnelRecord(
                int(tx),
                int(rx),
                vals["frequency"],
                complex(vals["total_re"], vals["total_im"]),
                complex(vals["incident_re"], vals["incident_im"]),
            )
        except DataIntegrityError as exc:
            raise ParseError(str(exc), line=lineno) from None
        records.append(rec)
    if not records:
        sel = f" at {frequency} GHz" if frequency is not None else ""
        raise EmptySelectionError(f"no data rows{sel}")
    return FresnelRecords(records, skipped)


def format_fresnel(records, header=None):
    """Write records in the default column layout (inverse of :func:`parse_fresnel`)."""
    out = []
    if header:
        out.extend(header if isinstance(header, list) else [header])
    for r in records:
        out.append(
            f"{r.transmitter} {r.receiver} {r.frequency!r} "
            f"{r.total_field.real!r} {r.total_field.imag!r} "
            f"{r.incident_field.real!r} {r.incident_field.imag!r}"
        )
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class FresnelGeometry:
    """Source and receiver placement on two concentric circles (angles in degrees).

    With ``receivers_relative`` the receiver angles are offsets from the
    active source (rotating-arm setups); the MSR then uses the union of all
    absolute receiver positions and masks the pairs that were not measured.
    """

    source_radius: float
    source_angles: tuple
    receiver_radius: float
    receiver_angles: tuple
    receivers_relative: bool = False

    def __post_init__(self):
        for name in ("source_angles", "receiver_angles"):
            a = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, a)
            if not a:
                raise DataIntegrityError(f"{name} is empty")
            if any(b <= c for c, b in zip(a, a[1:])):
                raise DataIntegrityError(f"{name} must be strictly increasing")
            if a[0] < 0 or a[-1] >= 360:
                raise DataIntegrityError(f"{name} must lie in [0, 360)")
        if self.source_radius <= 0 or self.receiver_radius <= 0:
            raise DataIntegrityError("radii must be positive")

    @property
    def source_count(self):
        return len(self.source_angles)

    @property
    def receiver_count(self):
        return len(self.receiver_angles)


def wavelength_at(frequency_ghz):
    return 1.0 / (frequency_ghz * 1e9 * math.sqrt(EPS0 * MU0))


def default_geometry(frequency_ghz=2.0):
    """36 sources at 4.80 lambda over 10..350 deg; 49 receivers at 5.07 lambda over 5..355 deg."""
    lam = wavelength_at(frequency_ghz)
    return FresnelGeometry(
        source_radius=4.80 * lam,
        source_angles=tuple(np.linspace(10.0, 350.0, 36)),
        receiver_radius=5.07 * lam,
        receiver_angles=tuple(np.linspace(5.0, 355.0, 49)),
    )


def rotating_geometry(source_radius=0.72, receiver_radius=0.76):
    """Sources every 10 deg; 49 receivers from 60 to 300 deg relative to the source, 5 deg apart."""
    return FresnelGeometry(
        source_radius=source_radius,
        source_angles=tuple(10.0 * np.arange(36)),
        receiver_radius=receiver_radius,
        receiver_angles=tuple(60.0 + 5.0 * np.arange(49)),
        receivers_relative=True,
    )


def _receiver_layout(geometry):
    """Absolute receiver angles and a function (tx, rx) -> row index."""
    if not geometry.receivers_relative:
        angles = list(geometry.receiver_angles)
        return angles, lambda tx, rx: rx - 1
    table = {}
    for s in geometry.source_angles:
        for r in geometry.receiver_angles:
            table.setdefault(round((s + r) % 360.0, 9), None)
    angles = sorted(table)
    row = {a: i for i, a in enumerate(angles)}

    def index(tx, rx):
        s = geometry.source_angles[tx - 1]
        r = geometry.receiver_angles[rx - 1]
        return row[round((s + r) % 360.0, 9)]

    return angles, index


def to_msr(records, geometry):
    """Scattered-field MSR (receivers x transmitters); unmeasured pairs are masked."""
    records = list(records)
    if not records:
        raise DataIntegrityError("no records to assemble")
    freqs = {r.frequency for r in records}
    if len(freqs) > 1:
        raise DataIntegrityError(f"records mix frequencies {sorted(freqs)}")
    angles, row_of = _receiver_layout(geometry)
    n, l = len(angles), geometry.source_count
    vals = np.zeros((n, l), dtype=complex)
    mask = np.zeros((n, l), dtype=bool)
    for rec in records:
        if rec.transmitter > l or rec.receiver > geometry.receiver_count:
            raise DataIntegrityError(
                f"pair ({rec.transmitter}, {rec.receiver}) outside the {l} x "
                f"{geometry.receiver_count} geometry"
            )
        i, j = row_of(rec.transmitter, rec.receiver), rec.transmitter - 1
        if mask[i, j]:
            raise DataIntegrityError(f"duplicate pair (transmitter {rec.transmitter}, receiver {rec.receiver})")
        vals[i, j] = rec.scattered_field
        mask[i, j] = True
    ra = np.deg2rad(angles)
    sensors = SensorArray(
        geometry.receiver_radius * np.column_stack([np.cos(ra), np.sin(ra)]),
        {"kind": "circle", "radius": geometry.receiver_radius, "center": (0.0, 0.0)},
    )
    sa = np.deg2rad(geometry.source_angles)
    # plane-wave direction points from the source toward the origin
    dirs = -np.column_stack([np.cos(sa), np.sin(sa)])
    dirs /= np.hypot(dirs[:, 0], dirs[:, 1])[:, None]
    meta = {"frequency_ghz": freqs.pop(), "source_radius": geometry.source_radius}
    return MsrMatrix(vals, sensors, IncidentSet(dirs), mask=mask, provenance="external", meta=meta)
