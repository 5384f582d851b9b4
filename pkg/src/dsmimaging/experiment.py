"""Config-driven experiment runner.

Configs are INI files (stdlib :mod:`configparser`). Sections:

``[experiment]``  name, algorithms, incidences, kappa_steps, output, forward, scaling
``[background]``  wavelength (m)
``[disk.N]``      center, radius (m), eps_r  -- one section per inhomogeneity
``[fresnel]``     path, frequency (GHz), schema, geometry -- instead of disks
``[target.N]``    center, radius, eps_r -- reference cylinders for Fresnel runs
``[sensors]``     radius (m), count, start_angle (deg)
``[incidence]``   start_angle (deg)
``[grid]``        center, side (m), h (m)
``[noise]``       enabled, snr_db, seed

Any key can be overridden with ``section.key=value`` strings.
"""

import configparser
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.ndimage import maximum_filter

from . import export
from .errors import ConfigurationError
from .forward import add_awgn, assemble_mie_msr, assemble_msr
from .fresnel_io import default_geometry, parse_fresnel, parse_schema, rotating_geometry, to_msr, wavelength_at
from .imaging import Algorithm, IndicatorMap, dsm_multi, dsma, kirchhoff, psi1_map, psi2_map, psi3_map
from .metrics import exact_map, jaccard_curve
from .scene import IncidentSet, Scene, check_grid_inside, make_circle_array, make_direction_set, make_grid

BUNDLED = Path(__file__).with_name("configs")
DATA_ALGORITHMS = {"DSM", "DSMA", "KM", "NKM"}
ALL_ALGORITHMS = DATA_ALGORITHMS | {"PSI1", "PSI2", "PSI3"}


@dataclass
class Disk:
    center: tuple
    radius: float
    eps_r: float


@dataclass
class FresnelSource:
    path: str
    frequency: float
    schema: str = "default"
    geometry: str = "fixed"


@dataclass
class ExperimentConfig:
    name: str
    algorithms: list
    incidences: list
    wavelength: float = None
    disks: list = field(default_factory=list)
    fresnel: FresnelSource = None
    targets: list = field(default_factory=list)
    sensor_radius: float = 3.0
    sensor_count: int = 36
    sensor_start_angle: float = 0.0
    incidence_start_angle: float = 180.0
    grid_center: tuple = (0.0, 0.0)
    grid_side: float = 1.2
    grid_h: float = 0.0245
    noise_enabled: bool = True
    snr_db: float = 20.0
    seed: int = 0
    kappa_steps: int = 101
    output: str = "out"
    forward: str = "asymptotic"
    scaling: str = "published"
    source_dir: str = "."

    def validate(self):
        if bool(self.disks) == (self.fresnel is not None):
            raise ConfigurationError("scene: give exactly one of [disk.N] sections or a [fresnel] section")
        if not self.algorithms:
            raise ConfigurationError("experiment.algorithms: at least one algorithm is required")
        bad = set(self.algorithms) - ALL_ALGORITHMS
        if bad:
            raise ConfigurationError(f"experiment.algorithms: unknown {sorted(bad)}")
        if self.fresnel is not None and set(self.algorithms) - DATA_ALGORITHMS:
            raise ConfigurationError("experiment.algorithms: closed-form maps need a disk scene")
        if not self.incidences or any(l < 1 for l in self.incidences):
            raise ConfigurationError("experiment.incidences: need positive incidence counts")
        if self.kappa_steps < 2:
            raise ConfigurationError("experiment.kappa_steps: must be >= 2")
        if self.forward not in ("asymptotic", "mie"):
            raise ConfigurationError("experiment.forward: expected 'asymptotic' or 'mie'")
        if self.disks and not (self.wavelength and self.wavelength > 0):
            raise ConfigurationError("background.wavelength: must be positive")
        for i, d in enumerate(self.disks, 1):
            if d.radius <= 0 or d.eps_r <= 0:
                raise ConfigurationError(f"disk.{i}: radius and eps_r must be positive")
        if self.grid_h <= 0 or self.grid_side <= 0:
            raise ConfigurationError("grid: side and h must be positive")
        return self


def _tuple(text, path):
    try:
        return tuple(float(v) for v in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise ConfigurationError(f"{path}: expected comma-separated numbers, got {text!r}") from None


def _get(cp, section, key, conv, default=None, required=False):
    path = f"{section}.{key}"
    if not cp.has_option(section, key):
        if required:
            raise ConfigurationError(f"{path}: required")
        return default
    raw = cp.get(section, key)
    try:
        if conv is bool:
            return cp.getboolean(section, key)
        return conv(raw)
    except ValueError:
        raise ConfigurationError(f"{path}: cannot parse {raw!r}") from None


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _name_list(text):
    return [v.strip().upper() for v in text.split(",") if v.strip()]


def _disk_sections(cp, prefix):
    names = [s for s in cp.sections() if s.startswith(prefix + ".")]
    names.sort(key=lambda s: int(s.split(".", 1)[1]) if s.split(".", 1)[1].isdigit() else s)
    disks = []
    for s in names:
        disks.append(
            Disk(
                _tuple(_get(cp, s, "center", str, required=True), f"{s}.center"),
                _get(cp, s, "radius", float, required=True),
                _get(cp, s, "eps_r", float, required=True),
            )
        )
    return disks


def apply_overrides(cp, overrides):
    for item in overrides or ():
        if "=" not in item:
            raise ConfigurationError(f"override {item!r}: expected section.key=value")
        key, value = item.split("=", 1)
        if "." not in key:
            raise ConfigurationError(f"override {item!r}: expected section.key=value")
        section, option = key.strip().rsplit(".", 1)
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, option, value.strip())


def resolve_config_path(name):
    p = Path(name)
    if p.exists():
        return p
    bundled = BUNDLED / (name if name.endswith(".ini") else name + ".ini")
    if bundled.exists():
        return bundled
    raise ConfigurationError(f"config {name!r} not found (bundled: {bundled_names()})")


def bundled_names():
    return sorted(p.stem for p in BUNDLED.glob("*.ini"))


def load_config(source, overrides=None):
    """Read an INI config (path, bundled name, or literal text) into an ExperimentConfig."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    source_dir = "."
    if isinstance(source, str) and "\n" in source:
        cp.read_string(source)
    else:
        path = resolve_config_path(str(source))
        cp.read(path, encoding="utf-8")
        source_dir = str(path.parent)
    apply_overrides(cp, overrides)

    fresnel = None
    if cp.has_section("fresnel"):
        fresnel = FresnelSource(
            path=_get(cp, "fresnel", "path", str, required=True),
            frequency=_get(cp, "fresnel", "frequency", float, required=True),
            schema=_get(cp, "fresnel", "schema", str, "default"),
            geometry=_get(cp, "fresnel", "geometry", str, "fixed"),
        )
    wavelength = _get(cp, "background", "wavelength", float)
    if wavelength is None and fresnel is not None:
        wavelength = wavelength_at(fresnel.frequency)

    cfg = ExperimentConfig(
        name=_get(cp, "experiment", "name", str, "experiment"),
        algorithms=_get(cp, "experiment", "algorithms", _name_list, []),
        incidences=_get(cp, "experiment", "incidences", _int_list, [1]),
        wavelength=wavelength,
        disks=_disk_sections(cp, "disk"),
        fresnel=fresnel,
        targets=_disk_sections(cp, "target"),
        sensor_radius=_get(cp, "sensors", "radius", float, 3.0),
        sensor_count=_get(cp, "sensors", "count", int, 36),
        sensor_start_angle=_get(cp, "sensors", "start_angle", float, 0.0),
        incidence_start_angle=_get(cp, "incidence", "start_angle", float, 180.0),
        grid_center=_tuple(_get(cp, "grid", "center", str, "0, 0"), "grid.center"),
        grid_side=_get(cp, "grid", "side", float, 1.2),
        grid_h=_get(cp, "grid", "h", float, 0.0245),
        noise_enabled=_get(cp, "noise", "enabled", bool, True),
        snr_db=_get(cp, "noise", "snr_db", float, 20.0),
        seed=_get(cp, "noise", "seed", int, 0),
        kappa_steps=_get(cp, "experiment", "kappa_steps", int, 101),
        output=_get(cp, "experiment", "output", str, "out"),
        forward=_get(cp, "experiment", "forward", str, "asymptotic"),
        scaling=_get(cp, "experiment", "scaling", str, "published"),
        source_dir=source_dir,
    )
    return cfg.validate()


# -- running ----------------------------------------------------------------


def dominant_peaks(imap, count):
    """The ``count`` largest 8-neighbour local maxima as ``(x, y, value)``, strongest first."""
    v = imap.values
    local = (v == maximum_filter(v, size=3, mode="constant", cval=-np.inf)) & (v > 0)
    idx = np.argwhere(local)
    vals = v[local]
    order = np.lexsort((idx[:, 1], idx[:, 0], -vals))[:count]
    return [(*imap.grid.point_at(*idx[i]), float(vals[i])) for i in order]


def _angles_deg(directions):
    return np.round(np.rad2deg(np.arctan2(directions[:, 1], directions[:, 0])) % 360.0, 9)


def _direction_union(counts, start_deg):
    """Directions for every requested L, merged so one MSR (and one noise draw) serves all."""
    angles = []
    for count in counts:
        d = make_direction_set(count, math.radians(start_deg)).directions
        for a in _angles_deg(d):
            if a not in angles:
                angles.append(a)
    return angles


def _columns_for(msr, count, start_deg, from_data):
    if from_data:
        total = len(msr.incidents)
        if total % count:
            raise ConfigurationError(
                f"experiment.incidences: {count} does not divide the {total} measured transmitters"
            )
        return list(range(0, total, total // count))
    have = list(_angles_deg(msr.incidents.directions))
    want = _angles_deg(make_direction_set(count, math.radians(start_deg)).directions)
    return [have.index(a) for a in want]


def build_scene(cfg):
    disks = cfg.disks or cfg.targets
    return Scene.with_disks(cfg.wavelength, [(d.center, d.radius, d.eps_r) for d in disks])


def build_msr(cfg, scene):
    if cfg.fresnel is not None:
        path = Path(cfg.fresnel.path)
        if not path.is_absolute():
            path = Path(cfg.source_dir) / path
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise export.OutputError(f"cannot read Fresnel data {path}: {exc.strerror}") from exc
        recs = parse_fresnel(text, parse_schema(cfg.fresnel.schema), cfg.fresnel.frequency)
        if cfg.fresnel.geometry == "fixed":
            geom = default_geometry(cfg.fresnel.frequency)
        elif cfg.fresnel.geometry == "rotating":
            geom = rotating_geometry()
        else:
            raise ConfigurationError("fresnel.geometry: expected 'fixed' or 'rotating'")
        msr = to_msr(recs, geom)
    else:
        sensors = make_circle_array(cfg.sensor_radius, cfg.sensor_count, math.radians(cfg.sensor_start_angle))
        angles = np.deg2rad(_direction_union(cfg.incidences, cfg.incidence_start_angle))
        incidents = IncidentSet(np.column_stack([np.cos(angles), np.sin(angles)]))
        if cfg.forward == "mie":
            msr = assemble_mie_msr(scene, sensors, incidents)
        else:
            msr = assemble_msr(scene, sensors, incidents, scaling=cfg.scaling)
    if cfg.noise_enabled:
        msr = add_awgn(msr, cfg.snr_db, cfg.seed)
    fingerprint = scene.fingerprint() if scene is not None else None
    return replace(msr, meta=dict(msr.meta, scene=fingerprint))


def compute_map(algorithm, msr, grid, k0, scene=None):
    if algorithm == "DSM":
        return dsm_multi(msr, grid, k0)
    if algorithm == "DSMA":
        return dsma(msr, grid, k0)
    if algorithm == "KM":
        return kirchhoff(msr, grid, k0, normalized=False)
    if algorithm == "NKM":
        return kirchhoff(msr, grid, k0, normalized=True)
    if algorithm == "PSI1":
        return psi1_map(scene, msr.incidents.directions[0], grid)
    if algorithm == "PSI2":
        return psi2_map(scene, grid)
    if algorithm == "PSI3":
        return psi3_map(scene, grid)
    raise ConfigurationError(f"unknown algorithm {algorithm}")


def _display_values(imap):
    if imap.algorithm is Algorithm.KM:
        peak = imap.values.max()
        return imap.values / peak if peak > 0 else imap.values
    return imap.values


def run_experiment(cfg, output=None):
    """Run every (algorithm, L) job, write maps/curves/summary, return the summary dict."""
    out = Path(output or cfg.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise export.OutputError(f"cannot create {out}: {exc.strerror}") from exc

    scene = build_scene(cfg) if (cfg.disks or cfg.targets) else None
    msr = build_msr(cfg, scene)
    k0 = 2 * math.pi / cfg.wavelength
    grid = make_grid(cfg.grid_center, cfg.grid_side, cfg.grid_h)
    check_grid_inside(grid, msr.sensors)

    exact = exact_map(scene, grid) if scene is not None else None
    if exact is not None:
        export.write_text(out / "exact.csv", export.map_to_csv(exact))
        export.write_pgm(exact, out / "exact.pgm")

    jobs = []
    for count in cfg.incidences:
        cols = _columns_for(msr, count, cfg.incidence_start_angle, cfg.fresnel is not None)
        sub = msr.restrict(cols)
        for alg in cfg.algorithms:
            imap = compute_map(alg, sub, grid, k0, scene)
            stem = f"{alg}_L{count}"
            export.write_text(out / f"{stem}.csv", export.map_to_csv(imap))
            imap_display = imap
            if imap.algorithm is Algorithm.KM:
                imap_display = IndicatorMap(grid, _display_values(imap), imap.algorithm)
            export.write_pgm(imap_display, out / f"{stem}.pgm")
            job = {
                "algorithm": alg,
                "L": count,
                "argmax": list(imap.argmax_point()),
                "peak_value": float(imap.raw.max()) if imap.raw is not None else float(imap.values.max()),
            }
            if scene is not None:
                peaks = dominant_peaks(imap_display, len(scene.inhomogeneities))
                job["dominant_peaks"] = [list(p) for p in peaks]
                job["detection_distance"] = [
                    min(math.dist(c, p[:2]) for p in peaks) for c in scene.centers
                ]
                curve = jaccard_curve(imap_display, exact, cfg.kappa_steps)
                export.write_text(out / f"{stem}_jaccard.csv", curve.to_csv())
                best_k, best_j = curve.best()
                job["best_kappa"] = best_k
                job["best_jaccard"] = best_j
            jobs.append(job)

    summary = {
        "name": cfg.name,
        "config": _config_echo(cfg),
        "grid": {"rows": grid.rows, "cols": grid.cols, "h": grid.h},
        "msr": {"N": msr.shape[0], "L": msr.shape[1], "measured": int(msr.mask.sum())},
        "scene": scene.fingerprint() if scene is not None else None,
        "jobs": jobs,
    }
    export.write_text(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def _config_echo(cfg):
    d = asdict(cfg)
    d.pop("source_dir", None)
    d.pop("output", None)
    return d
