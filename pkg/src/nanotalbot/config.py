"""TOML run configuration: strict schema, unit-suffixed keys, shipped presets.

Every key carries its unit in the name (radius_nm, intensity_kW_m2, ...) and
is converted to SI on load.  Unknown sections or keys are rejected before any
computation; missing keys fall back to the baseline experiment defaults, so a
preset only states what differs from it.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import GratingSpec, SphereSpec, TrapSpec, sphere_mass, talbot_time
from .forces import PatchModel, WallGeometry, YukawaParams

PRESET_NAMES = ("table1", "curveA", "curveB", "fig4")


class ConfigError(Exception):
    """Invalid, unreadable, or out-of-schema configuration."""


# section -> key -> (SI scale factor, default).  Values are numbers except the
# list-valued sweep grids.
_SCHEMA = {
    "sphere": {
        "radius_nm": (1e-9, 6.5e-9),
        "density_kg_m3": (1.0, 2300.0),
        "dielectric": (1.0, 2.0),
    },
    "trap": {
        "frequency_hz": (2.0 * np.pi, 2.0 * np.pi * 100.0),  # stored as omega
        "temperature_k": (1.0, 0.0),
    },
    "grating": {
        "period_um": (1e-6, 0.25e-6),
        "intensity_kW_m2": (1e3, 55e3),
        "pulse_us": (1e-6, 1e-6),
        "wavelength_nm": (1e-9, 0.0),  # 0 = default to 2*period
    },
    "timing": {
        "t0_s": (1.0, 0.0),  # 0 = Talbot time of the configured sphere
        "t1_s": (1.0, 0.0),
    },
    "wall": {
        "separation_um": (1e-6, 10e-6),
        "section_width_um": (1e-6, 40e-6),
        "coating_thickness_nm": (1e-9, 200e-9),
        "coating_density_kg_m3": (1.0, 19300.0),
        "density_a_kg_m3": (1.0, 19300.0),
        "density_b_kg_m3": (1.0, 2330.0),
        "section_depth_um": (1e-6, 100e-6),
        "section_height_m": (1.0, 1.5),
        "n_pairs": (1, 13),
    },
    "yukawa": {
        "lambda_min_um": (1e-6, 1e-6),
        "lambda_max_um": (1e-6, 25e-6),
        "n_lambda": (1, 9),
        "alpha": (1.0, 400.0),       # reference strength for y-scans
        "lambda_um": (1e-6, 5e-6),   # reference range for y-scans
    },
    "budget": {
        "shots": (1, 100000),
    },
    "beta": {
        "mass_scales": (None, (0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0)),
        "occupations": (None, (0.0, 10.0, 100.0, 1000.0)),
        "fall_time_s": (1.0, 0.5),
    },
    "patch": {
        "amplitude_mV": (1e-3, 50e-3),
        "scale_um": (1e-6, 4e-6),
    },
    "scan": {
        "s_min_um": (1e-6, 5e-6),
        "s_max_um": (1e-6, 20e-6),
        "n_s": (1, 16),
        "y_half_span_um": (1e-6, 120e-6),
        "n_y": (1, 25),
    },
    "run": {
        "seed": (1, 12345),
    },
}

_INT_KEYS = {"n_lambda", "n_pairs", "shots", "n_s", "n_y", "seed"}
_LIST_KEYS = {"mass_scales", "occupations"}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, SI-unit run configuration."""
    sphere: SphereSpec
    trap: TrapSpec
    grating: GratingSpec
    t0: float
    t1: float
    wall: WallGeometry
    patch: PatchModel
    yukawa_ref: YukawaParams
    lambda_grid: np.ndarray
    n_shots: int
    beta_mass_scales: np.ndarray
    beta_occupations: np.ndarray
    beta_fall_time: float
    s_scan: np.ndarray
    y_scan: np.ndarray
    seed: int
    content_hash: str
    source: str


def _validate_tree(tree: dict, source: str) -> None:
    if not isinstance(tree, dict):
        raise ConfigError(f"{source}: top level must be a table")
    for section, body in tree.items():
        if section not in _SCHEMA:
            raise ConfigError(f"{source}: unknown section [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"{source}: [{section}] must be a table")
        for key, val in body.items():
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{source}: unknown key {section}.{key}")
            if key in _LIST_KEYS:
                if not isinstance(val, list) or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool) for v in val
                ):
                    raise ConfigError(f"{source}: {section}.{key} must be a numeric array")
            elif not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ConfigError(f"{source}: {section}.{key} must be a number")


def _get(tree: dict, section: str, key: str):
    scale, default = _SCHEMA[section][key]
    raw = tree.get(section, {}).get(key, None)
    if key in _LIST_KEYS:
        return np.asarray(default if raw is None else raw, dtype=float)
    if raw is None:
        value = default
    else:
        value = raw * scale
    if key in _INT_KEYS:
        if value != int(value):
            raise ConfigError(f"{section}.{key} must be an integer")
        return int(value)
    return float(value)


def _content_hash(tree: dict) -> str:
    canon = json.dumps(tree, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(canon).hexdigest()[:12]


def resolve_config(tree: dict, source: str = "<dict>") -> RunConfig:
    """Validate a parsed TOML tree and build the SI-unit configuration."""
    _validate_tree(tree, source)
    g = lambda s, k: _get(tree, s, k)

    try:
        sphere = SphereSpec(g("sphere", "radius_nm"), g("sphere", "density_kg_m3"),
                            g("sphere", "dielectric"))
        trap = TrapSpec(g("trap", "frequency_hz"), g("trap", "temperature_k"))
        grating = GratingSpec(g("grating", "period_um"), g("grating", "intensity_kW_m2"),
                              g("grating", "pulse_us"), g("grating", "wavelength_nm"))
        wall = WallGeometry(
            separation=g("wall", "separation_um"),
            section_width=g("wall", "section_width_um"),
            coating_density=g("wall", "coating_density_kg_m3"),
            coating_thickness=g("wall", "coating_thickness_nm"),
            density_a=g("wall", "density_a_kg_m3"),
            density_b=g("wall", "density_b_kg_m3"),
            section_depth=g("wall", "section_depth_um"),
            section_height=g("wall", "section_height_m"),
            n_pairs=g("wall", "n_pairs"),
        )
        patch = PatchModel(g("patch", "amplitude_mV"), g("patch", "scale_um"))
        yukawa_ref = YukawaParams(g("yukawa", "alpha"), g("yukawa", "lambda_um"))
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    t_talbot = talbot_time(sphere_mass(sphere), grating.period)
    t0 = g("timing", "t0_s") or t_talbot
    t1 = g("timing", "t1_s") or t_talbot
    if t0 < 0 or t1 < 0:
        raise ConfigError(f"{source}: flight times must be non-negative")

    n_lam = g("yukawa", "n_lambda")
    lam_lo, lam_hi = g("yukawa", "lambda_min_um"), g("yukawa", "lambda_max_um")
    if not 0 < lam_lo <= lam_hi:
        raise ConfigError(f"{source}: need 0 < lambda_min_um <= lambda_max_um")
    lambda_grid = np.geomspace(lam_lo, lam_hi, n_lam)

    n_shots = g("budget", "shots")
    if n_shots < 1:
        raise ConfigError(f"{source}: budget.shots must be >= 1")

    s_grid = np.linspace(g("scan", "s_min_um"), g("scan", "s_max_um"), g("scan", "n_s"))
    half = g("scan", "y_half_span_um")
    y_grid = np.linspace(-half, half, g("scan", "n_y"))

    return RunConfig(
        sphere=sphere, trap=trap, grating=grating, t0=t0, t1=t1,
        wall=wall, patch=patch, yukawa_ref=yukawa_ref, lambda_grid=lambda_grid,
        n_shots=n_shots,
        beta_mass_scales=g("beta", "mass_scales"),
        beta_occupations=g("beta", "occupations"),
        beta_fall_time=g("beta", "fall_time_s"),
        s_scan=s_grid, y_scan=y_grid,
        seed=g("run", "seed"),
        content_hash=_content_hash(tree),
        source=source,
    )


def preset_path(name: str) -> Path:
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset '{name}' (choose from {', '.join(PRESET_NAMES)})")
    return Path(str(resources.files("nanotalbot").joinpath("presets", f"{name}.toml")))


def load_config(path_or_preset: str | Path) -> RunConfig:
    """Load a TOML config file; bare preset names resolve to the shipped presets."""
    path = Path(path_or_preset)
    if not path.suffix and str(path_or_preset) in PRESET_NAMES:
        path = preset_path(str(path_or_preset))
    if not path.is_file():
        raise ConfigError(f"configuration file not found: {path}")
    try:
        with open(path, "rb") as fh:
            tree = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return resolve_config(tree, source=str(path))
