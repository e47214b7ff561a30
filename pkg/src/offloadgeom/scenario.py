"""Scenario files: flat dotted-key text configs and their domain objects.

A scenario file is line-oriented ``key = value`` text with ``#`` comments.
Unknown keys are errors.  Values are numbers, comma-separated number lists,
or bare words.  Defaults describe a four-band disk cell of radius 1000 m
(rates 300/750/1500/2000 kbps, WLAN rate 10000 kbps), congruent disk APs of
radius 50 m, relative intensities rho_h = 3 and rho_l = 1 with 30% of the
cell overlapping each density region, and boundary arcs equal to the
diameter of a half disk of the overlap area.

The density regions are realized geometrically as disks centered on the cell
boundary (so that the cell overlap is approximately a half disk), which is
what the samplers use; the closed forms consume either the nominal scalar
summary or one measured from that geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .formulas import CellModel, OverlapSummary
from .geometry import (
    ConvexShape,
    area,
    boundary_arc_in,
    max_reach,
    overlap_area,
    perimeter,
)
from .pointprocess import IntensityModel
from .simulator import SimConfig, SimScenario


class ScenarioError(ValueError):
    """Raised for malformed or inconsistent scenario configuration."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Flat scenario parameters; see module docstring for the defaults."""

    cell_radii: tuple[float, ...] = (1000.0, 500.0, 200.0, 100.0)
    cell_rates: tuple[float, ...] = (300.0, 750.0, 1500.0, 2000.0)
    cell_shape: str = "disk"
    cell_a: float = 0.0
    wlan_rate: float = 10000.0
    wlan_shape: str = "disk"
    wlan_r: float = 50.0
    wlan_a: float = 0.0
    rho_h: float = 3.0
    rho_l: float = 1.0
    omega_h_frac: float = 0.3
    omega_l_frac: float = 0.3
    arc_h: float | None = None  # None: 2*sqrt(2*overlap/pi)
    arc_l: float | None = None
    lambda0_per_km2: float = 100.0
    l: int = 100
    l_mode: str = "fixed"
    omega_placement: str = "fixed"
    n_points: int = 20000
    n_lines: int = 2000
    n_replications: int = 10
    seed: int = 0


_KEY_MAP = {
    "cell.radii": ("cell_radii", "float_list"),
    "cell.rates": ("cell_rates", "float_list"),
    "cell.shape": ("cell_shape", "word"),
    "cell.a": ("cell_a", "float"),
    "wlan.s_w": ("wlan_rate", "float"),
    "wlan.shape": ("wlan_shape", "word"),
    "wlan.r": ("wlan_r", "float"),
    "wlan.a": ("wlan_a", "float"),
    "intensity.rho_h": ("rho_h", "float"),
    "intensity.rho_l": ("rho_l", "float"),
    "intensity.omega_h_frac": ("omega_h_frac", "float"),
    "intensity.omega_l_frac": ("omega_l_frac", "float"),
    "intensity.arc_h": ("arc_h", "float"),
    "intensity.arc_l": ("arc_l", "float"),
    "intensity.lambda0_per_km2": ("lambda0_per_km2", "float"),
    "deploy.l": ("l", "int"),
    "deploy.l_mode": ("l_mode", "word"),
    "deploy.omega_placement": ("omega_placement", "word"),
    "sim.n_points": ("n_points", "int"),
    "sim.n_lines": ("n_lines", "int"),
    "sim.n_replications": ("n_replications", "int"),
    "sim.seed": ("seed", "int"),
}

_SHAPES = ("disk", "stadium", "pair_disk")


def _parse_value(raw: str, kind: str, key: str):
    raw = raw.strip()
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "float_list":
            return tuple(float(part) for part in raw.split(",") if part.strip())
        return raw
    except ValueError as exc:
        raise ScenarioError(f"bad value for {key}: {raw!r}") from exc


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse scenario text; unknown keys and malformed values are errors."""
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEY_MAP:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        name, kind = _KEY_MAP[key]
        overrides[name] = _parse_value(raw, kind, key)
    cfg = ScenarioConfig(**overrides)
    validate_scenario(cfg)
    return cfg


def load_scenario(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def validate_scenario(cfg: ScenarioConfig) -> None:
    if len(cfg.cell_radii) != len(cfg.cell_rates) or not cfg.cell_radii:
        raise ScenarioError("cell.radii and cell.rates must match and be non-empty")
    if list(cfg.cell_radii) != sorted(cfg.cell_radii, reverse=True):
        raise ScenarioError("cell.radii must be strictly decreasing")
    if any(r <= 0 for r in cfg.cell_radii):
        raise ScenarioError("cell.radii must be positive")
    if any(s <= 0 for s in cfg.cell_rates) or cfg.wlan_rate <= 0:
        raise ScenarioError("rates must be positive")
    if cfg.cell_shape not in _SHAPES or cfg.wlan_shape not in _SHAPES:
        raise ScenarioError(f"shapes must be one of {_SHAPES}")
    if cfg.cell_a < 0 or cfg.wlan_a < 0:
        raise ScenarioError("elongation a must be non-negative")
    if cfg.rho_h < 0 or not 0 <= cfg.rho_l <= 1:
        raise ScenarioError("need rho_h >= 0 and 0 <= rho_l <= 1")
    if not 0 <= cfg.omega_h_frac or not 0 <= cfg.omega_l_frac \
            or cfg.omega_h_frac + cfg.omega_l_frac > 1:
        raise ScenarioError("overlap fractions must be >= 0 and sum to <= 1")
    if cfg.l < 0:
        raise ScenarioError("deploy.l must be non-negative")
    if cfg.l_mode not in ("fixed", "poisson"):
        raise ScenarioError("deploy.l_mode must be fixed or poisson")
    if cfg.omega_placement not in ("fixed", "resample"):
        raise ScenarioError("deploy.omega_placement must be fixed or resample")
    if cfg.lambda0_per_km2 < 0:
        raise ScenarioError("intensity.lambda0_per_km2 must be non-negative")
    if min(cfg.n_points, cfg.n_lines, cfg.n_replications) < 1:
        raise ScenarioError("sim.* counts must be at least 1")


def _make_shape(kind: str, center, r: float, a: float,
                orientation: float = 0.0) -> ConvexShape:
    if kind == "disk" or a == 0.0:
        return ConvexShape.disk(center, r)
    if kind == "stadium":
        return ConvexShape.stadium(center, r, a, orientation)
    return ConvexShape.pair_disk(center, r, a, orientation)


def build_cell(cfg: ScenarioConfig) -> CellModel:
    regions = tuple(_make_shape(cfg.cell_shape, (0.0, 0.0), r, cfg.cell_a)
                    for r in cfg.cell_radii)
    return CellModel(regions, cfg.cell_rates, cfg.wlan_rate)


def build_ap_template(cfg: ScenarioConfig) -> ConvexShape:
    return _make_shape(cfg.wlan_shape, (0.0, 0.0), cfg.wlan_r, cfg.wlan_a)


def build_omegas(cfg: ScenarioConfig, cell: CellModel) -> tuple[
        tuple[ConvexShape, ...], tuple[ConvexShape, ...]]:
    """Density regions as disks centered on the cell boundary.

    A disk of radius t centered on the boundary overlaps the cell in
    approximately a half disk of area pi*t^2/2, matching the nominal overlap
    fraction; the high region sits at the rightmost boundary point and the
    low region at the leftmost.
    """
    cell_area = cell.cell_area
    reach = max_reach(cell.regions[0])
    out: list[tuple[ConvexShape, ...]] = []
    for frac, side in ((cfg.omega_h_frac, 1.0), (cfg.omega_l_frac, -1.0)):
        if frac <= 0.0:
            out.append(())
            continue
        t = math.sqrt(2.0 * frac * cell_area / math.pi)
        out.append((ConvexShape.disk((side * reach, 0.0), t),))
    omega_high, omega_low = out
    return omega_high, omega_low


def build_intensity(cfg: ScenarioConfig, cell: CellModel,
                    with_geometry: bool) -> IntensityModel:
    lam0 = cfg.lambda0_per_km2 * 1e-6  # per km^2 -> per m^2
    if lam0 <= 0.0:
        lam0 = 1e-6
    if with_geometry:
        omega_high, omega_low = build_omegas(cfg, cell)
    else:
        omega_high, omega_low = (), ()
    return IntensityModel.from_relative(cfg.rho_h, cfg.rho_l, lam0,
                                        omega_high, omega_low)


def nominal_summary(cfg: ScenarioConfig, cell: CellModel) -> OverlapSummary:
    """Scalar overlap summary from the configured fractions and arcs, with
    every cell region overlapping the density sets proportionally."""
    template = build_ap_template(cfg)
    return OverlapSummary.proportional(
        cell, cfg.omega_h_frac, cfg.omega_l_frac, template, cfg.l,
        arc_high=cfg.arc_h, arc_low=cfg.arc_l)


def measured_summary(cfg: ScenarioConfig, cell: CellModel,
                     l: int | None = None) -> OverlapSummary:
    """Overlap summary measured from the realized region geometry, with
    ``l`` (default the configured count) congruent APs from the template."""
    omega_high, omega_low = build_omegas(cfg, cell)
    template = build_ap_template(cfg)
    count = cfg.l if l is None else l
    region_high = tuple(
        sum(overlap_area(region, om) for om in omega_high)
        for region in cell.regions)
    region_low = tuple(
        sum(overlap_area(region, om) for om in omega_low)
        for region in cell.regions)
    arc_high = sum(boundary_arc_in(cell.regions[0], om) for om in omega_high)
    arc_low = sum(boundary_arc_in(cell.regions[0], om) for om in omega_low)
    return OverlapSummary(region_high, region_low, arc_high, arc_low,
                          (area(template),) * count,
                          (perimeter(template),) * count)


def build_sim_scenario(cfg: ScenarioConfig,
                       homogeneous: bool = False) -> SimScenario:
    """Simulation scenario; ``homogeneous`` drops the density regions and
    samples uniformly at the same base intensity."""
    cell = build_cell(cfg)
    if homogeneous:
        lam0 = max(cfg.lambda0_per_km2 * 1e-6, 1e-6)
        intensity = IntensityModel.homogeneous(lam0)
    else:
        intensity = build_intensity(cfg, cell, with_geometry=True)
    return SimScenario(cell=cell, intensity=intensity,
                       ap_template=build_ap_template(cfg),
                       l=cfg.l, omega_placement=cfg.omega_placement)


def sim_config(cfg: ScenarioConfig) -> SimConfig:
    return SimConfig(n_points=cfg.n_points, n_lines=cfg.n_lines,
                     n_replications=cfg.n_replications, seed=cfg.seed,
                     l_mode=cfg.l_mode)


def solve_radius_for_area(kind: str, a: float, target_area: float) -> float:
    """Radius giving a shape of ``kind`` with elongation ``a`` the target
    area; used by shape sweeps that hold the coverage area fixed."""
    if target_area <= 0.0:
        raise ScenarioError("target area must be positive")
    if kind == "disk" or a == 0.0:
        return math.sqrt(target_area / math.pi)
    if kind == "stadium":
        # pi r^2 + 4 a r = area
        return (-4.0 * a + math.sqrt(16.0 * a * a
                                     + 4.0 * math.pi * target_area)) / (2.0 * math.pi)
    from scipy.optimize import brentq

    def gap(r: float) -> float:
        return area(ConvexShape.pair_disk((0.0, 0.0), r, a)) - target_area

    lo = math.sqrt(target_area / (2.0 * math.pi))  # two disjoint disks
    hi = math.sqrt(target_area / math.pi)          # fully merged
    if gap(lo) >= 0.0:
        return lo
    if gap(hi) <= 0.0:
        return hi
    return float(brentq(gap, lo, hi, xtol=1e-12))
