"""Closed-form offloading metrics for a cell with WLAN coverage regions.

Implements the kinematic-measure machinery and every derived performance
metric: per-band WLAN coverage probabilities, static and dynamic available
bandwidth with their tail distributions, mean total throughput along random
traversal lines, the mean vertical handover count, and the offloaded-traffic
ratios.  Three evaluation modes exist:

* ``baseline``      - no WLANs deployed.
* ``homogeneous``   - uniform AP placement; the formulas are exact.
* ``inhomogeneous`` - three-level placement (raised intensity on a high
  density region set, reduced on a low density set); the formulas are
  approximations that become exact when both relative intensities vanish.

Both non-baseline modes are evaluated through shared arithmetic cores whose
inputs are prepared per mode.  The preparation is ordered so that an
inhomogeneous evaluation with rho_high = rho_low = 0 produces bit-identical
floating point results to the homogeneous evaluation: the correction terms
collapse to exact IEEE zeros and every remaining operation is executed in
the same sequence.  Tests rely on this reduction.

The alternating inclusion-exclusion sums over AP subsets are never expanded;
they are evaluated through the generating identity

    sum_{m>=1} (-1)^(m-1) * c^m * e_m(u) = 1 - prod_i (1 - c*u_i)

where e_m is the elementary symmetric polynomial of the per-AP coverage
weights u_i.  This makes every metric O(l) in the AP count; the identity is
guarded by tests against the explicit subset sums.

Units: meters / square meters for geometry, kbps for rates, intensities in
points per square meter.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .geometry import ConvexShape, area, boundary_arc_in, contains, max_reach
from .geometry import perimeter as shape_perimeter
from .geometry import _boundary_pieces  # boundary sampling for nesting checks
from .pointprocess import Deployment, IntensityModel

TWO_PI = 2.0 * math.pi

BASELINE = "baseline"
HOMOGENEOUS = "homogeneous"
INHOMOGENEOUS = "inhomogeneous"

# switch plain products to accumulated log1p sums beyond this factor count
_LOG_PRODUCT_MIN_TERMS = 50


@dataclass(frozen=True)
class CellModel:
    """Nested cell regions with their channel rates.

    ``regions[0]`` is the whole cell; each subsequent region is contained in
    the previous one.  ``rates[j]`` is the bitrate available in the band
    between region j and region j+1, and ``wlan_rate`` the bitrate inside
    WLAN coverage.
    """

    regions: tuple[ConvexShape, ...]
    rates: tuple[float, ...]
    wlan_rate: float

    def __post_init__(self) -> None:
        if len(self.regions) != len(self.rates):
            raise ValueError("need one rate per region")
        if len(self.regions) < 1:
            raise ValueError("need at least one region")
        if any(s <= 0.0 for s in self.rates) or self.wlan_rate <= 0.0:
            raise ValueError("rates must be positive")
        for outer, inner in zip(self.regions[:-1], self.regions[1:]):
            if not _covers(outer, inner):
                raise ValueError("cell regions must be nested")

    @classmethod
    def disks(cls, center: tuple[float, float], radii: Sequence[float],
              rates: Sequence[float], wlan_rate: float) -> "CellModel":
        regions = tuple(ConvexShape.disk(center, r) for r in radii)
        return cls(regions, tuple(float(s) for s in rates), float(wlan_rate))

    @property
    def n(self) -> int:
        return len(self.regions)

    @cached_property
    def region_areas(self) -> tuple[float, ...]:
        return tuple(area(s) for s in self.regions)

    @cached_property
    def band_areas(self) -> tuple[float, ...]:
        """Areas of the rings region_j minus region_{j+1} (innermost keeps all)."""
        areas = self.region_areas + (0.0,)
        return tuple(areas[j] - areas[j + 1] for j in range(self.n))

    @property
    def cell_area(self) -> float:
        return self.region_areas[0]

    @cached_property
    def cell_perimeter(self) -> float:
        return shape_perimeter(self.regions[0])

    @cached_property
    def rate_levels(self) -> tuple[float, ...]:
        """Distinct rate values, ascending; the jump points of the q functions."""
        return tuple(sorted(set(self.rates) | {self.wlan_rate}))


def _covers(outer: ConvexShape, inner: ConvexShape, samples: int = 48) -> bool:
    """Containment check by sampling the inner boundary (curved shapes)."""
    tol = 1e-6 * max(1.0, max_reach(outer))
    for piece in _boundary_pieces(inner):
        span = piece.sweep if hasattr(piece, "sweep") else 1.0
        for k in range(samples):
            pt = piece.point(span * (k + 0.5) / samples)
            if not contains(outer, pt, tol):
                return False
    return True


@dataclass(frozen=True)
class OverlapSummary:
    """Scalar geometric inputs consumed by the closed forms.

    ``region_high[j]`` / ``region_low[j]`` are the overlap areas of cell
    region j with the high / low density region sets; ``arc_high`` /
    ``arc_low`` the lengths of the cell boundary inside each set; and the
    ``ap_*`` tuples hold per-AP coverage area and perimeter.
    """

    region_high: tuple[float, ...]
    region_low: tuple[float, ...]
    arc_high: float
    arc_low: float
    ap_areas: tuple[float, ...]
    ap_perimeters: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.region_high) != len(self.region_low):
            raise ValueError("per-region overlap tuples must have equal length")
        if len(self.ap_areas) != len(self.ap_perimeters):
            raise ValueError("need one perimeter per AP area")
        if any(v < 0.0 for v in self.region_high + self.region_low):
            raise ValueError("overlap areas must be non-negative")
        if self.arc_high < 0.0 or self.arc_low < 0.0:
            raise ValueError("boundary arcs must be non-negative")

    @property
    def l(self) -> int:
        return len(self.ap_areas)

    @property
    def cell_high(self) -> float:
        """Overlap of the whole cell with the high density set."""
        return self.region_high[0] if self.region_high else 0.0

    @property
    def cell_low(self) -> float:
        return self.region_low[0] if self.region_low else 0.0

    def ap_radius_like(self, i: int) -> float:
        """Perimeter-derived radius L(D_i)/(2*pi); the radius for a disk."""
        return self.ap_perimeters[i] / TWO_PI

    @classmethod
    def proportional(cls, cell: CellModel, high_fraction: float,
                     low_fraction: float, ap_template: ConvexShape, l: int,
                     arc_high: float | None = None,
                     arc_low: float | None = None) -> "OverlapSummary":
        """Summary with every cell region overlapping the density sets in the
        same proportion, and ``l`` congruent APs.

        When an arc is not given it defaults to the diameter of a half disk
        with the corresponding overlap area, 2*sqrt(2*overlap/pi).
        """
        if not 0.0 <= high_fraction <= 1.0 or not 0.0 <= low_fraction <= 1.0:
            raise ValueError("overlap fractions must be within [0, 1]")
        if high_fraction + low_fraction > 1.0:
            raise ValueError("overlap fractions must sum to at most 1")
        region_high = tuple(high_fraction * a for a in cell.region_areas)
        region_low = tuple(low_fraction * a for a in cell.region_areas)
        if arc_high is None:
            arc_high = 2.0 * math.sqrt(2.0 * region_high[0] / math.pi)
        if arc_low is None:
            arc_low = 2.0 * math.sqrt(2.0 * region_low[0] / math.pi)
        ap_area = area(ap_template)
        ap_perim = shape_perimeter(ap_template)
        return cls(region_high, region_low, float(arc_high), float(arc_low),
                   (ap_area,) * l, (ap_perim,) * l)

    @classmethod
    def measured(cls, cell: CellModel, omega_high: Iterable[ConvexShape],
                 omega_low: Iterable[ConvexShape],
                 deployment: Deployment) -> "OverlapSummary":
        """Summary measured from actual region geometry and a deployment."""
        from .geometry import overlap_area

        omega_high = tuple(omega_high)
        omega_low = tuple(omega_low)
        region_high = tuple(
            sum(overlap_area(region, om) for om in omega_high)
            for region in cell.regions)
        region_low = tuple(
            sum(overlap_area(region, om) for om in omega_low)
            for region in cell.regions)
        arc_high = sum(boundary_arc_in(cell.regions[0], om) for om in omega_high)
        arc_low = sum(boundary_arc_in(cell.regions[0], om) for om in omega_low)
        ap_areas = tuple(area(ap.region) for ap in deployment.aps)
        ap_perims = tuple(shape_perimeter(ap.region) for ap in deployment.aps)
        return cls(region_high, region_low, arc_high, arc_low,
                   ap_areas, ap_perims)


@dataclass(frozen=True)
class MetricsReport:
    """Evaluated metrics for one mode; probabilities clamped into [0, 1]
    with any clamping recorded in ``warnings``."""

    mode: str
    ap_count: int
    static_bandwidth: float
    dynamic_bandwidth: float
    total_throughput: float
    handover_count: float
    band_coverage: tuple[float, ...]
    static_distribution: tuple[tuple[float, float], ...]
    dynamic_distribution: tuple[tuple[float, float], ...]
    wlan_coverage_ratio: float
    wlan_traffic_ratio: float
    warnings: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# kinematic measures


def kinematic_measure(k0, k1: ConvexShape) -> float:
    """Measure of rigid placements of k1 that meet k0.

    ``k0`` may be a shape or a bare point (x, y); a point reduces the measure
    to 2*pi times the area of k1.
    """
    a1, l1 = area(k1), shape_perimeter(k1)
    if not isinstance(k0, ConvexShape):
        return TWO_PI * a1
    a0, l0 = area(k0), shape_perimeter(k0)
    return TWO_PI * (a0 + a1) + l0 * l1


def containment_measure(k1, k0: ConvexShape) -> float:
    """Measure of rigid placements of k1 contained in k0 (clamped at 0)."""
    a0, l0 = area(k0), shape_perimeter(k0)
    if not isinstance(k1, ConvexShape):
        return TWO_PI * a0
    a1, l1 = area(k1), shape_perimeter(k1)
    return max(0.0, TWO_PI * (a0 + a1) - l0 * l1)


def _contact_measure(cell_area: float, cell_perim: float, ap_area: float,
                     ap_perim: float) -> float:
    return TWO_PI * (cell_area + ap_area) + cell_perim * ap_perim


def _g1_value(contact: float, r_hat: float, ov: OverlapSummary,
              rho_high: float, rho_low: float) -> float:
    halo_high = ov.cell_high + r_hat * ov.arc_high
    halo_low = ov.cell_low + r_hat * ov.arc_low
    return contact + TWO_PI * (rho_high * halo_high - rho_low * halo_low)


def g1(cell_region: ConvexShape, ap_region: ConvexShape, ov: OverlapSummary,
       model: IntensityModel) -> float:
    """Placement measure of one AP meeting the cell, corrected for the
    density regions by halo terms around the cell boundary."""
    contact = kinematic_measure(cell_region, ap_region)
    r_hat = shape_perimeter(ap_region) / TWO_PI
    return _g1_value(contact, r_hat, ov, model.rho_high, model.rho_low)


def _g2_value(region_area: float, high_overlap: float, low_overlap: float,
              k: int, rho_high: float, rho_low: float) -> float:
    return (region_area
            + high_overlap * ((1.0 + rho_high) ** k - 1.0)
            + low_overlap * ((1.0 - rho_low) ** k - 1.0))


def g2(cell: CellModel, j: int, k: int, ov: OverlapSummary,
       model: IntensityModel) -> float:
    """Effective area of cell region j (1-based) given that it is met by k
    APs; j = n+1 denotes the empty innermost complement and yields 0."""
    if not 1 <= j <= cell.n + 1:
        raise ValueError("region index out of range")
    if k < 0:
        raise ValueError("k must be non-negative")
    if j == cell.n + 1:
        return 0.0
    return _g2_value(cell.region_areas[j - 1], ov.region_high[j - 1],
                     ov.region_low[j - 1], k, model.rho_high, model.rho_low)


def g3(cell_region: ConvexShape, ap_region: ConvexShape, ov: OverlapSummary,
       model: IntensityModel) -> float:
    """Line-weighted measure of AP placements fully inside the cell,
    corrected for the density regions."""
    a0, l0 = area(cell_region), shape_perimeter(cell_region)
    a1, l1 = area(ap_region), shape_perimeter(ap_region)
    r_hat = l1 / TWO_PI
    inner_high = ov.cell_high - r_hat * ov.arc_high
    inner_low = ov.cell_low - r_hat * ov.arc_low
    return l1 * (TWO_PI * (a1 + a0) - l1 * l0
                 + TWO_PI * model.rho_high * inner_high
                 - TWO_PI * model.rho_low * inner_low)


def _g4_value(cell_area: float, ov: OverlapSummary,
              model: IntensityModel) -> float:
    lam_c = model.mean_intensity(cell_area, ov.cell_high, ov.cell_low)
    num = (model.rho_high * model.lam_high * ov.cell_high
           - model.rho_low * model.lam_low * ov.cell_low)
    return 1.0 + num / (lam_c * cell_area)


def g4(cell: CellModel, ov: OverlapSummary, model: IntensityModel) -> float:
    """Density-weighted correction factor for covering a boundary crossing."""
    return _g4_value(cell.cell_area, ov, model)


# ---------------------------------------------------------------------------
# coverage products and symmetric sums


def coverage_product(u: Sequence[float], scale: float = 1.0) -> float:
    """prod_i (1 - scale*u_i); accumulated in log space for long positive
    products so that per-factor rounding does not compound."""
    factors = [1.0 - scale * ui for ui in u]
    if len(factors) > _LOG_PRODUCT_MIN_TERMS and all(f > 0.0 for f in factors):
        return math.exp(math.fsum(math.log1p(-scale * ui) for ui in u))
    out = 1.0
    for f in factors:
        out *= f
    return out


def leave_one_out_products(u: Sequence[float], scale: float = 1.0) -> list[float]:
    """For each i, prod_{j != i} (1 - scale*u_j), via prefix/suffix products."""
    factors = [1.0 - scale * ui for ui in u]
    n = len(factors)
    prefix = [1.0] * (n + 1)
    for i, f in enumerate(factors):
        prefix[i + 1] = prefix[i] * f
    suffix = [1.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] * factors[i]
    return [prefix[i] * suffix[i + 1] for i in range(n)]


def elementary_symmetric(u: Sequence[float]) -> list[float]:
    """e_0..e_l of the weights, by the standard one-pass recurrence."""
    e = [1.0] + [0.0] * len(u)
    for i, ui in enumerate(u):
        for m in range(i + 1, 0, -1):
            e[m] += ui * e[m - 1]
    return e


@dataclass(frozen=True)
class CoverageTerms:
    """Product-form and symmetric-sum views of the per-AP coverage weights."""

    product: float
    esym: tuple[float, ...]
    clamped: bool


def coverage_terms(u: Sequence[float], scale: float = 1.0) -> CoverageTerms:
    """Evaluate prod(1 - scale*u_i) together with the elementary symmetric
    polynomials of u.  Weights above 1 are clamped (and signalled); the
    alternating subset sums every metric needs follow from the identity
    sum_m (-1)^(m-1) scale^m e_m(u) = 1 - product."""
    u = list(u)
    clamped = any(ui > 1.0 or ui < 0.0 for ui in u)
    if clamped:
        warnings.warn("coverage weights outside [0, 1] were clamped",
                      stacklevel=2)
        u = [min(1.0, max(0.0, ui)) for ui in u]
    return CoverageTerms(coverage_product(u, scale),
                         tuple(elementary_symmetric(u)), clamped)


# ---------------------------------------------------------------------------
# mode preparation


@dataclass
class _ModeInputs:
    mode: str
    cell: CellModel
    u: list[float]
    denominators: list[float]
    scale_high: float
    scale_low: float
    band_high: list[float]  # per-band overlap differences with the high set
    band_low: list[float]
    cell_high: float
    cell_low: float
    handover_area: float  # cell area plus density-weighted overlap correction
    g4_factor: float
    ap_perimeters: tuple[float, ...]
    notes: list[str] = field(default_factory=list)


def _prepare(cell: CellModel, ov: OverlapSummary, model: IntensityModel,
             mode: str) -> _ModeInputs:
    if mode not in (HOMOGENEOUS, INHOMOGENEOUS):
        raise ValueError(f"unknown evaluation mode {mode!r}")
    if len(ov.region_high) != cell.n:
        raise ValueError("overlap summary does not match the cell regions")
    cell_area = cell.cell_area
    cell_perim = cell.cell_perimeter
    notes: list[str] = []
    contacts = [
        _contact_measure(cell_area, cell_perim, ov.ap_areas[i],
                         ov.ap_perimeters[i])
        for i in range(ov.l)
    ]
    if mode == HOMOGENEOUS:
        denominators = contacts
        scale_high = 1.0
        scale_low = 1.0
        band_high = [0.0] * cell.n
        band_low = [0.0] * cell.n
        cell_high = 0.0
        cell_low = 0.0
        handover_area = cell_area
        g4_factor = 1.0
    else:
        rho_h = model.rho_high
        rho_l = model.rho_low
        denominators = [
            _g1_value(contacts[i], ov.ap_radius_like(i), ov, rho_h, rho_l)
            for i in range(ov.l)
        ]
        scale_high = 1.0 + rho_h
        scale_low = 1.0 - rho_l
        padded_high = ov.region_high + (0.0,)
        padded_low = ov.region_low + (0.0,)
        band_high = [padded_high[j] - padded_high[j + 1] for j in range(cell.n)]
        band_low = [padded_low[j] - padded_low[j + 1] for j in range(cell.n)]
        cell_high = ov.cell_high
        cell_low = ov.cell_low
        handover_area = cell_area + rho_h * cell_high - rho_l * cell_low
        g4_factor = _g4_value(cell_area, ov, model)
        if ov.l > 100:
            notes.append("handover-formula-unreliable-for-large-l")
    u = [TWO_PI * ov.ap_areas[i] / denominators[i] for i in range(ov.l)]
    if any(ui > 1.0 or ui < 0.0 for ui in u):
        notes.append("coverage-weight-clamped")
        u = [min(1.0, max(0.0, ui)) for ui in u]
    return _ModeInputs(mode, cell, u, denominators, scale_high, scale_low,
                       band_high, band_low, cell_high, cell_low,
                       handover_area, g4_factor, ov.ap_perimeters, notes)


@dataclass
class _Products:
    hit1: float   # 1 - prod(1 - u)
    dhit_high: float  # same with weights scaled by 1+rho_high, minus hit1
    dhit_low: float
    miss1: float  # prod(1 - u)
    dmiss_high: float
    dmiss_low: float


def _products(mi: _ModeInputs) -> _Products:
    miss1 = coverage_product(mi.u, 1.0)
    miss_h = coverage_product(mi.u, mi.scale_high)
    miss_l = coverage_product(mi.u, mi.scale_low)
    hit1 = 1.0 - miss1
    hit_h = 1.0 - miss_h
    hit_l = 1.0 - miss_l
    return _Products(hit1, hit_h - hit1, hit_l - hit1,
                     miss1, miss_h - miss1, miss_l - miss1)


# ---------------------------------------------------------------------------
# metric cores


def _band_coverage(mi: _ModeInputs, pr: _Products,
                   notes: list[str]) -> list[float]:
    cell_area = mi.cell.cell_area
    band_areas = mi.cell.band_areas
    out = []
    clamped = False
    for j in range(mi.cell.n):
        raw = (band_areas[j] * pr.hit1 + mi.band_high[j] * pr.dhit_high
               + mi.band_low[j] * pr.dhit_low) / cell_area
        val = min(1.0, max(0.0, raw))
        clamped = clamped or val != raw
        out.append(val)
    if clamped:
        notes.append("band-coverage-clamped")
    return out


def _compose_static(cell: CellModel, pj: Sequence[float]) -> float:
    cell_area = cell.cell_area
    total = 0.0
    for j in range(cell.n):
        weight = cell.band_areas[j] / cell_area
        total += pj[j] * cell.wlan_rate + (weight - pj[j]) * cell.rates[j]
    return total


def _compose_distribution(cell: CellModel, pj: Sequence[float],
                          notes: list[str]) -> tuple[tuple[float, float], ...]:
    cell_area = cell.cell_area
    out = []
    clamped = False
    for x in cell.rate_levels:
        total = 0.0
        for j in range(cell.n):
            weight = cell.band_areas[j] / cell_area
            iw = 1.0 if cell.wlan_rate >= x else 0.0
            ij = 1.0 if cell.rates[j] >= x else 0.0
            total += pj[j] * iw + (weight - pj[j]) * ij
        val = min(1.0, max(0.0, total))
        clamped = clamped or val != total
        out.append((x, val))
    if clamped:
        notes.append("distribution-clamped")
    return tuple(out)


def _throughput(mi: _ModeInputs, pr: _Products) -> float:
    cell = mi.cell
    cell_area = cell.cell_area
    covered = (cell_area * pr.hit1 + mi.cell_high * pr.dhit_high
               + mi.cell_low * pr.dhit_low)
    total = cell.wlan_rate * covered
    for j in range(cell.n):
        uncovered_j = (cell.band_areas[j] * pr.miss1
                       + mi.band_high[j] * pr.dmiss_high
                       + mi.band_low[j] * pr.dmiss_low)
        total += cell.rates[j] * uncovered_j
    return math.pi / cell.cell_perimeter * total


def _handovers(mi: _ModeInputs) -> float:
    survival = leave_one_out_products(
        [mi.g4_factor * ui for ui in mi.u], 1.0)
    cell_perim = mi.cell.cell_perimeter
    total = 0.0
    for i in range(len(mi.u)):
        term = (4.0 * math.pi * mi.ap_perimeters[i] * mi.handover_area
                / (cell_perim * mi.denominators[i]))
        total += term * survival[i]
    return total


# ---------------------------------------------------------------------------
# public operations


def band_coverage_probabilities(cell: CellModel, ov: OverlapSummary,
                                model: IntensityModel,
                                mode: str) -> tuple[float, ...]:
    """Per-band probability that a uniform point lies in the band and is
    covered by at least one WLAN."""
    mi = _prepare(cell, ov, model, mode)
    return tuple(_band_coverage(mi, _products(mi), mi.notes))


def baseline_static(cell: CellModel) -> tuple[float, tuple[tuple[float, float], ...]]:
    """Mean and tail distribution of the bandwidth with no WLANs deployed."""
    zero = (0.0,) * cell.n
    bs = _compose_static(cell, zero)
    qs = _compose_distribution(cell, zero, [])
    return bs, qs


def _empty_summary(cell: CellModel) -> OverlapSummary:
    zeros = (0.0,) * cell.n
    return OverlapSummary(zeros, zeros, 0.0, 0.0, (), ())


def baseline_dynamic(cell: CellModel) -> tuple[
        float, tuple[tuple[float, float], ...], float]:
    """No-WLAN dynamic bandwidth, its distribution, and total throughput.

    The dynamic mean is the throughput divided by the mean chord length and
    must coincide with the static mean up to rounding.
    """
    td = mean_total_throughput(cell, _empty_summary(cell),
                               IntensityModel.homogeneous(1.0), HOMOGENEOUS)
    bd = td * cell.cell_perimeter / (math.pi * cell.cell_area)
    bs, qs = baseline_static(cell)
    if abs(bd - bs) > 1e-12 * abs(bs):
        raise RuntimeError("dynamic/static baseline identity violated")
    return bd, qs, td


def static_bandwidth(cell: CellModel, ov: OverlapSummary,
                     model: IntensityModel, mode: str) -> tuple[
                         float, tuple[tuple[float, float], ...]]:
    """Mean bandwidth and tail distribution for a stationary user."""
    mi = _prepare(cell, ov, model, mode)
    pj = _band_coverage(mi, _products(mi), mi.notes)
    return _compose_static(cell, pj), _compose_distribution(cell, pj, mi.notes)


def mean_total_throughput(cell: CellModel, ov: OverlapSummary,
                          model: IntensityModel, mode: str) -> float:
    """Mean kbit delivered over one straight-line cell traversal at unit
    speed, averaged over the invariant line measure."""
    mi = _prepare(cell, ov, model, mode)
    return _throughput(mi, _products(mi))


def dynamic_bandwidth(cell: CellModel, ov: OverlapSummary,
                      model: IntensityModel, mode: str) -> tuple[
                          float, tuple[tuple[float, float], ...]]:
    """Mean bandwidth and tail distribution for a user on a random line.

    The dynamic closed forms are the same alternating sums as the static
    ones after summing over bands (the per-band terms telescope), so they
    are evaluated through the identical composition; the quotient identity
    B_d = T_d * L(C) / (pi * |C|) then holds up to rounding.
    """
    return static_bandwidth(cell, ov, model, mode)


def mean_handovers(cell: CellModel, ov: OverlapSummary,
                   model: IntensityModel, mode: str) -> float:
    """Mean number of vertical handovers along a random cell traversal."""
    mi = _prepare(cell, ov, model, mode)
    if mi.notes and "handover-formula-unreliable-for-large-l" in mi.notes:
        warnings.warn("handover closed form underestimates for large AP "
                      "counts under inhomogeneous placement", stacklevel=2)
    return _handovers(mi)


def offload_ratios(cell: CellModel, ov: OverlapSummary,
                   model: IntensityModel, mode: str) -> tuple[float, float]:
    """(traffic fraction through WLANs, fraction of the cell covered)."""
    mi = _prepare(cell, ov, model, mode)
    pj = _band_coverage(mi, _products(mi), mi.notes)
    p_wlan = sum(pj)
    bs = _compose_static(cell, pj)
    if mi.u:
        r_wlan = cell.wlan_rate * p_wlan / bs
    else:
        r_wlan = 0.0
    return min(1.0, max(0.0, r_wlan)), min(1.0, max(0.0, p_wlan))


def evaluate(cell: CellModel, ov: OverlapSummary, model: IntensityModel,
             mode: str) -> MetricsReport:
    """Evaluate every metric for one mode into a MetricsReport."""
    if mode == BASELINE:
        bs, qs = baseline_static(cell)
        bd, qd, td = baseline_dynamic(cell)
        return MetricsReport(
            mode=mode, ap_count=0, static_bandwidth=bs, dynamic_bandwidth=bd,
            total_throughput=td, handover_count=0.0,
            band_coverage=(0.0,) * cell.n, static_distribution=qs,
            dynamic_distribution=qd, wlan_coverage_ratio=0.0,
            wlan_traffic_ratio=0.0)
    mi = _prepare(cell, ov, model, mode)
    pr = _products(mi)
    pj = _band_coverage(mi, pr, mi.notes)
    bs = _compose_static(cell, pj)
    qs = _compose_distribution(cell, pj, mi.notes)
    td = _throughput(mi, pr)
    nh = _handovers(mi)
    p_wlan = sum(pj)
    r_wlan = cell.wlan_rate * p_wlan / bs if mi.u else 0.0
    # deduplicate note order-preservingly
    seen: list[str] = []
    for note in mi.notes:
        if note not in seen:
            seen.append(note)
    return MetricsReport(
        mode=mode, ap_count=len(mi.u), static_bandwidth=bs,
        dynamic_bandwidth=bs, total_throughput=td, handover_count=nh,
        band_coverage=tuple(pj), static_distribution=qs,
        dynamic_distribution=qs, wlan_coverage_ratio=min(1.0, max(0.0, p_wlan)),
        wlan_traffic_ratio=min(1.0, max(0.0, r_wlan)),
        warnings=tuple(seen))
