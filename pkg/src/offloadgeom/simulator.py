"""Monte Carlo geometric oracle for the closed-form metrics.

Three estimation passes mirror the metric definitions directly:

* static: uniform points in the cell, rate = WLAN rate where covered by the
  union of AP regions, else the rate of the point's quality band;
* dynamic: lines drawn from the motion-invariant measure conditioned on
  hitting the cell, chords partitioned into covered / per-band uncovered
  segments;
* handover: crossings of AP-region boundaries inside the cell that are not
  covered by any other AP.

``run_replications`` resamples the deployment per replication (fixed AP
count or Poisson) and aggregates the per-replication estimates.  Everything
is a deterministic function of the master seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .formulas import CellModel
from .geometry import (
    ConvexShape,
    bounding_box,
    contains,
    contains_many,
    boundary_line_params,
    line_intervals,
    max_reach,
    place,
    shapes_intersect,
    Line,
)
from .pointprocess import (
    AccessPoint,
    Deployment,
    IntensityModel,
    conditioned_deployment,
    sample_deployment,
)

TWO_PI = 2.0 * math.pi

FIXED = "fixed"
POISSON = "poisson"

_REL_CONSERVATION_TOL = 1e-9


@dataclass(frozen=True)
class SimConfig:
    """Sampling effort and seeding for one simulation run."""

    n_points: int = 10000
    n_lines: int = 1000
    n_replications: int = 1
    seed: int = 0
    l_mode: str = FIXED

    def __post_init__(self) -> None:
        if min(self.n_points, self.n_lines, self.n_replications) < 1:
            raise ValueError("sampling counts must be at least 1")
        if self.l_mode not in (FIXED, POISSON):
            raise ValueError("l_mode must be 'fixed' or 'poisson'")


class Estimate(tuple):
    """(value, stderr) pair with attribute access."""

    def __new__(cls, value: float, stderr: float):
        return super().__new__(cls, (float(value), float(stderr)))

    @property
    def value(self) -> float:
        return self[0]

    @property
    def stderr(self) -> float:
        return self[1]


@dataclass(frozen=True)
class SimResult:
    """Estimates with standard errors for every simulated metric."""

    static_bandwidth: Estimate
    dynamic_bandwidth: Estimate
    total_throughput: Estimate
    handover_count: Estimate
    wlan_coverage_ratio: Estimate
    wlan_traffic_ratio: Estimate
    band_coverage: tuple[Estimate, ...]
    static_distribution: tuple[tuple[float, Estimate], ...]
    dynamic_distribution: tuple[tuple[float, Estimate], ...]
    replications: int
    ap_count: float


@dataclass(frozen=True)
class SimScenario:
    """Everything a replicated simulation needs to draw deployments."""

    cell: CellModel
    intensity: IntensityModel
    ap_template: ConvexShape
    l: int | None = None
    omega_placement: str = "fixed"  # or "resample": rotate regions per rep

    def __post_init__(self) -> None:
        if self.omega_placement not in ("fixed", "resample"):
            raise ValueError("omega_placement must be 'fixed' or 'resample'")


# ---------------------------------------------------------------------------
# spatial index for union-coverage point queries


class _CoverageIndex:
    """Uniform grid over AP bounding boxes; cell size = largest AP extent."""

    def __init__(self, aps: Sequence[AccessPoint]):
        self.aps = list(aps)
        self.cells: dict[tuple[int, int], list[int]] = {}
        if not aps:
            self.h = 1.0
            self.x0 = self.y0 = 0.0
            return
        boxes = [bounding_box(ap.region) for ap in aps]
        self.h = max(max(b[2] - b[0], b[3] - b[1]) for b in boxes)
        self.h = max(self.h, 1e-9)
        self.x0 = min(b[0] for b in boxes)
        self.y0 = min(b[1] for b in boxes)
        for idx, b in enumerate(boxes):
            ix0 = math.floor((b[0] - self.x0) / self.h)
            ix1 = math.floor((b[2] - self.x0) / self.h)
            iy0 = math.floor((b[1] - self.y0) / self.h)
            iy1 = math.floor((b[3] - self.y0) / self.h)
            for ix in range(ix0, ix1 + 1):
                for iy in range(iy0, iy1 + 1):
                    self.cells.setdefault((ix, iy), []).append(idx)

    def covered(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        out = np.zeros(xs.shape, dtype=bool)
        if not self.aps:
            return out
        ix = np.floor((xs - self.x0) / self.h).astype(np.int64)
        iy = np.floor((ys - self.y0) / self.h).astype(np.int64)
        keys = ix * 2147483647 + iy
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        boundaries = np.nonzero(np.diff(sorted_keys))[0] + 1
        starts = np.concatenate(([0], boundaries))
        ends = np.concatenate((boundaries, [keys.size]))
        for s, e in zip(starts, ends):
            sel = order[s:e]
            key = (int(ix[sel[0]]), int(iy[sel[0]]))
            cand = self.cells.get(key)
            if not cand:
                continue
            sub_x, sub_y = xs[sel], ys[sel]
            hit = np.zeros(sel.size, dtype=bool)
            for idx in cand:
                todo = ~hit
                if not todo.any():
                    break
                hit[todo] = contains_many(self.aps[idx].region,
                                          sub_x[todo], sub_y[todo])
            out[sel] = hit
        return out


# ---------------------------------------------------------------------------
# interval arithmetic along a line


def _merge(parts: list[tuple[float, float]]) -> list[tuple[float, float]]:
    if not parts:
        return []
    parts = sorted(parts)
    out = [parts[0]]
    for lo, hi in parts[1:]:
        if lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _intersect(a: list[tuple[float, float]],
               b: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def _subtract(a: list[tuple[float, float]],
              b: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out = []
    for lo, hi in a:
        cur = lo
        for blo, bhi in b:
            if bhi <= cur or blo >= hi:
                continue
            if blo > cur:
                out.append((cur, blo))
            cur = max(cur, bhi)
            if cur >= hi:
                break
        if cur < hi:
            out.append((cur, hi))
    return out


def _measure(a: Iterable[tuple[float, float]]) -> float:
    return sum(hi - lo for lo, hi in a)


# ---------------------------------------------------------------------------
# sampling primitives


def sample_cell_points(cell_region: ConvexShape, n: int,
                       rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """n points uniform in the region, by rejection from its bounding box."""
    x0, y0, x1, y1 = bounding_box(cell_region)
    xs_parts, ys_parts = [], []
    got = 0
    while got < n:
        k = max(1024, 2 * (n - got))
        xs = rng.uniform(x0, x1, k)
        ys = rng.uniform(y0, y1, k)
        keep = contains_many(cell_region, xs, ys)
        xs, ys = xs[keep], ys[keep]
        take = min(n - got, xs.size)
        xs_parts.append(xs[:take])
        ys_parts.append(ys[:take])
        got += take
    return np.concatenate(xs_parts), np.concatenate(ys_parts)


def sample_hit_lines(cell_region: ConvexShape, n: int,
                     rng: np.random.Generator) -> list[Line]:
    """n lines from the invariant measure, conditioned on meeting the region.

    The angle is uniform on [0, pi) and the offset uniform on a symmetric
    interval around the region's center wide enough to cover it; lines that
    miss the region are rejected (they do not count toward n).
    """
    cx, cy = cell_region.center
    reach = max_reach(cell_region)
    out: list[Line] = []
    while len(out) < n:
        k = max(256, 2 * (n - len(out)))
        thetas = rng.uniform(0.0, math.pi, k)
        offsets = rng.uniform(-reach, reach, k)
        for theta, q in zip(thetas, offsets):
            p = cx * math.cos(theta) + cy * math.sin(theta) + q
            line = Line(theta, p)
            if line_intervals(cell_region, line):
                out.append(line)
                if len(out) == n:
                    break
    return out


# ---------------------------------------------------------------------------
# single-run estimation passes


def _ratio_stderr(num: np.ndarray, den: np.ndarray) -> float:
    """Delta-method standard error of sum(num)/sum(den) for i.i.d. pairs."""
    n = num.size
    if n < 2:
        return math.inf
    nbar = float(num.mean())
    dbar = float(den.mean())
    if dbar == 0.0:
        return math.inf
    r = nbar / dbar
    resid = num - r * den
    var = float(resid.var(ddof=1)) / n
    return math.sqrt(max(0.0, var)) / abs(dbar)


def _mean_stderr(values: np.ndarray) -> Estimate:
    n = values.size
    se = math.sqrt(float(values.var(ddof=1)) / n) if n > 1 else math.inf
    return Estimate(float(values.mean()), se)


def simulate_static(cell: CellModel, deployment: Deployment,
                    cfg: SimConfig, rng: np.random.Generator | None = None) -> SimResult:
    """Stationary-user estimates from uniform points in the cell."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n = cfg.n_points
    xs, ys = sample_cell_points(cell.regions[0], n, rng)
    bands = np.zeros(n, dtype=np.int64)
    for j in range(1, cell.n):
        inside = contains_many(cell.regions[j], xs, ys)
        bands[inside] = j
    covered = _CoverageIndex(deployment.aps).covered(xs, ys)
    rates = np.array(cell.rates, dtype=float)[bands]
    rates[covered] = cell.wlan_rate

    bs = _mean_stderr(rates)
    p_wlan = _mean_stderr(covered.astype(float))
    traffic = np.where(covered, cell.wlan_rate, 0.0)
    r_val = float(traffic.sum() / rates.sum()) if rates.sum() > 0 else 0.0
    r_wlan = Estimate(r_val, _ratio_stderr(traffic, rates))
    band_cov = tuple(
        _mean_stderr(((bands == j) & covered).astype(float))
        for j in range(cell.n))
    qs = tuple((x, _mean_stderr((rates >= x).astype(float)))
               for x in cell.rate_levels)
    nan = Estimate(math.nan, math.inf)
    return SimResult(
        static_bandwidth=bs, dynamic_bandwidth=nan, total_throughput=nan,
        handover_count=nan, wlan_coverage_ratio=p_wlan, wlan_traffic_ratio=r_wlan,
        band_coverage=band_cov, static_distribution=qs, dynamic_distribution=(),
        replications=1, ap_count=float(deployment.l))


@dataclass
class _LineStats:
    chord: np.ndarray        # chord length of the cell
    throughput: np.ndarray   # rate-weighted covered+band segment lengths
    covered_len: np.ndarray  # sigma_w per line
    band_len: np.ndarray     # (n_lines, n_bands) uncovered per band
    crossings: np.ndarray    # handover crossings per line


def _line_pass(cell: CellModel, deployment: Deployment,
               lines: Sequence[Line]) -> _LineStats:
    n_lines = len(lines)
    n_bands = cell.n
    chord = np.zeros(n_lines)
    throughput = np.zeros(n_lines)
    covered_len = np.zeros(n_lines)
    band_len = np.zeros((n_lines, n_bands))
    crossings = np.zeros(n_lines)

    aps = deployment.aps
    if aps:
        centers = np.array([ap.position for ap in aps])
        reaches = np.array([max_reach(ap.region) for ap in aps])
    cell_region = cell.regions[0]

    for li, line in enumerate(lines):
        region_ivs = [line_intervals(s, line) for s in cell.regions]
        cell_ivs = region_ivs[0]
        sigma_c = _measure(cell_ivs)
        chord[li] = sigma_c
        if aps:
            nx, ny = line.normal
            dist = np.abs(centers[:, 0] * nx + centers[:, 1] * ny - line.p)
            cand = np.nonzero(dist <= reaches)[0]
        else:
            cand = np.empty(0, dtype=np.int64)
        union: list[tuple[float, float]] = []
        for idx in cand:
            union.extend(line_intervals(aps[idx].region, line))
        union = _merge(union)
        covered = _intersect(cell_ivs, union)
        sigma_w = _measure(covered)
        covered_len[li] = sigma_w
        total = cell.wlan_rate * sigma_w
        check = sigma_w
        region_ivs.append([])
        for j in range(n_bands):
            ring = _subtract(region_ivs[j], region_ivs[j + 1])
            free = _subtract(ring, union)
            sigma_j = _measure(free)
            band_len[li, j] = sigma_j
            total += cell.rates[j] * sigma_j
            check += sigma_j
        if abs(check - sigma_c) > _REL_CONSERVATION_TOL * max(1.0, sigma_c):
            raise RuntimeError("chord partition does not conserve length")
        throughput[li] = total
        # handover crossings: AP boundary points inside the cell that no
        # other AP covers
        count = 0
        for idx in cand:
            for t in boundary_line_params(aps[idx].region, line):
                pt = line.point_at(t)
                if not contains(cell_region, pt):
                    continue
                hidden = False
                for jdx in cand:
                    if jdx != idx and contains(aps[jdx].region, pt):
                        hidden = True
                        break
                if not hidden:
                    count += 1
        crossings[li] = count
    return _LineStats(chord, throughput, covered_len, band_len, crossings)


def _dynamic_result(cell: CellModel, stats: _LineStats,
                    ap_count: float) -> SimResult:
    td = _mean_stderr(stats.throughput)
    chord_sum = float(stats.chord.sum())
    bd_val = float(stats.throughput.sum()) / chord_sum
    bd = Estimate(bd_val, _ratio_stderr(stats.throughput, stats.chord))
    nh = _mean_stderr(stats.crossings)
    qd = []
    for x in cell.rate_levels:
        num = np.where(cell.wlan_rate >= x, stats.covered_len, 0.0).copy()
        for j in range(cell.n):
            if cell.rates[j] >= x:
                num += stats.band_len[:, j]
        qd.append((x, Estimate(float(num.sum()) / chord_sum,
                               _ratio_stderr(num, stats.chord))))
    nan = Estimate(math.nan, math.inf)
    return SimResult(
        static_bandwidth=nan, dynamic_bandwidth=bd, total_throughput=td,
        handover_count=nh, wlan_coverage_ratio=nan, wlan_traffic_ratio=nan,
        band_coverage=(), static_distribution=(),
        dynamic_distribution=tuple(qd), replications=1, ap_count=ap_count)


def simulate_dynamic(cell: CellModel, deployment: Deployment, cfg: SimConfig,
                     rng: np.random.Generator | None = None) -> SimResult:
    """Moving-user estimates from invariant-measure lines through the cell."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    lines = sample_hit_lines(cell.regions[0], cfg.n_lines, rng)
    stats = _line_pass(cell, deployment, lines)
    return _dynamic_result(cell, stats, float(deployment.l))


def simulate_handovers(cell: CellModel, deployment: Deployment, cfg: SimConfig,
                       rng: np.random.Generator | None = None) -> SimResult:
    """Vertical-handover crossing counts along random cell traversals."""
    return simulate_dynamic(cell, deployment, cfg, rng)


# ---------------------------------------------------------------------------
# replicated runs


def _rotate_regions(shapes: tuple[ConvexShape, ...], pivot: tuple[float, float],
                    angle: float) -> tuple[ConvexShape, ...]:
    cs, sn = math.cos(angle), math.sin(angle)
    out = []
    for s in shapes:
        dx, dy = s.center[0] - pivot[0], s.center[1] - pivot[1]
        c = (pivot[0] + cs * dx - sn * dy, pivot[1] + sn * dx + cs * dy)
        out.append(place(s, c, s.orientation + angle))
    return tuple(out)


def _draw_deployment(scn: SimScenario, cfg: SimConfig, seed: int,
                     intensity: IntensityModel) -> Deployment:
    cell_region = scn.cell.regions[0]
    if cfg.l_mode == FIXED:
        if scn.l is None:
            raise ValueError("fixed l_mode needs scenario.l")
        return conditioned_deployment(intensity, cell_region, scn.l,
                                      scn.ap_template, seed)
    halo = max_reach(cell_region) + max_reach(scn.ap_template)
    window = ConvexShape.disk(cell_region.center, halo)
    dep = sample_deployment(intensity, window, scn.ap_template, seed)
    kept = tuple(ap for ap in dep.aps
                 if shapes_intersect(ap.region, cell_region))
    return Deployment(aps=kept, window=window)


def run_replications(scn: SimScenario, cfg: SimConfig) -> SimResult:
    """Independent replications with fresh deployments, aggregated.

    With one replication the within-run standard errors are reported;
    otherwise errors are the across-replication standard errors, which
    include the deployment variability.
    """
    master = np.random.default_rng(cfg.seed)
    # deployments and measurements must not share generator streams, or the
    # sampled points would correlate with the AP positions
    rep_seeds = master.integers(0, 2 ** 62, size=(cfg.n_replications, 2))
    per_rep: list[tuple[SimResult, SimResult]] = []
    for rep in range(cfg.n_replications):
        dep_seed, measure_seed = (int(s) for s in rep_seeds[rep])
        rng = np.random.default_rng(measure_seed)
        intensity = scn.intensity
        if scn.omega_placement == "resample":
            angle = float(rng.uniform(0.0, TWO_PI))
            pivot = scn.cell.regions[0].center
            intensity = IntensityModel(
                intensity.lam0, intensity.lam_high, intensity.lam_low,
                _rotate_regions(intensity.omega_high, pivot, angle),
                _rotate_regions(intensity.omega_low, pivot, angle))
        dep = _draw_deployment(scn, cfg, dep_seed, intensity)
        static = simulate_static(scn.cell, dep, cfg, rng)
        dynamic = simulate_dynamic(scn.cell, dep, cfg, rng)
        per_rep.append((static, dynamic))

    if cfg.n_replications == 1:
        st, dy = per_rep[0]
        return SimResult(
            static_bandwidth=st.static_bandwidth,
            dynamic_bandwidth=dy.dynamic_bandwidth,
            total_throughput=dy.total_throughput,
            handover_count=dy.handover_count,
            wlan_coverage_ratio=st.wlan_coverage_ratio,
            wlan_traffic_ratio=st.wlan_traffic_ratio,
            band_coverage=st.band_coverage,
            static_distribution=st.static_distribution,
            dynamic_distribution=dy.dynamic_distribution,
            replications=1, ap_count=st.ap_count)

    def agg(values: Sequence[float]) -> Estimate:
        arr = np.array(values, dtype=float)
        return Estimate(float(arr.mean()),
                        math.sqrt(float(arr.var(ddof=1)) / arr.size))

    statics = [st for st, _ in per_rep]
    dynamics = [dy for _, dy in per_rep]
    cell = scn.cell
    return SimResult(
        static_bandwidth=agg([s.static_bandwidth.value for s in statics]),
        dynamic_bandwidth=agg([d.dynamic_bandwidth.value for d in dynamics]),
        total_throughput=agg([d.total_throughput.value for d in dynamics]),
        handover_count=agg([d.handover_count.value for d in dynamics]),
        wlan_coverage_ratio=agg([s.wlan_coverage_ratio.value for s in statics]),
        wlan_traffic_ratio=agg([s.wlan_traffic_ratio.value for s in statics]),
        band_coverage=tuple(
            agg([s.band_coverage[j].value for s in statics])
            for j in range(cell.n)),
        static_distribution=tuple(
            (x, agg([s.static_distribution[k][1].value for s in statics]))
            for k, x in enumerate(cell.rate_levels)),
        dynamic_distribution=tuple(
            (x, agg([d.dynamic_distribution[k][1].value for d in dynamics]))
            for k, x in enumerate(cell.rate_levels)),
        replications=cfg.n_replications,
        ap_count=float(np.mean([s.ap_count for s in statics])))
