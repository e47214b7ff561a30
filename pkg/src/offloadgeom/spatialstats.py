"""Quadrat-count statistics and density-region identification for AP data.

Covers the empirical pipeline: a dispersion test of the uniform-placement
hypothesis with chi-square bounds, cross-correlation of per-quadrat counts
between operators, and a sliding-window procedure that classifies grid atoms
into high / low density regions and fits the three intensity levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2


@dataclass(frozen=True)
class QuadratGrid:
    """Counts of points per square atom over a rectangular study window.

    ``counts[iy, ix]`` is the number of points in the atom whose lower-left
    corner is ``origin + (ix, iy) * atom_size``.
    """

    origin: tuple[float, float]
    atom_size: float
    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts)
        if counts.ndim != 2:
            raise ValueError("counts must be a 2-D array")
        if counts.size == 0:
            raise ValueError("grid must contain at least one atom")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts.astype(np.int64))

    @property
    def n_atoms(self) -> int:
        return int(self.counts.size)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape  # (ny, nx)


def quadrat_counts(points: np.ndarray, origin: tuple[float, float],
                   atom_size: float, nx: int, ny: int) -> QuadratGrid:
    """Bin (x, y) points into an ny-by-nx atom grid.

    Points outside the grid raise ValueError; data files are expected to be
    windowed before counting.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    counts = np.zeros((ny, nx), dtype=np.int64)
    if pts.size:
        ix = np.floor((pts[:, 0] - origin[0]) / atom_size).astype(np.int64)
        iy = np.floor((pts[:, 1] - origin[1]) / atom_size).astype(np.int64)
        # points exactly on the top/right window edge belong to the last atom
        ix[(pts[:, 0] - origin[0]) == nx * atom_size] = nx - 1
        iy[(pts[:, 1] - origin[1]) == ny * atom_size] = ny - 1
        bad = (ix < 0) | (ix >= nx) | (iy < 0) | (iy >= ny)
        if bad.any():
            k = int(np.nonzero(bad)[0][0])
            raise ValueError(
                f"point {tuple(pts[k])} falls outside the {nx}x{ny} grid")
        np.add.at(counts, (iy, ix), 1)
    return QuadratGrid((float(origin[0]), float(origin[1])),
                       float(atom_size), counts)


@dataclass(frozen=True)
class DispersionTest:
    """Index of dispersion with its two-sided 5% chi-square acceptance band."""

    index: float
    reject: bool
    bounds: tuple[float, float]


def index_of_dispersion(counts) -> DispersionTest:
    """(n-1) * variance / mean of the counts, tested against chi-square.

    Under uniform random placement the statistic follows a chi-square law
    with n-1 degrees of freedom; ``reject`` flags values outside the central
    95% of that law.  All-zero counts leave the index undefined.
    """
    arr = np.asarray(counts, dtype=float).ravel()
    n = arr.size
    if n < 2:
        raise ValueError("need at least two quadrat counts")
    mean = float(arr.mean())
    if mean == 0.0:
        raise ValueError("index of dispersion undefined for all-zero counts")
    var = float(arr.var(ddof=1))
    index = (n - 1) * var / mean
    lo = float(chi2.ppf(0.025, n - 1))
    hi = float(chi2.ppf(0.975, n - 1))
    return DispersionTest(index, not lo <= index <= hi, (lo, hi))


def cross_correlation(a, b) -> float:
    """Normalized cross-correlation of two equal-length count series.

    Uses the sample-variance normalization sum((a-A)(b-B)) / ((n-1)*sqrt(Va*Vb)),
    which coincides with the Pearson coefficient.  Zero variance in either
    series leaves the value undefined.
    """
    xa = np.asarray(a, dtype=float).ravel()
    xb = np.asarray(b, dtype=float).ravel()
    if xa.size != xb.size:
        raise ValueError("count series must have equal length")
    n = xa.size
    if n < 2:
        raise ValueError("need at least two quadrat counts")
    va = float(xa.var(ddof=1))
    vb = float(xb.var(ddof=1))
    if va == 0.0 or vb == 0.0:
        raise ValueError("cross-correlation undefined for zero variance")
    num = float(((xa - xa.mean()) * (xb - xb.mean())).sum())
    return num / ((n - 1) * math.sqrt(va * vb))


@dataclass(frozen=True)
class RegionPartition:
    """Atoms classified as high / low density, with fitted intensity levels.

    Atom indices are (iy, ix) pairs; intensities are per square kilometer.
    A class with no atoms fits to NaN.
    """

    high_atoms: frozenset
    low_atoms: frozenset
    lam0: float
    lam_high: float
    lam_low: float
    grid_shape: tuple[int, int]
    atom_size: float

    def label(self, iy: int, ix: int) -> str:
        if (iy, ix) in self.high_atoms:
            return "H"
        if (iy, ix) in self.low_atoms:
            return "L"
        return "0"


def _window_flag_hits(flags: np.ndarray, ny: int, nx: int, n0: int) -> np.ndarray:
    """Per-atom count of flagged n0-by-n0 windows covering the atom."""
    wy, wx = flags.shape
    padded = np.zeros((wy + 1, wx + 1), dtype=np.int64)
    padded[1:, 1:] = np.cumsum(np.cumsum(flags.astype(np.int64), 0), 1)
    hits = np.zeros((ny, nx), dtype=np.int64)
    for iy in range(ny):
        y0 = max(0, iy - n0 + 1)
        y1 = min(wy - 1, iy)
        if y0 > y1:
            continue
        for ix in range(nx):
            x0 = max(0, ix - n0 + 1)
            x1 = min(wx - 1, ix)
            if x0 > x1:
                continue
            hits[iy, ix] = (padded[y1 + 1, x1 + 1] - padded[y0, x1 + 1]
                            - padded[y1 + 1, x0] + padded[y0, x0])
    return hits


def identify_regions(grid: QuadratGrid, n0: int) -> RegionPartition:
    """Classify atoms into high / low density regions by a sliding window.

    An n0-by-n0 window slides one atom at a time over the grid (windows that
    do not fully fit are skipped).  Windows whose count exceeds
    a0*n0^2 + 3*sqrt(a0)*n0 flag their atoms as high-density candidates, and
    windows below a0*n0^2 - 3*sqrt(a0)*n0 as low-density candidates, where a0
    is the global mean count per atom.  An atom joins a class when flagged
    strictly more than n0^2/2 times.  The intensity levels are the per-area
    count averages of the resulting atom classes, in points per km^2.
    """
    if n0 < 1:
        raise ValueError("window size n0 must be at least 1")
    counts = grid.counts
    ny, nx = counts.shape
    if n0 > min(ny, nx):
        raise ValueError("window does not fit inside the grid")
    a0 = counts.mean()
    upper = a0 * n0 * n0 + 3.0 * math.sqrt(a0) * n0
    lower = a0 * n0 * n0 - 3.0 * math.sqrt(a0) * n0
    windows = np.lib.stride_tricks.sliding_window_view(counts, (n0, n0))
    sums = windows.sum(axis=(2, 3))
    hits_high = _window_flag_hits(sums > upper, ny, nx, n0)
    hits_low = _window_flag_hits(sums < lower, ny, nx, n0)
    threshold = n0 * n0 / 2.0
    high_mask = hits_high > threshold
    low_mask = hits_low > threshold

    atom_area_km2 = (grid.atom_size / 1000.0) ** 2

    def fit(mask: np.ndarray) -> float:
        n = int(mask.sum())
        if n == 0:
            return math.nan
        return float(counts[mask].sum()) / (n * atom_area_km2)

    rest_mask = ~(high_mask | low_mask)
    high_atoms = frozenset(zip(*map(list, np.nonzero(high_mask))))
    low_atoms = frozenset(zip(*map(list, np.nonzero(low_mask))))
    return RegionPartition(
        high_atoms=frozenset((int(iy), int(ix)) for iy, ix in high_atoms),
        low_atoms=frozenset((int(iy), int(ix)) for iy, ix in low_atoms),
        lam0=fit(rest_mask), lam_high=fit(high_mask), lam_low=fit(low_mask),
        grid_shape=(ny, nx), atom_size=grid.atom_size)
