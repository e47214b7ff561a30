"""Sampling and density bookkeeping for the three-level Poisson AP process.

Intensities are in points per square meter.  ``IntensityModel`` carries the
base level lam0, a raised level lam_high on the region set omega_high, and a
reduced level lam_low on omega_low, with lam_low <= lam0 <= lam_high and the
two region sets disjoint.  Derived quantities (relative intensities, the mean
intensity over a cell, and the normal-region ratio) are recomputed from the
raw levels on demand.

Two samplers are provided: an unconditional Poisson sample over a window and
a sample conditioned on an exact number of access points whose coverage
region meets a given cell.  Both are deterministic functions of their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .geometry import (
    ConvexShape,
    area,
    bounding_box,
    contains,
    contains_many,
    max_reach,
    overlap_area,
    place,
    shapes_intersect,
)

TWO_PI = 2.0 * math.pi


class AccessPoint(NamedTuple):
    position: tuple[float, float]
    orientation: float
    region: ConvexShape


@dataclass(frozen=True)
class IntensityModel:
    """Three-level location intensity: lam_high on omega_high, lam_low on
    omega_low, lam0 elsewhere (all points per square meter)."""

    lam0: float
    lam_high: float
    lam_low: float
    omega_high: tuple[ConvexShape, ...] = field(default=())
    omega_low: tuple[ConvexShape, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.lam_low < 0.0 or not (self.lam_low <= self.lam0 <= self.lam_high):
            raise ValueError(
                "intensities must satisfy 0 <= lam_low <= lam0 <= lam_high")
        for oh in self.omega_high:
            for ol in self.omega_low:
                if shapes_intersect(oh, ol):
                    raise ValueError("high and low density regions must be disjoint")

    @classmethod
    def homogeneous(cls, lam: float) -> "IntensityModel":
        return cls(lam, lam, lam)

    @classmethod
    def from_relative(cls, rho_high: float, rho_low: float, lam0: float = 1.0,
                      omega_high: tuple[ConvexShape, ...] = (),
                      omega_low: tuple[ConvexShape, ...] = ()) -> "IntensityModel":
        """Build from the relative added/removed intensities.

        rho_high = (lam_high - lam0)/lam0 >= 0 and
        rho_low = (lam0 - lam_low)/lam0 in [0, 1].
        """
        return cls(lam0, lam0 * (1.0 + rho_high), lam0 * (1.0 - rho_low),
                   omega_high, omega_low)

    @property
    def rho_high(self) -> float:
        return (self.lam_high - self.lam0) / self.lam0

    @property
    def rho_low(self) -> float:
        return (self.lam0 - self.lam_low) / self.lam0

    def mean_intensity(self, cell_area: float, high_overlap: float,
                       low_overlap: float) -> float:
        """Mean intensity over a cell given its overlap areas with the regions."""
        return (self.lam_high * high_overlap + self.lam_low * low_overlap
                + self.lam0 * (cell_area - high_overlap - low_overlap)) / cell_area

    def normal_ratio(self, cell_area: float, high_overlap: float,
                     low_overlap: float) -> float:
        """lam0 over the mean intensity of the cell."""
        return self.lam0 / self.mean_intensity(cell_area, high_overlap, low_overlap)


@dataclass(frozen=True)
class Deployment:
    """A realized set of access points inside a sampling window."""

    aps: tuple[AccessPoint, ...]
    window: ConvexShape | None = None

    @property
    def l(self) -> int:
        return len(self.aps)

    def positions(self) -> np.ndarray:
        if not self.aps:
            return np.empty((0, 2))
        return np.array([ap.position for ap in self.aps])


def intensity_at(model: IntensityModel, x: tuple[float, float]) -> float:
    """Intensity level at a point: lam_high on omega_high, lam_low on
    omega_low, lam0 elsewhere."""
    for shape in model.omega_high:
        if contains(shape, x):
            return model.lam_high
    for shape in model.omega_low:
        if contains(shape, x):
            return model.lam_low
    return model.lam0


def _intensity_many(model: IntensityModel, xs: np.ndarray,
                    ys: np.ndarray) -> np.ndarray:
    lam = np.full(xs.shape, model.lam0)
    for shape in model.omega_low:
        lam[contains_many(shape, xs, ys)] = model.lam_low
    for shape in model.omega_high:
        lam[contains_many(shape, xs, ys)] = model.lam_high
    return lam


def _sample_uniform(rng: np.random.Generator, n: int, accept, bbox,
                    batch: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Rejection-sample n points with the given acceptance mask function."""
    x0, y0, x1, y1 = bbox
    xs_out: list[np.ndarray] = []
    ys_out: list[np.ndarray] = []
    got = 0
    while got < n:
        k = max(batch, 2 * (n - got))
        xs = rng.uniform(x0, x1, k)
        ys = rng.uniform(y0, y1, k)
        keep = accept(xs, ys)
        xs, ys = xs[keep], ys[keep]
        take = min(n - got, xs.size)
        xs_out.append(xs[:take])
        ys_out.append(ys[:take])
        got += take
    if not xs_out:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs_out), np.concatenate(ys_out)


def sample_deployment(model: IntensityModel, window: ConvexShape,
                      shape_template: ConvexShape, seed: int) -> Deployment:
    """Poisson sample of AP locations over ``window`` under the model.

    Counts per region part are independent Poisson draws with mean
    intensity x part area; positions are uniform within each part and
    orientations i.i.d. uniform on [0, 2*pi).  Identical seeds give
    bit-identical deployments.
    """
    rng = np.random.default_rng(seed)
    wbox = bounding_box(window)
    xs_all: list[np.ndarray] = []
    ys_all: list[np.ndarray] = []

    def sample_part(shapes: tuple[ConvexShape, ...], lam: float,
                    exclude: tuple[ConvexShape, ...]) -> None:
        for shape in shapes:
            part_area = overlap_area(shape, window)
            if part_area <= 0.0 or lam <= 0.0:
                continue
            count = int(rng.poisson(lam * part_area))
            if count == 0:
                continue
            sbox = bounding_box(shape)
            box = (max(sbox[0], wbox[0]), max(sbox[1], wbox[1]),
                   min(sbox[2], wbox[2]), min(sbox[3], wbox[3]))

            def accept(xs, ys, shape=shape):
                ok = contains_many(shape, xs, ys) & contains_many(window, xs, ys)
                for other in exclude:
                    ok &= ~contains_many(other, xs, ys)
                return ok

            xs, ys = _sample_uniform(rng, count, accept, box)
            xs_all.append(xs)
            ys_all.append(ys)

    sample_part(model.omega_high, model.lam_high, ())
    sample_part(model.omega_low, model.lam_low, ())

    omega_all = model.omega_high + model.omega_low
    rest_area = area(window)
    for shape in omega_all:
        rest_area -= overlap_area(shape, window)
    rest_area = max(0.0, rest_area)
    if rest_area > 0.0 and model.lam0 > 0.0:
        count = int(rng.poisson(model.lam0 * rest_area))
        if count:
            def accept_rest(xs, ys):
                ok = contains_many(window, xs, ys)
                for other in omega_all:
                    ok &= ~contains_many(other, xs, ys)
                return ok

            xs, ys = _sample_uniform(rng, count, accept_rest, wbox)
            xs_all.append(xs)
            ys_all.append(ys)

    if xs_all:
        xs = np.concatenate(xs_all)
        ys = np.concatenate(ys_all)
    else:
        xs = np.empty(0)
        ys = np.empty(0)
    gammas = rng.uniform(0.0, TWO_PI, xs.size)
    aps = tuple(
        AccessPoint((float(x), float(y)), float(gm),
                    place(shape_template, (float(x), float(y)), float(gm)))
        for x, y, gm in zip(xs, ys, gammas))
    return Deployment(aps=aps, window=window)


def conditioned_deployment(model: IntensityModel, cell: ConvexShape, l: int,
                           shape_template: ConvexShape, seed: int) -> Deployment:
    """Exactly ``l`` APs drawn from the intensity restricted to placements
    whose coverage region meets ``cell``, by rejection sampling."""
    if l < 0:
        raise ValueError("l must be non-negative")
    halo = max_reach(cell) + max_reach(shape_template)
    cx, cy = cell.center
    window = ConvexShape.disk((cx, cy), halo)
    if l == 0:
        return Deployment(aps=(), window=window)
    lam_max = max(model.lam0, model.lam_high, model.lam_low)
    if lam_max <= 0.0:
        raise ValueError("cannot condition on a process with zero intensity")
    rng = np.random.default_rng(seed)
    aps: list[AccessPoint] = []
    box = (cx - halo, cy - halo, cx + halo, cy + halo)
    while len(aps) < l:
        k = 4 * (l - len(aps)) + 64
        xs = rng.uniform(box[0], box[2], k)
        ys = rng.uniform(box[1], box[3], k)
        urand = rng.uniform(0.0, 1.0, k)
        gammas = rng.uniform(0.0, TWO_PI, k)
        lam = _intensity_many(model, xs, ys)
        keep = urand * lam_max < lam
        for x, y, gm in zip(xs[keep], ys[keep], gammas[keep]):
            region = place(shape_template, (float(x), float(y)), float(gm))
            if shapes_intersect(region, cell):
                aps.append(AccessPoint((float(x), float(y)), float(gm), region))
                if len(aps) == l:
                    break
    return Deployment(aps=tuple(aps), window=window)
