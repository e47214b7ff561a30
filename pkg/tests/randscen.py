"""Randomized scenario generation shared by the formula and acceptance tests."""

from __future__ import annotations

import math
import random

from offloadgeom.formulas import CellModel, OverlapSummary
from offloadgeom.geometry import ConvexShape, area, perimeter
from offloadgeom.pointprocess import IntensityModel


def random_ap_measures(rnd: random.Random, l: int,
                       scale: float = 1.0) -> tuple[tuple[float, ...], tuple[float, ...]]:
    areas, perims = [], []
    for _ in range(l):
        kind = rnd.choice(["disk", "stadium", "pair_disk"])
        r = rnd.uniform(20, 80) * scale
        a = 0.0 if kind == "disk" else rnd.uniform(0, 60) * scale
        if kind == "disk":
            shape = ConvexShape.disk((0, 0), r)
        elif kind == "stadium":
            shape = ConvexShape.stadium((0, 0), r, a)
        else:
            shape = ConvexShape.pair_disk((0, 0), r, min(a, 0.9 * r))
        areas.append(area(shape))
        perims.append(perimeter(shape))
    return tuple(areas), tuple(perims)


def random_scenario(rnd: random.Random, zero_rho: bool = False,
                    max_l: int = 20, scale: float = 1.0):
    """A random nested-disk cell, overlap summary, and intensity model."""
    n = rnd.randint(1, 4)
    radii = sorted([rnd.uniform(100, 1500) * scale for _ in range(n)],
                   reverse=True)
    rates = [rnd.uniform(100, 3000) * scale for _ in range(n)]
    cell = CellModel.disks((0, 0), radii, rates,
                           rnd.uniform(4000, 20000) * scale)
    l = rnd.randint(0, max_l)
    ap_areas, ap_perims = random_ap_measures(rnd, l, scale)
    frac_h = rnd.uniform(0.0, 0.45)
    frac_l = rnd.uniform(0.0, min(0.45, 1 - frac_h))
    ov = OverlapSummary(
        region_high=tuple(frac_h * a for a in cell.region_areas),
        region_low=tuple(frac_l * a for a in cell.region_areas),
        arc_high=2 * math.sqrt(2 * frac_h * cell.cell_area / math.pi),
        arc_low=2 * math.sqrt(2 * frac_l * cell.cell_area / math.pi),
        ap_areas=ap_areas, ap_perimeters=ap_perims)
    if zero_rho:
        lam = rnd.uniform(0.5, 5.0)
        model = IntensityModel(lam, lam, lam)
    else:
        model = IntensityModel.from_relative(rnd.uniform(0, 5),
                                             rnd.uniform(0, 1))
    return cell, ov, model


def reports_bit_equal(a, b) -> bool:
    return (a.static_bandwidth == b.static_bandwidth
            and a.dynamic_bandwidth == b.dynamic_bandwidth
            and a.total_throughput == b.total_throughput
            and a.handover_count == b.handover_count
            and a.band_coverage == b.band_coverage
            and a.static_distribution == b.static_distribution
            and a.dynamic_distribution == b.dynamic_distribution
            and a.wlan_coverage_ratio == b.wlan_coverage_ratio
            and a.wlan_traffic_ratio == b.wlan_traffic_ratio)
